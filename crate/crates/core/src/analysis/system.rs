//! The GSI system data model.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{GsiError, Result};
use crate::exact::{format_rational, frac, int, parse_rational, unit_phase, Rational};
use crate::group::{Generator, GroupModel};
use crate::lattice::Lattice;

/// How the unconditional convergence property of the system is licensed.
#[derive(Debug, Clone, PartialEq)]
pub enum UcpStatus {
    /// Finitely many layers: every series is a finite sum.
    Automatic,
    /// Supported by a computed residual analysis.
    Evidenced(String),
    /// Asserted by the user and recorded as such.
    Declared(String),
    Unknown,
    /// A computed residual or audit shows the property fails.
    Violated(String),
}

impl UcpStatus {
    pub fn name(&self) -> &'static str {
        match self {
            UcpStatus::Automatic => "automatic",
            UcpStatus::Evidenced(_) => "evidenced",
            UcpStatus::Declared(_) => "declared",
            UcpStatus::Unknown => "unknown",
            UcpStatus::Violated(_) => "violated",
        }
    }

    /// Whether the characterizing equations may be used as a certificate.
    pub fn licenses(&self) -> bool {
        matches!(self, UcpStatus::Automatic | UcpStatus::Evidenced(_) | UcpStatus::Declared(_))
    }

    pub fn to_json(&self) -> Value {
        match self {
            UcpStatus::Evidenced(s) | UcpStatus::Declared(s) | UcpStatus::Violated(s) => {
                json!({"status": self.name(), "detail": s})
            }
            _ => json!({"status": self.name()}),
        }
    }

    pub fn from_json(v: &Value) -> Result<UcpStatus> {
        let detail = v.get("detail").and_then(Value::as_str).unwrap_or("").to_string();
        match v.get("status").and_then(Value::as_str) {
            Some("automatic") => Ok(UcpStatus::Automatic),
            Some("evidenced") => Ok(UcpStatus::Evidenced(detail)),
            Some("declared") => Ok(UcpStatus::Declared(detail)),
            Some("unknown") | None => Ok(UcpStatus::Unknown),
            Some("violated") => Ok(UcpStatus::Violated(detail)),
            Some(other) => Err(GsiError::InvalidInput(format!("unknown UCP status {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub lattice: Lattice,
    pub analysis: Generator,
    pub synthesis: Option<Generator>,
}

impl Layer {
    pub fn new(lattice: Lattice, analysis: Generator) -> Self {
        Layer { lattice, analysis, synthesis: None }
    }

    pub fn dual(lattice: Lattice, analysis: Generator, synthesis: Generator) -> Self {
        Layer { lattice, analysis, synthesis: Some(synthesis) }
    }

    /// `h_j`, which is `g_j` for self-dual systems.
    pub fn synthesis(&self) -> &Generator {
        self.synthesis.as_ref().unwrap_or(&self.analysis)
    }
}

/// Continuation of a family beyond the stored layers: layer `j ≥ first_index`
/// has lattice `base·ratioʲ ℤ` and a generator described by `kind`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tail {
    pub first_index: u32,
    pub base: Rational,
    pub ratio: Rational,
    pub kind: TailKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TailKind {
    /// `g_j = δ_{τ_j}` with the greedy shifts of the ℤ = ⊔ (τ_j + Nʲℤ) partition.
    GreedyDelta { n: u64 },
    /// `|ĝ_j|² ≡ sq_modulus` exactly, or only bounded by it when `exact` is false.
    Uniform { sq_modulus: Rational, exact: bool },
}

/// Value of a tail series: exact when the structure allows it, always with a
/// bound on its modulus.
#[derive(Debug, Clone, PartialEq)]
pub struct TailValue {
    pub exact: Option<Complex64>,
    /// Exact rational value where available (real, nonnegative series).
    pub exact_rational: Option<Rational>,
    pub bound: Rational,
}

impl TailValue {
    pub fn zero() -> Self {
        TailValue { exact: Some(Complex64::zero()), exact_rational: Some(Rational::zero()), bound: Rational::zero() }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "exact": self.exact.map(crate::exact::format_complex),
            "exact_rational": self.exact_rational.as_ref().map(format_rational),
            "bound": format_rational(&self.bound),
        })
    }
}

impl Tail {
    pub fn greedy_delta(n: u64, first_index: u32) -> Tail {
        Tail { first_index, base: Rational::one(), ratio: int(n as i64), kind: TailKind::GreedyDelta { n } }
    }

    /// Covolume of tail layer `j`.
    pub fn covolume(&self, j: u32) -> Rational {
        &self.base * num_traits::pow(self.ratio.clone(), j as usize)
    }

    /// `Σ_{j ≥ from} 1/covol(Γ_j)`, `None` when divergent.
    pub fn reciprocal_sum_from(&self, from: u32) -> Option<Rational> {
        if self.ratio <= Rational::one() {
            return None;
        }
        let first = Rational::one() / self.covolume(from);
        Some(first * &self.ratio / (&self.ratio - Rational::one()))
    }

    pub fn bandwidth(&self) -> Option<Rational> {
        self.reciprocal_sum_from(self.first_index)
    }

    fn sq_modulus(&self) -> (Rational, bool) {
        match &self.kind {
            TailKind::GreedyDelta { .. } => (Rational::one(), true),
            TailKind::Uniform { sq_modulus, exact } => (sq_modulus.clone(), *exact),
        }
    }

    /// `Σ_{tail} (1/covol)|ĝ_j(ω)|²`, constant in `ω`.
    pub fn calderon(&self) -> Option<TailValue> {
        let (s, exact) = self.sq_modulus();
        let sum = self.bandwidth()? * s;
        let z = Complex64::new(sum.to_f64().unwrap_or(f64::NAN), 0.0);
        Some(TailValue {
            exact: exact.then_some(z),
            exact_rational: exact.then(|| sum.clone()),
            bound: sum,
        })
    }

    /// First tail layer `j ≥ first_index` whose dual lattice contains the torus point `alpha`.
    fn first_layer_containing(&self, alpha: &Rational) -> Option<u32> {
        let a = frac(alpha);
        if a.is_zero() {
            return Some(self.first_index);
        }
        if !self.base.is_integer() || !self.ratio.is_integer() {
            return None;
        }
        // α ∈ (1/c_j)ℤ ⟺ c_j·α ∈ ℤ; the denominator must divide base·ratioʲ
        // for some j, which happens within its bit length steps if at all
        let steps = a.denom().bits() as u32 + 1;
        (self.first_index..self.first_index + steps).find(|&j| (self.covolume(j) * &a).is_integer())
    }

    /// Tail part of `t_α` for a self-dual tail.
    pub fn t_alpha(&self, alpha: &Rational) -> Option<TailValue> {
        let a = frac(alpha);
        if a.is_zero() {
            return self.calderon();
        }
        let Some(j0) = self.first_layer_containing(&a) else {
            return Some(TailValue::zero());
        };
        let (s, _) = self.sq_modulus();
        let bound = self.reciprocal_sum_from(j0)? * s;
        if let TailKind::GreedyDelta { n: 2 } = self.kind {
            // α = a/2^k; τ_j mod 2^k is constant for j ≥ k+1
            let k = a.denom().bits() as u32 - 1;
            let mut total = Complex64::zero();
            let stable = j0.max(k + 1);
            for j in j0..stable {
                total += unit_phase(&(-(greedy_shift_two(j) * &a))) * (1.0 / 2f64.powi(j as i32));
            }
            let rest = 2f64.powi(1 - stable as i32);
            total += unit_phase(&(-(greedy_shift_two(stable) * &a))) * rest;
            return Some(TailValue { exact: Some(total), exact_rational: None, bound });
        }
        Some(TailValue { exact: None, exact_rational: None, bound })
    }

    pub fn contains_frequency(&self, alpha: &Rational) -> bool {
        self.first_layer_containing(alpha).is_some()
    }

    pub fn to_json(&self) -> Value {
        let kind = match &self.kind {
            TailKind::GreedyDelta { n } => json!({"type": "greedy-delta", "N": n}),
            TailKind::Uniform { sq_modulus, exact } => {
                json!({"type": "uniform", "sq_modulus": format_rational(sq_modulus), "exact": exact})
            }
        };
        json!({
            "first_index": self.first_index,
            "base": format_rational(&self.base),
            "ratio": format_rational(&self.ratio),
            "kind": kind,
        })
    }

    pub fn from_json(v: &Value) -> Result<Tail> {
        let bad = |m: &str| GsiError::InvalidInput(format!("tail JSON: {m}"));
        let rat = |key: &str| -> Result<Rational> {
            let x = v.get(key).ok_or_else(|| bad(key))?;
            parse_rational(&x.as_str().map(str::to_string).unwrap_or_else(|| x.to_string()))
        };
        let first_index = v.get("first_index").and_then(Value::as_u64).ok_or_else(|| bad("first_index"))? as u32;
        let kind_v = v.get("kind").ok_or_else(|| bad("kind"))?;
        let kind = match kind_v.get("type").and_then(Value::as_str) {
            Some("greedy-delta") => TailKind::GreedyDelta {
                n: kind_v.get("N").and_then(Value::as_u64).filter(|&n| n >= 2).ok_or_else(|| bad("N"))?,
            },
            Some("uniform") => TailKind::Uniform {
                sq_modulus: parse_rational(kind_v.get("sq_modulus").and_then(Value::as_str).ok_or_else(|| bad("sq_modulus"))?)?,
                exact: kind_v.get("exact").and_then(Value::as_bool).unwrap_or(false),
            },
            _ => return Err(bad("unknown kind")),
        };
        Ok(Tail { first_index, base: rat("base")?, ratio: rat("ratio")?, kind })
    }
}

/// Closed form of the greedy shifts for `N = 2`: `τ_j = (1 − (−2)^{j−1})/3`.
pub fn greedy_shift_two(j: u32) -> Rational {
    let p = num_traits::pow(BigInt::from(-2), (j - 1) as usize);
    BigRational::new(BigInt::one() - p, BigInt::from(3))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GsiSystem {
    pub model: GroupModel,
    pub layers: Vec<Layer>,
    pub tail: Option<Tail>,
    pub ucp: UcpStatus,
    pub label: String,
}

impl GsiSystem {
    /// Validates lattices and generators against the model. Finite systems get
    /// an automatic UCP license.
    pub fn new(model: GroupModel, layers: Vec<Layer>, label: impl Into<String>) -> Result<Self> {
        let sys = GsiSystem { model, layers, tail: None, ucp: UcpStatus::Automatic, label: label.into() };
        sys.validate()?;
        Ok(sys)
    }

    pub fn with_tail(mut self, tail: Tail) -> Result<Self> {
        if self.model != GroupModel::Integer {
            return Err(GsiError::UnsupportedModel("tails are supported on the integer group only".into()));
        }
        self.tail = Some(tail);
        if self.ucp == UcpStatus::Automatic {
            self.ucp = UcpStatus::Unknown;
        }
        Ok(self)
    }

    pub fn with_ucp(mut self, ucp: UcpStatus) -> Self {
        self.ucp = ucp;
        self
    }

    pub fn is_dual_system(&self) -> bool {
        self.layers.iter().any(|l| l.synthesis.is_some())
    }

    pub fn validate(&self) -> Result<()> {
        let with_h = self.layers.iter().filter(|l| l.synthesis.is_some()).count();
        if with_h != 0 && with_h != self.layers.len() {
            return Err(GsiError::InvalidInput("either all layers or none carry a synthesis generator".into()));
        }
        for (j, layer) in self.layers.iter().enumerate() {
            let ok = match (&self.model, &layer.lattice) {
                (GroupModel::Finite { moduli }, Lattice::Cyclic(c)) => moduli.len() == 1 && moduli[0] == c.modulus,
                (GroupModel::Integer, Lattice::Integer(l)) => l.dimension() == 1,
                (GroupModel::Real { dim }, Lattice::Real(l)) => l.dimension() == *dim,
                _ => false,
            };
            if !ok {
                return Err(GsiError::IncompatibleAmbient(format!(
                    "layer {j}: lattice {} does not live in {}",
                    layer.lattice,
                    self.model.describe()
                )));
            }
            layer.analysis.check(&self.model)?;
            if let Some(h) = &layer.synthesis {
                h.check(&self.model)?;
                if h.variant_name() != layer.analysis.variant_name() {
                    return Err(GsiError::VariantMismatch(format!("layer {j}: g and h use different variants")));
                }
            }
        }
        Ok(())
    }

    /// Analysis generators only (the self-dual system of the `g_j`).
    pub fn analysis_system(&self) -> GsiSystem {
        let mut s = self.clone();
        for l in &mut s.layers {
            l.synthesis = None;
        }
        s
    }

    /// The self-dual system of the synthesis generators.
    pub fn synthesis_system(&self) -> GsiSystem {
        let mut s = self.clone();
        for l in &mut s.layers {
            if let Some(h) = l.synthesis.take() {
                l.analysis = h;
            }
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let layers: Vec<Value> = self
            .layers
            .iter()
            .map(|l| {
                let mut v = json!({"lattice": l.lattice.to_json(), "analysis": l.analysis.to_json()});
                if let Some(h) = &l.synthesis {
                    v["synthesis"] = h.to_json();
                }
                v
            })
            .collect();
        let mut v = json!({
            "label": self.label,
            "group": self.model.to_json(),
            "layers": layers,
            "ucp": self.ucp.to_json(),
        });
        if let Some(t) = &self.tail {
            v["tail"] = t.to_json();
        }
        v
    }

    pub fn from_json(v: &Value) -> Result<GsiSystem> {
        let bad = |m: &str| GsiError::InvalidInput(format!("system JSON: {m}"));
        let model = GroupModel::from_json(v.get("group").ok_or_else(|| bad("missing group"))?)?;
        let layers = v
            .get("layers")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing layers"))?
            .iter()
            .map(|l| {
                let lattice = Lattice::from_json(l.get("lattice").ok_or_else(|| bad("layer without lattice"))?)?;
                let analysis = Generator::from_json(l.get("analysis").ok_or_else(|| bad("layer without analysis"))?)?;
                let synthesis = l.get("synthesis").map(Generator::from_json).transpose()?;
                Ok(Layer { lattice, analysis, synthesis })
            })
            .collect::<Result<Vec<_>>>()?;
        let label = v.get("label").and_then(Value::as_str).unwrap_or("").to_string();
        let mut sys = GsiSystem::new(model, layers, label)?;
        if let Some(t) = v.get("tail") {
            sys = sys.with_tail(Tail::from_json(t)?)?;
        }
        if let Some(u) = v.get("ucp") {
            sys.ucp = UcpStatus::from_json(u)?;
        }
        Ok(sys)
    }
}

impl fmt::Display for GsiSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {} with {} layers", self.label, self.model.describe(), self.layers.len())?;
        if self.tail.is_some() {
            write!(f, " + tail")?;
        }
        Ok(())
    }
}

/// Parses a dual-group frequency given as strings.
pub fn parse_frequency(parts: &[String]) -> Result<Vec<Rational>> {
    parts.iter().map(|s| parse_rational(s)).collect()
}

pub fn format_frequency(alpha: &[Rational]) -> String {
    let parts: Vec<String> = alpha.iter().map(format_rational).collect();
    if parts.len() == 1 {
        parts[0].clone()
    } else {
        format!("({})", parts.join(","))
    }
}

pub(crate) fn is_zero_frequency(alpha: &[Rational]) -> bool {
    alpha.iter().all(|a| a.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn greedy_closed_form_values() {
        let taus: Vec<Rational> = (1..=6).map(greedy_shift_two).collect();
        assert_eq!(taus, vec![int(0), int(1), int(-1), int(3), int(-5), int(11)]);
    }

    #[test]
    fn tail_sums() {
        let t = Tail::greedy_delta(2, 21);
        assert_eq!(t.bandwidth().unwrap(), rat(1, 1 << 20));
        let t3 = Tail::greedy_delta(3, 1);
        assert_eq!(t3.bandwidth().unwrap(), rat(1, 2));
        let diverging = Tail { first_index: 1, base: int(1), ratio: int(1), kind: TailKind::Uniform { sq_modulus: int(1), exact: true } };
        assert!(diverging.bandwidth().is_none());
    }

    #[test]
    fn tail_phase_cancels_for_two() {
        // prefix j ≤ 3 plus tail from 4 gives t_α = 0 for α = 1/2, 1/4, 3/8
        let tail = Tail::greedy_delta(2, 4);
        for alpha in [rat(1, 2), rat(1, 4), rat(3, 8), rat(5, 16)] {
            let mut total = tail.t_alpha(&alpha).unwrap().exact.unwrap();
            for j in 1..4u32 {
                if (int(1i64 << j) * &alpha).is_integer() {
                    total += unit_phase(&(-(greedy_shift_two(j) * &alpha))) / f64::from(1u32 << j);
                }
            }
            assert!(total.norm() < 1e-14, "alpha {alpha}: {total}");
        }
    }
}
