//! Generators, test functions, and the Fourier transform between their
//! time-domain and frequency-domain descriptions.

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::boxes::{BoxSet, RatBox};
use super::dft::{self, Direction};
use super::GroupModel;
use crate::error::{GsiError, Result};
use crate::exact::{format_complex, format_rational, frac, int, parse_complex, parse_rational, to_f64, unit_phase, Rational};
use crate::trig::TrigPolynomial;

/// Piecewise-constant spectrum `ĝ(ω) = e^{-2πi⟨s,ω⟩} Σ c_k 1_{B_k}(ω)`.
///
/// The modulation by the time shift `s` lets translates of box-spectrum
/// generators stay in this representation. On the integer group the boxes
/// live in the torus `[0,1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxSpectrum {
    pub shift: Vec<Rational>,
    pub pieces: Vec<(RatBox, Complex64)>,
}

impl BoxSpectrum {
    pub fn new(dimension: usize, pieces: Vec<(RatBox, Complex64)>) -> Result<Self> {
        for (i, (b, _)) in pieces.iter().enumerate() {
            if b.dimension() != dimension {
                return Err(GsiError::InvalidInput(format!("box {b} has wrong dimension")));
            }
            for (other, _) in &pieces[..i] {
                if b.intersect(other).is_some() {
                    return Err(GsiError::InvalidInput(format!("spectrum boxes {other} and {b} overlap")));
                }
            }
        }
        let pieces = pieces.into_iter().filter(|(b, _)| !b.is_empty()).collect();
        Ok(BoxSpectrum { shift: vec![Rational::zero(); dimension], pieces })
    }

    /// `c·1_K` for a disjoint box union `K`.
    pub fn indicator(dimension: usize, set: &BoxSet, c: Complex64) -> Self {
        BoxSpectrum {
            shift: vec![Rational::zero(); dimension],
            pieces: set.boxes().iter().map(|b| (b.clone(), c)).collect(),
        }
    }

    pub fn with_shift(mut self, shift: Vec<Rational>) -> Self {
        self.shift = shift;
        self
    }

    pub fn dimension(&self) -> usize {
        self.shift.len()
    }

    /// Value without the modulation factor.
    pub fn envelope_at(&self, omega: &[Rational]) -> Complex64 {
        self.pieces
            .iter()
            .find(|(b, _)| b.contains(omega))
            .map(|(_, c)| *c)
            .unwrap_or_default()
    }

    pub fn modulation_at(&self, omega: &[Rational]) -> Complex64 {
        let phase: Rational = self.shift.iter().zip(omega).map(|(s, w)| s * w).sum();
        unit_phase(&-phase)
    }

    pub fn value_at(&self, omega: &[Rational]) -> Complex64 {
        self.envelope_at(omega) * self.modulation_at(omega)
    }

    /// Support (closure aside) of the nonzero pieces.
    pub fn support(&self) -> BoxSet {
        BoxSet::from_boxes(self.pieces.iter().filter(|(_, c)| *c != Complex64::zero()).map(|(b, _)| b))
    }

    pub fn norm_sq(&self) -> f64 {
        self.pieces.iter().map(|(b, c)| c.norm_sqr() * to_f64(&b.volume())).sum()
    }

    /// Smallest box containing all pieces.
    pub fn bounding_box(&self) -> Option<RatBox> {
        let mut it = self.pieces.iter().map(|(b, _)| b);
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, b| RatBox {
            lo: acc.lo.iter().zip(&b.lo).map(|(x, y)| x.min(y).clone()).collect(),
            hi: acc.hi.iter().zip(&b.hi).map(|(x, y)| x.max(y).clone()).collect(),
        }))
    }

    /// Inverse transform `∫ ĝ(ω) e^{2πi⟨x,ω⟩} dω` evaluated at `x`.
    pub fn time_value(&self, x: &[f64]) -> Complex64 {
        let y: Vec<f64> = x.iter().zip(&self.shift).map(|(a, s)| a - to_f64(s)).collect();
        self.pieces
            .iter()
            .map(|(b, c)| {
                let mut acc = *c;
                for (i, yi) in y.iter().enumerate() {
                    let (lo, hi) = (to_f64(&b.lo[i]), to_f64(&b.hi[i]));
                    acc *= if *yi == 0.0 {
                        Complex64::new(hi - lo, 0.0)
                    } else {
                        let e = |w: f64| Complex64::from_polar(1.0, TAU * yi * w);
                        (e(hi) - e(lo)) / Complex64::new(0.0, TAU * yi)
                    };
                }
                acc
            })
            .sum()
    }
}

/// An analysis or synthesis generator `g_j`.
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    /// Values on a finite cyclic group (time domain).
    Dense(Vec<Complex64>),
    /// Finitely supported sequence on ℤ: `g(start + k) = values[k]`.
    Sequence { start: i64, values: Vec<Complex64> },
    /// Frequency-domain box spectrum (ℤ with torus boxes, or ℝⁿ).
    Boxes(BoxSpectrum),
}

impl Generator {
    pub fn delta(start: i64) -> Generator {
        Generator::Sequence { start, values: vec![Complex64::one()] }
    }

    pub fn dense_delta(m: usize, at: usize) -> Generator {
        let mut v = vec![Complex64::zero(); m];
        v[at % m] = Complex64::one();
        Generator::Dense(v)
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            Generator::Dense(_) => "dense",
            Generator::Sequence { .. } => "sequence",
            Generator::Boxes(_) => "boxes",
        }
    }

    /// Checks that the variant can live in `model`.
    pub fn check(&self, model: &GroupModel) -> Result<()> {
        let mismatch = || {
            GsiError::VariantMismatch(format!("{} generator in model {}", self.variant_name(), model.describe()))
        };
        match (self, model) {
            (Generator::Dense(v), GroupModel::Finite { .. }) => {
                if Some(v.len() as u64) == model.order() {
                    Ok(())
                } else {
                    Err(GsiError::InvalidInput(format!(
                        "dense vector of length {} in a group of order {}",
                        v.len(),
                        model.order().unwrap_or(0)
                    )))
                }
            }
            (Generator::Sequence { .. }, GroupModel::Integer) => Ok(()),
            (Generator::Boxes(b), GroupModel::Integer) => {
                let unit = RatBox::unit(1);
                if b.dimension() == 1 && b.pieces.iter().all(|(p, _)| p.intersect(&unit).as_ref() == Some(p)) {
                    Ok(())
                } else {
                    Err(GsiError::InvalidInput("torus spectra must lie in [0,1)".into()))
                }
            }
            (Generator::Boxes(b), GroupModel::Real { dim }) if b.dimension() == *dim => Ok(()),
            _ => Err(mismatch()),
        }
    }

    /// `‖g‖²` (equal to `‖ĝ‖²` under the model's normalization).
    pub fn norm_sq(&self) -> f64 {
        match self {
            Generator::Dense(v) | Generator::Sequence { values: v, .. } => v.iter().map(|z| z.norm_sqr()).sum(),
            Generator::Boxes(b) => b.norm_sq(),
        }
    }

    /// `T_γ g = g(· − γ)`.
    pub fn translate(&self, gamma: &[Rational]) -> Result<Generator> {
        let integer_shift = || -> Result<i64> {
            match gamma {
                [g] if g.is_integer() => {
                    use num_traits::ToPrimitive;
                    g.to_integer().to_i64().ok_or_else(|| GsiError::InvalidInput("shift too large".into()))
                }
                _ => Err(GsiError::InvalidInput(format!("shift {gamma:?} is not a single integer"))),
            }
        };
        match self {
            Generator::Dense(v) => {
                let m = v.len() as i64;
                let s = integer_shift()?.rem_euclid(m) as usize;
                let mut out = vec![Complex64::zero(); v.len()];
                for (x, val) in v.iter().enumerate() {
                    out[(x + s) % v.len()] = *val;
                }
                Ok(Generator::Dense(out))
            }
            Generator::Sequence { start, values } => {
                Ok(Generator::Sequence { start: start + integer_shift()?, values: values.clone() })
            }
            Generator::Boxes(b) => {
                if gamma.len() != b.dimension() {
                    return Err(GsiError::InvalidInput("shift dimension mismatch".into()));
                }
                let shift = b.shift.iter().zip(gamma).map(|(a, g)| a + g).collect();
                Ok(Generator::Boxes(b.clone().with_shift(shift)))
            }
        }
    }

    /// Spectrum of a dense generator on ℤ_M.
    pub fn dense_spectrum(&self) -> Option<Vec<Complex64>> {
        match self {
            Generator::Dense(v) => Some(dft::forward(v)),
            _ => None,
        }
    }

    /// `ĝ(ω)` for sequence or box generators, `ω ∈ 𝕋` or ℝⁿ.
    pub fn spectrum_at(&self, model: &GroupModel, omega: &[Rational]) -> Result<Complex64> {
        match self {
            Generator::Sequence { start, values } => Ok(values
                .iter()
                .enumerate()
                .map(|(k, v)| v * unit_phase(&(-(int(start + k as i64)) * &omega[0])))
                .sum()),
            Generator::Boxes(b) => {
                if matches!(model, GroupModel::Integer) {
                    let w: Vec<Rational> = omega.iter().map(frac).collect();
                    Ok(b.value_at(&w))
                } else {
                    Ok(b.value_at(omega))
                }
            }
            Generator::Dense(_) => Err(GsiError::VariantMismatch("use dense_spectrum for dense generators".into())),
        }
    }

    pub fn to_json(&self) -> Value {
        let values = |v: &[Complex64]| v.iter().map(|z| format_complex(*z)).collect::<Vec<_>>();
        match self {
            Generator::Dense(v) => json!({"variant": "dense", "support": "all", "values": values(v)}),
            Generator::Sequence { start, values: v } => json!({
                "variant": "sequence",
                "support": {"start": start.to_string(), "length": v.len()},
                "values": values(v),
            }),
            Generator::Boxes(b) => json!({
                "variant": "boxes",
                "support": b.pieces.iter().map(|(p, _)| p.to_json()).collect::<Vec<_>>(),
                "values": b.pieces.iter().map(|(_, c)| format_complex(*c)).collect::<Vec<_>>(),
                "shift": b.shift.iter().map(format_rational).collect::<Vec<_>>(),
            }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Generator> {
        let bad = |m: &str| GsiError::InvalidInput(format!("generator JSON: {m}"));
        let values: Vec<Complex64> = v
            .get("values")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing values"))?
            .iter()
            .map(|pair| {
                let strs: Vec<String> = pair
                    .as_array()
                    .ok_or_else(|| bad("values must be [re, im] pairs"))?
                    .iter()
                    .map(|x| x.as_str().map(str::to_string).unwrap_or_else(|| x.to_string()))
                    .collect();
                parse_complex(&strs)
            })
            .collect::<Result<_>>()?;
        match v.get("variant").and_then(Value::as_str) {
            Some("dense") => Ok(Generator::Dense(values)),
            Some("sequence") => {
                let start = v
                    .get("support")
                    .and_then(|s| s.get("start"))
                    .map(|s| s.as_str().map(str::to_string).unwrap_or_else(|| s.to_string()))
                    .ok_or_else(|| bad("missing support.start"))?
                    .parse::<i64>()
                    .map_err(|_| bad("support.start must be an integer"))?;
                Ok(Generator::Sequence { start, values })
            }
            Some("boxes") => {
                let boxes: Vec<RatBox> = v
                    .get("support")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("missing support boxes"))?
                    .iter()
                    .map(RatBox::from_json)
                    .collect::<Result<_>>()?;
                if boxes.len() != values.len() {
                    return Err(bad("support and values differ in length"));
                }
                let dim = boxes.first().map_or(1, RatBox::dimension);
                let shift = match v.get("shift").and_then(Value::as_array) {
                    Some(s) => s
                        .iter()
                        .map(|x| parse_rational(&x.as_str().map(str::to_string).unwrap_or_else(|| x.to_string())))
                        .collect::<Result<Vec<_>>>()?,
                    None => vec![Rational::zero(); dim],
                };
                Ok(Generator::Boxes(BoxSpectrum::new(dim, boxes.into_iter().zip(values).collect())?.with_shift(shift)))
            }
            _ => Err(bad("unknown variant")),
        }
    }
}

/// A test function `f` together with its blind spot `E ⊂ Ĝ` (finitely many points).
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    pub generator: Generator,
    pub blind_spot: Vec<Vec<Rational>>,
}

impl TestFunction {
    pub fn new(generator: Generator) -> Self {
        TestFunction { generator, blind_spot: Vec::new() }
    }

    pub fn with_blind_spot(mut self, points: Vec<Vec<Rational>>) -> Self {
        self.blind_spot = points;
        self
    }

    /// Checks that `f̂` vanishes near every blind-spot point.
    pub fn validate(&self, model: &GroupModel) -> Result<()> {
        self.generator.check(model)?;
        for e in &self.blind_spot {
            let hit = match &self.generator {
                Generator::Dense(_) => {
                    let spec = self.generator.dense_spectrum().unwrap_or_default();
                    let m = spec.len() as i64;
                    let idx = e.first().filter(|x| x.is_integer()).map(|x| {
                        use num_traits::ToPrimitive;
                        x.to_integer().to_i64().unwrap_or(0).rem_euclid(m) as usize
                    });
                    match idx {
                        Some(i) => spec[i].norm() > 1e-12,
                        None => return Err(GsiError::InvalidInput(format!("blind spot {e:?} is not a dual element"))),
                    }
                }
                Generator::Sequence { values, .. } => values.iter().any(|v| *v != Complex64::zero()),
                Generator::Boxes(b) => {
                    let candidates: Vec<Vec<Rational>> = if matches!(model, GroupModel::Integer) {
                        let w = frac(&e[0]);
                        vec![vec![w.clone()], vec![w + Rational::one()]]
                    } else {
                        vec![e.clone()]
                    };
                    b.pieces
                        .iter()
                        .filter(|(_, c)| *c != Complex64::zero())
                        .any(|(p, _)| candidates.iter().any(|x| p.closure_contains(x)))
                }
            };
            if hit {
                let pt: Vec<String> = e.iter().map(format_rational).collect();
                return Err(GsiError::BlindSpotViolation(format!("f̂ does not vanish near ({})", pt.join(","))));
            }
        }
        Ok(())
    }

    pub fn norm_sq(&self) -> f64 {
        self.generator.norm_sq()
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.generator.to_json();
        v["blind_spot"] = json!(self
            .blind_spot
            .iter()
            .map(|p| p.iter().map(format_rational).collect::<Vec<_>>())
            .collect::<Vec<_>>());
        v
    }

    pub fn from_json(v: &Value) -> Result<TestFunction> {
        let generator = Generator::from_json(v)?;
        let blind_spot = match v.get("blind_spot").and_then(Value::as_array) {
            Some(pts) => pts
                .iter()
                .map(|p| {
                    p.as_array()
                        .ok_or_else(|| GsiError::InvalidInput("blind spot points must be arrays".into()))?
                        .iter()
                        .map(|x| parse_rational(&x.as_str().map(str::to_string).unwrap_or_else(|| x.to_string())))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?,
            None => Vec::new(),
        };
        Ok(TestFunction { generator, blind_spot })
    }
}

/// A function on `G` or on `Ĝ`, in one of the representations the
/// transform maps between.
#[derive(Debug, Clone, PartialEq)]
pub enum Signal {
    /// Values on a finite group.
    Dense(Vec<Complex64>),
    /// Values on the dual of a finite group.
    DenseSpectrum(Vec<Complex64>),
    /// Finitely supported sequence on ℤ.
    Sequence { start: i64, values: Vec<Complex64> },
    /// Trigonometric polynomial on 𝕋 with integer frequencies.
    Trig(TrigPolynomial),
    /// Box spectrum on 𝕋 or ℝ̂ⁿ.
    Boxes(BoxSpectrum),
    /// Time-domain function whose spectrum is the given box spectrum.
    BoxInverse(BoxSpectrum),
}

impl Signal {
    pub fn variant_name(&self) -> &'static str {
        match self {
            Signal::Dense(_) => "dense",
            Signal::DenseSpectrum(_) => "dense-spectrum",
            Signal::Sequence { .. } => "sequence",
            Signal::Trig(_) => "trig",
            Signal::Boxes(_) => "boxes",
            Signal::BoxInverse(_) => "box-inverse",
        }
    }

    /// Squared L² norm with respect to the Haar measure of the domain the
    /// signal lives on.
    pub fn norm_sq(&self) -> f64 {
        match self {
            Signal::Dense(v) | Signal::Sequence { values: v, .. } => v.iter().map(|z| z.norm_sqr()).sum(),
            Signal::DenseSpectrum(v) => v.iter().map(|z| z.norm_sqr()).sum::<f64>() / v.len() as f64,
            Signal::Trig(p) => p.terms().map(|(_, c)| c.norm_sqr()).sum(),
            Signal::Boxes(b) | Signal::BoxInverse(b) => b.norm_sq(),
        }
    }
}

/// The Fourier transform (forward uses the conjugated character) or its inverse.
pub fn fourier(signal: &Signal, direction: Direction, model: &GroupModel) -> Result<Signal> {
    let mismatch = || {
        GsiError::VariantMismatch(format!(
            "{:?} transform of a {} signal on {}",
            direction,
            signal.variant_name(),
            model.describe()
        ))
    };
    match (signal, direction, model) {
        (Signal::Dense(v), Direction::Forward, GroupModel::Finite { moduli }) if v.len() as u64 == model.order().unwrap() => {
            Ok(Signal::DenseSpectrum(dft::dft(v, moduli, Direction::Forward)))
        }
        (Signal::DenseSpectrum(v), Direction::Inverse, GroupModel::Finite { moduli })
            if v.len() as u64 == model.order().unwrap() =>
        {
            Ok(Signal::Dense(dft::dft(v, moduli, Direction::Inverse)))
        }
        (Signal::Sequence { start, values }, Direction::Forward, GroupModel::Integer) => {
            let mut p = TrigPolynomial::zero(1, false);
            for (k, v) in values.iter().enumerate() {
                p.add_term(vec![int(-(start + k as i64))], *v);
            }
            Ok(Signal::Trig(p))
        }
        (Signal::Trig(p), Direction::Inverse, GroupModel::Integer) => {
            use num_traits::ToPrimitive;
            let mut entries: Vec<(i64, Complex64)> = Vec::new();
            for (xi, c) in p.terms() {
                if xi.len() != 1 || !xi[0].is_integer() {
                    return Err(GsiError::VariantMismatch("trigonometric polynomial with non-integer frequency".into()));
                }
                let n = -xi[0].to_integer().to_i64().ok_or_else(mismatch)?;
                entries.push((n, *c));
            }
            entries.sort_by_key(|e| e.0);
            let Some(start) = entries.first().map(|e| e.0) else {
                return Ok(Signal::Sequence { start: 0, values: Vec::new() });
            };
            let end = entries.last().map(|e| e.0).unwrap_or(start);
            let mut values = vec![Complex64::zero(); (end - start + 1) as usize];
            for (n, c) in entries {
                values[(n - start) as usize] = c;
            }
            Ok(Signal::Sequence { start, values })
        }
        (Signal::BoxInverse(b), Direction::Forward, GroupModel::Integer | GroupModel::Real { .. }) => {
            Ok(Signal::Boxes(b.clone()))
        }
        (Signal::Boxes(b), Direction::Inverse, GroupModel::Integer | GroupModel::Real { .. }) => {
            Ok(Signal::BoxInverse(b.clone()))
        }
        _ => Err(mismatch()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn delta_round_trip() {
        let model = GroupModel::cyclic(4);
        let delta = Signal::Dense(vec![Complex64::one(), Complex64::zero(), Complex64::zero(), Complex64::zero()]);
        let spec = fourier(&delta, Direction::Forward, &model).unwrap();
        assert_eq!(spec, Signal::DenseSpectrum(vec![Complex64::one(); 4]));
        assert_eq!(fourier(&spec, Direction::Inverse, &model).unwrap(), delta);
    }

    #[test]
    fn sequence_round_trip_is_exact() {
        let s = Signal::Sequence { start: -2, values: vec![Complex64::new(1.0, 2.0), Complex64::zero(), Complex64::new(0.5, 0.0)] };
        let t = fourier(&s, Direction::Forward, &GroupModel::Integer).unwrap();
        assert_eq!(fourier(&t, Direction::Inverse, &GroupModel::Integer).unwrap(), s);
    }

    #[test]
    fn variant_mismatch() {
        let s = Signal::Sequence { start: 0, values: vec![Complex64::one()] };
        assert!(matches!(fourier(&s, Direction::Forward, &GroupModel::cyclic(4)), Err(GsiError::VariantMismatch(_))));
    }

    #[test]
    fn box_inverse_at_zero_is_integral() {
        let b = BoxSpectrum::new(1, vec![(RatBox::interval(int(0), rat(1, 2)), Complex64::new(2.0, 0.0))]).unwrap();
        assert!((b.time_value(&[0.0]) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((b.norm_sq() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn blind_spot_checks() {
        let b = BoxSpectrum::new(1, vec![(RatBox::interval(rat(1, 4), rat(1, 2)), Complex64::one())]).unwrap();
        let f = TestFunction::new(Generator::Boxes(b));
        assert!(f.clone().with_blind_spot(vec![vec![rat(3, 4)]]).validate(&GroupModel::Integer).is_ok());
        assert!(matches!(
            f.with_blind_spot(vec![vec![rat(1, 2)]]).validate(&GroupModel::Integer),
            Err(GsiError::BlindSpotViolation(_))
        ));
    }

    #[test]
    fn generator_json_round_trip() {
        let gens = [
            Generator::Dense(vec![Complex64::new(0.1, -2.5), Complex64::zero()]),
            Generator::Sequence { start: -3, values: vec![Complex64::new(1.0, 0.0)] },
            Generator::Boxes(
                BoxSpectrum::new(1, vec![(RatBox::interval(int(0), rat(1, 3)), Complex64::new(3f64.sqrt(), 0.0))])
                    .unwrap()
                    .with_shift(vec![int(4)]),
            ),
        ];
        for g in gens {
            assert_eq!(Generator::from_json(&g.to_json()).unwrap(), g);
        }
    }
}
