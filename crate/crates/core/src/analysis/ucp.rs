//! Residual means `M(|w_total − Σ_{j∈J'} w_j|)` for growing truncations `J'`.
//!
//! In the self-dual case with a target dominating every partial sum, the
//! residual is a nonnegative almost periodic function, so its mean is the
//! constant coefficient: target mean minus `Σ_{j∈J'} d_{j,0}`. Otherwise the
//! residual is averaged over windows, which is evidence rather than proof.

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use super::coeffs::{d_coefficient, d_zero_exact, norm_sq_exact, w_layer};
use super::mean::{mean_windowed, window_schedule, MeanEstimate};
use super::system::{GsiSystem, UcpStatus};
use crate::error::{GsiError, Result};
use crate::exact::{format_f64, format_rational, to_f64, Rational};
use crate::group::TestFunction;
use crate::trig::TrigPolynomial;

/// What `w_total` over the full family is taken to be.
#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    /// Sum over all stored layers (only meaningful without a tail).
    Computed,
    /// A constant supplied analytically, e.g. `‖f‖²` for an orthonormal basis.
    Constant(Rational),
    Polynomial(TrigPolynomial),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualEntry {
    pub subset: Vec<usize>,
    pub mean: f64,
    pub exact: Option<Rational>,
    pub method: &'static str,
    pub windowed: Option<MeanEstimate>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UcpReport {
    pub entries: Vec<ResidualEntry>,
    /// Limit of the residual means as the truncation exhausts the family.
    pub limit: Option<Rational>,
    pub status: UcpStatus,
}

impl UcpReport {
    pub fn to_json(&self) -> Value {
        json!({
            "entries": self.entries.iter().map(|e| json!({
                "layers": e.subset.len(),
                "subset": e.subset,
                "mean": format_f64(e.mean),
                "exact": e.exact.as_ref().map(format_rational),
                "method": e.method,
                "windowed": e.windowed.as_ref().map(MeanEstimate::to_json),
            })).collect::<Vec<_>>(),
            "limit": self.limit.as_ref().map(format_rational),
            "ucp": self.status.to_json(),
        })
    }
}

/// Truncations `{0}, {0,1}, …` over the stored layers.
pub fn prefix_truncations(n: usize) -> Vec<Vec<usize>> {
    (1..=n).map(|m| (0..m).collect()).collect()
}

fn d_zero_real(system: &GsiSystem, f: &TestFunction, j: usize) -> Result<(f64, Option<Rational>)> {
    match d_zero_exact(system, f, j) {
        Ok(z) => Ok((to_f64(&z.re), Some(z.re))),
        Err(GsiError::NonEvaluable(_)) => {
            let zero = vec![Rational::zero(); system.model.dimension()];
            Ok((d_coefficient(system, f, j, &zero)?.re, None))
        }
        Err(e) => Err(e),
    }
}

pub fn ucp_residual(system: &GsiSystem, f: &TestFunction, truncations: &[Vec<usize>], target: &Target) -> Result<UcpReport> {
    if system.tail.is_some() && *target == Target::Computed {
        return Err(GsiError::TargetUnknown);
    }
    for j in truncations.iter().flatten() {
        if *j >= system.layers.len() {
            return Err(GsiError::InvalidInput(format!("truncation names layer {j}, which is not stored")));
        }
    }
    let self_dual = !system.is_dual_system();
    let constant_target = match target {
        Target::Computed => None,
        Target::Constant(c) => Some(c.clone()),
        Target::Polynomial(_) => None,
    };
    if self_dual && !matches!(target, Target::Polynomial(_)) {
        let d: Vec<(f64, Option<Rational>)> = (0..system.layers.len()).map(|j| d_zero_real(system, f, j)).collect::<Result<_>>()?;
        let all_exact = d.iter().all(|x| x.1.is_some());
        let total_f: f64 = d.iter().map(|x| x.0).sum();
        let total_r: Option<Rational> = all_exact.then(|| d.iter().map(|x| x.1.clone().unwrap()).sum());
        let (target_f, target_r) = match &constant_target {
            Some(c) => (to_f64(c), all_exact.then(|| c.clone())),
            None => (total_f, total_r.clone()),
        };
        let entries = truncations
            .iter()
            .map(|sub| {
                let partial_f: f64 = sub.iter().map(|&j| d[j].0).sum();
                let exact = target_r.as_ref().map(|t| t - sub.iter().map(|&j| d[j].1.clone().unwrap()).sum::<Rational>());
                let mean = exact.as_ref().map_or(target_f - partial_f, to_f64);
                ResidualEntry { subset: sub.clone(), mean, exact, method: "constant-coefficient", windowed: None }
            })
            .collect();
        // the residual of the whole family: stored layers plus tail
        let limit = match (&system.tail, &target_r, &total_r) {
            (None, Some(t), Some(s)) => Some(t - s),
            (Some(tail), Some(t), Some(s)) => match tail.calderon().and_then(|c| c.exact_rational) {
                Some(tc) => Some(t - s - norm_sq_exact(f)? * tc),
                None => None,
            },
            _ => None,
        };
        let status = match &limit {
            Some(l) if l.is_zero() => UcpStatus::Evidenced("residual means decrease to 0 exactly".into()),
            Some(l) if l.is_positive() => {
                UcpStatus::Violated(format!("residual means converge to {} > 0", format_rational(l)))
            }
            Some(l) => UcpStatus::Violated(format!("target lies below the partial sums by {}", format_rational(&l.abs()))),
            None => UcpStatus::Unknown,
        };
        return Ok(UcpReport { entries, limit, status });
    }
    // windowed route
    let layers: Vec<TrigPolynomial> = (0..system.layers.len()).map(|j| w_layer(system, f, j)).collect::<Result<_>>()?;
    let target_poly = match target {
        Target::Computed => {
            let mut p = TrigPolynomial::zero(system.model.dimension(), system.model.is_discrete());
            for l in &layers {
                p.add(l);
            }
            p
        }
        Target::Constant(c) => TrigPolynomial::constant(system.model.dimension(), system.model.is_discrete(), Complex64::new(to_f64(c), 0.0)),
        Target::Polynomial(p) => p.clone(),
    };
    let mut entries = Vec::new();
    for sub in truncations {
        let mut residual = target_poly.clone();
        for &j in sub {
            let mut neg = layers[j].clone();
            neg.scale(Complex64::new(-1.0, 0.0));
            residual.add(&neg);
        }
        let eval = |x: &[f64]| Complex64::new(residual.evaluate_f64(x).norm(), 0.0);
        let est = mean_windowed(&system.model, &eval, &window_schedule())?;
        let mean = est.value().re;
        entries.push(ResidualEntry {
            subset: sub.clone(),
            mean,
            exact: if residual.is_empty() { Some(Rational::zero()) } else { None },
            method: "windowed",
            windowed: Some(est),
        });
    }
    let status = match entries.last() {
        Some(e) if e.mean < 1e-6 && system.tail.is_none() => {
            UcpStatus::Evidenced(format!("windowed residual mean {} at the largest truncation", format_f64(e.mean)))
        }
        _ => UcpStatus::Unknown,
    };
    let limit = entries.last().and_then(|e| e.exact.clone()).or_else(|| {
        (system.tail.is_none() && *target == Target::Computed).then(Rational::zero)
    });
    Ok(UcpReport { entries, limit, status })
}
