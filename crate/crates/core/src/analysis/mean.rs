//! Means of almost periodic functions: the constant Fourier coefficient of a
//! trigonometric polynomial, or averages over growing windows `H_n`.

use num_complex::Complex64;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{GsiError, Result};
use crate::exact::{format_complex, format_f64, ExactComplex};
use crate::group::GroupModel;
use crate::trig::TrigPolynomial;

/// Cauchy tolerance between consecutive windows.
pub const WINDOW_TOLERANCE: f64 = 1e-4;

/// Largest number of samples in a single window average.
const MAX_WINDOW_SAMPLES: u64 = 1 << 24;

/// Midpoint step of the quadrature on ℝⁿ.
const REAL_STEP: f64 = 0.125;

#[derive(Debug, Clone, PartialEq)]
pub struct MeanEstimate {
    pub exact: Option<Complex64>,
    pub exact_rational: Option<ExactComplex>,
    /// `(n, average over H_n)`.
    pub windowed: Vec<(u64, Complex64)>,
    /// Cauchy criterion met between the last two windows.
    pub converged: bool,
    pub verdict: String,
}

impl MeanEstimate {
    /// Best available value: the exact mean, else the last window average.
    pub fn value(&self) -> Complex64 {
        self.exact.or_else(|| self.windowed.last().map(|w| w.1)).unwrap_or_default()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "exact": self.exact.map(format_complex),
            "windowed": self.windowed.iter().map(|(n, v)| json!({"n": n, "value": format_complex(*v)})).collect::<Vec<_>>(),
            "converged": self.converged,
            "verdict": self.verdict,
        })
    }
}

/// Powers of two from 16 to 4096.
pub fn window_schedule() -> Vec<u64> {
    (4..=12).map(|k| 1u64 << k).collect()
}

/// The coefficient at frequency zero.
pub fn mean_exact(p: &TrigPolynomial) -> MeanEstimate {
    let m = p.mean();
    MeanEstimate {
        exact: Some(m),
        exact_rational: None,
        windowed: Vec::new(),
        converged: true,
        verdict: format!("exact constant coefficient {}", format_f64(m.re)),
    }
}

fn window_average(model: &GroupModel, n: u64, f: &dyn Fn(&[f64]) -> Complex64) -> Option<Complex64> {
    match model {
        GroupModel::Finite { .. } => unreachable!("finite groups are averaged once"),
        GroupModel::Integer => {
            let n = n as i64;
            let sum: Complex64 = (-n..=n).map(|x| f(&[x as f64])).sum();
            Some(sum / (2 * n + 1) as f64)
        }
        GroupModel::Real { dim } => {
            let per_axis = ((2 * n) as f64 / REAL_STEP) as u64;
            let total = per_axis.checked_pow(*dim as u32)?;
            if total > MAX_WINDOW_SAMPLES {
                return None;
            }
            let mut idx = vec![0u64; *dim];
            let mut x = vec![0.0; *dim];
            let mut sum = Complex64::zero();
            for _ in 0..total {
                for (xi, &i) in x.iter_mut().zip(&idx) {
                    *xi = -(n as f64) + (i as f64 + 0.5) * REAL_STEP;
                }
                sum += f(&x);
                for i in idx.iter_mut() {
                    *i += 1;
                    if *i < per_axis {
                        break;
                    }
                    *i = 0;
                }
            }
            Some(sum / total as f64)
        }
    }
}

/// Window averages `(1/|H_n|) ∫_{H_n} f` for the schedule, with `H_n = [−n, n] ∩ G`
/// on ℤ and ℝⁿ and all of `G` on finite groups.
pub fn mean_windowed(model: &GroupModel, f: &dyn Fn(&[f64]) -> Complex64, schedule: &[u64]) -> Result<MeanEstimate> {
    if let GroupModel::Finite { moduli } = model {
        if moduli.len() != 1 {
            return Err(GsiError::UnsupportedModel("windowed means on product groups".into()));
        }
        let m = moduli[0];
        let avg = (0..m).map(|x| f(&[x as f64])).sum::<Complex64>() / m as f64;
        return Ok(MeanEstimate {
            exact: None,
            exact_rational: None,
            windowed: vec![(m, avg)],
            converged: true,
            verdict: "average over the whole group".into(),
        });
    }
    let mut windowed = Vec::new();
    for &n in schedule {
        match window_average(model, n, f) {
            Some(v) => windowed.push((n, v)),
            None => break,
        }
    }
    if windowed.is_empty() {
        return Err(GsiError::NonEvaluable(format!("no window of the schedule fits in {MAX_WINDOW_SAMPLES} samples")));
    }
    let converged = windowed.len() >= 2 && {
        let k = windowed.len();
        (windowed[k - 1].1 - windowed[k - 2].1).norm() < WINDOW_TOLERANCE
    };
    let last = windowed.last().unwrap();
    let verdict = if converged {
        format!("window averages settled at n = {}", last.0)
    } else {
        format!("window averages not settled by n = {}", last.0)
    };
    Ok(MeanEstimate { exact: None, exact_rational: None, windowed, converged, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn exact_means() {
        let mut p = TrigPolynomial::constant(1, true, Complex64::new(3.0, 0.0));
        assert_eq!(mean_exact(&p).exact, Some(Complex64::new(3.0, 0.0)));
        p = TrigPolynomial::zero(1, true);
        p.add_term(vec![rat(1, 3)], Complex64::new(1.0, 0.0));
        assert_eq!(mean_exact(&p).exact, Some(Complex64::zero()));
    }

    #[test]
    fn windowed_mean_of_periodic_indicator() {
        // indicator of 4ℤ has mean 1/4
        let f = |x: &[f64]| Complex64::new(if (x[0] as i64).rem_euclid(4) == 0 { 1.0 } else { 0.0 }, 0.0);
        let m = mean_windowed(&GroupModel::Integer, &f, &window_schedule()).unwrap();
        assert!((m.value().re - 0.25).abs() < 1e-3);
        assert!(m.converged);
    }

    #[test]
    fn windowed_mean_on_the_line() {
        let f = |x: &[f64]| Complex64::new((std::f64::consts::TAU * x[0]).cos().powi(2), 0.0);
        let m = mean_windowed(&GroupModel::Real { dim: 1 }, &f, &window_schedule()).unwrap();
        assert!((m.value().re - 0.5).abs() < 1e-9);
    }
}
