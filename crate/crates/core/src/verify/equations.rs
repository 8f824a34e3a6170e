//! Parseval and dual-pair certification through the equations
//! `t_α ≡ δ_{α,0}` on every relevant frequency.

use std::collections::BTreeSet;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::operator::optimal_bounds;
use super::report::{EquationCheck, FrameReport, Verdict, VerdictStatus};
use crate::analysis::coeffs::dual_section;
use crate::analysis::system::format_frequency;
use crate::analysis::{calderon, prefix_truncations, t_alpha, ucp_residual, GsiSystem, Layer, Target, UcpStatus};
use crate::error::{GsiError, Result};
use crate::exact::{int, rat, Rational};
use crate::group::{Generator, GroupModel, RatBox, TestFunction};
use crate::lattice::{duals_independent, Lattice};

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    /// Largest admissible `sup_ω |t_α(ω) − δ_{α,0}|`.
    pub tolerance: f64,
    /// Frequencies checked exhaustively before switching to samples.
    pub max_alphas: usize,
    /// Evaluation window on ℝⁿ.
    pub region: Option<RatBox>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { tolerance: 1e-10, max_alphas: 4096, region: None }
    }
}

/// Tail frequencies sampled per layer beyond the exhaustive range.
const TAIL_SAMPLES: i64 = 8;

/// Tail layers visited by sampling.
const TAIL_SAMPLE_LAYERS: u32 = 4;

fn insert_section(out: &mut BTreeSet<Vec<Rational>>, model: &GroupModel, lattice: &Lattice) -> Result<()> {
    for a in dual_section(model, &lattice.dual()?)? {
        out.insert(a);
    }
    Ok(())
}

/// Frequencies `α` at which `t_α` can be nonzero, and how they were chosen.
pub fn equation_frequencies(system: &GsiSystem, cfg: &VerifyConfig) -> Result<(Vec<Vec<Rational>>, String)> {
    let dim = system.model.dimension();
    let mut out: BTreeSet<Vec<Rational>> = BTreeSet::new();
    out.insert(vec![Rational::zero(); dim]);
    let mut coverage = "exhaustive".to_string();
    match &system.model {
        GroupModel::Finite { .. } => {
            for l in &system.layers {
                insert_section(&mut out, &system.model, &l.lattice)?;
            }
        }
        GroupModel::Integer => {
            for l in &system.layers {
                insert_section(&mut out, &system.model, &l.lattice)?;
            }
            if let Some(tail) = &system.tail {
                let mut j = tail.first_index;
                let mut sampled_layers = 0;
                loop {
                    let c = tail.covolume(j);
                    if !c.is_integer() {
                        return Err(GsiError::InvalidInput("tail covolumes must be integers on ℤ".into()));
                    }
                    let c = c.to_integer().to_i64().unwrap_or(i64::MAX);
                    if out.len() + (c as usize) <= cfg.max_alphas {
                        out.extend((0..c).map(|k| vec![rat(k, c)]));
                    } else {
                        out.extend((1..=TAIL_SAMPLES.min(c - 1)).map(|k| vec![rat(k, c)]));
                        sampled_layers += 1;
                        if sampled_layers == 1 {
                            coverage = format!("exhaustive up to denominator {}, sampled beyond", c - 1);
                        }
                        if sampled_layers >= TAIL_SAMPLE_LAYERS {
                            break;
                        }
                    }
                    j += 1;
                    if j >= tail.first_index + 64 {
                        break;
                    }
                }
            }
        }
        GroupModel::Real { .. } => {
            for l in &system.layers {
                let (Generator::Boxes(g), Generator::Boxes(h)) = (&l.analysis, l.synthesis()) else {
                    return Err(GsiError::VariantMismatch("generators on ℝⁿ must be box spectra".into()));
                };
                let (Some(gb), Some(hb)) = (g.bounding_box(), h.bounding_box()) else { continue };
                // ω ∈ supp ĝ and ω + α ∈ supp ĥ
                let lo: Vec<Rational> = hb.lo.iter().zip(&gb.hi).map(|(a, b)| a - b).collect();
                let hi: Vec<Rational> = hb.hi.iter().zip(&gb.lo).map(|(a, b)| a - b).collect();
                out.extend(l.lattice.dual()?.points_in_box(&lo, &hi)?);
            }
            coverage = "support-difference enumeration".into();
        }
    }
    if out.len() > cfg.max_alphas && !coverage.contains("sampled") {
        coverage = format!("{} frequencies (exhaustive)", out.len());
    }
    Ok((out.into_iter().collect(), coverage))
}

/// Checks `t_α ≡ δ_{α,0}` at every frequency and returns the checks plus the
/// first failure.
fn check_equations(system: &GsiSystem, alphas: &[Vec<Rational>], cfg: &VerifyConfig) -> Result<(Vec<EquationCheck>, Option<String>)> {
    let mut checks = Vec::with_capacity(alphas.len());
    let mut failure = None;
    for alpha in alphas {
        let zero = alpha.iter().all(Zero::is_zero);
        let target = if zero { Complex64::new(1.0, 0.0) } else { Complex64::zero() };
        let t = match t_alpha(system, alpha, cfg.region.as_ref()) {
            Ok(t) => t,
            Err(GsiError::FrequencyNotInAnyDualLattice(_)) => continue,
            Err(e) => return Err(e),
        };
        let dev = t.deviation_from(target);
        let ok = dev.exact_zero || dev.max <= cfg.tolerance;
        let name = format_frequency(alpha);
        if !ok && failure.is_none() {
            failure = Some(format!("alpha={name}, {}", dev.witness.clone().unwrap_or_default()));
        }
        checks.push(EquationCheck { alpha: name, deviation: dev.max, exact_zero: dev.exact_zero, witness: if ok { None } else { dev.witness } });
    }
    Ok((checks, failure))
}

/// Tries to settle an unknown UCP status for integer systems with a tail via
/// residual means of `f = δ_0` against the constant `‖f‖²`.
fn settle_ucp(system: &GsiSystem, report: &mut FrameReport) -> UcpStatus {
    if !matches!(system.ucp, UcpStatus::Unknown) || system.tail.is_none() {
        return system.ucp.clone();
    }
    let f = TestFunction::new(Generator::delta(0));
    match ucp_residual(system, &f, &prefix_truncations(system.layers.len()), &Target::Constant(int(1))) {
        Ok(r) => {
            report.provenance.push(format!("UCP status from residual means of delta_0: {}", r.status.name()));
            r.status
        }
        Err(e) => {
            report.notes.push(format!("residual means unavailable: {e}"));
            UcpStatus::Unknown
        }
    }
}

fn conclude(report: &mut FrameReport, key: &str, failure: Option<String>, what: &str, theorem: &str) {
    let verdict = match failure {
        Some(w) => Verdict::fail(w, format!("characterizing equations fail; not {what} under the UCP license")),
        None if report.ucp.licenses() => {
            report.provenance.push(format!("{what}: {theorem} with UCP {}", report.ucp.name()));
            Verdict::pass(format!("t_alpha = delta_alpha,0 on every checked frequency ({what})"))
        }
        None => Verdict {
            status: VerdictStatus::NotCertified,
            witness: None,
            detail: format!("equations hold but {what} not certified (UCP {})", report.ucp.name()),
        },
    };
    report.verdicts.insert(key.into(), verdict);
}

/// Parseval certification of the analysis system.
pub fn check_parseval(system: &GsiSystem, cfg: &VerifyConfig) -> Result<FrameReport> {
    let system = system.analysis_system();
    let mut report = FrameReport::new(system.label.clone(), system.ucp.clone());
    report.ucp = settle_ucp(&system, &mut report);
    let (alphas, coverage) = equation_frequencies(&system, cfg)?;
    report.alpha_coverage = Some(coverage);
    let (checks, failure) = check_equations(&system, &alphas, cfg)?;
    report.equations = checks;
    conclude(&mut report, "parseval", failure, "Parseval", "t_alpha characterization of Parseval frames");
    Ok(report)
}

fn single_layer(system: &GsiSystem, j: usize) -> Result<GsiSystem> {
    let l: &Layer = &system.layers[j];
    GsiSystem::new(system.model.clone(), vec![l.clone()], format!("{} layer {j}", system.label))
}

fn cyclic_lattices(system: &GsiSystem) -> Option<Vec<Lattice>> {
    if system.tail.is_some() {
        return None;
    }
    let ls: Vec<Lattice> = system.layers.iter().map(|l| l.lattice.clone()).collect();
    ls.iter()
        .all(|l| matches!(l, Lattice::Cyclic(_)) || (matches!(l, Lattice::Integer(_)) && l.dimension() == 1))
        .then_some(ls)
}

fn bessel_verdict(system: &GsiSystem, which: &str) -> Result<Verdict> {
    if let GroupModel::Finite { .. } = system.model {
        let b = optimal_bounds(system)?;
        return Ok(Verdict::pass(format!("{which}: finite system, B = {}", b.upper)));
    }
    let c = calderon(system, None)?;
    let r = c.real_range();
    if r.max.is_finite() {
        Ok(Verdict::pass(format!("{which}: Calderón sum bounded by {} (evidence)", r.max)))
    } else {
        Ok(Verdict::fail("Calderón sum unbounded", format!("{which}: no Bessel bound")))
    }
}

/// Dual-frame certification of `(g_j, h_j)`.
///
/// When the lattices are cyclic with pairwise coprime indices, the equations
/// split into `Σ_j (1/c_j) conj(ĝ_j) ĥ_j = 1` and the per-layer vanishing of
/// `conj(ĝ_j(ω)) ĥ_j(ω+α)` for `α ∈ Γ_j⊥ ∖ {0}`.
pub fn check_dual_pair(system: &GsiSystem, cfg: &VerifyConfig) -> Result<FrameReport> {
    let mut report = FrameReport::new(system.label.clone(), system.ucp.clone());
    report.ucp = settle_ucp(system, &mut report);
    report.verdicts.insert("bessel_g".into(), bessel_verdict(&system.analysis_system(), "g")?);
    report.verdicts.insert("bessel_h".into(), bessel_verdict(&system.synthesis_system(), "h")?);
    let independent = match cyclic_lattices(system) {
        Some(ls) if ls.len() > 1 => duals_independent(&ls)?,
        _ => false,
    };
    let failure = if independent {
        report.notes.push("pairwise independent duals: simplified equations".into());
        let zero = vec![Rational::zero(); system.model.dimension()];
        let (mut checks, mut failure) = check_equations(system, std::slice::from_ref(&zero), cfg)?;
        for j in 0..system.layers.len() {
            let layer = single_layer(system, j)?;
            let (alphas, _) = equation_frequencies(&layer, cfg)?;
            let nonzero: Vec<Vec<Rational>> = alphas.into_iter().filter(|a| *a != zero).collect();
            let (c, f) = check_equations(&layer, &nonzero, cfg)?;
            checks.extend(c);
            if failure.is_none() {
                failure = f.map(|w| format!("layer {j}: {w}"));
            }
        }
        report.equations = checks;
        report.alpha_coverage = Some("per layer".into());
        failure
    } else {
        report.notes.push("full t_alpha equations".into());
        let (alphas, coverage) = equation_frequencies(system, cfg)?;
        report.alpha_coverage = Some(coverage);
        let (checks, failure) = check_equations(system, &alphas, cfg)?;
        report.equations = checks;
        failure
    };
    conclude(&mut report, "dual_pair", failure, "dual frames", "t_alpha characterization of dual frames");
    Ok(report)
}
