//! Necessary conditions on frames, and the independence gate for cyclic lattices.

use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use super::operator::optimal_bounds;
use super::report::{Audit, Bounds, FrameReport, Verdict, VerdictStatus};
use crate::analysis::{bandwidth, calderon, BandwidthValue, GsiSystem, TailKind, UcpStatus};
use crate::error::{GsiError, Result};
use crate::exact::{format_f64, format_rational, from_f64, to_f64, Rational};
use crate::group::{BoxSet, Generator, GroupModel, RatBox};
use crate::lattice::{duals_independent, Lattice};

/// Slack on floating comparisons of audited quantities.
const AUDIT_SLACK: f64 = 1e-9;

/// Relative tolerance on `|ĝ_j|² = c_j` in the shape check.
const SHAPE_TOLERANCE: f64 = 1e-12;

fn rational_of(x: f64) -> Rational {
    from_f64(x).unwrap_or_else(|_| Rational::zero())
}

/// Audits of the necessary conditions for a frame with bounds `A ≤ B`.
///
/// Bounds come from `claimed`, else from the dense frame operator on finite
/// groups. A failed audit with bounds that are known to hold means the
/// characterizing theorems do not apply, i.e. the 1-UCP fails.
pub fn audit_necessary(system: &GsiSystem, claimed: Option<(f64, f64)>) -> Result<FrameReport> {
    let analysis = system.analysis_system();
    let mut report = FrameReport::new(system.label.clone(), system.ucp.clone());
    let bounds = match claimed {
        Some((a, b)) => Some(Bounds { lower: a, upper: b, lower_radius: 0.0, upper_radius: 0.0, method: "claimed".into() }),
        None if matches!(system.model, GroupModel::Finite { .. }) => Some(optimal_bounds(&analysis)?),
        None => None,
    };
    report.bounds = bounds.clone();
    let (a_lo, b_hi) = match &bounds {
        Some(b) => (Some((b.lower - b.lower_radius).max(0.0)), Some(b.upper + b.upper_radius)),
        None => (None, None),
    };

    // (a) A ≤ Calderón ≤ B
    let cal = calderon(&analysis, None)?;
    let range = cal.real_range();
    let exact_range = range.exact_min.clone().zip(range.exact_max.clone());
    let pass_a = match (a_lo, b_hi) {
        (Some(a), Some(b)) => Some(match (&exact_range, claimed) {
            (Some((lo, hi)), Some(_)) => *lo >= rational_of(a) && *hi <= rational_of(b),
            _ => range.min >= a - AUDIT_SLACK && range.max <= b + AUDIT_SLACK,
        }),
        _ => None,
    };
    let (min_s, max_s) = match &exact_range {
        Some((lo, hi)) => (format_rational(lo), format_rational(hi)),
        None => (format_f64(range.min), format_f64(range.max)),
    };
    report.audits.push(Audit {
        name: "calderon".into(),
        instance: format!(
            "A = {} <= min Calderón = {min_s}{}, max Calderón = {max_s} <= B = {}",
            a_lo.map_or("?".into(), format_f64),
            range.argmin.as_ref().map(|w| format!(" at {w}")).unwrap_or_default(),
            b_hi.map_or("?".into(), format_f64),
        ),
        pass: pass_a,
    });

    // (b) BW ≥ (A/B)·μ(Ĝ), and (d) no lower bound for finitely many layers on a non-discrete group
    let bw = bandwidth(system);
    let mass = system.model.dual_total_mass();
    let pass_b = match (a_lo, b_hi) {
        (Some(a), Some(b)) if b > 0.0 => Some(match (&bw.total, &mass) {
            (BandwidthValue::Infinite, _) => true,
            (BandwidthValue::Finite(_), None) => a <= 0.0,
            (BandwidthValue::Finite(w), Some(m)) => *w >= rational_of(a) / rational_of(b) * m,
        }),
        (Some(_), Some(_)) => Some(true),
        _ => None,
    };
    report.audits.push(Audit {
        name: "bandwidth".into(),
        instance: format!(
            "BW = {} >= (A/B)·mu = ({}/{})·{}",
            match &bw.total {
                BandwidthValue::Finite(w) => format_rational(w),
                BandwidthValue::Infinite => "inf".into(),
            },
            a_lo.map_or("?".into(), format_f64),
            b_hi.map_or("?".into(), format_f64),
            mass.as_ref().map_or("inf".into(), format_rational),
        ),
        pass: pass_b,
    });

    // (c) ‖g_j‖² ≤ B
    let norms: Vec<f64> = analysis.layers.iter().map(|l| l.analysis.norm_sq()).collect();
    let tail_norm = match analysis.tail.as_ref().map(|t| &t.kind) {
        Some(TailKind::GreedyDelta { .. }) => Some(1.0),
        _ => None,
    };
    let max_norm = norms.iter().copied().chain(tail_norm).fold(0.0f64, f64::max);
    report.audits.push(Audit {
        name: "norms".into(),
        instance: format!("max_j ||g_j||^2 = {} <= B = {}", format_f64(max_norm), b_hi.map_or("?".into(), format_f64)),
        pass: b_hi.map(|b| max_norm <= b + AUDIT_SLACK),
    });

    if !system.model.is_discrete() {
        let finite_family = system.tail.is_none();
        report.audits.push(Audit {
            name: "non-discrete".into(),
            instance: if finite_family {
                format!("finitely many layers on a non-discrete group force A = 0; A = {}", a_lo.map_or("?".into(), format_f64))
            } else {
                "infinitely many layers".into()
            },
            pass: if finite_family { a_lo.map(|a| a <= 0.0) } else { Some(true) },
        });
    } else {
        // (e) Σ_j (1/covol)‖ĝ_j‖² ≤ B·μ(Ĝ) on discrete groups
        let mut total: f64 = analysis.layers.iter().zip(&norms).map(|(l, n)| n / to_f64(&l.lattice.covolume())).sum();
        let mut tail_known = true;
        if let Some(t) = &analysis.tail {
            match (&t.kind, t.calderon()) {
                (TailKind::GreedyDelta { .. }, Some(c)) => total += to_f64(&c.bound),
                (TailKind::Uniform { .. }, Some(c)) => total += to_f64(&c.bound),
                _ => tail_known = false,
            }
        }
        let mu = mass.as_ref().map_or(f64::INFINITY, to_f64);
        report.audits.push(Audit {
            name: "bessel-sum".into(),
            instance: format!(
                "sum_j ||g_j||^2/covol = {}{} <= B·mu = {}",
                format_f64(total),
                if tail_known { "" } else { " (prefix only)" },
                b_hi.map_or("?".into(), |b| format_f64(b * mu)),
            ),
            pass: if tail_known { b_hi.map(|b| total <= b * mu + AUDIT_SLACK) } else { None },
        });
    }

    let failed: Vec<String> = report.audits.iter().filter(|a| a.pass == Some(false)).map(|a| a.name.clone()).collect();
    let verdict = if failed.is_empty() {
        Verdict::pass("all audited necessary conditions hold")
    } else {
        if !matches!(system.ucp, UcpStatus::Automatic) && bounds.is_some() {
            report.ucp = UcpStatus::Violated(format!("necessary conditions fail for a frame with these bounds: {}", failed.join(", ")));
            report.notes.push("failed audits on a frame are evidence that the 1-UCP fails".into());
        }
        Verdict::fail(failed.join(", "), "necessary condition violated")
    };
    report.verdicts.insert("audit".into(), verdict);
    report.provenance.push(format!("audits use {}", bounds.as_ref().map_or("no bounds".into(), |b| b.method.clone())));
    Ok(report)
}

/// Outcome of the independence gate.
#[derive(Debug, Clone, PartialEq)]
pub struct GateReport {
    pub applicable: bool,
    pub independent: bool,
    /// UCP license granted by pairwise independent duals.
    pub license: Option<UcpStatus>,
    /// Shape check of claimed orthonormal basis generators.
    pub shape: Option<Verdict>,
    pub detail: String,
}

impl GateReport {
    pub fn to_json(&self) -> Value {
        json!({
            "applicable": self.applicable,
            "independent": self.independent,
            "license": self.license.as_ref().map(UcpStatus::to_json),
            "shape": self.shape.as_ref().map(Verdict::to_json),
            "detail": self.detail,
        })
    }

    /// Folds the gate into a frame report.
    pub fn apply(&self, report: &mut FrameReport) {
        let v = if !self.applicable {
            Verdict::not_applicable(self.detail.clone())
        } else if let Some(s) = &self.shape {
            s.clone()
        } else {
            Verdict::pass(self.detail.clone())
        };
        report.verdicts.insert("independence".into(), v);
        if let Some(l) = &self.license {
            report.ucp = l.clone();
            report.provenance.push("infinity-UCP from pairwise independent duals".into());
        }
    }
}

fn covolume_f64(l: &Lattice) -> f64 {
    to_f64(&l.covolume())
}

/// `|ĝ_j| = c_j^{1/2}·1_{K_j}` with pairwise disjoint `K_j` covering the dual group.
fn onb_shape(system: &GsiSystem) -> Result<Verdict> {
    match &system.model {
        GroupModel::Integer => {
            let mut sets: Vec<BoxSet> = Vec::new();
            for (j, l) in system.layers.iter().enumerate() {
                let Generator::Boxes(b) = &l.analysis else {
                    return Ok(Verdict::not_applicable("shape check needs box spectra on ℤ"));
                };
                let c = covolume_f64(&l.lattice);
                for (cell, z) in &b.pieces {
                    let s = z.norm_sqr();
                    if s != 0.0 && (s - c).abs() > SHAPE_TOLERANCE * c {
                        return Ok(Verdict::fail(
                            format!("layer {j}, cell {cell}: |g|^2 = {}", format_f64(s)),
                            format!("not an orthonormal basis: |g_{j}|^2 takes a value other than {}", format_f64(c)),
                        ));
                    }
                }
                let support = b.support().wrap_torus();
                if let Some(w) = fundamental_domain_defect(&support, &l.lattice.covolume()) {
                    return Ok(Verdict::fail(
                        format!("layer {j}: {w}"),
                        format!("not an orthonormal basis: K_{j} is not a fundamental domain mod the dual lattice"),
                    ));
                }
                for (i, prev) in sets.iter().enumerate() {
                    if let Some(cell) = prev.intersect(&support).boxes().first() {
                        return Ok(Verdict::fail(
                            format!("layers {i} and {j} overlap on {cell}"),
                            "not an orthonormal basis: supports overlap",
                        ));
                    }
                }
                sets.push(support);
            }
            let union = BoxSet::from_boxes(sets.iter().flat_map(|s| s.boxes().iter()));
            let rest = BoxSet::from_box(RatBox::unit(1)).subtract(&union);
            if let Some(cell) = rest.boxes().first() {
                return Ok(Verdict::fail(format!("cell {cell} is uncovered"), "not an orthonormal basis: supports miss a cell"));
            }
            Ok(Verdict::pass("orthonormal basis shape: disjoint supports covering the torus"))
        }
        GroupModel::Finite { .. } => {
            let m = system.model.cyclic_modulus()? as usize;
            let mut owner: Vec<Option<usize>> = vec![None; m];
            for (j, l) in system.layers.iter().enumerate() {
                let Some(spec) = l.analysis.dense_spectrum() else {
                    return Ok(Verdict::not_applicable("shape check needs dense generators"));
                };
                let c = covolume_f64(&l.lattice);
                // fundamental domain mod (M/c)ℤ_M: one point per residue class
                let period = m / (c as usize).max(1);
                let mut hits = vec![0usize; period.max(1)];
                for (w, z) in spec.iter().enumerate() {
                    if z.norm_sqr() >= SHAPE_TOLERANCE * c {
                        hits[w % period.max(1)] += 1;
                    }
                }
                if let Some(r) = hits.iter().position(|&h| h != 1) {
                    return Ok(Verdict::fail(
                        format!("layer {j}: residue {r} mod {period} carries {} support points", hits[r]),
                        format!("not an orthonormal basis: K_{j} is not a fundamental domain mod the dual lattice"),
                    ));
                }
                for (w, z) in spec.iter().enumerate() {
                    let s = z.norm_sqr();
                    if s < SHAPE_TOLERANCE * c {
                        continue;
                    }
                    if (s - c).abs() > 1e-9 * c {
                        return Ok(Verdict::fail(
                            format!("layer {j}, omega={w}: |g|^2 = {}", format_f64(s)),
                            "not an orthonormal basis: two distinct nonzero moduli",
                        ));
                    }
                    if let Some(i) = owner[w] {
                        return Ok(Verdict::fail(format!("layers {i} and {j} share omega={w}"), "not an orthonormal basis: supports overlap"));
                    }
                    owner[w] = Some(j);
                }
            }
            if let Some(w) = owner.iter().position(Option::is_none) {
                return Ok(Verdict::fail(format!("omega={w} is uncovered"), "not an orthonormal basis: supports miss a point"));
            }
            Ok(Verdict::pass("orthonormal basis shape: disjoint supports covering the dual group"))
        }
        GroupModel::Real { .. } => Err(GsiError::UnsupportedModel("independence gate on ℝⁿ".into())),
    }
}

/// Largest `c` for which the periodization of `K` mod `(1/c)ℤ` is built explicitly.
const MAX_PERIODIZATION: i64 = 4096;

/// `K ⊂ [0,1)` is a fundamental domain mod `(1/c)ℤ` iff `μ(K) = 1/c` and its
/// `c` translates cover the torus. Returns a witness when it is not.
fn fundamental_domain_defect(k: &BoxSet, c: &Rational) -> Option<String> {
    let want = c.recip();
    let got = k.measure();
    if got != want {
        return Some(format!("measure {} != {}", format_rational(&got), format_rational(&want)));
    }
    let steps = c.to_integer().to_i64().filter(|&n| c.is_integer() && n <= MAX_PERIODIZATION)?;
    let mut union = BoxSet::new();
    for t in 0..steps {
        for b in k.translate(&[Rational::new(t.into(), c.to_integer())]).wrap_torus().boxes() {
            union.insert(b);
        }
    }
    BoxSet::from_box(RatBox::unit(1)).subtract(&union).boxes().first().map(|cell| format!("cell {cell} missed by the translates"))
}

/// Gate for cyclic lattices `c_jℤ` or `c_jℤ_M`: pairwise coprime `c_j` give
/// the ∞-UCP for every Bessel family; for claimed bases the generator shape is
/// checked as well.
pub fn independence_gate(system: &GsiSystem, claim_onb: bool) -> Result<GateReport> {
    if matches!(system.model, GroupModel::Real { .. }) {
        return Err(GsiError::UnsupportedModel("independence of lattices in ℝⁿ".into()));
    }
    let lattices: Vec<Lattice> = system.layers.iter().map(|l| l.lattice.clone()).collect();
    let independent = duals_independent(&lattices)?;
    if system.tail.is_some() {
        return Ok(GateReport {
            applicable: false,
            independent: false,
            license: None,
            shape: None,
            detail: "tail lattices share factors".into(),
        });
    }
    if !independent {
        return Ok(GateReport {
            applicable: false,
            independent,
            license: None,
            shape: None,
            detail: "lattice indices are not pairwise coprime".into(),
        });
    }
    let shape = if claim_onb { Some(onb_shape(system)?) } else { None };
    Ok(GateReport {
        applicable: true,
        independent,
        license: Some(UcpStatus::Evidenced("infinity-UCP: pairwise independent duals".into())),
        shape,
        detail: "pairwise coprime indices: every Bessel family has the infinity-UCP".into(),
    })
}

/// Whether a report's Parseval verdict agrees with `‖S − I‖_max < tol`.
pub fn agrees_with_operator(status: VerdictStatus, deviation: f64, tol: f64) -> bool {
    (status == VerdictStatus::Pass) == (deviation < tol)
}

/// `c_jℤ` index as an integer, for reports.
pub fn cyclic_index(l: &Lattice) -> Option<u64> {
    match l {
        Lattice::Cyclic(c) => Some(c.step),
        Lattice::Integer(_) if l.dimension() == 1 => l.covolume().to_integer().to_u64(),
        _ => None,
    }
}
