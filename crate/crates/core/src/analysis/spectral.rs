//! The Calderón sum and the functions `t_α` on the dual group.
//!
//! `t_α(ω) = Σ_{j: α ∈ Γ_j⊥} (1/covol Γ_j) conj(ĝ_j(ω)) ĥ_j(ω + α)`, with the
//! Calderón sum being `t_0` of the self-dual analysis system.

use std::collections::BTreeMap;

use num_complex::{Complex, Complex64};
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use super::coeffs::{canonical_frequency, dual_contains, shift_pieces};
use super::system::{format_frequency, is_zero_frequency, GsiSystem, TailValue};
use crate::error::{GsiError, Result};
use crate::exact::{exact_from_c64, exact_to_c64, format_complex, format_rational, int, rat, to_f64, unit_phase, ExactComplex, Rational};
use crate::group::{dft, Generator, GroupModel, RatBox};
use crate::trig::TrigPolynomial;

/// Largest number of cells in a piecewise-constant evaluation.
pub const MAX_CELLS: usize = 1_000_000;

/// Grid used to sample trigonometric sums on 𝕋 when a range is requested.
pub const TORUS_SAMPLES: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub enum SpectralFunction {
    /// Values at `ω = 0, …, M−1` on the dual of ℤ_M.
    Pointwise(Vec<Complex64>),
    /// Trigonometric polynomial in `ω ∈ 𝕋` with integer frequencies.
    Trig(TrigPolynomial),
    /// Piecewise constant on disjoint cells covering the evaluated region.
    Cells(Vec<(RatBox, Complex64)>),
}

/// A spectral function together with its tail contribution.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSum {
    pub alpha: Vec<Rational>,
    /// Stored layers whose dual lattice contains `α`.
    pub layers: Vec<usize>,
    pub function: SpectralFunction,
    /// Contribution of the tail layers, constant in `ω`.
    pub tail: Option<TailValue>,
    /// The tail series diverges.
    pub tail_diverges: bool,
    /// Exact coefficients of the stored part, keyed by frequency (sequence systems at `α = 0`).
    pub exact_terms: Option<BTreeMap<i64, ExactComplex>>,
    /// Region covered by `Cells`.
    pub region: Option<RatBox>,
}

/// Largest deviation from a constant and where it occurs.
#[derive(Debug, Clone, PartialEq)]
pub struct Deviation {
    pub max: f64,
    pub witness: Option<String>,
    /// False when an inexact tail bound entered `max`.
    pub certain: bool,
    /// The deviation is exactly zero in rational arithmetic.
    pub exact_zero: bool,
}

/// Range of the real part of a spectral function.
#[derive(Debug, Clone, PartialEq)]
pub struct RealRange {
    pub min: f64,
    pub max: f64,
    pub argmin: Option<String>,
    pub argmax: Option<String>,
    /// Obtained by sampling rather than exhaustively.
    pub sampled: bool,
    pub exact_min: Option<Rational>,
    pub exact_max: Option<Rational>,
}

impl SpectralSum {
    fn tail_shift(&self) -> (Complex64, bool, f64) {
        match &self.tail {
            None => (Complex64::zero(), true, 0.0),
            Some(t) => match t.exact {
                Some(z) => (z, true, 0.0),
                None => (Complex64::zero(), false, to_f64(&t.bound)),
            },
        }
    }

    /// Exact value of the constant coefficient plus tail, when both are exact.
    pub fn exact_constant(&self) -> Option<ExactComplex> {
        let terms = self.exact_terms.as_ref()?;
        let mut c = terms.get(&0).cloned().unwrap_or_else(crate::exact::exact_zero);
        if let Some(t) = &self.tail {
            c.re += t.exact_rational.clone()?;
        }
        Some(c)
    }

    /// `sup_ω |t(ω) − target|`, with the tail bound added when the tail is inexact.
    pub fn deviation_from(&self, target: Complex64) -> Deviation {
        if self.tail_diverges {
            return Deviation { max: f64::INFINITY, witness: Some("tail series diverges".into()), certain: true, exact_zero: false };
        }
        let (shift, certain, slack) = self.tail_shift();
        match &self.function {
            SpectralFunction::Pointwise(v) => {
                let mut best = (0.0, None);
                for (w, z) in v.iter().enumerate() {
                    let d = (z + shift - target).norm();
                    if d > best.0 || best.1.is_none() {
                        best = (d, Some(format!("omega={w}")));
                    }
                }
                Deviation { max: best.0 + slack, witness: best.1, certain, exact_zero: false }
            }
            SpectralFunction::Cells(cells) => {
                let mut best = (0.0, None);
                for (b, z) in cells {
                    let d = (z + shift - target).norm();
                    if d > best.0 || best.1.is_none() {
                        best = (d, Some(format!("cell {b}")));
                    }
                }
                Deviation { max: best.0 + slack, witness: best.1, certain, exact_zero: false }
            }
            SpectralFunction::Trig(p) => {
                if let (Some(terms), Some(c0), Ok(t)) = (&self.exact_terms, self.exact_constant(), exact_from_c64(target)) {
                    let nonconstant: Vec<(&i64, &ExactComplex)> =
                        terms.iter().filter(|(k, v)| **k != 0 && !v.is_zero()).collect();
                    let diff = c0 - t;
                    if nonconstant.is_empty() && diff.is_zero() {
                        return Deviation { max: 0.0, witness: None, certain: true, exact_zero: true };
                    }
                    let max = exact_to_c64(&diff).norm() + nonconstant.iter().map(|(_, v)| exact_to_c64(v).norm()).sum::<f64>();
                    let witness = match nonconstant.first() {
                        Some((k, _)) => format!("frequency {k} has a nonzero coefficient"),
                        None => format!("constant term {}", format_complex(exact_to_c64(&diff) + target)[0]),
                    };
                    return Deviation { max, witness: Some(witness), certain: true, exact_zero: false };
                }
                let zero = vec![Rational::zero()];
                let c0 = p.coefficient(&zero);
                let mut max = (c0 + shift - target).norm() + slack;
                let mut witness = None;
                let mut worst = 0.0;
                for (k, c) in p.terms() {
                    if k != zero.as_slice() {
                        max += c.norm();
                        if c.norm() > worst {
                            worst = c.norm();
                            witness = Some(format!("frequency {} has a nonzero coefficient", format_frequency(k)));
                        }
                    }
                }
                if witness.is_none() {
                    witness = Some("constant term".into());
                }
                Deviation { max, witness, certain, exact_zero: false }
            }
        }
    }

    /// Value at a dual point (`ω` an index on ℤ_M, a torus point, or a point of ℝⁿ).
    pub fn value_at(&self, omega: &[Rational]) -> Complex64 {
        let (shift, _, _) = self.tail_shift();
        let base = match &self.function {
            SpectralFunction::Pointwise(v) => {
                let m = v.len() as i64;
                let i = omega[0].floor().to_integer().to_i64().unwrap_or(0).rem_euclid(m);
                v[i as usize]
            }
            SpectralFunction::Trig(p) => p.evaluate(omega),
            SpectralFunction::Cells(cells) => {
                cells.iter().find(|(b, _)| b.contains(omega)).map(|(_, z)| *z).unwrap_or_default()
            }
        };
        base + shift
    }

    /// Range of the real part over the dual group (or the evaluated region).
    pub fn real_range(&self) -> RealRange {
        let (shift, _, slack) = self.tail_shift();
        let mut r = RealRange {
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
            argmin: None,
            argmax: None,
            sampled: false,
            exact_min: None,
            exact_max: None,
        };
        let mut visit = |v: f64, at: String| {
            if v < r.min {
                r.min = v;
                r.argmin = Some(at.clone());
            }
            if v > r.max {
                r.max = v;
                r.argmax = Some(at);
            }
        };
        match &self.function {
            SpectralFunction::Pointwise(v) => {
                for (w, z) in v.iter().enumerate() {
                    visit(z.re + shift.re, format!("omega={w}"));
                }
            }
            SpectralFunction::Cells(cells) => {
                for (b, z) in cells {
                    visit(z.re + shift.re, format!("cell {b}"));
                }
            }
            SpectralFunction::Trig(p) => {
                if p.terms().all(|(k, _)| k.iter().all(Zero::is_zero)) {
                    let c = p.mean().re + shift.re;
                    visit(c, "constant".into());
                    if let Some(c) = self.exact_constant() {
                        r.exact_min = Some(c.re.clone());
                        r.exact_max = Some(c.re);
                    }
                } else {
                    for i in 0..TORUS_SAMPLES {
                        let w = rat(2 * i as i64 + 1, 2 * TORUS_SAMPLES as i64);
                        visit(p.evaluate(std::slice::from_ref(&w)).re + shift.re, format!("omega={}", format_rational(&w)));
                    }
                    r.sampled = true;
                }
            }
        }
        r.min -= slack;
        r.max += slack;
        r
    }

    /// `(omega, value)` samples for plotting the real part.
    pub fn samples(&self) -> Vec<(String, f64)> {
        let (shift, _, _) = self.tail_shift();
        match &self.function {
            SpectralFunction::Pointwise(v) => v.iter().enumerate().map(|(w, z)| (w.to_string(), z.re + shift.re)).collect(),
            SpectralFunction::Cells(cells) => {
                let mut out = Vec::new();
                let mut sorted: Vec<&(RatBox, Complex64)> = cells.iter().collect();
                sorted.sort_by(|a, b| a.0.lo.cmp(&b.0.lo));
                for (b, z) in sorted {
                    let name = |p: &[Rational]| p.iter().map(format_rational).collect::<Vec<_>>().join(" ");
                    out.push((name(&b.lo), z.re + shift.re));
                    out.push((name(&b.hi), z.re + shift.re));
                }
                out
            }
            SpectralFunction::Trig(p) => (0..512)
                .map(|i| {
                    let w = rat(i, 512);
                    (format_rational(&w), p.evaluate(std::slice::from_ref(&w)).re + shift.re)
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        let function = match &self.function {
            SpectralFunction::Pointwise(v) => {
                json!({"kind": "pointwise", "values": v.iter().map(|z| format_complex(*z)).collect::<Vec<_>>()})
            }
            SpectralFunction::Trig(p) => json!({"kind": "trig", "polynomial": p.to_json()}),
            SpectralFunction::Cells(c) => json!({
                "kind": "cells",
                "cells": c.iter().map(|(b, z)| json!({"box": b.to_json(), "value": format_complex(*z)})).collect::<Vec<_>>(),
            }),
        };
        json!({
            "alpha": self.alpha.iter().map(format_rational).collect::<Vec<_>>(),
            "layers": self.layers,
            "function": function,
            "tail": self.tail.as_ref().map(TailValue::to_json),
            "tail_diverges": self.tail_diverges,
        })
    }
}

fn sequence_parts(g: &Generator) -> Option<(i64, &[Complex64])> {
    match g {
        Generator::Sequence { start, values } => Some((*start, values)),
        _ => None,
    }
}

/// Shared implementation of `t_α` (`synthesis = true`) and the Calderón sum.
fn cross_sum(system: &GsiSystem, alpha: &[Rational], synthesis: bool, region: Option<&RatBox>) -> Result<SpectralSum> {
    let alpha = canonical_frequency(&system.model, alpha)?;
    let mut layers = Vec::new();
    for (j, l) in system.layers.iter().enumerate() {
        if dual_contains(&l.lattice, &alpha)? {
            layers.push(j);
        }
    }
    let zero = is_zero_frequency(&alpha);
    let (tail, tail_diverges) = match &system.tail {
        None => (None, false),
        Some(t) => {
            let v = if zero { t.calderon() } else { t.t_alpha(&alpha[0]) };
            let contains = zero || t.contains_frequency(&alpha[0]);
            match v {
                Some(v) if contains => (Some(v), false),
                Some(_) => (None, false),
                None => (None, true),
            }
        }
    };
    let tail_contains = system.tail.as_ref().is_some_and(|t| zero || t.contains_frequency(&alpha[0]));
    if layers.is_empty() && !tail_contains && !zero {
        return Err(GsiError::FrequencyNotInAnyDualLattice(format_frequency(&alpha)));
    }
    let h_of = |j: usize| if synthesis { system.layers[j].synthesis() } else { &system.layers[j].analysis };
    let mut exact_terms = None;
    let function = match &system.model {
        GroupModel::Finite { .. } => {
            let m = system.model.cyclic_modulus()? as usize;
            let a = alpha[0].to_integer().to_usize().unwrap_or(0);
            let mut v = vec![Complex64::zero(); m];
            for &j in &layers {
                let l = &system.layers[j];
                let (Generator::Dense(g), Generator::Dense(h)) = (&l.analysis, h_of(j)) else {
                    return Err(GsiError::VariantMismatch("finite systems need dense generators".into()));
                };
                let (gs, hs) = (dft::forward(g), dft::forward(h));
                let c = to_f64(&l.lattice.covolume());
                for (w, out) in v.iter_mut().enumerate() {
                    *out += gs[w].conj() * hs[(w + a) % m] / c;
                }
            }
            SpectralFunction::Pointwise(v)
        }
        GroupModel::Integer if system.layers.iter().all(|l| matches!(l.analysis, Generator::Sequence { .. })) => {
            let mut p = TrigPolynomial::zero(1, false);
            let mut exact: BTreeMap<i64, ExactComplex> = BTreeMap::new();
            for &j in &layers {
                let l = &system.layers[j];
                let (Some((gs, gv)), Some((hs, hv))) = (sequence_parts(&l.analysis), sequence_parts(h_of(j))) else {
                    unreachable!("validated variants");
                };
                let c = l.lattice.covolume();
                let cf = to_f64(&c);
                for (n, g) in gv.iter().enumerate() {
                    for (m, h) in hv.iter().enumerate() {
                        let (n, m) = (gs + n as i64, hs + m as i64);
                        if *g == Complex64::zero() || *h == Complex64::zero() {
                            continue;
                        }
                        let coeff = g.conj() * h * unit_phase(&(-(int(m) * &alpha[0]))) / cf;
                        p.add_term(vec![int(n - m)], coeff);
                        if zero {
                            let prod = exact_from_c64(g.conj())? * exact_from_c64(*h)?;
                            let e = exact.entry(n - m).or_insert_with(crate::exact::exact_zero);
                            *e = e.clone() + Complex::new(prod.re / &c, prod.im / &c);
                        }
                    }
                }
            }
            if zero {
                exact_terms = Some(exact);
            }
            SpectralFunction::Trig(p)
        }
        _ => SpectralFunction::Cells(box_cells(system, &alpha, &layers, synthesis, region)?),
    };
    let region = match (&function, &system.model) {
        (SpectralFunction::Cells(_), GroupModel::Integer) => Some(RatBox::unit(1)),
        (SpectralFunction::Cells(_), _) => region.cloned().or_else(|| default_region(system, &layers)),
        _ => None,
    };
    Ok(SpectralSum { alpha, layers, function, tail, tail_diverges, exact_terms, region })
}

/// Bounding box of all generator supports.
fn default_region(system: &GsiSystem, layers: &[usize]) -> Option<RatBox> {
    let mut acc: Option<RatBox> = None;
    for &j in layers {
        for g in [&system.layers[j].analysis, system.layers[j].synthesis()] {
            if let Generator::Boxes(b) = g {
                if let Some(bb) = b.bounding_box() {
                    acc = Some(match acc {
                        None => bb,
                        Some(a) => RatBox {
                            lo: a.lo.iter().zip(&bb.lo).map(|(x, y)| x.min(y).clone()).collect(),
                            hi: a.hi.iter().zip(&bb.hi).map(|(x, y)| x.max(y).clone()).collect(),
                        },
                    });
                }
            }
        }
    }
    acc
}

fn box_cells(
    system: &GsiSystem,
    alpha: &[Rational],
    layers: &[usize],
    synthesis: bool,
    region: Option<&RatBox>,
) -> Result<Vec<(RatBox, Complex64)>> {
    let torus = matches!(system.model, GroupModel::Integer);
    let dim = system.model.dimension();
    let region = if torus {
        RatBox::unit(1)
    } else {
        match region.cloned().or_else(|| default_region(system, layers)) {
            Some(r) => r,
            None => return Ok(Vec::new()),
        }
    };
    // per layer: conj(env g) pieces, env h(·+α) pieces, constant phase and weight
    let mut parts = Vec::new();
    for &j in layers {
        let l = &system.layers[j];
        let h = if synthesis { l.synthesis() } else { &l.analysis };
        let (Generator::Boxes(gb), Generator::Boxes(hb)) = (&l.analysis, h) else {
            return Err(GsiError::VariantMismatch("box evaluation needs box generators".into()));
        };
        if gb.shift != hb.shift {
            return Err(GsiError::NonEvaluable(format!(
                "layer {j}: analysis and synthesis shifts differ, so t_alpha is not piecewise constant"
            )));
        }
        let phase: Rational = hb.shift.iter().zip(alpha).map(|(s, a)| s * a).sum();
        let weight = unit_phase(&-phase) / to_f64(&l.lattice.covolume());
        let shifted = shift_pieces(&hb.pieces, alpha, torus);
        parts.push((gb.pieces.clone(), shifted, weight));
    }
    // cell grid from all breakpoints inside the region
    let mut cuts: Vec<Vec<Rational>> = (0..dim).map(|i| vec![region.lo[i].clone(), region.hi[i].clone()]).collect();
    for (g, h, _) in &parts {
        for (b, _) in g.iter().chain(h.iter()) {
            for i in 0..dim {
                for x in [&b.lo[i], &b.hi[i]] {
                    if *x > region.lo[i] && *x < region.hi[i] {
                        cuts[i].push(x.clone());
                    }
                }
            }
        }
    }
    for c in &mut cuts {
        c.sort();
        c.dedup();
    }
    let count: usize = cuts.iter().map(|c| c.len() - 1).product();
    if count > MAX_CELLS {
        return Err(GsiError::ModelTooLarge(format!("{count} cells")));
    }
    let mut cells = Vec::with_capacity(count);
    let mut idx = vec![0usize; dim];
    'outer: loop {
        let lo: Vec<Rational> = (0..dim).map(|i| cuts[i][idx[i]].clone()).collect();
        let hi: Vec<Rational> = (0..dim).map(|i| cuts[i][idx[i] + 1].clone()).collect();
        let cell = RatBox { lo, hi };
        let c = cell.center();
        let mut v = Complex64::zero();
        for (g, h, w) in &parts {
            let gv = g.iter().find(|(b, _)| b.contains(&c)).map(|(_, z)| z.conj());
            let hv = h.iter().find(|(b, _)| b.contains(&c)).map(|(_, z)| *z);
            if let (Some(a), Some(b)) = (gv, hv) {
                v += a * b * w;
            }
        }
        cells.push((cell, v));
        for i in (0..dim).rev() {
            idx[i] += 1;
            if idx[i] + 1 < cuts[i].len() {
                continue 'outer;
            }
            idx[i] = 0;
        }
        break;
    }
    Ok(cells)
}

/// `t_α` for the system's synthesis generators.
pub fn t_alpha(system: &GsiSystem, alpha: &[Rational], region: Option<&RatBox>) -> Result<SpectralSum> {
    cross_sum(system, alpha, true, region)
}

/// `Σ_j (1/covol Γ_j) |ĝ_j|²` of the analysis generators.
pub fn calderon(system: &GsiSystem, region: Option<&RatBox>) -> Result<SpectralSum> {
    let zero = vec![Rational::zero(); system.model.dimension()];
    cross_sum(system, &zero, false, region)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::system::{Layer, Tail};
    use crate::group::BoxSpectrum;
    use crate::lattice::Lattice;

    #[test]
    fn calderon_of_delta_on_z8() {
        let s = GsiSystem::new(
            GroupModel::cyclic(8),
            vec![Layer::new(Lattice::cyclic(8, 2).unwrap(), Generator::dense_delta(8, 0))],
            "delta",
        )
        .unwrap();
        let c = calderon(&s, None).unwrap();
        let r = c.real_range();
        assert!((r.min - 0.5).abs() < 1e-15 && (r.max - 0.5).abs() < 1e-15);
    }

    #[test]
    fn greedy_prefix_plus_tail_is_one() {
        let layers: Vec<Layer> = (1..=3u32)
            .map(|j| {
                let tau = crate::analysis::system::greedy_shift_two(j).to_integer().to_i64().unwrap();
                Layer::new(Lattice::integer_multiples(1 << j).unwrap(), Generator::delta(tau))
            })
            .collect();
        let s = GsiSystem::new(GroupModel::Integer, layers, "br").unwrap().with_tail(Tail::greedy_delta(2, 4)).unwrap();
        let c = calderon(&s, None).unwrap();
        let d = c.deviation_from(Complex64::new(1.0, 0.0));
        assert!(d.exact_zero, "{d:?}");
        let t = t_alpha(&s, &[rat(1, 4)], None).unwrap();
        assert!(t.deviation_from(Complex64::zero()).max < 1e-14);
    }

    #[test]
    fn box_cells_on_torus() {
        let half = |lo, hi| {
            Generator::Boxes(
                BoxSpectrum::new(1, vec![(RatBox::interval(lo, hi), Complex64::new(2f64.sqrt(), 0.0))]).unwrap(),
            )
        };
        let s = GsiSystem::new(
            GroupModel::Integer,
            vec![
                Layer::new(Lattice::integer_multiples(2).unwrap(), half(int(0), rat(1, 2))),
                Layer::new(Lattice::integer_multiples(2).unwrap(), half(rat(1, 2), int(1))),
            ],
            "halves",
        )
        .unwrap();
        let c = calderon(&s, None).unwrap();
        let d = c.deviation_from(Complex64::new(1.0, 0.0));
        assert!(d.max < 1e-15, "{d:?}");
        let t = t_alpha(&s, &[rat(1, 2)], None).unwrap();
        assert!(t.deviation_from(Complex64::zero()).max < 1e-15);
        assert!(matches!(t_alpha(&s, &[rat(1, 3)], None), Err(GsiError::FrequencyNotInAnyDualLattice(_))));
    }
}
