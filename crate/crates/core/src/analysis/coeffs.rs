//! d-coefficients, w-functions and local integrability coefficients.
//!
//! For time-domain generators (dense vectors on ℤ_M, sequences on ℤ) the
//! coefficient
//! `d_{j,α} = (1/covol Γ_j) ∫ f̂ conj(ĝ_j) conj(f̂(·+α)) ĥ_j(·+α)`
//! is evaluated through the correlations `P_k = Σ_m f(m+k) conj(g(m))` and
//! `Q_k = Σ_n h(n+k) conj(f(n))`, giving `d_{j,α} = (1/covol) Σ_k P_k Q_{−k} e^{2πikα}`
//! (with `α/M` in place of `α` on ℤ_M). This keeps `α = 0` exact in rational
//! arithmetic. Box spectra are integrated exactly over box intersections.

use std::collections::BTreeMap;
use std::ops::Neg;

use num_complex::{Complex, Complex64};
use num_traits::{Num, ToPrimitive, Zero};

use super::system::{format_frequency, GsiSystem};
use crate::error::{GsiError, Result};
use crate::exact::{exact_from_c64, frac, int, rat, to_f64, unit_phase, ExactComplex, Rational};
use crate::group::{BoxSpectrum, Generator, GroupModel, RatBox, TestFunction};
use crate::lattice::Lattice;
use crate::trig::TrigPolynomial;

/// Largest dual-lattice section enumerated when materializing a w-function.
pub const MAX_TERMS: usize = 1 << 16;

fn sparse(g: &Generator) -> Option<Vec<(i64, Complex64)>> {
    match g {
        Generator::Dense(v) => {
            Some(v.iter().enumerate().filter(|(_, z)| **z != Complex64::zero()).map(|(i, z)| (i as i64, *z)).collect())
        }
        Generator::Sequence { start, values } => Some(
            values
                .iter()
                .enumerate()
                .filter(|(_, z)| **z != Complex64::zero())
                .map(|(k, z)| (start + k as i64, *z))
                .collect(),
        ),
        Generator::Boxes(_) => None,
    }
}

fn sparse_exact(g: &Generator) -> Result<Option<Vec<(i64, ExactComplex)>>> {
    match sparse(g) {
        Some(v) => Ok(Some(v.into_iter().map(|(k, z)| Ok((k, exact_from_c64(z)?))).collect::<Result<_>>()?)),
        None => Ok(None),
    }
}

/// `P_k = Σ a(m+k) conj(b(m))`, keys reduced mod `modulus` when given.
fn correlate<T>(a: &[(i64, Complex<T>)], b: &[(i64, Complex<T>)], modulus: Option<i64>) -> BTreeMap<i64, Complex<T>>
where
    T: Clone + Num + Neg<Output = T>,
{
    let mut out: BTreeMap<i64, Complex<T>> = BTreeMap::new();
    for (n, va) in a {
        for (m, vb) in b {
            let mut k = n - m;
            if let Some(md) = modulus {
                k = k.rem_euclid(md);
            }
            let term = va.clone() * vb.conj();
            let e = out.entry(k).or_insert_with(|| Complex::new(T::zero(), T::zero()));
            *e = e.clone() + term;
        }
    }
    out
}

/// `R_k = P_k Q_{−k}` for the layer kernel.
fn kernel<T>(
    f: &[(i64, Complex<T>)],
    g: &[(i64, Complex<T>)],
    h: &[(i64, Complex<T>)],
    modulus: Option<i64>,
) -> BTreeMap<i64, Complex<T>>
where
    T: Clone + Num + Neg<Output = T>,
{
    let p = correlate(f, g, modulus);
    let q = correlate(h, f, modulus);
    let mut r = BTreeMap::new();
    for (k, pk) in p {
        let mk = match modulus {
            Some(md) => (-k).rem_euclid(md),
            None => -k,
        };
        if let Some(qk) = q.get(&mk) {
            r.insert(k, pk * qk.clone());
        }
    }
    r
}

/// Per-layer data for evaluating `d_{j,α}` at many frequencies.
pub(crate) struct LayerKernel {
    covolume: f64,
    terms: BTreeMap<i64, Complex64>,
    modulus: Option<i64>,
}

impl LayerKernel {
    pub(crate) fn d(&self, alpha: &Rational) -> Complex64 {
        let a = match self.modulus {
            Some(m) => alpha / int(m),
            None => alpha.clone(),
        };
        let s: Complex64 = self.terms.iter().map(|(k, r)| r * unit_phase(&(int(*k) * &a))).sum();
        s / self.covolume
    }
}

fn model_modulus(model: &GroupModel) -> Result<Option<i64>> {
    match model {
        GroupModel::Finite { .. } => Ok(Some(model.cyclic_modulus()? as i64)),
        _ => Ok(None),
    }
}

pub(crate) fn layer_kernel(system: &GsiSystem, f: &TestFunction, j: usize) -> Result<Option<LayerKernel>> {
    let layer = &system.layers[j];
    let (Some(fs), Some(gs), Some(hs)) = (sparse(&f.generator), sparse(&layer.analysis), sparse(layer.synthesis())) else {
        return Ok(None);
    };
    let modulus = model_modulus(&system.model)?;
    Ok(Some(LayerKernel {
        covolume: to_f64(&layer.lattice.covolume()),
        terms: kernel(&fs, &gs, &hs, modulus),
        modulus,
    }))
}

fn check_layer(system: &GsiSystem, j: usize) -> Result<()> {
    if j >= system.layers.len() {
        return Err(GsiError::InvalidInput(format!("layer {j} out of range (system has {})", system.layers.len())));
    }
    Ok(())
}

fn check_test_function(system: &GsiSystem, f: &TestFunction) -> Result<()> {
    f.validate(&system.model)?;
    let lv = system.layers.first().map(|l| l.analysis.variant_name());
    if let Some(v) = lv {
        if v != f.generator.variant_name() {
            return Err(GsiError::VariantMismatch(format!(
                "test function is {} but generators are {}",
                f.generator.variant_name(),
                v
            )));
        }
    }
    Ok(())
}

/// Reduces a dual frequency to its canonical representative for the model.
pub fn canonical_frequency(model: &GroupModel, alpha: &[Rational]) -> Result<Vec<Rational>> {
    if alpha.len() != model.dimension() {
        return Err(GsiError::InvalidInput(format!("frequency {} has wrong dimension", format_frequency(alpha))));
    }
    match model {
        GroupModel::Finite { moduli } => {
            let m = moduli[0] as i64;
            if !alpha[0].is_integer() {
                return Err(GsiError::InvalidInput(format!("frequency {} is not in ℤ̂_{m}", format_frequency(alpha))));
            }
            let k = alpha[0].to_integer().to_i64().unwrap_or(0).rem_euclid(m);
            Ok(vec![int(k)])
        }
        GroupModel::Integer => Ok(vec![frac(&alpha[0])]),
        GroupModel::Real { .. } => Ok(alpha.to_vec()),
    }
}

pub(crate) fn dual_contains(lattice: &Lattice, alpha: &[Rational]) -> Result<bool> {
    Ok(lattice.dual()?.contains(alpha))
}

/// `∫_B e^{2πi⟨v,ω⟩} dω`.
pub(crate) fn box_character_integral(b: &RatBox, v: &[Rational]) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for i in 0..b.dimension() {
        let len = &b.hi[i] - &b.lo[i];
        if v[i].is_zero() {
            acc *= to_f64(&len);
        } else {
            let num = unit_phase(&(&v[i] * &b.hi[i])) - unit_phase(&(&v[i] * &b.lo[i]));
            acc *= num / Complex64::new(0.0, std::f64::consts::TAU * to_f64(&v[i]));
        }
    }
    acc
}

/// Pieces of `x(ω) · y(ω)` (envelopes only), with optional conjugation of `x`.
fn product_pieces(x: &BoxSpectrum, conj_x: bool, y: &BoxSpectrum, conj_y: bool) -> Vec<(RatBox, Complex64)> {
    let mut out = Vec::new();
    for (bx, cx) in &x.pieces {
        for (by, cy) in &y.pieces {
            if let Some(b) = bx.intersect(by) {
                let a = if conj_x { cx.conj() } else { *cx };
                let c = if conj_y { cy.conj() } else { *cy };
                let v = a * c;
                if v != Complex64::zero() {
                    out.push((b, v));
                }
            }
        }
    }
    out
}

/// Pieces describing `ω ↦ p(ω + α)` for pieces of `p`.
pub(crate) fn shift_pieces(pieces: &[(RatBox, Complex64)], alpha: &[Rational], torus: bool) -> Vec<(RatBox, Complex64)> {
    let minus: Vec<Rational> = alpha.iter().map(|a| -a.clone()).collect();
    let mut out = Vec::new();
    for (b, c) in pieces {
        let moved = b.translate(&minus);
        if torus {
            for w in moved.wrap_torus() {
                out.push((w, *c));
            }
        } else {
            out.push((moved, *c));
        }
    }
    out
}

fn box_d(
    model: &GroupModel,
    covolume: &Rational,
    f: &BoxSpectrum,
    g: &BoxSpectrum,
    h: &BoxSpectrum,
    alpha: &[Rational],
) -> Complex64 {
    let torus = matches!(model, GroupModel::Integer);
    let left = product_pieces(f, false, g, true);
    let right = shift_pieces(&product_pieces(f, true, h, false), alpha, torus);
    let v: Vec<Rational> = g.shift.iter().zip(&h.shift).map(|(a, b)| a - b).collect();
    let phase_arg: Rational = f.shift.iter().zip(&h.shift).zip(alpha).map(|((sf, sh), a)| (sf - sh) * a).sum();
    let mut total = Complex64::zero();
    for (bl, cl) in &left {
        for (br, cr) in &right {
            if let Some(b) = bl.intersect(br) {
                total += cl * cr * box_character_integral(&b, &v);
            }
        }
    }
    total * unit_phase(&phase_arg) / to_f64(covolume)
}

/// `d_{j,α}` for layer `j` (0-based) and a frequency `α ∈ Γ_j⊥`.
pub fn d_coefficient(system: &GsiSystem, f: &TestFunction, j: usize, alpha: &[Rational]) -> Result<Complex64> {
    check_layer(system, j)?;
    check_test_function(system, f)?;
    let alpha = canonical_frequency(&system.model, alpha)?;
    let layer = &system.layers[j];
    if !dual_contains(&layer.lattice, &alpha)? {
        return Err(GsiError::FrequencyNotInDualLattice { layer: j, alpha: format_frequency(&alpha) });
    }
    if let Some(k) = layer_kernel(system, f, j)? {
        return Ok(k.d(&alpha[0]));
    }
    match (&f.generator, &layer.analysis, layer.synthesis()) {
        (Generator::Boxes(fb), Generator::Boxes(gb), Generator::Boxes(hb)) => {
            Ok(box_d(&system.model, &layer.lattice.covolume(), fb, gb, hb, &alpha))
        }
        _ => Err(GsiError::VariantMismatch("test function and generators use different variants".into())),
    }
}

/// `d_{j,0}` in exact rational arithmetic (time-domain generators only).
pub fn d_zero_exact(system: &GsiSystem, f: &TestFunction, j: usize) -> Result<ExactComplex> {
    check_layer(system, j)?;
    check_test_function(system, f)?;
    let layer = &system.layers[j];
    let (Some(fs), Some(gs), Some(hs)) =
        (sparse_exact(&f.generator)?, sparse_exact(&layer.analysis)?, sparse_exact(layer.synthesis())?)
    else {
        return Err(GsiError::NonEvaluable("exact coefficients need dense or sequence generators".into()));
    };
    let r = kernel(&fs, &gs, &hs, model_modulus(&system.model)?);
    let mut sum = crate::exact::exact_zero();
    for v in r.into_values() {
        sum += v;
    }
    let c = layer.lattice.covolume();
    Ok(Complex::new(sum.re / &c, sum.im / &c))
}

/// `‖f‖²` exactly, for time-domain test functions.
pub fn norm_sq_exact(f: &TestFunction) -> Result<Rational> {
    let entries = sparse_exact(&f.generator)?
        .ok_or_else(|| GsiError::NonEvaluable("exact norm needs a dense or sequence function".into()))?;
    Ok(entries.iter().map(|(_, z)| &z.re * &z.re + &z.im * &z.im).sum())
}

/// Frequencies of `Γ_j⊥` that can carry a nonzero `d_{j,α}`.
pub fn relevant_frequencies(system: &GsiSystem, f: &TestFunction, j: usize) -> Result<Vec<Vec<Rational>>> {
    check_layer(system, j)?;
    let layer = &system.layers[j];
    let dual = layer.lattice.dual()?;
    match (&system.model, &f.generator, &layer.analysis, layer.synthesis()) {
        (GroupModel::Finite { .. }, _, _, _) | (GroupModel::Integer, Generator::Sequence { .. }, _, _) => {
            dual_section(&system.model, &dual)
        }
        (GroupModel::Integer, Generator::Boxes(fb), Generator::Boxes(gb), Generator::Boxes(hb)) => {
            let left = product_pieces(fb, false, gb, true);
            let right = product_pieces(fb, true, hb, false);
            let mut out = Vec::new();
            for alpha in dual_section(&system.model, &dual)? {
                let shifted = shift_pieces(&right, &alpha, true);
                if left.iter().any(|(a, _)| shifted.iter().any(|(b, _)| a.intersect(b).is_some())) {
                    out.push(alpha);
                }
            }
            Ok(out)
        }
        (GroupModel::Real { .. }, Generator::Boxes(fb), Generator::Boxes(gb), Generator::Boxes(hb)) => {
            let left = BoxSpectrum { shift: fb.shift.clone(), pieces: product_pieces(fb, false, gb, true) };
            let right = BoxSpectrum { shift: fb.shift.clone(), pieces: product_pieces(fb, true, hb, false) };
            let (Some(l), Some(r)) = (left.bounding_box(), right.bounding_box()) else {
                return Ok(Vec::new());
            };
            // ω ∈ L and ω + α ∈ R  ⟹  α ∈ R − L
            let lo: Vec<Rational> = r.lo.iter().zip(&l.hi).map(|(a, b)| a - b).collect();
            let hi: Vec<Rational> = r.hi.iter().zip(&l.lo).map(|(a, b)| a - b).collect();
            dual.points_in_box(&lo, &hi)
        }
        _ => Err(GsiError::VariantMismatch("test function and generators use different variants".into())),
    }
}

/// All elements of a finite dual lattice section (ℤ̂_M or 𝕋).
pub(crate) fn dual_section(model: &GroupModel, dual: &Lattice) -> Result<Vec<Vec<Rational>>> {
    match (model, dual) {
        (GroupModel::Finite { .. }, Lattice::DualCyclic(c)) => {
            if c.order() as usize > MAX_TERMS {
                return Err(GsiError::ModelTooLarge(format!("{} dual frequencies", c.order())));
            }
            Ok(c.elements().into_iter().map(|k| vec![int(k as i64)]).collect())
        }
        (GroupModel::Integer, Lattice::Torus(l)) => {
            let c = (Rational::from_integer(1.into()) / l.covolume()).to_integer();
            let c = c.to_u64().unwrap_or(u64::MAX);
            if c as usize > MAX_TERMS {
                return Err(GsiError::ModelTooLarge(format!("{c} dual frequencies")));
            }
            Ok((0..c).map(|k| vec![rat(k as i64, c as i64)]).collect())
        }
        _ => Err(GsiError::UnsupportedModel(format!("finite dual section of {dual}"))),
    }
}

/// Key of the character `α` as a frequency of a function on `G`.
fn polynomial_key(model: &GroupModel, alpha: &[Rational]) -> Vec<Rational> {
    match model {
        GroupModel::Finite { moduli } => vec![&alpha[0] / int(moduli[0] as i64)],
        _ => alpha.to_vec(),
    }
}

fn empty_polynomial(model: &GroupModel) -> TrigPolynomial {
    TrigPolynomial::zero(model.dimension(), model.is_discrete())
}

/// `w_{f;g,h,j} = Σ_{α ∈ Γ_j⊥} d_{j,α} ⟨α, ·⟩` as a trigonometric polynomial on `G`.
///
/// On ℤ_M the stored frequency of the character `k` is `k/M`, so the polynomial
/// evaluates at integer points `x` directly.
pub fn w_layer(system: &GsiSystem, f: &TestFunction, j: usize) -> Result<TrigPolynomial> {
    check_test_function(system, f)?;
    let alphas = relevant_frequencies(system, f, j)?;
    let mut p = empty_polynomial(&system.model);
    let kernel = layer_kernel(system, f, j)?;
    for alpha in alphas {
        let d = match &kernel {
            Some(k) => k.d(&alpha[0]),
            None => d_coefficient(system, f, j, &alpha)?,
        };
        p.add_term(polynomial_key(&system.model, &alpha), d);
    }
    Ok(p)
}

/// Coefficientwise sum of `w_layer` over `subset` (all stored layers by default).
pub fn w_total(system: &GsiSystem, f: &TestFunction, subset: Option<&[usize]>) -> Result<TrigPolynomial> {
    let all: Vec<usize> = (0..system.layers.len()).collect();
    let subset = subset.unwrap_or(&all);
    let mut p = empty_polynomial(&system.model);
    for &j in subset {
        p.add(&w_layer(system, f, j)?);
    }
    Ok(p)
}

/// Direct evaluation of `w_{f;g,h,j}(x) = Σ_γ ⟨T_x f, T_γ g_j⟩⟨T_γ h_j, T_x f⟩` on ℤ_M.
pub fn w_layer_direct(system: &GsiSystem, f: &TestFunction, j: usize, x: i64) -> Result<Complex64> {
    let m = system.model.cyclic_modulus()? as i64;
    let layer = &system.layers[j];
    let (Generator::Dense(fv), Generator::Dense(gv), Generator::Dense(hv)) =
        (&f.generator, &layer.analysis, layer.synthesis())
    else {
        return Err(GsiError::VariantMismatch("direct w evaluation needs dense vectors".into()));
    };
    let Lattice::Cyclic(c) = &layer.lattice else {
        return Err(GsiError::VariantMismatch("direct w evaluation needs a cyclic lattice".into()));
    };
    let at = |v: &[Complex64], i: i64| v[i.rem_euclid(m) as usize];
    let mut total = Complex64::zero();
    for gamma in c.elements() {
        let gamma = gamma as i64;
        let mut a = Complex64::zero();
        let mut b = Complex64::zero();
        for y in 0..m {
            a += at(fv, y - x) * at(gv, y - gamma).conj();
            b += at(hv, y - gamma) * at(fv, y - x).conj();
        }
        total += a * b;
    }
    Ok(total)
}

/// Local integrability coefficients of one layer and frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LicCoefficients {
    /// `(1/covol) ∫ |f̂ ĝ_j f̂(·+α) ĥ_j(·+α)|`.
    pub c: f64,
    /// `(1/covol) ∫ |f̂ f̂(·+α)| |ĝ_j|²`.
    pub c_tilde: f64,
    pub d_abs: f64,
}

/// Quadrature resolution for sequence spectra on 𝕋.
const QUADRATURE_POINTS: usize = 4096;

fn sequence_spectrum_on_grid(g: &Generator, shift: f64, q: usize) -> Vec<Complex64> {
    let Generator::Sequence { start, values } = g else { unreachable!() };
    (0..q)
        .map(|i| {
            let w = (i as f64 + 0.5) / q as f64 + shift;
            values
                .iter()
                .enumerate()
                .map(|(k, v)| {
                    let t = -((start + k as i64) as f64) * w;
                    v * Complex64::from_polar(1.0, std::f64::consts::TAU * (t - t.floor()))
                })
                .sum()
        })
        .collect()
}

pub fn lic_coefficients(system: &GsiSystem, f: &TestFunction, j: usize, alpha: &[Rational]) -> Result<LicCoefficients> {
    let d_abs = d_coefficient(system, f, j, alpha)?.norm();
    let alpha = canonical_frequency(&system.model, alpha)?;
    let layer = &system.layers[j];
    let covol = to_f64(&layer.lattice.covolume());
    match (&f.generator, &layer.analysis, layer.synthesis()) {
        (Generator::Dense(fv), Generator::Dense(gv), Generator::Dense(hv)) => {
            let m = fv.len();
            let (ff, gg, hh) = (crate::group::dft::forward(fv), crate::group::dft::forward(gv), crate::group::dft::forward(hv));
            let k = alpha[0].to_integer().to_usize().unwrap_or(0);
            let (mut c, mut ct) = (0.0, 0.0);
            for w in 0..m {
                let s = (w + k) % m;
                c += (ff[w] * gg[w]).norm() * (ff[s] * hh[s]).norm();
                ct += (ff[w] * ff[s]).norm() * gg[w].norm_sqr();
            }
            Ok(LicCoefficients { c: c / (m as f64 * covol), c_tilde: ct / (m as f64 * covol), d_abs })
        }
        (Generator::Sequence { .. }, Generator::Sequence { .. }, Generator::Sequence { .. }) => {
            let q = QUADRATURE_POINTS;
            let a = to_f64(&alpha[0]);
            let (f0, fa) = (sequence_spectrum_on_grid(&f.generator, 0.0, q), sequence_spectrum_on_grid(&f.generator, a, q));
            let g0 = sequence_spectrum_on_grid(&layer.analysis, 0.0, q);
            let ha = sequence_spectrum_on_grid(layer.synthesis(), a, q);
            let (mut c, mut ct) = (0.0, 0.0);
            for i in 0..q {
                c += (f0[i] * g0[i]).norm() * (fa[i] * ha[i]).norm();
                ct += (f0[i] * fa[i]).norm() * g0[i].norm_sqr();
            }
            Ok(LicCoefficients { c: c / (q as f64 * covol), c_tilde: ct / (q as f64 * covol), d_abs })
        }
        (Generator::Boxes(fb), Generator::Boxes(gb), Generator::Boxes(hb)) => {
            let torus = matches!(system.model, GroupModel::Integer);
            let abs = |p: Vec<(RatBox, Complex64)>| p.into_iter().map(|(b, c)| (b, Complex64::new(c.norm(), 0.0))).collect::<Vec<_>>();
            let fg = abs(product_pieces(fb, false, gb, false));
            let fh = shift_pieces(&abs(product_pieces(fb, false, hb, false)), &alpha, torus);
            // |f̂|·|ĝ|² on the common support
            let fgg: Vec<(RatBox, Complex64)> = product_pieces(fb, false, gb, false)
                .into_iter()
                .map(|(b, v)| {
                    let g_abs = gb.envelope_at(&b.center()).norm();
                    (b, Complex64::new(v.norm() * g_abs, 0.0))
                })
                .collect();
            let f_shift = shift_pieces(&abs(fb.pieces.clone()), &alpha, torus);
            let integrate = |a: &[(RatBox, Complex64)], b: &[(RatBox, Complex64)]| -> f64 {
                let mut s = 0.0;
                for (ba, ca) in a {
                    for (bb, cb) in b {
                        if let Some(x) = ba.intersect(bb) {
                            s += ca.re * cb.re * to_f64(&x.volume());
                        }
                    }
                }
                s
            };
            Ok(LicCoefficients { c: integrate(&fg, &fh) / covol, c_tilde: integrate(&fgg, &f_shift) / covol, d_abs })
        }
        _ => Err(GsiError::VariantMismatch("test function and generators use different variants".into())),
    }
}

/// `(Σ_α c_{j,α}, Σ_α c̃_{j,α})` over the whole dual lattice of layer `j`.
pub fn lic_layer_totals(system: &GsiSystem, f: &TestFunction, j: usize) -> Result<(f64, f64)> {
    check_layer(system, j)?;
    let layer = &system.layers[j];
    // constant-modulus spectra (single-point sequences) give closed forms:
    // Σ_α |f̂(ω+α)| = |v|·#Γ⊥-section and the integrals collapse
    let single = |g: &Generator| match g {
        Generator::Sequence { values, .. } => {
            let nz: Vec<&Complex64> = values.iter().filter(|z| **z != Complex64::zero()).collect();
            (nz.len() == 1).then(|| nz[0].norm())
        }
        _ => None,
    };
    if let (Some(fa), Some(ga), Some(ha)) = (single(&f.generator), single(&layer.analysis), single(layer.synthesis())) {
        // (1/c)·c·|f|²|g||h| and (1/c)·c·|f|²|g|²
        return Ok((fa * fa * ga * ha, fa * fa * ga * ga));
    }
    let alphas = match (&system.model, &f.generator) {
        (GroupModel::Real { .. }, _) => relevant_frequencies(system, f, j)?,
        _ => dual_section(&system.model, &layer.lattice.dual()?)?,
    };
    if alphas.len() > 4096 && matches!(f.generator, Generator::Sequence { .. }) {
        return Err(GsiError::ModelTooLarge(format!("{} quadrature evaluations of LIC coefficients", alphas.len())));
    }
    let mut c = 0.0;
    let mut ct = 0.0;
    for alpha in alphas {
        let l = lic_coefficients(system, f, j, &alpha)?;
        c += l.c;
        ct += l.c_tilde;
    }
    Ok((c, ct))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::system::Layer;
    use crate::exact::int;

    fn delta8_system() -> GsiSystem {
        GsiSystem::new(
            GroupModel::cyclic(8),
            vec![Layer::new(Lattice::cyclic(8, 2).unwrap(), Generator::dense_delta(8, 0))],
            "delta",
        )
        .unwrap()
    }

    #[test]
    fn d_for_delta_on_z8() {
        let s = delta8_system();
        let f = TestFunction::new(Generator::dense_delta(8, 0));
        let d = d_coefficient(&s, &f, 0, &[int(0)]).unwrap();
        assert!((d - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(d_zero_exact(&s, &f, 0).unwrap().re, rat(1, 2));
        assert!(matches!(
            d_coefficient(&s, &f, 0, &[int(1)]),
            Err(GsiError::FrequencyNotInDualLattice { layer: 0, .. })
        ));
    }

    #[test]
    fn w_layer_two_terms() {
        let s = delta8_system();
        let f = TestFunction::new(Generator::dense_delta(8, 0));
        let w = w_layer(&s, &f, 0).unwrap();
        assert_eq!(w.len(), 2);
        assert!((w.evaluate(&[int(0)]) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(w.evaluate(&[int(1)]).norm() < 1e-15);
    }

    #[test]
    fn full_lattice_unit_vector() {
        let s = GsiSystem::new(
            GroupModel::cyclic(4),
            vec![Layer::new(Lattice::cyclic(4, 1).unwrap(), Generator::dense_delta(4, 0))],
            "onb",
        )
        .unwrap();
        let f = TestFunction::new(Generator::dense_delta(4, 0));
        let w = w_layer(&s, &f, 0).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w.mean(), Complex64::new(1.0, 0.0));
    }
}
