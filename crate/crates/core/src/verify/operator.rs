//! Dense frame operators on ℤ_M and their extreme eigenvalues.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::report::Bounds;
use crate::analysis::{w_total, GsiSystem};
use crate::error::{GsiError, Result};
use crate::group::{Generator, GroupModel, TestFunction};
use crate::lattice::Lattice;

/// Largest number of translates `T_γ g_j` assembled into a frame operator.
pub const MAX_VECTORS: u64 = 100_000;

/// Largest group order for dense assembly.
pub const MAX_ORDER: u64 = 2048;

/// Residual tolerance of an accepted eigenpair, relative to `‖v‖ = 1`.
pub const EIGEN_RESIDUAL: f64 = 1e-8;

/// Random unit vectors used to cross-check the bounds.
const PROBES: usize = 200;

/// Tolerance between the eigenvalue bounds and the probe values.
const PROBE_TOLERANCE: f64 = 1e-6;

fn dense(g: &Generator) -> Result<&[Complex64]> {
    match g {
        Generator::Dense(v) => Ok(v),
        other => Err(GsiError::VariantMismatch(format!("frame operators need dense generators, got {}", other.variant_name()))),
    }
}

fn finite_order(system: &GsiSystem) -> Result<usize> {
    let GroupModel::Finite { .. } = system.model else {
        return Err(GsiError::UnsupportedModel(format!("dense frame operators need a finite group, got {}", system.model.name())));
    };
    let m = system.model.cyclic_modulus()?;
    if m > MAX_ORDER {
        return Err(GsiError::ModelTooLarge(format!("group order {m} exceeds {MAX_ORDER}")));
    }
    let count: u64 = system
        .layers
        .iter()
        .map(|l| match &l.lattice {
            Lattice::Cyclic(c) => c.order(),
            _ => m,
        })
        .sum();
    if count > MAX_VECTORS {
        return Err(GsiError::ModelTooLarge(format!("{count} vectors exceed {MAX_VECTORS}")));
    }
    Ok(m as usize)
}

/// `S = Σ_j Σ_{γ∈Γ_j} ⟨·, T_γ g_j⟩ T_γ h_j` as an `M × M` matrix.
///
/// Layers are assembled in parallel and summed in layer order.
pub fn frame_operator(system: &GsiSystem) -> Result<DMatrix<Complex64>> {
    let m = finite_order(system)?;
    let parts: Vec<Result<Vec<Complex64>>> = system
        .layers
        .par_iter()
        .map(|layer| {
            let Lattice::Cyclic(c) = &layer.lattice else {
                return Err(GsiError::VariantMismatch("finite layers need cyclic lattices".into()));
            };
            let g = dense(&layer.analysis)?;
            let h = dense(layer.synthesis())?;
            if g.len() != m || h.len() != m {
                return Err(GsiError::InvalidInput(format!("generator length differs from the group order {m}")));
            }
            let step = c.step as usize;
            // S_j[x][y] = Σ_k h(x − k·step) conj(g(y − k·step))
            let mut s = vec![Complex64::zero(); m * m];
            for k in 0..c.order() as usize {
                let shift = k * step;
                for x in 0..m {
                    let hx = h[(x + m - shift) % m];
                    if hx == Complex64::zero() {
                        continue;
                    }
                    let row = &mut s[x * m..(x + 1) * m];
                    for (y, v) in row.iter_mut().enumerate() {
                        *v += hx * g[(y + m - shift) % m].conj();
                    }
                }
            }
            Ok(s)
        })
        .collect();
    let mut total = vec![Complex64::zero(); m * m];
    for p in parts {
        for (t, v) in total.iter_mut().zip(p?) {
            *t += v;
        }
    }
    Ok(DMatrix::from_row_slice(m, m, &total))
}

/// `max |S − I|` entrywise.
pub fn identity_deviation(s: &DMatrix<Complex64>) -> f64 {
    let n = s.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::zero() };
            worst = worst.max((s[(i, j)] - target).norm());
        }
    }
    worst
}

/// `max |S − Sᴴ|` entrywise.
pub fn hermitian_defect(s: &DMatrix<Complex64>) -> f64 {
    let n = s.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((s[(i, j)] - s[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Optimal frame bounds `(A†, B†)`: the extreme eigenvalues of the frame
/// operator of the analysis system, each with the residual `‖Sv − λv‖` as an
/// error radius (for Hermitian `S` some eigenvalue lies that close to `λ`).
pub fn optimal_bounds(system: &GsiSystem) -> Result<Bounds> {
    let analysis = system.analysis_system();
    let s = frame_operator(&analysis)?;
    let n = s.nrows();
    let defect = hermitian_defect(&s);
    let sym = (&s + s.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = sym.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let residual = |i: usize| -> f64 {
        let v = eig.eigenvectors.column(i);
        let r = &sym * v - v * Complex64::new(eig.eigenvalues[i], 0.0);
        r.norm() + defect * n as f64
    };
    let (lo, hi) = (order[0], order[n - 1]);
    let (rl, rh) = (residual(lo), residual(hi));
    if rl > EIGEN_RESIDUAL || rh > EIGEN_RESIDUAL {
        return Err(GsiError::NonEvaluable(format!("eigen residual {} exceeds {EIGEN_RESIDUAL}", rl.max(rh))));
    }
    let bounds = Bounds {
        lower: eig.eigenvalues[lo].max(0.0),
        upper: eig.eigenvalues[hi],
        lower_radius: rl,
        upper_radius: rh,
        method: "dense-eigen".into(),
    };
    cross_check(&analysis, &bounds)?;
    Ok(bounds)
}

/// `w_total(f)(0) = Σ|⟨f, T_γ g_j⟩|²` must fall between the bounds for unit `f`.
fn cross_check(system: &GsiSystem, bounds: &Bounds) -> Result<()> {
    let m = system.model.cyclic_modulus()? as usize;
    let probes = if m <= 128 { PROBES } else { PROBES / 10 };
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ m as u64);
    for _ in 0..probes {
        let mut f: Vec<Complex64> = (0..m).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let norm = f.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        f.iter_mut().for_each(|z| *z /= norm);
        let w = w_total(system, &TestFunction::new(Generator::Dense(f)), None)?;
        let v = w.evaluate_f64(&[0.0]).re;
        if v < bounds.lower - PROBE_TOLERANCE || v > bounds.upper + PROBE_TOLERANCE {
            return Err(GsiError::NonEvaluable(format!(
                "probe value {v} outside [{}, {}]",
                bounds.lower, bounds.upper
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::Layer;

    fn single(m: u64, step: u64, g: Generator) -> GsiSystem {
        GsiSystem::new(GroupModel::cyclic(m), vec![Layer::new(Lattice::cyclic(m, step).unwrap(), g)], "t").unwrap()
    }

    #[test]
    fn full_lattice_delta_is_identity() {
        let s = frame_operator(&single(4, 1, Generator::dense_delta(4, 0))).unwrap();
        assert!(identity_deviation(&s) < 1e-15);
    }

    #[test]
    fn even_projection() {
        let sys = single(8, 2, Generator::dense_delta(8, 0));
        let s = frame_operator(&sys).unwrap();
        for i in 0..8 {
            let expected = if i % 2 == 0 { 1.0 } else { 0.0 };
            assert!((s[(i, i)].re - expected).abs() < 1e-15);
        }
        let b = optimal_bounds(&sys).unwrap();
        assert!(b.lower.abs() < 1e-12 && (b.upper - 1.0).abs() < 1e-12);
    }

    #[test]
    fn doubled_basis_is_tight_with_two() {
        let g = Generator::dense_delta(4, 0);
        let l = Lattice::cyclic(4, 1).unwrap();
        let sys = GsiSystem::new(GroupModel::cyclic(4), vec![Layer::new(l.clone(), g.clone()), Layer::new(l, g)], "t").unwrap();
        let b = optimal_bounds(&sys).unwrap();
        assert!((b.lower - 2.0).abs() < 1e-12 && (b.upper - 2.0).abs() < 1e-12);
    }
}
