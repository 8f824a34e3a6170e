//! Covering a box by translates of cubes with prescribed sides, and cubes that
//! fit inside the fundamental parallelotopes `C^{-T}(−1/2,1/2)ⁿ`.

use nalgebra::DMatrix;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use super::PartitionCertificate;
use crate::error::{GsiError, Result};
use crate::exact::{floor_power_of_two, format_f64, format_rational, from_f64, int, rat, to_f64, Rational};
use crate::group::{BoxSet, RatBox};
use crate::lattice::matrix::{self, RatMatrix};

/// Largest number of open dyadic cells tracked by the greedy pass.
const MAX_CELLS: usize = 1_000_000;

/// Relative margin on computed singular values.
const SIGMA_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct CubeCover {
    pub sides: Vec<Rational>,
    pub rounded: Vec<Rational>,
    /// Corner `τ_j` of the cube `τ_j + k_j[0,1)ⁿ`; `None` for sides left unused.
    pub translations: Vec<Option<Vec<Rational>>>,
    pub certificate: PartitionCertificate,
}

impl CubeCover {
    pub fn cubes(&self) -> Vec<RatBox> {
        self.translations
            .iter()
            .zip(&self.sides)
            .filter_map(|(t, k)| t.as_ref().map(|t| RatBox::cube(t, k)))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "cubes": self.translations.iter().zip(self.sides.iter().zip(&self.rounded)).enumerate().map(|(j, (t, (k, p)))| json!({
                "index": j,
                "side": format_rational(k),
                "rounded_side": format_rational(p),
                "translation": t.as_ref().map(|t| t.iter().map(format_rational).collect::<Vec<_>>()),
            })).collect::<Vec<_>>(),
            "certificate": self.certificate.to_json(),
        })
    }
}

fn subdivide(cell: &RatBox, target: &RatBox) -> Vec<RatBox> {
    let n = cell.dimension();
    let half: Vec<Rational> = cell.lo.iter().zip(&cell.hi).map(|(a, b)| (b - a) / int(2)).collect();
    let mut out = Vec::with_capacity(1 << n);
    // first coordinate fastest
    for mask in 0..(1usize << n) {
        let lo: Vec<Rational> = (0..n).map(|i| if mask >> i & 1 == 1 { &cell.lo[i] + &half[i] } else { cell.lo[i].clone() }).collect();
        let hi: Vec<Rational> = lo.iter().zip(&half).map(|(a, h)| a + h).collect();
        let child = RatBox::new(lo, hi);
        if child.intersect(target).is_some() {
            out.push(child);
        }
    }
    out
}

/// Greedy covering of `target` by cubes of sides `k_j`.
///
/// Sides are rounded down to powers of two and placed in decreasing order,
/// each at the first still-uncovered dyadic cell of its size anchored at the
/// lower corner of `target`. Cells only need to meet the target, so the cubes
/// may stick out of it.
pub fn cube_cover(sides: &[Rational], target: &RatBox) -> Result<CubeCover> {
    let n = target.dimension();
    if n == 0 || target.is_empty() {
        return Err(GsiError::InvalidInput("target box must be nonempty".into()));
    }
    if let Some(k) = sides.iter().find(|k| !k.is_positive()) {
        return Err(GsiError::InvalidInput(format!("side {} is not positive", format_rational(k))));
    }
    let rounded: Vec<Rational> = sides.iter().map(floor_power_of_two).collect();
    let mut order: Vec<usize> = (0..sides.len()).collect();
    order.sort_by(|&a, &b| rounded[b].cmp(&rounded[a]).then(a.cmp(&b)));
    let mut translations: Vec<Option<Vec<Rational>>> = vec![None; sides.len()];

    let mut cells: Vec<RatBox> = Vec::new();
    let mut cell_side: Option<Rational> = None;
    for &j in &order {
        let p = &rounded[j];
        match &cell_side {
            None => {
                // initial grid of side p over the target
                let counts: Vec<u64> = (0..n)
                    .map(|i| {
                        let c = ((&target.hi[i] - &target.lo[i]) / p).ceil().to_integer();
                        num_traits::ToPrimitive::to_u64(&c).unwrap_or(u64::MAX)
                    })
                    .collect();
                let total = counts.iter().try_fold(1u64, |acc, &c| acc.checked_mul(c)).unwrap_or(u64::MAX);
                if total > MAX_CELLS as u64 {
                    return Err(GsiError::ModelTooLarge(format!("{total} initial cells")));
                }
                let mut idx = vec![0u64; n];
                for _ in 0..total {
                    let lo: Vec<Rational> = (0..n).map(|i| &target.lo[i] + p * int(idx[i] as i64)).collect();
                    cells.push(RatBox::cube(&lo, p));
                    for (i, v) in idx.iter_mut().enumerate() {
                        *v += 1;
                        if *v < counts[i] {
                            break;
                        }
                        *v = 0;
                    }
                }
            }
            Some(s) => {
                let mut s = s.clone();
                while s > *p {
                    cells = cells.iter().flat_map(|c| subdivide(c, target)).collect();
                    if cells.len() > MAX_CELLS {
                        return Err(GsiError::ModelTooLarge(format!("more than {MAX_CELLS} open cells")));
                    }
                    s /= int(2);
                }
            }
        }
        cell_side = Some(p.clone());
        if cells.is_empty() {
            break;
        }
        let cell = cells.remove(0);
        translations[j] = Some(cell.lo);
    }
    if !cells.is_empty() {
        let vol: Rational = sides.iter().map(|k| num_traits::pow(k.clone(), n)).sum();
        return Err(GsiError::InsufficientVolume(format!(
            "{} cells of side {} left after all sides were used (Σ kⁿ = {}, target volume {})",
            cells.len(),
            format_rational(cell_side.as_ref().unwrap()),
            format_rational(&vol),
            format_rational(&target.volume())
        )));
    }
    let cover = CubeCover { sides: sides.to_vec(), rounded, translations, certificate: placeholder() };
    let certificate = certify_cover(&cover.cubes(), target);
    Ok(CubeCover { certificate, ..cover })
}

fn placeholder() -> PartitionCertificate {
    PartitionCertificate { window: String::new(), disjointness: false, coverage: false, uncovered: Vec::new() }
}

/// Exact check that the cubes cover `target`: the remainder after subtracting
/// every cube must be empty.
pub fn certify_cover(cubes: &[RatBox], target: &RatBox) -> PartitionCertificate {
    let rest = BoxSet::from_box(target.clone()).subtract(&BoxSet::from_boxes(cubes.iter()));
    let disjoint = cubes.iter().enumerate().all(|(i, a)| cubes[..i].iter().all(|b| a.intersect(b).is_none()));
    PartitionCertificate {
        window: target.to_string(),
        disjointness: disjoint,
        coverage: rest.is_empty(),
        uncovered: rest.boxes().iter().take(8).map(RatBox::to_string).collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NearIsoTile {
    pub index: usize,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub side: Rational,
    /// `side·(−1/2,1/2)ⁿ`.
    pub cube: RatBox,
}

impl NearIsoTile {
    pub fn to_json(&self) -> Value {
        json!({
            "index": self.index,
            "sigma_min": format_f64(self.sigma_min),
            "sigma_max": format_f64(self.sigma_max),
            "side": format_rational(&self.side),
            "cube": self.cube.to_json(),
        })
    }
}

/// Whether `side·[−1/2,1/2]ⁿ` lies in `C^{-T}(−1/2,1/2)ⁿ`, i.e. `Cᵀv` has all
/// coordinates of absolute value below 1/2 at every vertex `v`.
fn cube_inside(ct: &RatMatrix, side: &Rational) -> bool {
    let n = ct.len();
    let h = side / int(2);
    (0..(1usize << n)).all(|mask| {
        let v: Vec<Rational> = (0..n).map(|i| if mask >> i & 1 == 1 { h.clone() } else { -h.clone() }).collect();
        ct.iter().all(|row| row.iter().zip(&v).map(|(a, b)| a * b).sum::<Rational>().abs() < rat(1, 2))
    })
}

/// For each `C_j`, a centred cube of side `σ_min(C_j^{-T})/(4n²)` inside
/// `C_j^{-T}(−1/2,1/2)ⁿ`, provided the condition numbers stay below `bound`.
pub fn near_iso_tiles(matrices: &[RatMatrix], bound: f64) -> Result<Vec<NearIsoTile>> {
    let mut out = Vec::with_capacity(matrices.len());
    for (index, c) in matrices.iter().enumerate() {
        let n = c.len();
        if n == 0 || c.iter().any(|r| r.len() != n) {
            return Err(GsiError::InvalidInput(format!("matrix {index} is not square")));
        }
        let inv_t = matrix::inverse_transpose(c)?;
        let m = DMatrix::from_fn(n, n, |i, j| to_f64(&inv_t[i][j]));
        let sv = m.singular_values();
        let sigma_max = sv.max();
        let sigma_min = sv.min();
        let ratio = sigma_max / sigma_min;
        if ratio > bound * (1.0 + SIGMA_MARGIN) {
            return Err(GsiError::ConditionExceeded { index, ratio, bound });
        }
        let ct = matrix::transpose(c);
        let mut side = from_f64(sigma_min * (1.0 - SIGMA_MARGIN) / (4 * n * n) as f64)?;
        let mut tries = 0;
        while !cube_inside(&ct, &side) {
            tries += 1;
            if tries > 64 {
                return Err(GsiError::NonEvaluable(format!("no certified cube for matrix {index}")));
            }
            side /= int(2);
        }
        let h = &side / int(2);
        let cube = RatBox::new(vec![-h.clone(); n], vec![h; n]);
        out.push(NearIsoTile { index, sigma_min, sigma_max, side, cube });
    }
    Ok(out)
}

/// Sum of `kⁿ` over the sides.
pub fn side_volume(sides: &[Rational], n: usize) -> Rational {
    sides.iter().fold(Rational::zero(), |acc, k| acc + num_traits::pow(k.clone(), n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_quarters_tile_the_square() {
        let c = cube_cover(&vec![rat(1, 2); 4], &RatBox::unit(2)).unwrap();
        assert!(c.certificate.holds());
        assert_eq!(c.translations[3], Some(vec![rat(1, 2), rat(1, 2)]));
    }

    #[test]
    fn too_little_volume() {
        assert!(matches!(cube_cover(&[rat(1, 4)], &RatBox::interval(int(0), int(1))), Err(GsiError::InsufficientVolume(_))));
    }

    #[test]
    fn identity_gives_quarter_interval() {
        let t = near_iso_tiles(&[matrix::identity(1)], 1.0).unwrap();
        let q = &t[0].side;
        assert!(*q <= rat(1, 4) && *q > rat(249, 1000));
    }

    #[test]
    fn anisotropic_family_is_rejected() {
        let c = vec![vec![rat(1, 2), int(0)], vec![int(0), int(2)]];
        assert!(matches!(near_iso_tiles(&[c], 2.0), Err(GsiError::ConditionExceeded { index: 0, .. })));
    }
}
