//! Frequency tilings and Shannon-type generators `ĝ_j = covol(Γ_j)^{1/2}·1_{K_j}`.

use std::collections::BTreeSet;

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::analysis::{GsiSystem, Layer};
use crate::error::{GsiError, Result};
use crate::exact::{format_rational, int, parse_rational, rat, to_f64, Rational};
use crate::group::{dft, BoxSet, BoxSpectrum, Generator, GroupModel, RatBox};
use crate::lattice::Lattice;

/// Largest number of dual lattice points tested for injectivity of one tile.
const MAX_SHIFTS: usize = 1 << 20;

/// A subset `K_j` of the dual group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TileSet {
    /// Points of ℤ̂_M.
    Points(BTreeSet<u64>),
    /// Finite union of boxes in 𝕋 (inside `[0,1)`) or ℝ̂ⁿ.
    Boxes(BoxSet),
}

impl TileSet {
    pub fn points(p: impl IntoIterator<Item = u64>) -> Self {
        TileSet::Points(p.into_iter().collect())
    }

    pub fn interval(a: Rational, b: Rational) -> Self {
        TileSet::Boxes(BoxSet::from_box(RatBox::interval(a, b)))
    }

    pub fn is_empty(&self) -> bool {
        match self {
            TileSet::Points(p) => p.is_empty(),
            TileSet::Boxes(b) => b.is_empty(),
        }
    }

    /// Haar measure in the dual group of `model`.
    pub fn measure(&self, model: &GroupModel) -> Rational {
        match self {
            TileSet::Points(p) => rat(p.len() as i64, model.order().unwrap_or(1) as i64),
            TileSet::Boxes(b) => b.measure(),
        }
    }

    fn difference(&self, other: &TileSet) -> TileSet {
        match (self, other) {
            (TileSet::Points(a), TileSet::Points(b)) => TileSet::Points(a.difference(b).copied().collect()),
            (TileSet::Boxes(a), TileSet::Boxes(b)) => TileSet::Boxes(a.subtract(b)),
            _ => self.clone(),
        }
    }

    fn union(&self, other: &TileSet) -> TileSet {
        match (self, other) {
            (TileSet::Points(a), TileSet::Points(b)) => TileSet::Points(a.union(b).copied().collect()),
            (TileSet::Boxes(a), TileSet::Boxes(b)) => {
                let mut s = a.clone();
                for x in b.boxes() {
                    s.insert(x);
                }
                TileSet::Boxes(s)
            }
            _ => self.clone(),
        }
    }

    fn meets(&self, other: &TileSet) -> bool {
        match (self, other) {
            (TileSet::Points(a), TileSet::Points(b)) => a.intersection(b).next().is_some(),
            (TileSet::Boxes(a), TileSet::Boxes(b)) => !a.intersect(b).is_empty(),
            _ => false,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            TileSet::Points(p) => json!({"points": p.iter().map(|x| x.to_string()).collect::<Vec<_>>()}),
            TileSet::Boxes(b) => json!({"boxes": b.boxes().iter().map(RatBox::to_json).collect::<Vec<_>>()}),
        }
    }

    pub fn from_json(v: &Value) -> Result<TileSet> {
        if let Some(p) = v.get("points").and_then(Value::as_array) {
            let pts = p
                .iter()
                .map(|x| {
                    let s = x.as_str().map(str::to_string).unwrap_or_else(|| x.to_string());
                    parse_rational(&s)?
                        .to_integer()
                        .to_u64()
                        .ok_or_else(|| GsiError::InvalidInput(format!("tile point {s} is not a residue")))
                })
                .collect::<Result<BTreeSet<u64>>>()?;
            return Ok(TileSet::Points(pts));
        }
        if let Some(b) = v.get("boxes").and_then(Value::as_array) {
            let boxes = b.iter().map(RatBox::from_json).collect::<Result<Vec<_>>>()?;
            return Ok(TileSet::Boxes(BoxSet::from_boxes(boxes.iter())));
        }
        Err(GsiError::InvalidInput("tile needs \"points\" or \"boxes\"".into()))
    }
}

/// Tiles `K_j`, one per layer, in layer order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyTiling {
    pub tiles: Vec<TileSet>,
}

impl FrequencyTiling {
    pub fn new(tiles: Vec<TileSet>) -> Self {
        FrequencyTiling { tiles }
    }

    pub fn to_json(&self) -> Value {
        json!({"tiles": self.tiles.iter().enumerate().map(|(j, t)| {
            let mut v = t.to_json();
            v["layer"] = json!(j);
            v
        }).collect::<Vec<_>>()})
    }

    pub fn from_json(v: &Value) -> Result<FrequencyTiling> {
        let tiles = v
            .get("tiles")
            .and_then(Value::as_array)
            .ok_or_else(|| GsiError::InvalidInput("tiling needs \"tiles\"".into()))?
            .iter()
            .map(TileSet::from_json)
            .collect::<Result<_>>()?;
        Ok(FrequencyTiling { tiles })
    }

    fn union(&self) -> Option<TileSet> {
        let mut it = self.tiles.iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, t| acc.union(t)))
    }
}

/// `K_j² = K_j ∖ ⋃_{l<j} K_l`.
pub fn disjointify_tiles(tiling: &FrequencyTiling) -> FrequencyTiling {
    let mut seen: Option<TileSet> = None;
    let mut out = Vec::with_capacity(tiling.tiles.len());
    for t in &tiling.tiles {
        let k2 = match &seen {
            Some(s) => t.difference(s),
            None => t.clone(),
        };
        seen = Some(match seen {
            Some(s) => s.union(t),
            None => t.clone(),
        });
        out.push(k2);
    }
    FrequencyTiling { tiles: out }
}

/// Dual lattice points `γ ≠ 0` for which `K ∩ (γ + K)` may have positive measure.
fn candidate_shifts(model: &GroupModel, dual: &Lattice, tile: &TileSet) -> Result<Vec<Vec<Rational>>> {
    match (model, tile) {
        (GroupModel::Finite { .. }, _) => {
            let Lattice::DualCyclic(c) = dual else { unreachable!("finite duals are cyclic") };
            Ok(c.elements().into_iter().filter(|&g| g != 0).map(|g| vec![int(g as i64)]).collect())
        }
        (GroupModel::Integer, _) => {
            let c = (Rational::one() / dual.covolume()).to_integer().to_usize().unwrap_or(usize::MAX);
            if c > MAX_SHIFTS {
                return Err(GsiError::ModelTooLarge(format!("{c} dual lattice points")));
            }
            Ok((1..c).map(|k| vec![rat(k as i64, c as i64)]).collect())
        }
        (GroupModel::Real { .. }, TileSet::Boxes(b)) => {
            let Some(bb) = BoxSpectrum::indicator(model.dimension(), b, Complex64::one()).bounding_box() else {
                return Ok(Vec::new());
            };
            let ext: Vec<Rational> = bb.lo.iter().zip(&bb.hi).map(|(a, b)| b - a).collect();
            let lo: Vec<Rational> = ext.iter().map(|e| -e.clone()).collect();
            let pts = dual.points_in_box(&lo, &ext)?;
            Ok(pts.into_iter().filter(|p| p.iter().any(|x| !x.is_zero())).collect())
        }
        _ => Err(GsiError::VariantMismatch("tile kind does not match the model".into())),
    }
}

fn shifted(model: &GroupModel, tile: &TileSet, gamma: &[Rational]) -> TileSet {
    match tile {
        TileSet::Points(p) => {
            let m = model.order().unwrap_or(1);
            let g = gamma[0].to_integer().to_u64().unwrap_or(0);
            TileSet::Points(p.iter().map(|x| (x + g) % m).collect())
        }
        TileSet::Boxes(b) => {
            let t = b.translate(gamma);
            TileSet::Boxes(if matches!(model, GroupModel::Integer) { t.wrap_torus() } else { t })
        }
    }
}

/// Checks injectivity of each tile modulo its dual lattice.
pub fn check_injective(model: &GroupModel, lattices: &[Lattice], tiling: &FrequencyTiling) -> Result<()> {
    for (j, (l, tile)) in lattices.iter().zip(&tiling.tiles).enumerate() {
        let dual = l.dual()?;
        for gamma in candidate_shifts(model, &dual, tile)? {
            if tile.meets(&shifted(model, tile, &gamma)) {
                let g: Vec<String> = gamma.iter().map(format_rational).collect();
                return Err(GsiError::TilingViolation { layer: j, witness: format!("gamma={}", g.join(",")) });
            }
        }
    }
    Ok(())
}

/// Region where coverage is verified.
#[derive(Debug, Clone, PartialEq)]
pub enum CoverageRegion {
    /// The whole dual group (finite models and the torus).
    Full,
    Window(RatBox),
}

/// Checks that the tiles cover the dual group (or the region) up to measure zero.
pub fn check_coverage(model: &GroupModel, tiling: &FrequencyTiling, region: &CoverageRegion) -> Result<()> {
    let uncovered = |witness: String| GsiError::TilingViolation { layer: tiling.tiles.len(), witness };
    let union = tiling.union();
    match model {
        GroupModel::Finite { .. } => {
            let m = model.order().unwrap_or(0);
            let covered = match &union {
                Some(TileSet::Points(p)) => p.clone(),
                _ => BTreeSet::new(),
            };
            if let Some(w) = (0..m).find(|w| !covered.contains(w)) {
                return Err(uncovered(format!("no tile contains omega={w}")));
            }
        }
        _ => {
            let target = match region {
                CoverageRegion::Window(b) => b.clone(),
                CoverageRegion::Full if matches!(model, GroupModel::Integer) => RatBox::unit(1),
                CoverageRegion::Full => {
                    return Err(GsiError::InvalidInput("coverage on ℝⁿ needs a bounded window".into()));
                }
            };
            let covered = match union {
                Some(TileSet::Boxes(b)) => b,
                _ => BoxSet::new(),
            };
            let rest = BoxSet::from_box(target).subtract(&covered);
            if let Some(b) = rest.boxes().first() {
                return Err(uncovered(format!("cell {b} is not covered")));
            }
        }
    }
    Ok(())
}

/// Output of the Shannon construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ShannonSystem {
    pub system: GsiSystem,
    /// The disjointified tiles actually used.
    pub tiling: FrequencyTiling,
    /// Tiles were pairwise disjoint with `μ(K_j) = 1/covol(Γ_j)`.
    pub onb: bool,
}

fn indicator_generator(model: &GroupModel, tile: &TileSet, scale: f64) -> Result<Generator> {
    match (model, tile) {
        (GroupModel::Finite { moduli }, TileSet::Points(p)) => {
            let m = model.order().unwrap_or(0) as usize;
            let mut spec = vec![Complex64::zero(); m];
            for &w in p {
                spec[w as usize % m] = Complex64::new(scale, 0.0);
            }
            Ok(Generator::Dense(dft::dft(&spec, moduli, dft::Direction::Inverse)))
        }
        (GroupModel::Integer | GroupModel::Real { .. }, TileSet::Boxes(b)) => Ok(Generator::Boxes(
            BoxSpectrum::indicator(model.dimension(), b, Complex64::new(scale, 0.0)),
        )),
        _ => Err(GsiError::VariantMismatch("tile kind does not match the model".into())),
    }
}

/// Parseval generators `ĝ_j = covol(Γ_j)^{1/2}·1_{K_j²}` for a tiling satisfying
/// injectivity and coverage.
pub fn shannon_generators(
    model: &GroupModel,
    lattices: &[Lattice],
    tiling: &FrequencyTiling,
    region: &CoverageRegion,
) -> Result<ShannonSystem> {
    if lattices.len() != tiling.tiles.len() {
        return Err(GsiError::InvalidInput(format!(
            "{} lattices but {} tiles",
            lattices.len(),
            tiling.tiles.len()
        )));
    }
    if let GroupModel::Finite { .. } = model {
        model.cyclic_modulus()?;
    }
    for (j, t) in tiling.tiles.iter().enumerate() {
        if let TileSet::Boxes(b) = t {
            if matches!(model, GroupModel::Integer) && b.boxes().iter().any(|x| x.intersect(&RatBox::unit(1)).as_ref() != Some(x)) {
                return Err(GsiError::TilingViolation { layer: j, witness: "tile leaves [0,1)".into() });
            }
        }
    }
    check_injective(model, lattices, tiling)?;
    check_coverage(model, tiling, region)?;
    let disjoint = tiling.tiles.iter().enumerate().all(|(i, a)| tiling.tiles[..i].iter().all(|b| !a.meets(b)));
    let measures_match = lattices
        .iter()
        .zip(&tiling.tiles)
        .all(|(l, t)| t.measure(model) == Rational::one() / l.covolume());
    let k2 = disjointify_tiles(tiling);
    let layers = lattices
        .iter()
        .zip(&k2.tiles)
        .map(|(l, t)| Ok(Layer::new(l.clone(), indicator_generator(model, t, to_f64(&l.covolume()).sqrt())?)))
        .collect::<Result<Vec<_>>>()?;
    let system = GsiSystem::new(model.clone(), layers, "shannon")?;
    Ok(ShannonSystem { system, tiling: k2, onb: disjoint && measures_match })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disjointify_points() {
        let t = FrequencyTiling::new(vec![TileSet::points([0, 1, 2, 3]), TileSet::points([3, 4, 5, 6, 7])]);
        let d = disjointify_tiles(&t);
        assert_eq!(d.tiles[1], TileSet::points([4, 5, 6, 7]));
        assert_eq!(disjointify_tiles(&d), d);
    }

    #[test]
    fn disjointify_intervals() {
        let t = FrequencyTiling::new(vec![
            TileSet::interval(int(0), rat(1, 2)),
            TileSet::interval(rat(1, 4), int(1)),
        ]);
        let d = disjointify_tiles(&t);
        assert_eq!(d.tiles[1], TileSet::interval(rat(1, 2), int(1)));
    }

    #[test]
    fn shannon_on_z8() {
        let model = GroupModel::cyclic(8);
        let l = Lattice::cyclic(8, 2).unwrap();
        let t = FrequencyTiling::new(vec![TileSet::points([0, 1, 2, 3]), TileSet::points([4, 5, 6, 7])]);
        let s = shannon_generators(&model, &[l.clone(), l.clone()], &t, &CoverageRegion::Full).unwrap();
        assert!(s.onb);
        let bad = FrequencyTiling::new(vec![TileSet::points([0, 4])]);
        assert_eq!(
            shannon_generators(&model, &[l], &bad, &CoverageRegion::Full),
            Err(GsiError::TilingViolation { layer: 0, witness: "gamma=4".into() })
        );
    }
}
