//! Exact lattices in ℤⁿ, ℝⁿ, the torus 𝕋ⁿ and the cyclic groups ℤ_M.
//!
//! Integer and rational lattices are stored by a row basis in Hermite normal
//! form, so equality of lattices is equality of the stored bases. A lattice
//! `Γ = {k·B : k ∈ ℤⁿ}` has dual `Γ⊥ = {m·B^{-T}}`.

pub mod hnf;
pub mod matrix;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{GsiError, Result};
use crate::exact::{format_rational, int, parse_rational, Rational};
use matrix::RatMatrix;

/// Full-rank sublattice of ℤⁿ in Hermite normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntLattice {
    basis: Vec<Vec<BigInt>>,
}

impl IntLattice {
    /// Canonicalizes the row lattice of a nonsingular integer matrix.
    pub fn new(rows: &[Vec<BigInt>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(GsiError::InvalidInput("empty basis".into()));
        }
        Ok(IntLattice { basis: hnf::hnf(rows, n)? })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        let rows: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::new(&rows)
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn covolume(&self) -> BigInt {
        self.basis.iter().enumerate().map(|(i, r)| r[i].clone()).product()
    }

    fn rational_basis(&self) -> RatMatrix {
        matrix::to_rational(&self.basis)
    }
}

/// Full-rank lattice in ℚⁿ ⊂ ℝⁿ with a canonical basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatLattice {
    basis: RatMatrix,
}

impl RatLattice {
    pub fn new(rows: &RatMatrix) -> Result<Self> {
        Self::generated_by(rows, rows.len())
    }

    /// Lattice generated by any number of rational rows in dimension `n`.
    pub fn generated_by(rows: &RatMatrix, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(GsiError::InvalidInput("empty basis".into()));
        }
        let (ints, scale) = matrix::clear_denominators(rows);
        let h = hnf::hnf(&ints, n)?;
        let scale = BigRational::from_integer(scale);
        let basis = h
            .into_iter()
            .map(|r| r.into_iter().map(|x| BigRational::from_integer(x) / &scale).collect())
            .collect();
        Ok(RatLattice { basis })
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn covolume(&self) -> Rational {
        matrix::determinant(&self.basis).abs()
    }

    pub fn dual(&self) -> Result<RatLattice> {
        RatLattice::new(&matrix::inverse_transpose(&self.basis)?)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        match matrix::inverse(&self.basis) {
            Ok(inv) => matrix::is_integral(&matrix::vec_mul(x, &inv)),
            Err(_) => false,
        }
    }

    fn sum(&self, other: &RatLattice) -> Result<RatLattice> {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        RatLattice::generated_by(&rows, self.dimension())
    }

    fn intersect(&self, other: &RatLattice) -> Result<RatLattice> {
        // (L1 ∩ L2)⊥ = L1⊥ + L2⊥ for full-rank rational lattices
        self.dual()?.sum(&other.dual()?)?.dual()
    }
}

/// The subgroup `dℤ_M` of the cyclic group ℤ_M.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CyclicSublattice {
    pub modulus: u64,
    pub step: u64,
}

impl CyclicSublattice {
    pub fn new(modulus: u64, step: u64) -> Result<Self> {
        if modulus == 0 || step == 0 || !modulus.is_multiple_of(step) {
            return Err(GsiError::NotADivisor { modulus, divisor: step });
        }
        Ok(CyclicSublattice { modulus, step })
    }

    /// Number of elements of the subgroup.
    pub fn order(&self) -> u64 {
        self.modulus / self.step
    }

    pub fn elements(&self) -> Vec<u64> {
        (0..self.order()).map(|k| k * self.step).collect()
    }

    pub fn contains(&self, x: i128) -> bool {
        x.rem_euclid(self.modulus as i128) % self.step as i128 == 0
    }
}

/// A lattice in one of the supported ambient groups.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Lattice {
    /// Full-rank subgroup of ℤⁿ.
    Integer(IntLattice),
    /// Full-rank rational lattice in ℝⁿ (also the dual side ℝ̂ⁿ).
    Real(RatLattice),
    /// Finite subgroup `L/ℤⁿ` of 𝕋ⁿ, stored by the lattice `L ⊇ ℤⁿ`.
    Torus(RatLattice),
    /// `dℤ_M` inside ℤ_M (counting measure).
    Cyclic(CyclicSublattice),
    /// `sℤ_M` inside the dual group ℤ̂_M (point mass `1/M`).
    DualCyclic(CyclicSublattice),
}

impl Lattice {
    /// `cℤ ⊂ ℤ`.
    pub fn integer_multiples(c: i64) -> Result<Lattice> {
        Ok(Lattice::Integer(IntLattice::from_i64(&[&[c]])?))
    }

    pub fn integer(rows: &[&[i64]]) -> Result<Lattice> {
        Ok(Lattice::Integer(IntLattice::from_i64(rows)?))
    }

    pub fn real(rows: RatMatrix) -> Result<Lattice> {
        Ok(Lattice::Real(RatLattice::new(&rows)?))
    }

    /// `cℤ ⊂ ℝ` for a rational `c`.
    pub fn real_multiples(c: Rational) -> Result<Lattice> {
        Lattice::real(vec![vec![c]])
    }

    pub fn cyclic(modulus: u64, step: u64) -> Result<Lattice> {
        Ok(Lattice::Cyclic(CyclicSublattice::new(modulus, step)?))
    }

    pub fn model_name(&self) -> &'static str {
        match self {
            Lattice::Integer(_) => "integer",
            Lattice::Real(_) => "real",
            Lattice::Torus(_) => "torus",
            Lattice::Cyclic(_) => "cyclic",
            Lattice::DualCyclic(_) => "dual-cyclic",
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Lattice::Integer(l) => l.dimension(),
            Lattice::Real(l) | Lattice::Torus(l) => l.dimension(),
            Lattice::Cyclic(_) | Lattice::DualCyclic(_) => 1,
        }
    }

    /// Haar measure of a fundamental domain, with Lebesgue measure of total
    /// mass one on 𝕋ⁿ and point mass `1/M` on ℤ̂_M.
    pub fn covolume(&self) -> Rational {
        match self {
            Lattice::Integer(l) => BigRational::from_integer(l.covolume()),
            Lattice::Real(l) | Lattice::Torus(l) => l.covolume(),
            Lattice::Cyclic(c) => int(c.step as i64),
            Lattice::DualCyclic(c) => BigRational::new(BigInt::from(c.step), BigInt::from(c.modulus)),
        }
    }

    /// Row basis as rationals (for cyclic variants the single generator).
    pub fn basis_rows(&self) -> RatMatrix {
        match self {
            Lattice::Integer(l) => l.rational_basis(),
            Lattice::Real(l) | Lattice::Torus(l) => l.basis().clone(),
            Lattice::Cyclic(c) | Lattice::DualCyclic(c) => vec![vec![int(c.step as i64)]],
        }
    }

    /// The annihilator in the dual group.
    pub fn dual(&self) -> Result<Lattice> {
        match self {
            Lattice::Integer(l) => Ok(Lattice::Torus(RatLattice::new(&matrix::inverse_transpose(&l.rational_basis())?)?)),
            Lattice::Real(l) => Ok(Lattice::Real(l.dual()?)),
            Lattice::Torus(l) => {
                let d = matrix::inverse_transpose(l.basis())?;
                if !d.iter().all(|r| matrix::is_integral(r)) {
                    return Err(GsiError::InvalidInput("torus lattice does not contain ℤⁿ".into()));
                }
                let rows: Vec<Vec<BigInt>> = d.iter().map(|r| r.iter().map(|x| x.to_integer()).collect()).collect();
                Ok(Lattice::Integer(IntLattice::new(&rows)?))
            }
            Lattice::Cyclic(c) => Ok(Lattice::DualCyclic(CyclicSublattice::new(c.modulus, c.modulus / c.step)?)),
            Lattice::DualCyclic(c) => Ok(Lattice::Cyclic(CyclicSublattice::new(c.modulus, c.modulus / c.step)?)),
        }
    }

    /// Membership of a point given by coordinates (integers for cyclic variants).
    pub fn contains(&self, x: &[Rational]) -> bool {
        if x.len() != self.dimension() {
            return false;
        }
        match self {
            Lattice::Integer(l) => {
                matrix::is_integral(x) && RatLattice { basis: l.rational_basis() }.contains(x)
            }
            Lattice::Real(l) | Lattice::Torus(l) => l.contains(x),
            Lattice::Cyclic(c) | Lattice::DualCyclic(c) => {
                x[0].is_integer() && {
                    let v = x[0].to_integer().mod_floor(&BigInt::from(c.modulus));
                    (v % BigInt::from(c.step)).is_zero()
                }
            }
        }
    }

    fn check_same_ambient(&self, other: &Lattice) -> Result<()> {
        let same = match (self, other) {
            (Lattice::Cyclic(a), Lattice::Cyclic(b)) | (Lattice::DualCyclic(a), Lattice::DualCyclic(b)) => {
                a.modulus == b.modulus
            }
            _ => self.model_name() == other.model_name() && self.dimension() == other.dimension(),
        };
        if same {
            Ok(())
        } else {
            Err(GsiError::IncompatibleAmbient(format!(
                "{} (dim {}) vs {} (dim {})",
                self.model_name(),
                self.dimension(),
                other.model_name(),
                other.dimension()
            )))
        }
    }

    /// Set intersection of two lattices in the same ambient group.
    pub fn intersect(&self, other: &Lattice) -> Result<Lattice> {
        self.check_same_ambient(other)?;
        match (self, other) {
            (Lattice::Integer(a), Lattice::Integer(b)) => {
                let ra = RatLattice { basis: a.rational_basis() };
                let rb = RatLattice { basis: b.rational_basis() };
                let r = ra.intersect(&rb)?;
                let rows: Vec<Vec<BigInt>> = r.basis.iter().map(|row| row.iter().map(|x| x.to_integer()).collect()).collect();
                Ok(Lattice::Integer(IntLattice::new(&rows)?))
            }
            (Lattice::Real(a), Lattice::Real(b)) => Ok(Lattice::Real(a.intersect(b)?)),
            (Lattice::Torus(a), Lattice::Torus(b)) => Ok(Lattice::Torus(a.intersect(b)?)),
            (Lattice::Cyclic(a), Lattice::Cyclic(b)) => {
                Ok(Lattice::Cyclic(CyclicSublattice::new(a.modulus, a.step.lcm(&b.step))?))
            }
            (Lattice::DualCyclic(a), Lattice::DualCyclic(b)) => {
                Ok(Lattice::DualCyclic(CyclicSublattice::new(a.modulus, a.step.lcm(&b.step))?))
            }
            _ => unreachable!("ambient checked above"),
        }
    }

    /// `[super : self]` and one representative per coset of `self` in `sup`.
    ///
    /// Representatives are `r·B_sup` with `0 ≤ r_i < h_ii` for the Hermite form
    /// `h` of `self` in `sup` coordinates, listed with the first coordinate
    /// varying fastest.
    pub fn index_and_cosets(&self, sup: &Lattice) -> Result<(u64, Vec<Vec<Rational>>)> {
        let (index, reps) = self.index_in(sup, true)?;
        Ok((index, reps))
    }

    /// `[super : self]` without enumerating representatives.
    pub fn index_in(&self, sup: &Lattice, with_reps: bool) -> Result<(u64, Vec<Vec<Rational>>)> {
        self.check_same_ambient(sup)?;
        let not_sub = || GsiError::NotASublattice(format!("{} is not contained in {}", self, sup));
        match (self, sup) {
            (Lattice::Cyclic(a), Lattice::Cyclic(b)) | (Lattice::DualCyclic(a), Lattice::DualCyclic(b)) => {
                if a.step % b.step != 0 {
                    return Err(not_sub());
                }
                let index = a.step / b.step;
                let reps = if with_reps {
                    (0..index).map(|k| vec![int((k * b.step) as i64)]).collect()
                } else {
                    Vec::new()
                };
                Ok((index, reps))
            }
            _ => {
                let sub_b = self.basis_rows();
                let sup_b = sup.basis_rows();
                let coords = matrix::mul(&sub_b, &matrix::inverse(&sup_b)?);
                if !coords.iter().all(|r| matrix::is_integral(r)) {
                    return Err(not_sub());
                }
                let n = coords.len();
                let ints: Vec<Vec<BigInt>> = coords.iter().map(|r| r.iter().map(|x| x.to_integer()).collect()).collect();
                let h = hnf::hnf(&ints, n)?;
                let diag: Vec<BigInt> = (0..n).map(|i| h[i][i].clone()).collect();
                let index_big: BigInt = diag.iter().product();
                let index = index_big
                    .to_u64()
                    .ok_or_else(|| GsiError::ModelTooLarge(format!("index {index_big}")))?;
                if !with_reps {
                    return Ok((index, Vec::new()));
                }
                if index > 10_000_000 {
                    return Err(GsiError::ModelTooLarge(format!("{index} cosets")));
                }
                let diag: Vec<u64> = diag.iter().map(|d| d.to_u64().unwrap_or(1)).collect();
                let mut reps = Vec::with_capacity(index as usize);
                let mut r = vec![0u64; n];
                for _ in 0..index {
                    let rv: Vec<Rational> = r.iter().map(|&x| int(x as i64)).collect();
                    reps.push(matrix::vec_mul(&rv, &sup_b));
                    for i in 0..n {
                        r[i] += 1;
                        if r[i] < diag[i] {
                            break;
                        }
                        r[i] = 0;
                    }
                }
                Ok((index, reps))
            }
        }
    }

    /// Lattice points `x` with `lo ≤ x ≤ hi` coordinatewise, in lexicographic order.
    pub fn points_in_box(&self, lo: &[Rational], hi: &[Rational]) -> Result<Vec<Vec<Rational>>> {
        let n = self.dimension();
        if lo.len() != n || hi.len() != n {
            return Err(GsiError::InvalidInput("box dimension mismatch".into()));
        }
        if let Lattice::Cyclic(c) | Lattice::DualCyclic(c) = self {
            let m = BigInt::from(c.modulus);
            let start = lo[0].ceil().to_integer();
            let end = hi[0].floor().to_integer();
            let mut out = Vec::new();
            let mut k = start;
            while k <= end {
                if (k.mod_floor(&m) % BigInt::from(c.step)).is_zero() {
                    out.push(vec![BigRational::from_integer(k.clone())]);
                }
                k += 1;
            }
            return Ok(out);
        }
        let basis = self.basis_rows();
        let inv = matrix::inverse(&basis)?;
        // bounding box of the coefficient region over the box vertices
        let mut kmin: Vec<Option<Rational>> = vec![None; n];
        let mut kmax: Vec<Option<Rational>> = vec![None; n];
        for mask in 0..(1usize << n) {
            let v: Vec<Rational> = (0..n).map(|i| if mask >> i & 1 == 1 { hi[i].clone() } else { lo[i].clone() }).collect();
            let k = matrix::vec_mul(&v, &inv);
            for i in 0..n {
                if kmin[i].as_ref().is_none_or(|m| k[i] < *m) {
                    kmin[i] = Some(k[i].clone());
                }
                if kmax[i].as_ref().is_none_or(|m| k[i] > *m) {
                    kmax[i] = Some(k[i].clone());
                }
            }
        }
        let lo_k: Vec<i64> = kmin.iter().map(|x| x.as_ref().unwrap().ceil().to_integer().to_i64().unwrap_or(0)).collect();
        let hi_k: Vec<i64> = kmax.iter().map(|x| x.as_ref().unwrap().floor().to_integer().to_i64().unwrap_or(-1)).collect();
        let mut count: u128 = 1;
        for i in 0..n {
            if hi_k[i] < lo_k[i] {
                return Ok(Vec::new());
            }
            count *= (hi_k[i] - lo_k[i] + 1) as u128;
        }
        if count > 5_000_000 {
            return Err(GsiError::ModelTooLarge(format!("{count} candidate lattice points")));
        }
        let mut out = Vec::new();
        let mut k = lo_k.clone();
        loop {
            let kv: Vec<Rational> = k.iter().map(|&x| int(x)).collect();
            let x = matrix::vec_mul(&kv, &basis);
            if (0..n).all(|i| x[i] >= lo[i] && x[i] <= hi[i]) {
                out.push(x);
            }
            let mut i = n;
            loop {
                if i == 0 {
                    out.sort();
                    return Ok(out);
                }
                i -= 1;
                k[i] += 1;
                if k[i] <= hi_k[i] {
                    break;
                }
                k[i] = lo_k[i];
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let basis: Vec<Vec<String>> = self.basis_rows().iter().map(|r| r.iter().map(format_rational).collect()).collect();
        match self {
            Lattice::Cyclic(c) | Lattice::DualCyclic(c) => json!({
                "model": self.model_name(),
                "dimension": 1,
                "modulus": c.modulus.to_string(),
                "basis": basis,
            }),
            _ => json!({
                "model": self.model_name(),
                "dimension": self.dimension(),
                "basis": basis,
            }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Lattice> {
        let bad = |msg: &str| GsiError::InvalidInput(format!("lattice JSON: {msg}"));
        let model = v.get("model").and_then(Value::as_str).ok_or_else(|| bad("missing model"))?;
        let rows = v.get("basis").and_then(Value::as_array).ok_or_else(|| bad("missing basis"))?;
        let basis: RatMatrix = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| bad("basis rows must be arrays"))?
                    .iter()
                    .map(json_rational)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        if let Some(dim) = v.get("dimension").and_then(Value::as_u64) {
            if dim as usize != basis.len() {
                return Err(bad("dimension does not match basis"));
            }
        }
        match model {
            "integer" => {
                if !basis.iter().all(|r| matrix::is_integral(r)) {
                    return Err(bad("integer lattice needs integer entries"));
                }
                let ints: Vec<Vec<BigInt>> = basis.iter().map(|r| r.iter().map(|x| x.to_integer()).collect()).collect();
                Ok(Lattice::Integer(IntLattice::new(&ints)?))
            }
            "real" => Ok(Lattice::Real(RatLattice::new(&basis)?)),
            "torus" => Ok(Lattice::Torus(RatLattice::new(&basis)?)),
            "cyclic" | "dual-cyclic" => {
                let modulus = v
                    .get("modulus")
                    .map(json_rational)
                    .transpose()?
                    .and_then(|m| m.to_integer().to_u64())
                    .ok_or_else(|| bad("missing modulus"))?;
                let step = basis
                    .first()
                    .and_then(|r| r.first())
                    .filter(|x| x.is_integer() && x.is_positive())
                    .and_then(|x| x.to_integer().to_u64())
                    .ok_or_else(|| bad("cyclic basis must be [[d]] with d > 0"))?;
                let c = CyclicSublattice::new(modulus, step)?;
                Ok(if model == "cyclic" { Lattice::Cyclic(c) } else { Lattice::DualCyclic(c) })
            }
            other => Err(GsiError::UnsupportedModel(other.to_string())),
        }
    }
}

fn json_rational(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        _ => Err(GsiError::InvalidInput(format!("expected a rational, got {v}"))),
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lattice::Cyclic(c) => write!(f, "{}ℤ_{}", c.step, c.modulus),
            Lattice::DualCyclic(c) => write!(f, "{}ℤ̂_{}", c.step, c.modulus),
            _ => {
                let rows: Vec<String> = self
                    .basis_rows()
                    .iter()
                    .map(|r| format!("[{}]", r.iter().map(format_rational).collect::<Vec<_>>().join(",")))
                    .collect();
                write!(f, "{}[{}]", self.model_name(), rows.join(","))
            }
        }
    }
}

/// Whether the duals of the cyclic lattices `c_jℤ` or `c_jℤ_M` are pairwise
/// independent, i.e. the `c_j` are pairwise coprime.
pub fn duals_independent(lattices: &[Lattice]) -> Result<bool> {
    let mut cs: Vec<BigInt> = Vec::with_capacity(lattices.len());
    for l in lattices {
        match l {
            Lattice::Integer(i) if i.dimension() == 1 => cs.push(i.basis()[0][0].clone()),
            Lattice::Cyclic(c) => cs.push(BigInt::from(c.step)),
            other => {
                return Err(GsiError::UnsupportedModel(format!(
                    "independence test needs cyclic integer lattices, got {other}"
                )))
            }
        }
    }
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            if !cs[i].gcd(&cs[j]).is_one() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn covolumes() {
        assert_eq!(Lattice::integer_multiples(2).unwrap().covolume(), int(2));
        assert_eq!(Lattice::integer(&[&[1, 1], &[0, 2]]).unwrap().covolume(), int(2));
        assert_eq!(Lattice::cyclic(12, 3).unwrap().covolume(), int(3));
    }

    #[test]
    fn duals() {
        let d = Lattice::real_multiples(int(3)).unwrap().dual().unwrap();
        assert_eq!(d, Lattice::real_multiples(rat(1, 3)).unwrap());
        let d = Lattice::cyclic(8, 2).unwrap().dual().unwrap();
        assert_eq!(d, Lattice::DualCyclic(CyclicSublattice::new(8, 4).unwrap()));
        let d = Lattice::real(vec![vec![rat(1, 2), int(0)], vec![int(0), int(2)]]).unwrap().dual().unwrap();
        assert_eq!(d, Lattice::real(vec![vec![int(2), int(0)], vec![int(0), rat(1, 2)]]).unwrap());
        for l in [Lattice::integer(&[&[2, 1], &[0, 3]]).unwrap(), Lattice::cyclic(12, 4).unwrap()] {
            let d = l.dual().unwrap();
            assert_eq!(l.covolume() * d.covolume(), int(1));
            assert_eq!(d.dual().unwrap(), l);
        }
    }

    #[test]
    fn intersections() {
        let a = Lattice::integer_multiples(4).unwrap();
        let b = Lattice::integer_multiples(6).unwrap();
        assert_eq!(a.intersect(&b).unwrap(), Lattice::integer_multiples(12).unwrap());
        let a = Lattice::cyclic(12, 2).unwrap();
        let b = Lattice::cyclic(12, 3).unwrap();
        assert_eq!(a.intersect(&b).unwrap(), Lattice::cyclic(12, 6).unwrap());
        let a = Lattice::integer(&[&[2, 0], &[0, 1]]).unwrap();
        let b = Lattice::integer(&[&[1, 0], &[0, 3]]).unwrap();
        assert_eq!(a.intersect(&b).unwrap(), Lattice::integer(&[&[2, 0], &[0, 3]]).unwrap());
        let c = Lattice::real_multiples(rat(2, 3)).unwrap();
        let d = Lattice::real_multiples(rat(1, 2)).unwrap();
        assert_eq!(c.intersect(&d).unwrap(), Lattice::real_multiples(int(2)).unwrap());
        assert!(matches!(a.intersect(&c), Err(GsiError::IncompatibleAmbient(_))));
    }

    #[test]
    fn cosets() {
        let (i, reps) = Lattice::integer_multiples(6).unwrap().index_and_cosets(&Lattice::integer_multiples(2).unwrap()).unwrap();
        assert_eq!(i, 3);
        assert_eq!(reps, vec![vec![int(0)], vec![int(2)], vec![int(4)]]);
        let (i, reps) = Lattice::cyclic(8, 2).unwrap().index_and_cosets(&Lattice::cyclic(8, 1).unwrap()).unwrap();
        assert_eq!((i, reps), (2, vec![vec![int(0)], vec![int(1)]]));
        let (i, reps) = Lattice::integer(&[&[2, 0], &[0, 2]])
            .unwrap()
            .index_and_cosets(&Lattice::integer(&[&[1, 0], &[0, 1]]).unwrap())
            .unwrap();
        assert_eq!(i, 4);
        let expected: Vec<Vec<Rational>> = [[0, 0], [1, 0], [0, 1], [1, 1]].iter().map(|p| vec![int(p[0]), int(p[1])]).collect();
        assert_eq!(reps, expected);
        let err = Lattice::integer_multiples(3).unwrap().index_and_cosets(&Lattice::integer_multiples(2).unwrap());
        assert!(matches!(err, Err(GsiError::NotASublattice(_))));
    }

    #[test]
    fn independence() {
        let l = |cs: &[i64]| cs.iter().map(|&c| Lattice::integer_multiples(c).unwrap()).collect::<Vec<_>>();
        assert!(duals_independent(&l(&[2, 3, 5])).unwrap());
        assert!(!duals_independent(&l(&[2, 4])).unwrap());
        assert!(!duals_independent(&l(&[6, 10, 15])).unwrap());
        assert!(matches!(
            duals_independent(&[Lattice::real_multiples(int(2)).unwrap()]),
            Err(GsiError::UnsupportedModel(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        for l in [
            Lattice::integer(&[&[2, 1], &[0, 3]]).unwrap(),
            Lattice::real_multiples(rat(3, 7)).unwrap(),
            Lattice::cyclic(12, 4).unwrap(),
            Lattice::cyclic(12, 4).unwrap().dual().unwrap(),
            Lattice::integer_multiples(5).unwrap().dual().unwrap(),
        ] {
            assert_eq!(Lattice::from_json(&l.to_json()).unwrap(), l);
        }
    }

    #[test]
    fn box_points() {
        let l = Lattice::integer_multiples(3).unwrap().dual().unwrap();
        let pts = l.points_in_box(&[int(0)], &[rat(9, 10)]).unwrap();
        assert_eq!(pts, vec![vec![int(0)], vec![rat(1, 3)], vec![rat(2, 3)]]);
    }
}
