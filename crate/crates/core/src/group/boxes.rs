//! Half-open rational boxes `[lo, hi)` and finite disjoint unions of them.

use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{GsiError, Result};
use crate::exact::{format_rational, frac, int, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatBox {
    pub lo: Vec<Rational>,
    pub hi: Vec<Rational>,
}

impl RatBox {
    pub fn new(lo: Vec<Rational>, hi: Vec<Rational>) -> Self {
        assert_eq!(lo.len(), hi.len(), "box corner dimensions differ");
        RatBox { lo, hi }
    }

    pub fn interval(a: Rational, b: Rational) -> Self {
        RatBox::new(vec![a], vec![b])
    }

    /// `[0,1)ⁿ`.
    pub fn unit(n: usize) -> Self {
        RatBox::new(vec![Rational::zero(); n], vec![Rational::one(); n])
    }

    /// Cube `corner + side·[0,1)ⁿ`.
    pub fn cube(corner: &[Rational], side: &Rational) -> Self {
        RatBox::new(corner.to_vec(), corner.iter().map(|c| c + side).collect())
    }

    pub fn dimension(&self) -> usize {
        self.lo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(a, b)| a >= b)
    }

    pub fn volume(&self) -> Rational {
        if self.is_empty() {
            return Rational::zero();
        }
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).product()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (a, b))| a <= v && v < b)
    }

    /// Membership in the closure.
    pub fn closure_contains(&self, x: &[Rational]) -> bool {
        x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (a, b))| a <= v && v <= b)
    }

    pub fn intersect(&self, other: &RatBox) -> Option<RatBox> {
        let lo: Vec<Rational> = self.lo.iter().zip(&other.lo).map(|(a, b)| a.max(b).clone()).collect();
        let hi: Vec<Rational> = self.hi.iter().zip(&other.hi).map(|(a, b)| a.min(b).clone()).collect();
        let b = RatBox { lo, hi };
        (!b.is_empty()).then_some(b)
    }

    pub fn translate(&self, t: &[Rational]) -> RatBox {
        RatBox {
            lo: self.lo.iter().zip(t).map(|(a, s)| a + s).collect(),
            hi: self.hi.iter().zip(t).map(|(a, s)| a + s).collect(),
        }
    }

    /// `self ∖ other` as disjoint boxes.
    pub fn difference(&self, other: &RatBox) -> Vec<RatBox> {
        let Some(cut) = self.intersect(other) else {
            return if self.is_empty() { Vec::new() } else { vec![self.clone()] };
        };
        let mut out = Vec::new();
        let mut rest = self.clone();
        for d in 0..self.dimension() {
            if rest.lo[d] < cut.lo[d] {
                let mut piece = rest.clone();
                piece.hi[d] = cut.lo[d].clone();
                out.push(piece);
                rest.lo[d] = cut.lo[d].clone();
            }
            if cut.hi[d] < rest.hi[d] {
                let mut piece = rest.clone();
                piece.lo[d] = cut.hi[d].clone();
                out.push(piece);
                rest.hi[d] = cut.hi[d].clone();
            }
        }
        out
    }

    /// Midpoint, used as a representative of a cell.
    pub fn center(&self) -> Vec<Rational> {
        self.lo.iter().zip(&self.hi).map(|(a, b)| (a + b) / int(2)).collect()
    }

    /// Pieces of the image of this box in the torus `[0,1)ⁿ`.
    pub fn wrap_torus(&self) -> Vec<RatBox> {
        if self.is_empty() {
            return Vec::new();
        }
        let mut per_dim: Vec<Vec<(Rational, Rational)>> = Vec::new();
        for (a, b) in self.lo.iter().zip(&self.hi) {
            let len = b - a;
            if len >= Rational::one() {
                per_dim.push(vec![(Rational::zero(), Rational::one())]);
                continue;
            }
            let start = frac(a);
            let end = &start + &len;
            if end <= Rational::one() {
                per_dim.push(vec![(start, end)]);
            } else {
                per_dim.push(vec![(Rational::zero(), end - Rational::one()), (start, Rational::one())]);
            }
        }
        let mut out = vec![RatBox { lo: Vec::new(), hi: Vec::new() }];
        for options in per_dim {
            let mut next = Vec::new();
            for partial in &out {
                for (a, b) in &options {
                    let mut p = partial.clone();
                    p.lo.push(a.clone());
                    p.hi.push(b.clone());
                    next.push(p);
                }
            }
            out = next;
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lo": self.lo.iter().map(format_rational).collect::<Vec<_>>(),
            "hi": self.hi.iter().map(format_rational).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<RatBox> {
        let corner = |key: &str| -> Result<Vec<Rational>> {
            v.get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| GsiError::InvalidInput(format!("box needs {key:?}")))?
                .iter()
                .map(|x| match x {
                    Value::String(s) => parse_rational(s),
                    other => parse_rational(&other.to_string()),
                })
                .collect()
        };
        let (lo, hi) = (corner("lo")?, corner("hi")?);
        if lo.len() != hi.len() {
            return Err(GsiError::InvalidInput("box corners differ in dimension".into()));
        }
        Ok(RatBox { lo, hi })
    }
}

impl fmt::Display for RatBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| format!("[{},{})", format_rational(a), format_rational(b)))
            .collect();
        write!(f, "{}", parts.join("×"))
    }
}

/// Finite union of pairwise disjoint boxes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BoxSet {
    boxes: Vec<RatBox>,
}

impl BoxSet {
    pub fn new() -> Self {
        BoxSet { boxes: Vec::new() }
    }

    pub fn from_box(b: RatBox) -> Self {
        let mut s = BoxSet::new();
        s.insert(&b);
        s
    }

    /// Union of possibly overlapping boxes.
    pub fn from_boxes<'a>(boxes: impl IntoIterator<Item = &'a RatBox>) -> Self {
        let mut s = BoxSet::new();
        for b in boxes {
            s.insert(b);
        }
        s
    }

    pub fn boxes(&self) -> &[RatBox] {
        &self.boxes
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn measure(&self) -> Rational {
        self.boxes.iter().map(RatBox::volume).sum()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.boxes.iter().any(|b| b.contains(x))
    }

    /// Adds the part of `b` not already covered.
    pub fn insert(&mut self, b: &RatBox) {
        let mut pieces = vec![b.clone()];
        for existing in &self.boxes {
            pieces = pieces.iter().flat_map(|p| p.difference(existing)).collect();
            if pieces.is_empty() {
                return;
            }
        }
        self.boxes.extend(pieces.into_iter().filter(|p| !p.is_empty()));
    }

    pub fn subtract_box(&self, b: &RatBox) -> BoxSet {
        BoxSet { boxes: self.boxes.iter().flat_map(|p| p.difference(b)).collect() }
    }

    pub fn subtract(&self, other: &BoxSet) -> BoxSet {
        let mut out = self.clone();
        for b in &other.boxes {
            out = out.subtract_box(b);
            if out.is_empty() {
                break;
            }
        }
        out
    }

    pub fn intersect(&self, other: &BoxSet) -> BoxSet {
        let mut out = BoxSet::new();
        for a in &self.boxes {
            for b in &other.boxes {
                if let Some(c) = a.intersect(b) {
                    // both inputs are disjoint unions, so the pieces are disjoint
                    out.boxes.push(c);
                }
            }
        }
        out
    }

    pub fn translate(&self, t: &[Rational]) -> BoxSet {
        BoxSet { boxes: self.boxes.iter().map(|b| b.translate(t)).collect() }
    }

    /// Image in `[0,1)ⁿ` under reduction modulo ℤⁿ (overlaps merged).
    pub fn wrap_torus(&self) -> BoxSet {
        let pieces: Vec<RatBox> = self.boxes.iter().flat_map(RatBox::wrap_torus).collect();
        BoxSet::from_boxes(pieces.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn difference_and_measure() {
        let a = RatBox::unit(2);
        let b = RatBox::new(vec![rat(1, 4), rat(1, 4)], vec![rat(3, 4), rat(3, 4)]);
        let d = a.difference(&b);
        let total: Rational = d.iter().map(RatBox::volume).sum();
        assert_eq!(total, rat(3, 4));
        assert!(d.iter().all(|p| p.intersect(&b).is_none()));
    }

    #[test]
    fn overlapping_union() {
        let s = BoxSet::from_boxes(&[RatBox::interval(int(0), rat(1, 2)), RatBox::interval(rat(1, 4), int(1))]);
        assert_eq!(s.measure(), int(1));
        assert!(BoxSet::from_box(RatBox::unit(1)).subtract(&s).is_empty());
    }

    #[test]
    fn torus_wrap() {
        let b = RatBox::interval(rat(3, 4), rat(5, 4));
        let w = b.wrap_torus();
        assert_eq!(w, vec![RatBox::interval(int(0), rat(1, 4)), RatBox::interval(rat(3, 4), int(1))]);
        let b = RatBox::interval(rat(-1, 3), rat(-1, 6));
        assert_eq!(b.wrap_torus(), vec![RatBox::interval(rat(2, 3), rat(5, 6))]);
    }
}
