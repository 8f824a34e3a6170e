//! Trigonometric polynomials `Σ c_ξ e^{2πi⟨ξ,x⟩}` keyed by exact frequencies.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::exact::{format_complex, format_rational, frac, unit_phase, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    terms: BTreeMap<Vec<Rational>, Complex64>,
    /// Whether frequencies are only meaningful modulo ℤⁿ (the variable lives on
    /// an integer group, so `ξ` and `ξ + k` give the same character).
    periodic: bool,
    dimension: usize,
}

impl TrigPolynomial {
    pub fn zero(dimension: usize, periodic: bool) -> Self {
        TrigPolynomial { terms: BTreeMap::new(), periodic, dimension }
    }

    pub fn constant(dimension: usize, periodic: bool, c: Complex64) -> Self {
        let mut p = Self::zero(dimension, periodic);
        p.add_term(vec![Rational::zero(); dimension], c);
        p
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    fn key(&self, xi: Vec<Rational>) -> Vec<Rational> {
        if self.periodic {
            xi.iter().map(frac).collect()
        } else {
            xi
        }
    }

    pub fn add_term(&mut self, xi: Vec<Rational>, c: Complex64) {
        assert_eq!(xi.len(), self.dimension, "frequency dimension mismatch");
        let key = self.key(xi);
        let entry = self.terms.entry(key.clone()).or_insert(Complex64::zero());
        *entry += c;
        if *entry == Complex64::zero() {
            self.terms.remove(&key);
        }
    }

    pub fn coefficient(&self, xi: &[Rational]) -> Complex64 {
        let key = self.key(xi.to_vec());
        self.terms.get(&key).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Rational>, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Constant Fourier coefficient, which is the mean of the polynomial.
    pub fn mean(&self) -> Complex64 {
        self.coefficient(&vec![Rational::zero(); self.dimension])
    }

    pub fn evaluate(&self, x: &[Rational]) -> Complex64 {
        self.terms
            .iter()
            .map(|(xi, c)| {
                let phase: Rational = xi.iter().zip(x).map(|(a, b)| a * b).sum();
                c * unit_phase(&phase)
            })
            .sum()
    }

    pub fn evaluate_f64(&self, x: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(xi, c)| {
                let phase: f64 = xi.iter().zip(x).map(|(a, b)| crate::exact::to_f64(a) * b).sum();
                let t = phase - phase.floor();
                c * Complex64::from_polar(1.0, std::f64::consts::TAU * t)
            })
            .sum()
    }

    pub fn add(&mut self, other: &TrigPolynomial) {
        for (xi, c) in &other.terms {
            self.add_term(xi.clone(), *c);
        }
    }

    pub fn scale(&mut self, s: Complex64) {
        for c in self.terms.values_mut() {
            *c *= s;
        }
        self.terms.retain(|_, c| *c != Complex64::zero());
    }

    /// Largest coefficient modulus among nonconstant terms.
    pub fn max_nonconstant(&self) -> f64 {
        self.terms
            .iter()
            .filter(|(xi, _)| xi.iter().any(|x| !x.is_zero()))
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(xi, c)| {
                json!({
                    "frequency": xi.iter().map(format_rational).collect::<Vec<_>>(),
                    "value": format_complex(*c),
                })
            })
            .collect();
        json!({ "periodic": self.periodic, "terms": terms })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn periodic_keys_merge() {
        let mut p = TrigPolynomial::zero(1, true);
        p.add_term(vec![rat(1, 2)], Complex64::new(1.0, 0.0));
        p.add_term(vec![rat(-1, 2)], Complex64::new(1.0, 0.0));
        assert_eq!(p.len(), 1);
        assert_eq!(p.evaluate(&[int(1)]), Complex64::new(-2.0, 0.0));
    }

    #[test]
    fn mean_is_constant_term() {
        let mut p = TrigPolynomial::constant(1, true, Complex64::new(0.25, 0.0));
        p.add_term(vec![rat(1, 3)], Complex64::new(5.0, 0.0));
        assert_eq!(p.mean(), Complex64::new(0.25, 0.0));
    }
}
