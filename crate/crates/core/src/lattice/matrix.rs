//! Small dense exact linear algebra over rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{GsiError, Result};

pub type RatMatrix = Vec<Vec<BigRational>>;

pub fn to_rational(rows: &[Vec<BigInt>]) -> RatMatrix {
    rows.iter()
        .map(|r| r.iter().cloned().map(BigRational::from_integer).collect())
        .collect()
}

pub fn identity(n: usize) -> RatMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect()
}

pub fn transpose(a: &RatMatrix) -> RatMatrix {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = BigRational::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() {
                            acc += &row[k] * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Row vector times matrix.
pub fn vec_mul(v: &[BigRational], a: &RatMatrix) -> Vec<BigRational> {
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    (0..cols)
        .map(|j| {
            let mut acc = BigRational::zero();
            for (k, vk) in v.iter().enumerate() {
                if !vk.is_zero() {
                    acc += vk * &a[k][j];
                }
            }
            acc
        })
        .collect()
}

pub fn determinant(a: &RatMatrix) -> BigRational {
    let n = a.len();
    let mut m = a.clone();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let pivot = m[c][c].clone();
        det *= &pivot;
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let factor = &m[r][c] / &pivot;
            for k in c..n {
                let delta = &factor * &m[c][k];
                m[r][k] -= delta;
            }
        }
    }
    det
}

pub fn inverse(a: &RatMatrix) -> Result<RatMatrix> {
    let n = a.len();
    let mut m: RatMatrix = a.clone();
    let mut inv = identity(n);
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero()).ok_or(GsiError::SingularMatrix)?;
        m.swap(p, c);
        inv.swap(p, c);
        let pivot = m[c][c].clone();
        for k in 0..n {
            m[c][k] /= &pivot;
            inv[c][k] /= &pivot;
        }
        for r in 0..n {
            if r == c || m[r][c].is_zero() {
                continue;
            }
            let factor = m[r][c].clone();
            for k in 0..n {
                let d1 = &factor * &m[c][k];
                m[r][k] -= d1;
                let d2 = &factor * &inv[c][k];
                inv[r][k] -= d2;
            }
        }
    }
    Ok(inv)
}

/// `A^{-T}`.
pub fn inverse_transpose(a: &RatMatrix) -> Result<RatMatrix> {
    Ok(transpose(&inverse(a)?))
}

/// Least common multiple of all denominators.
pub fn common_denominator(a: &RatMatrix) -> BigInt {
    a.iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn is_integral(v: &[BigRational]) -> bool {
    v.iter().all(|x| x.is_integer())
}

/// Scales a rational matrix by its common denominator, returning the integer matrix and the scale.
pub fn clear_denominators(a: &RatMatrix) -> (Vec<Vec<BigInt>>, BigInt) {
    let d = common_denominator(a);
    let scale = BigRational::from_integer(d.clone());
    let rows = a
        .iter()
        .map(|r| r.iter().map(|x| (x * &scale).to_integer()).collect())
        .collect();
    (rows, d)
}

pub fn max_abs(a: &[BigRational]) -> BigRational {
    a.iter().map(|x| x.abs()).max().unwrap_or_else(BigRational::zero)
}
