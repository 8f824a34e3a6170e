//! Naive discrete Fourier transform on products of cyclic groups.
//!
//! Forward: `f̂(k) = Σ_x f(x) e^{-2πi Σ x_i k_i / M_i}`.
//! Inverse: `f(x) = (1/M) Σ_k f̂(k) e^{2πi Σ x_i k_i / M_i}` with `M = ∏ M_i`.
//! Vectors are stored row-major (last coordinate fastest).

use num_complex::Complex64;
use rayon::prelude::*;

use crate::exact::root_of_unity;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// One-dimensional transform without the `1/M` factor.
fn dft_1d(values: &[Complex64], sign: i128) -> Vec<Complex64> {
    let m = values.len();
    let twiddle: Vec<Complex64> = (0..m).map(|r| root_of_unity(sign * r as i128, m as u64)).collect();
    (0..m)
        .into_par_iter()
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (x, v) in values.iter().enumerate() {
                acc += v * twiddle[(x * k) % m];
            }
            acc
        })
        .collect()
}

pub fn dft(values: &[Complex64], moduli: &[u64], direction: Direction) -> Vec<Complex64> {
    let total: usize = moduli.iter().map(|&m| m as usize).product();
    assert_eq!(values.len(), total, "vector length does not match the group order");
    let sign = match direction {
        Direction::Forward => -1,
        Direction::Inverse => 1,
    };
    let mut out = values.to_vec();
    // separable transform along each axis
    let mut stride = 1usize;
    for &m in moduli.iter().rev() {
        let m = m as usize;
        let block = stride * m;
        for start in (0..total).step_by(block) {
            for offset in 0..stride {
                let line: Vec<Complex64> = (0..m).map(|i| out[start + offset + i * stride]).collect();
                let t = dft_1d(&line, sign);
                for (i, v) in t.into_iter().enumerate() {
                    out[start + offset + i * stride] = v;
                }
            }
        }
        stride = block;
    }
    if direction == Direction::Inverse {
        let scale = 1.0 / total as f64;
        for v in &mut out {
            *v *= scale;
        }
    }
    out
}

pub fn forward(values: &[Complex64]) -> Vec<Complex64> {
    dft(values, &[values.len() as u64], Direction::Forward)
}

pub fn inverse(values: &[Complex64]) -> Vec<Complex64> {
    dft(values, &[values.len() as u64], Direction::Inverse)
}
