//! Row-style Hermite normal form over arbitrary-precision integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{GsiError, Result};

/// Hermite normal form of the lattice generated by the rows of `rows`
/// (any number of rows, `n` columns).
///
/// The result is `n × n`, upper triangular with positive diagonal, and every
/// entry above a pivot lies in `[0, pivot)`. Fails with `SingularMatrix` if the
/// rows do not span a rank-`n` lattice.
pub fn hnf(rows: &[Vec<BigInt>], n: usize) -> Result<Vec<Vec<BigInt>>> {
    if rows.iter().any(|r| r.len() != n) {
        return Err(GsiError::InvalidInput("ragged matrix".into()));
    }
    let mut a: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    if a.len() < n {
        return Err(GsiError::SingularMatrix);
    }
    for c in 0..n {
        loop {
            // smallest nonzero pivot candidate at or below row c
            let pivot = (c..a.len())
                .filter(|&r| !a[r][c].is_zero())
                .min_by(|&x, &y| a[x][c].abs().cmp(&a[y][c].abs()));
            let Some(p) = pivot else {
                return Err(GsiError::SingularMatrix);
            };
            a.swap(p, c);
            let mut done = true;
            for r in c + 1..a.len() {
                if a[r][c].is_zero() {
                    continue;
                }
                let q = a[r][c].div_floor(&a[c][c]);
                let (top, bottom) = a.split_at_mut(r);
                for k in c..n {
                    let delta = &q * &top[c][k];
                    bottom[0][k] -= delta;
                }
                if !a[r][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[c][c].is_negative() {
            for x in a[c].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    a.truncate(n);
    for c in 0..n {
        for i in 0..c {
            let q = a[i][c].div_floor(&a[c][c]);
            if q.is_zero() {
                continue;
            }
            let (top, bottom) = a.split_at_mut(c);
            for k in c..n {
                let delta = &q * &bottom[0][k];
                top[i][k] -= delta;
            }
        }
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn known_forms() {
        assert_eq!(hnf(&m(&[&[2, 0], &[0, 3]]), 2).unwrap(), m(&[&[2, 0], &[0, 3]]));
        assert_eq!(hnf(&m(&[&[0, 1], &[2, 0]]), 2).unwrap(), m(&[&[2, 0], &[0, 1]]));
        assert_eq!(hnf(&m(&[&[2, 2], &[2, -2]]), 2).unwrap(), m(&[&[2, 2], &[0, 4]]));
    }

    #[test]
    fn extra_generators_are_absorbed() {
        let h = hnf(&m(&[&[4], &[6]]), 1).unwrap();
        assert_eq!(h, m(&[&[2]]));
        let h = hnf(&m(&[&[2, 0], &[0, 2], &[1, 1]]), 2).unwrap();
        assert_eq!(h, m(&[&[1, 1], &[0, 2]]));
    }

    #[test]
    fn singular_is_rejected() {
        assert_eq!(hnf(&m(&[&[1, 2], &[2, 4]]), 2), Err(GsiError::SingularMatrix));
    }
}
