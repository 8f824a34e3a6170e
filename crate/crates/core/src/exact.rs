//! Exact scalar helpers: arbitrary-precision rationals, their string form, and
//! conversions to and from floating complex values.

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{GsiError, Result};

pub type Rational = BigRational;

/// Complex number with exact rational parts.
pub type ExactComplex = Complex<BigRational>;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

/// Parses `"p/q"`, an integer, or a finite decimal (`"0.125"`, `"-3e-2"`) into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || GsiError::InvalidInput(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Ok(BigRational::from_integer(n));
    }
    // decimal with optional exponent, converted exactly
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{whole}{frac}0").parse().map_err(|_| bad())?;
    let scale = exponent - frac.len() as i64 - 1;
    let ten = BigInt::from(10);
    let mut value = BigRational::from_integer(digits);
    if scale >= 0 {
        value *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -value } else { value })
}

/// Canonical string form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a finite float.
pub fn from_f64(x: f64) -> Result<Rational> {
    BigRational::from_float(x).ok_or_else(|| GsiError::InvalidInput(format!("non-finite value {x}")))
}

pub fn exact_from_c64(z: Complex64) -> Result<ExactComplex> {
    Ok(Complex::new(from_f64(z.re)?, from_f64(z.im)?))
}

pub fn exact_to_c64(z: &ExactComplex) -> Complex64 {
    Complex64::new(to_f64(&z.re), to_f64(&z.im))
}

pub fn exact_zero() -> ExactComplex {
    Complex::new(Rational::zero(), Rational::zero())
}

pub fn exact_conj(z: &ExactComplex) -> ExactComplex {
    Complex::new(z.re.clone(), -z.im.clone())
}

/// Fractional part in `[0, 1)`.
pub fn frac(r: &Rational) -> Rational {
    r - r.floor()
}

/// `e^{2πi r}` with `r` reduced modulo one before conversion, so that
/// multiplicativity holds to the last few ulps regardless of `|r|`.
pub fn unit_phase(r: &Rational) -> Complex64 {
    let t = frac(r);
    // exact values on the quarter lattice
    let four = &t * int(4);
    if four.is_integer() {
        return match four.to_integer().to_i64().unwrap_or(0) {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    // reduce to [-1/2, 1/2) for accuracy of the float argument
    let centered = if t >= rat(1, 2) { t - int(1) } else { t };
    let angle = TAU * to_f64(&centered);
    Complex64::new(angle.cos(), angle.sin())
}

/// `e^{2πi k / m}` for integers, exact in the index arithmetic.
pub fn root_of_unity(k: i128, m: u64) -> Complex64 {
    let m_i = m as i128;
    let r = k.rem_euclid(m_i);
    unit_phase(&BigRational::new(BigInt::from(r), BigInt::from(m_i)))
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Largest power of two `2^e` (with `e` possibly negative) not exceeding `x > 0`.
pub fn floor_power_of_two(x: &Rational) -> Rational {
    assert!(x.is_positive(), "floor_power_of_two needs a positive argument");
    let two = int(2);
    let mut p = int(1);
    if *x >= p {
        while &p * &two <= *x {
            p *= &two;
        }
    } else {
        while p > *x {
            p /= &two;
        }
    }
    p
}

/// Formats a float for reports: shortest round-trip form, with `-0` normalized.
pub fn format_f64(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x}")
    }
}

pub fn format_complex(z: Complex64) -> [String; 2] {
    [format_f64(z.re), format_f64(z.im)]
}

pub fn parse_real(s: &str) -> Result<f64> {
    if s.contains('/') {
        return parse_rational(s).map(|r| to_f64(&r));
    }
    s.trim()
        .parse::<f64>()
        .map_err(|_| GsiError::InvalidInput(format!("not a number: {s:?}")))
}

pub fn parse_complex(pair: &[String]) -> Result<Complex64> {
    match pair {
        [re, im] => Ok(Complex64::new(parse_real(re)?, parse_real(im)?)),
        [re] => Ok(Complex64::new(parse_real(re)?, 0.0)),
        _ => Err(GsiError::InvalidInput(format!("complex value needs [re, im], got {pair:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert_eq!(parse_rational("0.125").unwrap(), rat(1, 8));
        assert_eq!(parse_rational("-2.5e-1").unwrap(), rat(-1, 4));
        assert_eq!(parse_rational("1e3").unwrap(), int(1000));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(format_rational(&rat(4, 6)), "2/3");
        assert_eq!(format_rational(&rat(-8, 4)), "-2");
    }

    #[test]
    fn phase_is_exact_on_quarters() {
        assert_eq!(unit_phase(&rat(1, 2)), Complex64::new(-1.0, 0.0));
        assert_eq!(unit_phase(&rat(-3, 4)), Complex64::new(0.0, 1.0));
        assert_eq!(unit_phase(&int(17)), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn power_of_two_floor() {
        assert_eq!(floor_power_of_two(&rat(3, 10)), rat(1, 4));
        assert_eq!(floor_power_of_two(&rat(1, 4)), rat(1, 4));
        assert_eq!(floor_power_of_two(&int(5)), int(4));
    }
}
