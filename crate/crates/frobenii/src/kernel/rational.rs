//! Arbitrary-precision rationals (backed by `num-rational`) and their text form.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

/// `n/d` as a reduced rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn big(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

/// Serializes as `"p"` or `"p/q"`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Lossy conversion used only at the numeric boundary.
pub fn to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Huge numerator or denominator: scale both by the same power of two.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = (nb.max(db) - 60).max(0) as usize;
    let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift).to_f64().unwrap_or(0.0);
    if d == 0.0 {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    } else {
        n / d
    }
}

/// Exact rational from a double (used for sample grids built from decimals).
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        for s in ["0", "7", "-3/4", "1/960"] {
            assert_eq!(fmt_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational("6/8").unwrap(), rat(3, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn huge_to_f64() {
        let r = big(&factorial(200)) / big(&factorial(199));
        assert!((to_f64(&r) - 200.0).abs() < 1e-9);
    }
}
