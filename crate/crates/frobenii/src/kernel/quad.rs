//! Scalars `a + b√m` in a single quadratic field.

use super::rational::{fmt_rational, int, parse_rational, to_f64, Rational};
use crate::error::{Error, Result};
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

/// `a + b√m`. Pure rationals are stored with `b = 0` and `m = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadScalar {
    a: Rational,
    b: Rational,
    m: i64,
}

pub fn is_square_free(m: i64) -> bool {
    if m == 0 {
        return false;
    }
    let mut n = m.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        if n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

impl QuadScalar {
    pub fn new(a: Rational, b: Rational, m: i64) -> Result<Self> {
        if !is_square_free(m) {
            return Err(Error::NotSquareFree(m));
        }
        Ok(Self::normalized(a, b, m))
    }

    fn normalized(a: Rational, b: Rational, m: i64) -> Self {
        if b.is_zero() {
            QuadScalar { a, b, m: 1 }
        } else if m == 1 {
            QuadScalar { a: a + b, b: Rational::zero(), m: 1 }
        } else {
            QuadScalar { a, b, m }
        }
    }

    pub fn rational(a: Rational) -> Self {
        QuadScalar { a, b: Rational::zero(), m: 1 }
    }

    pub fn int(n: i64) -> Self {
        Self::rational(int(n))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    /// `√m` for square-free `m`.
    pub fn sqrt(m: i64) -> Result<Self> {
        Self::new(Rational::zero(), Rational::one(), m)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// Discriminant of the field this value lives in (1 for rationals).
    pub fn field(&self) -> i64 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.b.is_zero() && self.a.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    fn join(&self, o: &Self) -> Result<i64> {
        match (self.m, o.m) {
            (1, m) | (m, 1) => Ok(m),
            (m, n) if m == n => Ok(m),
            (m, n) => Err(Error::FieldMismatch(m, n)),
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        let m = self.join(o)?;
        Ok(Self::normalized(&self.a + &o.a, &self.b + &o.b, m))
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        let m = self.join(o)?;
        Ok(Self::normalized(&self.a - &o.a, &self.b - &o.b, m))
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        let m = self.join(o)?;
        let a = &self.a * &o.a + &self.b * &o.b * int(m);
        let b = &self.a * &o.b + &self.b * &o.a;
        Ok(Self::normalized(a, b, m))
    }

    pub fn try_div(&self, o: &Self) -> Result<Self> {
        self.try_mul(&o.inverse()?)
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let norm = &self.a * &self.a - &self.b * &self.b * int(self.m);
        Ok(Self::normalized(&self.a / &norm, -&self.b / &norm, self.m))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::normalized(&self.a * r, &self.b * r, self.m)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `(a, b) ⪰ (0, 0)` lexicographically: the sign convention used for
    /// canonical forms. Exactly one of `x`, `-x` satisfies this for `x ≠ 0`.
    pub fn is_lex_nonneg(&self) -> bool {
        if !self.a.is_zero() {
            self.a.is_positive()
        } else {
            !self.b.is_negative()
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let a = to_f64(&self.a);
        if self.b.is_zero() {
            return Complex64::new(a, 0.0);
        }
        let b = to_f64(&self.b);
        if self.m > 0 {
            Complex64::new(a + b * (self.m as f64).sqrt(), 0.0)
        } else {
            Complex64::new(a, b * ((-self.m) as f64).sqrt())
        }
    }

    /// Real value; for imaginary fields this is the real part.
    pub fn to_f64(&self) -> f64 {
        self.to_complex().re
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&QuadScalar> for &QuadScalar {
            type Output = QuadScalar;
            /// Panics on mixed quadratic fields; use the `try_` form to recover.
            fn $method(self, o: &QuadScalar) -> QuadScalar {
                self.$try(o).expect("quadratic field mismatch")
            }
        }
        impl $tr<QuadScalar> for QuadScalar {
            type Output = QuadScalar;
            fn $method(self, o: QuadScalar) -> QuadScalar {
                (&self).$method(&o)
            }
        }
    };
}
forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, try_div);

impl Neg for &QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        QuadScalar { a: -&self.a, b: -&self.b, m: self.m }
    }
}

impl Neg for QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        -&self
    }
}

impl From<Rational> for QuadScalar {
    fn from(r: Rational) -> Self {
        QuadScalar::rational(r)
    }
}

impl From<i64> for QuadScalar {
    fn from(n: i64) -> Self {
        QuadScalar::int(n)
    }
}

/// Text form `a`, or `a+b√m` / `a-b√m` with rational `a`, `b`.
impl fmt::Display for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", fmt_rational(&self.a));
        }
        let sign = if self.b.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}√{}", fmt_rational(&self.a), sign, fmt_rational(&self.b.abs()), self.m)
    }
}

impl FromStr for QuadScalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let Some(root) = s.find('√') else {
            return Ok(QuadScalar::rational(parse_rational(s)?));
        };
        let head = &s[..root];
        let m: i64 = s[root + '√'.len_utf8()..]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad discriminant in '{s}'")))?;
        // The b-part starts at the last sign that is not the leading one.
        let split = head
            .char_indices()
            .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i)
            .last();
        let (a, b) = match split {
            Some(i) => (parse_rational(&head[..i])?, {
                let bs = &head[i..];
                let body = bs[1..].trim();
                let mag = if body.is_empty() { Rational::one() } else { parse_rational(body)? };
                if bs.starts_with('-') {
                    -mag
                } else {
                    mag
                }
            }),
            None => {
                let body = head.trim_start_matches('+');
                let (neg, body) = match body.strip_prefix('-') {
                    Some(rest) => (true, rest),
                    None => (false, body),
                };
                let mag = if body.is_empty() { Rational::one() } else { parse_rational(body)? };
                (Rational::zero(), if neg { -mag } else { mag })
            }
        };
        QuadScalar::new(a, b, m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::rat;

    fn q(a: Rational, b: Rational, m: i64) -> QuadScalar {
        QuadScalar::new(a, b, m).unwrap()
    }

    #[test]
    fn arithmetic_in_q_sqrt5() {
        let phi = q(rat(1, 2), rat(1, 2), 5);
        // φ² = φ + 1
        assert_eq!(&phi * &phi, &phi + &QuadScalar::one());
        assert_eq!((&phi * &phi.inverse().unwrap()), QuadScalar::one());
        let s2 = QuadScalar::sqrt(2).unwrap();
        assert_eq!(&s2 * &s2, QuadScalar::int(2));
        assert!((phi.to_f64() - 1.618033988749895).abs() < 1e-15);
    }

    #[test]
    fn mixed_fields_rejected() {
        let s2 = QuadScalar::sqrt(2).unwrap();
        let s5 = QuadScalar::sqrt(5).unwrap();
        assert_eq!(s2.try_add(&s5), Err(Error::FieldMismatch(2, 5)));
        assert!(s2.try_mul(&QuadScalar::int(3)).is_ok());
        assert!(QuadScalar::sqrt(8).is_err());
    }

    #[test]
    fn rational_results_drop_the_field() {
        let s3 = QuadScalar::sqrt(3).unwrap();
        let p = &s3 * &s3;
        assert_eq!(p.field(), 1);
        assert_eq!(p, QuadScalar::int(3));
    }

    #[test]
    fn text_round_trip() {
        for s in ["3", "-1/2", "1/2+1/2√5", "0-1√2", "-1/2-3/2√5", "0+1√-3"] {
            let v: QuadScalar = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        let v: QuadScalar = "-√3".parse().unwrap();
        assert_eq!(v, -QuadScalar::sqrt(3).unwrap());
        let v: QuadScalar = "1+√5".parse().unwrap();
        assert_eq!(v.to_string(), "1+1√5");
    }

    #[test]
    fn lex_sign() {
        let x = q(rat(0, 1), rat(-1, 1), 2);
        assert!(!x.is_lex_nonneg());
        assert!((-x).is_lex_nonneg());
        assert!(QuadScalar::zero().is_lex_nonneg());
    }
}
