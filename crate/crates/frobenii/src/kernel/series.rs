//! Truncated exponential series `a_0 + Σ_{k=1..K} a_k e^{kx}`.
//!
//! The constant term is carried separately because quotients such as the
//! elliptic ψ-series start at `e^{0x}`; for genus-zero data it is zero.

use super::rational::{int, Rational};
use crate::error::{Error, Result};
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GWSeries {
    constant: Rational,
    coeffs: Vec<Rational>,
}

impl GWSeries {
    pub fn zero(order: usize) -> Self {
        GWSeries { constant: Rational::zero(), coeffs: vec![Rational::zero(); order] }
    }

    /// `Σ_{k=1..K} a_k e^{kx}` from `[a_1, .., a_K]`.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        GWSeries { constant: Rational::zero(), coeffs }
    }

    pub fn with_constant(mut self, c: Rational) -> Self {
        self.constant = c;
        self
    }

    pub fn constant_series(order: usize, c: Rational) -> Self {
        Self::zero(order).with_constant(c)
    }

    /// `e^{kx}` truncated at order `order`.
    pub fn exp(order: usize, k: usize) -> Self {
        let mut s = Self::zero(order);
        s.set(k, Rational::one());
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of `e^{kx}` (`k = 0` is the constant term).
    pub fn coeff(&self, k: usize) -> &Rational {
        if k == 0 {
            &self.constant
        } else {
            &self.coeffs[k - 1]
        }
    }

    pub fn set(&mut self, k: usize, v: Rational) {
        if k == 0 {
            self.constant = v;
        } else if k <= self.coeffs.len() {
            self.coeffs[k - 1] = v;
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.order() != o.order() {
            return Err(Error::Invalid(format!(
                "series orders differ: {} vs {}",
                self.order(),
                o.order()
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(GWSeries {
            constant: &self.constant + &o.constant,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&int(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        GWSeries {
            constant: &self.constant * c,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Product truncated beyond `e^{Kx}`.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let k = self.order();
        let mut r = Self::zero(k);
        for i in 0..=k {
            let a = self.coeff(i);
            if a.is_zero() {
                continue;
            }
            for j in 0..=(k - i) {
                let b = o.coeff(j);
                if b.is_zero() {
                    continue;
                }
                let v = r.coeff(i + j) + a * b;
                r.set(i + j, v);
            }
        }
        Ok(r)
    }

    /// `d/dx`: multiplies `a_k` by `k`.
    pub fn diff(&self) -> Self {
        GWSeries {
            constant: Rational::zero(),
            coeffs: self.coeffs.iter().enumerate().map(|(i, a)| a * int(i as i64 + 1)).collect(),
        }
    }

    /// `self / den` by forward substitution on the triangular Toeplitz system.
    pub fn div_recursive(&self, den: &Self) -> Result<Self> {
        self.check(den)?;
        let b0 = den.coeff(0).clone();
        if b0.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let k = self.order();
        let mut c = Self::zero(k);
        for n in 0..=k {
            let mut acc = self.coeff(n).clone();
            for j in 0..n {
                acc -= c.coeff(j) * den.coeff(n - j);
            }
            c.set(n, acc / &b0);
        }
        Ok(c)
    }

    /// `self / den` through a Newton iteration `y ← y(2 − den·y)` for the
    /// reciprocal, doubling the number of correct coefficients per step.
    pub fn div_newton(&self, den: &Self) -> Result<Self> {
        self.check(den)?;
        let b0 = den.coeff(0).clone();
        if b0.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let k = self.order();
        let mut y = Self::constant_series(k, Rational::one() / b0);
        let two = Self::constant_series(k, int(2));
        let mut correct = 1usize;
        while correct <= k {
            y = y.mul(&two.sub(&den.mul(&y)?)?)?;
            correct *= 2;
        }
        self.mul(&y)
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.iter().all(|a| a.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::rat;

    #[test]
    fn basic_ops() {
        let s = GWSeries::from_coeffs(vec![rat(1, 1), rat(2, 1), rat(3, 1)]);
        assert_eq!(s.diff().coeffs(), &[rat(1, 1), rat(4, 1), rat(9, 1)]);
        let e = GWSeries::exp(3, 1);
        assert_eq!(e.mul(&e).unwrap(), GWSeries::exp(3, 2));
        let h = GWSeries::exp(3, 1).scale(&rat(1, 2));
        assert_eq!(h.add(&h).unwrap(), GWSeries::exp(3, 1));
        assert_eq!(GWSeries::exp(3, 2).mul(&GWSeries::exp(3, 2)).unwrap(), GWSeries::zero(3));
    }

    #[test]
    fn divisions_agree() {
        let num = GWSeries::from_coeffs((1..=12).map(|k| rat(k, k + 3)).collect()).with_constant(rat(-2, 1));
        let den = GWSeries::from_coeffs((1..=12).map(|k| rat(k * k, 7)).collect()).with_constant(rat(5, 1));
        let a = num.div_recursive(&den).unwrap();
        let b = num.div_newton(&den).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.mul(&den).unwrap(), num);
        assert!(num.div_recursive(&GWSeries::exp(12, 1)).is_err());
    }
}
