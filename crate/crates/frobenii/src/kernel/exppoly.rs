//! Sparse multivariate polynomials in `t^a e^{k·t}` monomials with
//! coefficients in one quadratic field.

use super::quad::QuadScalar;
use super::rational::{int, Rational};
use crate::error::{Error, Result};
use num_complex::Complex64;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exponent data of one term: `Π t_i^{powers[i]} · exp(Σ exps[i]·t_i)`.
///
/// Powers are non-negative for ordinary polynomials; negative powers only
/// appear in Laurent images produced by [`ExpPolynomial::substitute`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub powers: Vec<i32>,
    pub exps: Vec<i64>,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial { powers: vec![0; n], exps: vec![0; n] }
    }

    pub fn total_degree(&self) -> i64 {
        self.powers.iter().map(|&p| p as i64).sum()
    }

    pub fn has_exp(&self) -> bool {
        self.exps.iter().any(|&k| k != 0)
    }

    pub fn is_polynomial(&self) -> bool {
        !self.has_exp() && self.powers.iter().all(|&p| p >= 0)
    }

    fn times(&self, o: &Monomial) -> Monomial {
        Monomial {
            powers: self.powers.iter().zip(&o.powers).map(|(a, b)| a + b).collect(),
            exps: self.exps.iter().zip(&o.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.powers[var] != 0 || self.exps[var] != 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExpPolynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, QuadScalar>,
}

impl ExpPolynomial {
    pub fn zero(nvars: usize) -> Self {
        ExpPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: QuadScalar) -> Self {
        Self::monomial(nvars, c, &vec![0; nvars], &vec![0; nvars])
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, QuadScalar::one())
    }

    /// The coordinate function `t_var` (0-based index).
    pub fn var(nvars: usize, var: usize) -> Self {
        let mut p = vec![0; nvars];
        p[var] = 1;
        Self::monomial(nvars, QuadScalar::one(), &p, &vec![0; nvars])
    }

    /// `e^{k·t_var}`.
    pub fn exp_var(nvars: usize, var: usize, k: i64) -> Self {
        let mut e = vec![0; nvars];
        e[var] = k;
        Self::monomial(nvars, QuadScalar::one(), &vec![0; nvars], &e)
    }

    pub fn monomial(nvars: usize, c: QuadScalar, powers: &[i32], exps: &[i64]) -> Self {
        assert_eq!(powers.len(), nvars);
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial { powers: powers.to_vec(), exps: exps.to_vec() }, c);
        }
        p
    }

    /// Builds from `(coefficient, powers, exps)` triples, combining duplicates.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (QuadScalar, Vec<i32>, Vec<i64>)>,
    {
        let mut p = Self::zero(nvars);
        for (c, powers, exps) in terms {
            if powers.len() != nvars || exps.len() != nvars {
                return Err(Error::ArityMismatch(nvars, powers.len().max(exps.len())));
            }
            if let (Some(f), m) = (p.field(), c.field()) {
                if m != 1 && m != f {
                    return Err(Error::FieldMismatch(f, m));
                }
            }
            p.add_term(Monomial { powers, exps }, c)?;
        }
        Ok(p)
    }

    /// Polynomial from `(p/q, powers)` pairs with rational coefficients.
    pub fn poly(nvars: usize, terms: &[((i64, i64), &[i32])]) -> Self {
        let it = terms.iter().map(|&((n, d), pw)| {
            (QuadScalar::rational(Rational::new(n.into(), d.into())), pw.to_vec(), vec![0; nvars])
        });
        Self::from_terms(nvars, it).expect("well-formed polynomial literal")
    }

    fn add_term(&mut self, m: Monomial, c: QuadScalar) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let s = old.try_add(&c)?;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &QuadScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> QuadScalar {
        self.terms.get(m).cloned().unwrap_or_else(QuadScalar::zero)
    }

    /// Coefficient of a pure polynomial monomial.
    pub fn coeff_of(&self, powers: &[i32]) -> QuadScalar {
        self.coeff(&Monomial { powers: powers.to_vec(), exps: vec![0; self.nvars] })
    }

    /// The irrational field shared by the coefficients, if any.
    pub fn field(&self) -> Option<i64> {
        self.terms.values().map(|c| c.field()).find(|&m| m != 1)
    }

    /// Constant term if the expression is a constant.
    pub fn as_constant(&self) -> Option<QuadScalar> {
        match self.terms.len() {
            0 => Some(QuadScalar::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.powers.iter().all(|&p| p == 0) && !m.has_exp()).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn constant_term(&self) -> QuadScalar {
        self.coeff(&Monomial::one(self.nvars))
    }

    fn check_arity(&self, o: &Self) -> Result<()> {
        if self.nvars != o.nvars {
            return Err(Error::ArityMismatch(self.nvars, o.nvars));
        }
        match (self.field(), o.field()) {
            (Some(a), Some(b)) if a != b => Err(Error::FieldMismatch(a, b)),
            _ => Ok(()),
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check_arity(o)?;
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone())?;
        }
        Ok(r)
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.try_add(&-o)
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        self.check_arity(o)?;
        let mut r = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.times(m2), c1.try_mul(c2)?)?;
            }
        }
        Ok(r)
    }

    pub fn scale(&self, c: &QuadScalar) -> Result<Self> {
        self.check_arity(&Self::constant(self.nvars, c.clone()))?;
        let mut r = Self::zero(self.nvars);
        for (m, a) in &self.terms {
            r.add_term(m.clone(), a.try_mul(c)?)?;
        }
        Ok(r)
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        let mut r = Self::zero(self.nvars);
        if c.is_zero() {
            return r;
        }
        for (m, a) in &self.terms {
            r.terms.insert(m.clone(), a.scale(c));
        }
        r
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact partial derivative `∂/∂t_var`.
    pub fn diff(&self, var: usize) -> Self {
        assert!(var < self.nvars);
        let mut r = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let a = m.powers[var];
            let k = m.exps[var];
            if a != 0 {
                let mut m2 = m.clone();
                m2.powers[var] -= 1;
                r.add_term(m2, c.scale(&int(a as i64))).expect("same field");
            }
            if k != 0 {
                r.add_term(m.clone(), c.scale(&int(k))).expect("same field");
            }
        }
        r
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.depends_on(var))
    }

    /// An exact antiderivative in `t_var` with zero integration constant.
    ///
    /// `t^a e^{kt}` integrates by parts for `k ≠ 0`; `t^{-1}` and negative
    /// powers against an exponential have no closed form here.
    pub fn integrate(&self, var: usize) -> Result<Self> {
        let mut r = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let a = m.powers[var];
            let k = m.exps[var];
            if k == 0 {
                if a == -1 {
                    return Err(Error::NotClosedForm(format!("log t{}", var + 1)));
                }
                let mut m2 = m.clone();
                m2.powers[var] += 1;
                r.add_term(m2, c.scale(&Rational::new(1.into(), (a + 1).into())))?;
            } else {
                if a < 0 {
                    return Err(Error::NotClosedForm(format!("exponential integral in t{}", var + 1)));
                }
                // ∫ t^a e^{kt} = Σ_j (-1)^j a!/(a-j)! t^{a-j} e^{kt} / k^{j+1}
                let kk = int(k);
                let mut factor = Rational::one() / &kk;
                for j in 0..=a {
                    let mut m2 = m.clone();
                    m2.powers[var] = a - j;
                    r.add_term(m2, c.scale(&factor))?;
                    factor = -factor * int((a - j) as i64) / &kk;
                }
            }
        }
        Ok(r)
    }

    /// Numeric value at a complex point.
    pub fn eval(&self, t: &[Complex64]) -> Complex64 {
        assert_eq!(t.len(), self.nvars);
        let mut s = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut v = c.to_complex();
            let mut ex = Complex64::new(0.0, 0.0);
            for i in 0..self.nvars {
                if m.powers[i] != 0 {
                    v *= t[i].powi(m.powers[i]);
                }
                if m.exps[i] != 0 {
                    ex += t[i] * m.exps[i] as f64;
                }
            }
            if ex != Complex64::new(0.0, 0.0) {
                v *= ex.exp();
            }
            s += v;
        }
        s
    }

    /// Exact value at a rational point (exponential-free expressions only).
    pub fn eval_exact(&self, t: &[QuadScalar]) -> Result<QuadScalar> {
        let mut s = QuadScalar::zero();
        for (m, c) in &self.terms {
            if m.has_exp() {
                return Err(Error::NotClosedForm("exponential at an exact point".into()));
            }
            let mut v = c.clone();
            for i in 0..self.nvars {
                let p = m.powers[i];
                if p > 0 {
                    v = v.try_mul(&t[i].pow(p as u32))?;
                } else if p < 0 {
                    v = v.try_mul(&t[i].inverse()?.pow((-p) as u32))?;
                }
            }
            s = s.try_add(&v)?;
        }
        Ok(s)
    }

    /// Substitutes `t_i ↦ images[i]` in an exponential-free expression.
    /// Negative powers require the image to be a single monomial.
    pub fn substitute(&self, images: &[ExpPolynomial]) -> Result<Self> {
        if images.len() != self.nvars {
            return Err(Error::ArityMismatch(self.nvars, images.len()));
        }
        let n2 = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut cache: BTreeMap<(usize, i32), ExpPolynomial> = BTreeMap::new();
        let mut r = Self::zero(n2);
        for (m, c) in &self.terms {
            if m.has_exp() {
                return Err(Error::NotClosedForm(
                    "substitution into an exponential term".into(),
                ));
            }
            let mut v = Self::constant(n2, c.clone());
            for i in 0..self.nvars {
                let p = m.powers[i];
                if p == 0 {
                    continue;
                }
                let f = match cache.get(&(i, p)) {
                    Some(f) => f.clone(),
                    None => {
                        let base = if p > 0 { images[i].clone() } else { images[i].monomial_inverse()? };
                        let f = base.pow(p.unsigned_abs());
                        cache.insert((i, p), f.clone());
                        f
                    }
                };
                v = v.try_mul(&f)?;
            }
            r = r.try_add(&v)?;
        }
        Ok(r)
    }

    fn monomial_inverse(&self) -> Result<Self> {
        if self.terms.len() != 1 {
            return Err(Error::NotClosedForm("inverse of a non-monomial".into()));
        }
        let (m, c) = self.terms.iter().next().unwrap();
        let inv = Monomial {
            powers: m.powers.iter().map(|p| -p).collect(),
            exps: m.exps.iter().map(|k| -k).collect(),
        };
        Ok(Self::monomial(self.nvars, c.inverse()?, &inv.powers, &inv.exps))
    }

    /// True iff this is a polynomial of total degree ≤ `deg`.
    pub fn is_polynomial_of_degree_at_most(&self, deg: i64) -> bool {
        self.terms.keys().all(|m| m.is_polynomial() && m.total_degree() <= deg)
    }

    /// Removes polynomial monomials of total degree ≤ `deg`.
    pub fn drop_low_degree(&self, deg: i64) -> Self {
        let mut r = self.clone();
        r.terms.retain(|m, _| !(m.is_polynomial() && m.total_degree() <= deg));
        r
    }

    /// Keeps only terms whose exponential weight in `var` is at most `kmax`.
    pub fn truncate_exp(&self, var: usize, kmax: i64) -> Self {
        let mut r = self.clone();
        r.terms.retain(|m, _| m.exps[var] <= kmax);
        r
    }

    /// Largest exponential weight appearing in `var`.
    pub fn max_exp(&self, var: usize) -> i64 {
        self.terms.keys().map(|m| m.exps[var]).max().unwrap_or(0)
    }

    /// Re-embeds into a larger variable set: variable `i` becomes `map[i]`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Self {
        let mut r = Self::zero(nvars);
        for (m, c) in &self.terms {
            let mut mm = Monomial::one(nvars);
            for (i, &j) in map.iter().enumerate() {
                mm.powers[j] += m.powers[i];
                mm.exps[j] += m.exps[i];
            }
            r.add_term(mm, c.clone()).expect("same field");
        }
        r
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&ExpPolynomial> for &ExpPolynomial {
            type Output = ExpPolynomial;
            /// Panics on arity or field mismatch; use the `try_` form to recover.
            fn $method(self, o: &ExpPolynomial) -> ExpPolynomial {
                self.$try(o).expect("incompatible exp-polynomials")
            }
        }
        impl $tr<ExpPolynomial> for ExpPolynomial {
            type Output = ExpPolynomial;
            fn $method(self, o: ExpPolynomial) -> ExpPolynomial {
                (&self).$method(&o)
            }
        }
    };
}
forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &ExpPolynomial {
    type Output = ExpPolynomial;
    fn neg(self) -> ExpPolynomial {
        let mut r = self.clone();
        for c in r.terms.values_mut() {
            *c = -&*c;
        }
        r
    }
}

impl Neg for ExpPolynomial {
    type Output = ExpPolynomial;
    fn neg(self) -> ExpPolynomial {
        -&self
    }
}

impl fmt::Display for ExpPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &p) in m.powers.iter().enumerate() {
                match p {
                    0 => {}
                    1 => write!(f, "*t{}", i + 1)?,
                    _ => write!(f, "*t{}^{}", i + 1, p)?,
                }
            }
            for (i, &k) in m.exps.iter().enumerate() {
                if k != 0 {
                    write!(f, "*e^({}*t{})", k, i + 1)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::rat;

    fn t(n: usize, i: usize) -> ExpPolynomial {
        ExpPolynomial::var(n, i)
    }

    #[test]
    fn difference_of_squares() {
        let (a, b) = (t(2, 0), t(2, 1));
        let p = (&a + &b) * (&a - &b);
        assert_eq!(p, &a * &a - &b * &b);
    }

    #[test]
    fn exponentials_add() {
        let e = ExpPolynomial::exp_var(3, 1, 1);
        assert_eq!(&e * &e, ExpPolynomial::exp_var(3, 1, 2));
    }

    #[test]
    fn derivatives() {
        let f = ExpPolynomial::poly(3, &[((1, 2), &[2, 0, 1])]);
        assert_eq!(f.diff(2), ExpPolynomial::poly(3, &[((1, 2), &[2, 0, 0])]));
        let e = ExpPolynomial::exp_var(3, 1, 1);
        assert_eq!(e.diff(1), e);
        // ∂(t² e^{3t}) = (2t + 3t²) e^{3t}
        let p = &t(1, 0).pow(2) * &ExpPolynomial::exp_var(1, 0, 3);
        let want = (t(1, 0).scale_rational(&int(2)) + t(1, 0).pow(2).scale_rational(&int(3)))
            * ExpPolynomial::exp_var(1, 0, 3);
        assert_eq!(p.diff(0), want);
    }

    #[test]
    fn integration_inverts_differentiation() {
        let p = &t(2, 0).pow(3) * &ExpPolynomial::exp_var(2, 0, -2)
            + t(2, 1).pow(2).scale_rational(&rat(5, 7));
        for v in 0..2 {
            assert_eq!(p.integrate(v).unwrap().diff(v), p);
        }
        let inv = ExpPolynomial::monomial(1, QuadScalar::one(), &[-1], &[0]);
        assert!(inv.integrate(0).is_err());
    }

    #[test]
    fn substitution_and_laurent() {
        // x ↦ 1/y (monomial inverse), then back
        let x = t(1, 0);
        let inv = ExpPolynomial::monomial(1, QuadScalar::one(), &[-1], &[0]);
        let p = x.pow(3) + x.clone();
        let q = p.substitute(&[inv.clone()]).unwrap();
        assert_eq!(q.substitute(&[inv]).unwrap(), p);
    }

    #[test]
    fn evaluation() {
        let p = &t(2, 0) * &ExpPolynomial::exp_var(2, 1, 2);
        let v = p.eval(&[Complex64::new(2.0, 0.0), Complex64::new(0.5, 0.0)]);
        assert!((v.re - 2.0 * 1f64.exp()).abs() < 1e-14);
    }

    #[test]
    fn field_mismatch_rejected() {
        let a = ExpPolynomial::constant(1, QuadScalar::sqrt(2).unwrap());
        let b = ExpPolynomial::constant(1, QuadScalar::sqrt(5).unwrap());
        assert!(a.try_add(&b).is_err());
        assert!(a.try_mul(&b).is_err());
    }
}
