//! The two discrete symmetries of WDVV: the permutation type (a linear change
//! of flat coordinates swapping the unity with another direction of the same
//! degree) and the inversion type.

use super::flat::integrate_closed_form;
use super::FrobeniusPotential;
use crate::error::{Error, Result};
use crate::kernel::rational::{int, rat, Rational};
use crate::kernel::{ExactMatrix, ExpPolynomial, QuadScalar};
use num_traits::{One, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    /// `t̂_α = ∂_α∂_κ F`; the unity of the image is `∂/∂t̂^κ`.
    PermutationType1 { kappa: usize },
    /// `t̂^n = −1/t_1`, `t̂^α = t^α/t_1`, `t̂^1 = ½ t_σt^σ / t_1`.
    InversionType2,
}

pub fn apply_symmetry(p: &FrobeniusPotential, kind: Symmetry) -> Result<FrobeniusPotential> {
    match kind {
        Symmetry::PermutationType1 { kappa } => type1(p, kappa),
        Symmetry::InversionType2 => type2(p),
    }
}

fn type1(p: &FrobeniusPotential, kappa: usize) -> Result<FrobeniusPotential> {
    let n = p.n();
    if kappa >= n {
        return Err(Error::Invalid(format!("kappa {} out of range", kappa + 1)));
    }
    let eta = p.metric_eta()?;
    let eta_inv = eta.inverse()?;
    let fk = p.f.diff(kappa);
    // t̂^α = η^{αβ} ∂_β∂_κ F must be affine in t.
    let mut m = ExactMatrix::zero(n);
    let mut shift = vec![QuadScalar::zero(); n];
    for a in 0..n {
        let mut img = ExpPolynomial::zero(n);
        for b in 0..n {
            let w = eta_inv.get(a, b);
            if !w.is_zero() {
                img = img.try_add(&fk.diff(b).scale(w)?)?;
            }
        }
        if !img.is_polynomial_of_degree_at_most(1) {
            return Err(Error::NotClosedForm(format!("t̂^{} is not affine in t", a + 1)));
        }
        for e in 0..n {
            let mut pw = vec![0; n];
            pw[e] = 1;
            m.set(a, e, img.coeff_of(&pw));
        }
        shift[a] = img.coeff_of(&vec![0; n]);
    }
    let minv = m.inverse()?;
    // t^ε = Σ_α (M⁻¹)_{εα} (t̂^α − b^α)
    let images: Vec<ExpPolynomial> = (0..n)
        .map(|e| {
            let mut acc = ExpPolynomial::zero(n);
            for a in 0..n {
                let w = minv.get(e, a);
                if w.is_zero() {
                    continue;
                }
                let lin = ExpPolynomial::var(n, a).try_sub(&ExpPolynomial::constant(n, shift[a].clone()))?;
                acc = acc.try_add(&lin.scale(w)?)?;
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    // ∂̂_α∂̂_β F̂ = (∂_α∂_β F)(t(t̂))
    let mut grads = Vec::with_capacity(n);
    for a in 0..n {
        let fa = p.f.diff(a);
        let row = (0..n).map(|b| fa.diff(b).substitute(&images)).collect::<Result<Vec<_>>>()?;
        grads.push(integrate_closed_form(&row)?);
    }
    let fhat = integrate_closed_form(&grads)?;
    Ok(FrobeniusPotential {
        name: format!("{}^sym1({})", p.name, kappa + 1),
        f: fhat,
        d: p.d.clone(),
        q: p.q.clone(),
        r: p.r.clone(),
        unity: kappa,
    })
}

fn type2(p: &FrobeniusPotential) -> Result<FrobeniusPotential> {
    let n = p.n();
    if n < 2 || p.unity != 0 {
        return Err(Error::Invalid("inversion needs n >= 2 and unity t^1".into()));
    }
    if p.r.iter().any(|r| !r.is_zero()) {
        return Err(Error::NotClosedForm("inversion of exponential terms".into()));
    }
    let eta = p.metric_eta()?;
    let last = n - 1;
    // Required shape: t_1 = t^n, and t^1, t^n pair only with each other.
    for a in 0..n {
        for (i, want) in [(0, a == last), (last, a == 0)] {
            let v = eta.get(i, a);
            if (want && !v.is_one()) || (!want && !v.is_zero()) {
                return Err(Error::Invalid("inversion needs η_{1n} = 1 with t^1, t^n paired".into()));
            }
        }
    }
    let tn_inv = ExpPolynomial::monomial(n, QuadScalar::one(), &pow1(n, last, -1), &vec![0; n]);
    let mut q_mid = ExpPolynomial::zero(n);
    for a in 1..last {
        for b in 1..last {
            let w = eta.get(a, b);
            if !w.is_zero() {
                q_mid = q_mid.try_add(&ExpPolynomial::var(n, a).try_mul(&ExpPolynomial::var(n, b))?.scale(w)?)?;
            }
        }
    }
    let mut images = vec![ExpPolynomial::zero(n); n];
    images[last] = -tn_inv.clone();
    for (a, img) in images.iter_mut().enumerate().take(last).skip(1) {
        *img = -ExpPolynomial::var(n, a).try_mul(&tn_inv)?;
    }
    images[0] = ExpPolynomial::var(n, 0).try_add(&q_mid.try_mul(&tn_inv)?.scale_rational(&rat(1, 2)))?;
    // F − ½ t^1 t_σ t^σ, then multiply by (t̂^n)².
    let mut tsq = ExpPolynomial::zero(n);
    for a in 0..n {
        for b in 0..n {
            let w = eta.get(a, b);
            if !w.is_zero() {
                tsq = tsq.try_add(&ExpPolynomial::var(n, a).try_mul(&ExpPolynomial::var(n, b))?.scale(w)?)?;
            }
        }
    }
    let g = p.f.try_sub(&ExpPolynomial::var(n, 0).try_mul(&tsq)?.scale_rational(&rat(1, 2)))?;
    let tn2 = ExpPolynomial::monomial(n, QuadScalar::one(), &pow1(n, last, 2), &vec![0; n]);
    let fhat = g.substitute(&images)?.try_mul(&tn2)?;
    // deg t̂^n = d − 1, deg t̂^α = d − q_α, deg t̂^1 = 1 ⇒ d̂ = 2 − d.
    let dhat = int(2) - &p.d;
    let qhat = (0..n)
        .map(|a| match a {
            0 => Rational::zero(),
            a if a == last => dhat.clone(),
            a => Rational::one() - &p.d + &p.q[a],
        })
        .collect();
    Ok(FrobeniusPotential {
        name: format!("{}^inv", p.name),
        f: fhat,
        d: dhat,
        q: qhat,
        r: vec![Rational::zero(); n],
        unity: 0,
    })
}

fn pow1(n: usize, var: usize, e: i32) -> Vec<i32> {
    let mut v = vec![0; n];
    v[var] = e;
    v
}

/// `F(t¹, −t², …, −t^{n−1}, tⁿ)`: the middle reflection, which the
/// inversion squares to.
pub fn middle_reflection(f: &ExpPolynomial) -> Result<ExpPolynomial> {
    let n = f.nvars();
    let images: Vec<ExpPolynomial> = (0..n)
        .map(|a| {
            let v = ExpPolynomial::var(n, a);
            if a == 0 || a == n - 1 {
                v
            } else {
                -v
            }
        })
        .collect();
    f.substitute(&images)
}

/// True iff `a − b` is a polynomial of degree ≤ 2.
pub fn equal_mod_quadratic(a: &ExpPolynomial, b: &ExpPolynomial) -> bool {
    a.try_sub(b).map(|d| d.is_polynomial_of_degree_at_most(2)).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::{catalog, check_quasihomogeneity, check_wdvv1};

    #[test]
    fn inversion_of_a3() {
        let p = catalog("A3").unwrap();
        let inv = apply_symmetry(&p, Symmetry::InversionType2).unwrap();
        assert!(inv.f.terms().any(|(m, _)| m.powers.iter().any(|&k| k < 0)));
        assert!(check_wdvv1(&inv).unwrap().pass);
        assert_eq!(inv.metric_eta().unwrap(), p.metric_eta().unwrap());
        assert!(check_quasihomogeneity(&inv).unwrap().report.pass);
        let back = apply_symmetry(&inv, Symmetry::InversionType2).unwrap();
        assert!(equal_mod_quadratic(&back.f, &middle_reflection(&p.f).unwrap()));
        assert!(equal_mod_quadratic(&back.f, &p.f));
    }

    #[test]
    fn inversion_twice_on_odd_potential() {
        let p = catalog("B3").unwrap();
        let back = apply_symmetry(&apply_symmetry(&p, Symmetry::InversionType2).unwrap(), Symmetry::InversionType2).unwrap();
        assert!(equal_mod_quadratic(&back.f, &middle_reflection(&p.f).unwrap()));
        assert_eq!(back.d, p.d);
        assert_eq!(back.q, p.q);
    }

    #[test]
    fn exponential_terms_rejected() {
        assert!(apply_symmetry(&catalog("CP1").unwrap(), Symmetry::InversionType2).is_err());
    }

    #[test]
    fn permutation_type() {
        let p = catalog("A3").unwrap();
        let same = apply_symmetry(&p, Symmetry::PermutationType1 { kappa: 0 }).unwrap();
        assert!(equal_mod_quadratic(&same.f, &p.f));
        assert!(apply_symmetry(&p, Symmetry::PermutationType1 { kappa: 1 }).is_err());
        // A cubic with two degree-zero directions.
        let f = ExpPolynomial::poly(2, &[((1, 2), &[2, 1]), ((5, 6), &[0, 3])]);
        let c = FrobeniusPotential::graded("cubic", f, (0, 1), &[(0, 1), (0, 1)]);
        let s = apply_symmetry(&c, Symmetry::PermutationType1 { kappa: 1 }).unwrap();
        assert_eq!(s.metric_eta().unwrap(), c.metric_eta().unwrap());
        assert!(check_wdvv1(&s).unwrap().pass);
    }
}
