//! Exact WDVV, quasihomogeneity and grading checks.

use super::FrobeniusPotential;
use crate::error::Result;
use crate::kernel::rational::{int, Rational};
use crate::kernel::{ExactMatrix, ExpPolynomial, QuadScalar};
use num_traits::{One, Zero};

/// Outcome of an exact check. Failures are data, not errors.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub check: String,
    pub pass: bool,
    /// Number of residual expressions examined.
    pub checked: usize,
    /// Labelled nonzero residuals.
    pub failures: Vec<(String, ExpPolynomial)>,
}

impl ResidualReport {
    fn new(check: &str) -> Self {
        ResidualReport { check: check.into(), pass: true, checked: 0, failures: vec![] }
    }

    fn record(&mut self, label: String, residual: ExpPolynomial) {
        self.checked += 1;
        if !residual.is_zero() {
            self.pass = false;
            self.failures.push((label, residual));
        }
    }
}

/// WDVV1: `c_{αβ}^μ c_{μγδ} − c_{δβ}^μ c_{μγα} = 0` for all index tuples.
pub fn check_wdvv1(p: &FrobeniusPotential) -> Result<ResidualReport> {
    wdvv1_impl(p, None)
}

/// WDVV1 modulo `e^{(kmax+1) t_var}`: residual terms of higher exponential
/// weight in `var` are discarded before testing for zero.
pub fn check_wdvv1_mod(p: &FrobeniusPotential, var: usize, kmax: i64) -> Result<ResidualReport> {
    wdvv1_impl(p, Some((var, kmax)))
}

fn wdvv1_impl(p: &FrobeniusPotential, trunc: Option<(usize, i64)>) -> Result<ResidualReport> {
    let n = p.n();
    let sc = p.structure_constants()?;
    let cut = |e: ExpPolynomial| match trunc {
        Some((v, k)) => e.truncate_exp(v, k),
        None => e,
    };
    // A[(α,β),(γ,δ)] = c_{αβ}^μ c_{μγδ}
    let mut a = vec![ExpPolynomial::zero(n); n.pow(4)];
    let idx = |a: usize, b: usize, c: usize, d: usize| ((a * n + b) * n + c) * n + d;
    for al in 0..n {
        for be in 0..n {
            for ga in 0..n {
                for de in ga..n {
                    let mut acc = ExpPolynomial::zero(n);
                    for mu in 0..n {
                        let x = sc.up(al, be, mu);
                        let y = sc.low(mu, ga, de);
                        if !x.is_zero() && !y.is_zero() {
                            acc = acc.try_add(&cut(x.try_mul(y)?))?;
                        }
                    }
                    a[idx(al, be, de, ga)] = acc.clone();
                    a[idx(al, be, ga, de)] = acc;
                }
            }
        }
    }
    let name = match trunc {
        Some((v, k)) => format!("wdvv1 mod e^({}*t{})", k + 1, v + 1),
        None => "wdvv1".into(),
    };
    let mut rep = ResidualReport::new(&name);
    for al in 0..n {
        for be in 0..n {
            for ga in 0..n {
                for de in al + 1..n {
                    let r = a[idx(al, be, ga, de)].try_sub(&a[idx(de, be, ga, al)])?;
                    rep.record(format!("({},{},{},{})", al + 1, be + 1, ga + 1, de + 1), r);
                }
            }
        }
    }
    Ok(rep)
}

/// Quasihomogeneity data extracted from `L_E F − (3 − d) F`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiReport {
    pub report: ResidualReport,
    /// Normalized `A_{αβ}` (symmetric), `B_α`, `C`.
    pub a: ExactMatrix,
    pub b: Vec<QuadScalar>,
    pub c: QuadScalar,
    /// Quadratic polynomial added to `F` to reach the normalized form.
    pub added: ExpPolynomial,
}

/// `L_E F − (3 − d)F` must be a polynomial of degree ≤ 2; its coefficients are
/// then normalized by adding quadratic terms to `F` wherever the grading allows.
pub fn check_quasihomogeneity(p: &FrobeniusPotential) -> Result<QuasiReport> {
    let n = p.n();
    let e = p.euler();
    let three_minus_d = int(3) - &p.d;
    let lie = |g: &ExpPolynomial| -> Result<ExpPolynomial> {
        Ok(e.apply(g)?.try_sub(&g.scale_rational(&three_minus_d))?)
    };
    let mut rem = lie(&p.f)?;
    let mut rep = ResidualReport::new("quasihomogeneity");
    let ok = rem.is_polynomial_of_degree_at_most(2);
    rep.record("L_E F - (3-d) F beyond degree 2".into(), if ok { ExpPolynomial::zero(n) } else { rem.drop_low_degree(2) });
    let mut added = ExpPolynomial::zero(n);
    if ok {
        let mut add = |rem: &mut ExpPolynomial, q: ExpPolynomial| -> Result<()> {
            *rem = rem.try_add(&lie(&q)?)?;
            added = added.try_add(&q)?;
            Ok(())
        };
        for a in 0..n {
            for b in a..n {
                let mut pw = vec![0; n];
                pw[a] += 1;
                pw[b] += 1;
                let coef = rem.coeff_of(&pw);
                let f = &p.d - Rational::one() - &p.q[a] - &p.q[b];
                if !coef.is_zero() && !f.is_zero() {
                    let x = coef.scale(&(-Rational::one() / f));
                    add(&mut rem, ExpPolynomial::monomial(n, x, &pw, &vec![0; n]))?;
                }
            }
        }
        for a in 0..n {
            let mut pw = vec![0; n];
            pw[a] = 1;
            let coef = rem.coeff_of(&pw);
            let f = &p.d - int(2) - &p.q[a];
            if !coef.is_zero() && !f.is_zero() {
                let x = coef.scale(&(-Rational::one() / f));
                add(&mut rem, ExpPolynomial::monomial(n, x, &pw, &vec![0; n]))?;
            }
        }
        let coef = rem.coeff_of(&vec![0; n]);
        if !coef.is_zero() && !three_minus_d.is_zero() {
            let x = coef.scale(&(Rational::one() / &three_minus_d));
            add(&mut rem, ExpPolynomial::constant(n, x))?;
        }
    }
    let mut a = ExactMatrix::zero(n);
    let mut b = vec![QuadScalar::zero(); n];
    for i in 0..n {
        for j in i..n {
            let mut pw = vec![0; n];
            pw[i] += 1;
            pw[j] += 1;
            let c = rem.coeff_of(&pw);
            // ½ A_{αβ} t^α t^β: the diagonal coefficient is ½A_{αα}.
            let v = if i == j { c.scale(&int(2)) } else { c };
            a.set(i, j, v.clone());
            a.set(j, i, v);
        }
        let mut pw = vec![0; n];
        pw[i] = 1;
        b[i] = rem.coeff_of(&pw);
    }
    let c = rem.coeff_of(&vec![0; n]);
    Ok(QuasiReport { report: rep, a, b, c, added })
}

/// `(q_α + q_β − d) η_{αβ} = 0` for all `α, β`.
pub fn check_grading_eta(p: &FrobeniusPotential) -> Result<bool> {
    let eta = p.metric_eta()?;
    let n = p.n();
    Ok((0..n).all(|a| (0..n).all(|b| eta.get(a, b).is_zero() || &p.q[a] + &p.q[b] == p.d)))
}

/// `E(c_{αβγ}) = (q_α + q_β + q_γ − d) c_{αβγ}` for all triples.
pub fn check_structure_grading(p: &FrobeniusPotential) -> Result<ResidualReport> {
    let n = p.n();
    let sc = p.structure_constants()?;
    let e = p.euler();
    let mut rep = ResidualReport::new("structure-constant grading");
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                let x = sc.low(a, b, c);
                let w = &p.q[a] + &p.q[b] + &p.q[c] - &p.d;
                let want = x.scale_rational(&w);
                rep.record(format!("c{}{}{}", a + 1, b + 1, c + 1), e.apply(x)?.try_sub(&want)?);
            }
        }
    }
    Ok(rep)
}
