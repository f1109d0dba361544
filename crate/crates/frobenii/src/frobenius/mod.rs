//! Frobenius potentials: WDVV solutions together with their grading data.

pub mod catalog;
pub mod checks;
pub mod flat;
pub mod io;
pub mod symmetry;
pub mod tensor;

use crate::error::{Error, Result};
use crate::kernel::rational::{rat, Rational};
use crate::kernel::{ComplexMatrix, ExactMatrix, ExpPolynomial, QuadScalar};
use num_complex::Complex64;
use num_traits::{One, Zero};

pub use catalog::{catalog, catalog_names};
pub use checks::{
    check_grading_eta, check_quasihomogeneity, check_wdvv1, check_wdvv1_mod, QuasiReport, ResidualReport,
};
pub use flat::{deformed_flat_coords, DeformedFlatCoords};
pub use symmetry::{apply_symmetry, Symmetry};
pub use tensor::{tensor_locus, TensorLocus};

/// One solution of WDVV together with its grading.
#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusPotential {
    pub name: String,
    pub f: ExpPolynomial,
    pub d: Rational,
    pub q: Vec<Rational>,
    pub r: Vec<Rational>,
    /// Index of the unity coordinate (0 in the usual normalization).
    pub unity: usize,
}

/// `E = Σ [(1 − q_α) t^α + r_α] ∂_α`, stored as its component functions.
#[derive(Clone, Debug, PartialEq)]
pub struct EulerField {
    pub components: Vec<ExpPolynomial>,
}

impl EulerField {
    /// `E(g) = Σ E^α ∂_α g`.
    pub fn apply(&self, g: &ExpPolynomial) -> Result<ExpPolynomial> {
        let mut acc = ExpPolynomial::zero(g.nvars());
        for (a, e) in self.components.iter().enumerate() {
            if !e.is_zero() {
                acc = acc.try_add(&e.try_mul(&g.diff(a))?)?;
            }
        }
        Ok(acc)
    }

    pub fn eval(&self, t: &[Complex64]) -> Vec<Complex64> {
        self.components.iter().map(|e| e.eval(t)).collect()
    }
}

/// Third derivatives and their raised form `c_{αβ}^γ = η^{γε} c_{εαβ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    pub n: usize,
    pub eta: ExactMatrix,
    pub eta_inv: ExactMatrix,
    low: Vec<ExpPolynomial>,
    up: Vec<ExpPolynomial>,
}

impl StructureConstants {
    /// `c_{αβγ}`.
    pub fn low(&self, a: usize, b: usize, c: usize) -> &ExpPolynomial {
        &self.low[(a * self.n + b) * self.n + c]
    }

    /// `c_{αβ}^γ`.
    pub fn up(&self, a: usize, b: usize, g: usize) -> &ExpPolynomial {
        &self.up[(a * self.n + b) * self.n + g]
    }

    /// Numeric matrix of multiplication by `∂_ε`: entry `(γ, β)` is `c_{εβ}^γ(t)`.
    pub fn multiplication_matrix(&self, eps: usize, t: &[Complex64]) -> ComplexMatrix {
        let n = self.n;
        let mut m = ComplexMatrix::zero(n);
        for g in 0..n {
            for b in 0..n {
                m[(g, b)] = self.up(eps, b, g).eval(t);
            }
        }
        m
    }
}

impl FrobeniusPotential {
    pub fn new(name: &str, f: ExpPolynomial, d: Rational, q: Vec<Rational>, r: Vec<Rational>) -> Result<Self> {
        let n = f.nvars();
        if q.len() != n || r.len() != n {
            return Err(Error::ArityMismatch(n, q.len().min(r.len())));
        }
        Ok(FrobeniusPotential { name: name.to_string(), f, d, q, r, unity: 0 })
    }

    /// Polynomial potential with `r = 0`; `q` and `d` as `(num, den)` pairs.
    pub fn graded(name: &str, f: ExpPolynomial, d: (i64, i64), q: &[(i64, i64)]) -> Self {
        let n = f.nvars();
        let q = q.iter().map(|&(a, b)| rat(a, b)).collect();
        Self::new(name, f, rat(d.0, d.1), q, vec![Rational::zero(); n]).expect("consistent grading")
    }

    pub fn n(&self) -> usize {
        self.f.nvars()
    }

    pub fn euler(&self) -> EulerField {
        let n = self.n();
        let components = (0..n)
            .map(|a| {
                let lin = ExpPolynomial::var(n, a).scale_rational(&(Rational::one() - &self.q[a]));
                lin + ExpPolynomial::constant(n, QuadScalar::rational(self.r[a].clone()))
            })
            .collect();
        EulerField { components }
    }

    /// `η_{αβ} = ∂_1∂_α∂_β F`, which must be constant and nondegenerate.
    pub fn metric_eta(&self) -> Result<ExactMatrix> {
        let n = self.n();
        let f1 = self.f.diff(self.unity);
        let mut eta = ExactMatrix::zero(n);
        for a in 0..n {
            let fa = f1.diff(a);
            for b in a..n {
                let v = fa.diff(b).as_constant().ok_or(Error::NonConstantMetric)?;
                eta.set(a, b, v.clone());
                eta.set(b, a, v);
            }
        }
        if eta.det()?.is_zero() {
            return Err(Error::DegenerateMetric);
        }
        Ok(eta)
    }

    pub fn structure_constants(&self) -> Result<StructureConstants> {
        let eta = self.metric_eta()?;
        let eta_inv = eta.inverse()?;
        let n = self.n();
        let mut low = vec![ExpPolynomial::zero(n); n * n * n];
        for a in 0..n {
            let fa = self.f.diff(a);
            for b in a..n {
                let fab = fa.diff(b);
                for c in b..n {
                    let v = fab.diff(c);
                    for (i, j, k) in [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                        low[(i * n + j) * n + k] = v.clone();
                    }
                }
            }
        }
        let mut up = vec![ExpPolynomial::zero(n); n * n * n];
        for a in 0..n {
            for b in 0..n {
                for g in 0..n {
                    let mut acc = ExpPolynomial::zero(n);
                    for e in 0..n {
                        let w = eta_inv.get(g, e);
                        if !w.is_zero() {
                            acc = acc.try_add(&low[(e * n + a) * n + b].scale(w)?)?;
                        }
                    }
                    up[(a * n + b) * n + g] = acc;
                }
            }
        }
        Ok(StructureConstants { n, eta, eta_inv, low, up })
    }

    /// `μ_α = q_α − d/2` and `R₁ = Σ r_ε c_ε` built from the cubic part of `F`.
    pub fn origin_monodromy(&self) -> Result<OriginMonodromy> {
        let n = self.n();
        let half_d = &self.d / Rational::from_integer(2.into());
        let mu: Vec<Rational> = self.q.iter().map(|q| q - &half_d).collect();
        let cubic = ExpPolynomial::from_terms(
            n,
            self.f
                .terms()
                .filter(|(m, _)| m.is_polynomial() && m.total_degree() == 3)
                .map(|(m, c)| (c.clone(), m.powers.clone(), m.exps.clone())),
        )?;
        let classical = FrobeniusPotential { f: cubic, ..self.clone() };
        let sc = classical.structure_constants()?;
        let mut r1 = ExactMatrix::zero(n);
        for a in 0..n {
            for b in 0..n {
                let mut acc = QuadScalar::zero();
                for e in 0..n {
                    if self.r[e].is_zero() {
                        continue;
                    }
                    let c = sc.up(e, b, a).as_constant().unwrap_or_else(QuadScalar::zero);
                    acc = acc.try_add(&c.scale(&self.r[e]))?;
                }
                r1.set(a, b, acc);
            }
        }
        Ok(OriginMonodromy { mu, r1 })
    }

    /// Intersection form `g^{αβ} = E^ε c_ε^{αβ}` and the contravariant
    /// Christoffel symbols `Γ_γ^{αβ} = (½(d+1) − q_β) c^{αβ}_γ`.
    pub fn intersection_form(&self) -> Result<IntersectionForm> {
        let n = self.n();
        let sc = self.structure_constants()?;
        let e = self.euler();
        // c^{αβ}_γ = η^{αλ} c_{λγ}^β
        let mut c_ud = vec![ExpPolynomial::zero(n); n * n * n];
        for a in 0..n {
            for b in 0..n {
                for g in 0..n {
                    let mut acc = ExpPolynomial::zero(n);
                    for l in 0..n {
                        let w = sc.eta_inv.get(a, l);
                        if !w.is_zero() {
                            acc = acc.try_add(&sc.up(l, g, b).scale(w)?)?;
                        }
                    }
                    c_ud[(a * n + b) * n + g] = acc;
                }
            }
        }
        let mut g = vec![ExpPolynomial::zero(n); n * n];
        for a in 0..n {
            for b in 0..n {
                let mut acc = ExpPolynomial::zero(n);
                for eps in 0..n {
                    let ce = &c_ud[(a * n + b) * n + eps];
                    if !ce.is_zero() && !e.components[eps].is_zero() {
                        acc = acc.try_add(&e.components[eps].try_mul(ce)?)?;
                    }
                }
                g[a * n + b] = acc;
            }
        }
        let half = rat(1, 2);
        let mut gamma = vec![ExpPolynomial::zero(n); n * n * n];
        for a in 0..n {
            for b in 0..n {
                let w = &half * (&self.d + Rational::one()) - &self.q[b];
                for c in 0..n {
                    gamma[(a * n + b) * n + c] = c_ud[(a * n + b) * n + c].scale_rational(&w);
                }
            }
        }
        Ok(IntersectionForm { n, g, gamma })
    }

    /// Numeric `U^α_β(t) = E^ε(t) c_{εβ}^α(t)`.
    pub fn euler_multiplication(&self, t: &[Complex64]) -> Result<ComplexMatrix> {
        let sc = self.structure_constants()?;
        Ok(euler_multiplication_with(&sc, &self.euler(), t))
    }

    /// Exact `U^α_β(t)` as a matrix of exp-polynomials.
    pub fn euler_multiplication_symbolic(&self) -> Result<Vec<ExpPolynomial>> {
        let n = self.n();
        let sc = self.structure_constants()?;
        let e = self.euler();
        let mut u = vec![ExpPolynomial::zero(n); n * n];
        for a in 0..n {
            for b in 0..n {
                let mut acc = ExpPolynomial::zero(n);
                for eps in 0..n {
                    let c = sc.up(eps, b, a);
                    if !c.is_zero() {
                        acc = acc.try_add(&e.components[eps].try_mul(c)?)?;
                    }
                }
                u[a * n + b] = acc;
            }
        }
        Ok(u)
    }
}

pub fn euler_multiplication_with(sc: &StructureConstants, e: &EulerField, t: &[Complex64]) -> ComplexMatrix {
    let n = sc.n;
    let ev = e.eval(t);
    let mut m = ComplexMatrix::zero(n);
    for (eps, w) in ev.iter().enumerate() {
        if w.norm() == 0.0 {
            continue;
        }
        m = m.add(&sc.multiplication_matrix(eps, t).scale(*w));
    }
    m
}

#[derive(Clone, Debug, PartialEq)]
pub struct OriginMonodromy {
    pub mu: Vec<Rational>,
    pub r1: ExactMatrix,
}

impl OriginMonodromy {
    /// `μη + ημ` (zero for a consistent grading).
    pub fn antisymmetry_defect(&self, eta: &ExactMatrix) -> Result<ExactMatrix> {
        let n = self.mu.len();
        let mu = diag(&self.mu);
        let _ = n;
        mu.try_mul(eta)?.try_add(&eta.try_mul(&mu)?)
    }

    /// True iff `(R₁)^α_β ≠ 0` only where `μ_α − μ_β = 1`.
    pub fn r1_respects_grading(&self) -> bool {
        let n = self.mu.len();
        (0..n).all(|a| (0..n).all(|b| self.r1.get(a, b).is_zero() || &self.mu[a] - &self.mu[b] == Rational::one()))
    }
}

pub fn diag(v: &[Rational]) -> ExactMatrix {
    let mut m = ExactMatrix::zero(v.len());
    for (i, x) in v.iter().enumerate() {
        m.set(i, i, QuadScalar::rational(x.clone()));
    }
    m
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntersectionForm {
    pub n: usize,
    /// Row-major `g^{αβ}`.
    pub g: Vec<ExpPolynomial>,
    /// `Γ_γ^{αβ}` at index `(α·n + β)·n + γ`.
    pub gamma: Vec<ExpPolynomial>,
}

impl IntersectionForm {
    pub fn entry(&self, a: usize, b: usize) -> &ExpPolynomial {
        &self.g[a * self.n + b]
    }

    pub fn christoffel(&self, a: usize, b: usize, c: usize) -> &ExpPolynomial {
        &self.gamma[(a * self.n + b) * self.n + c]
    }

    pub fn eval(&self, t: &[Complex64]) -> ComplexMatrix {
        ComplexMatrix::from_vec(self.n, self.g.iter().map(|p| p.eval(t)).collect())
    }

    pub fn det(&self) -> Result<ExpPolynomial> {
        poly_det(&self.g, self.n)
    }
}

/// Determinant of a small matrix of exp-polynomials by Laplace expansion.
pub fn poly_det(m: &[ExpPolynomial], n: usize) -> Result<ExpPolynomial> {
    fn rec(m: &[ExpPolynomial], n: usize, rows: &[usize], cols: &[usize]) -> Result<ExpPolynomial> {
        let nv = m[0].nvars();
        if rows.len() == 1 {
            return Ok(m[rows[0] * n + cols[0]].clone());
        }
        let mut acc = ExpPolynomial::zero(nv);
        for (k, &c) in cols.iter().enumerate() {
            let e = &m[rows[0] * n + c];
            if e.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let minor = rec(m, n, &rows[1..], &rest)?;
            let term = e.try_mul(&minor)?;
            acc = if k % 2 == 0 { acc.try_add(&term)? } else { acc.try_sub(&term)? };
        }
        Ok(acc)
    }
    let idx: Vec<usize> = (0..n).collect();
    rec(m, n, &idx, &idx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::matrix::qint;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn a3_metric_and_constants() {
        let p = catalog("A3").unwrap();
        let eta = p.metric_eta().unwrap();
        assert_eq!(eta, ExactMatrix::from_ints(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]));
        let sc = p.structure_constants().unwrap();
        let n = 3;
        assert_eq!(*sc.low(1, 1, 2), ExpPolynomial::poly(n, &[((-1, 4), &[0, 0, 1])]));
        assert_eq!(*sc.low(1, 2, 2), ExpPolynomial::poly(n, &[((-1, 4), &[0, 1, 0])]));
        assert_eq!(*sc.low(2, 2, 2), ExpPolynomial::poly(n, &[((1, 16), &[0, 0, 2])]));
        for b in 0..n {
            for g in 0..n {
                let want = if b == g { ExpPolynomial::one(n) } else { ExpPolynomial::zero(n) };
                assert_eq!(*sc.up(0, b, g), want);
            }
        }
    }

    #[test]
    fn cp1_metric_and_c222() {
        let p = catalog("CP1").unwrap();
        assert_eq!(p.metric_eta().unwrap(), ExactMatrix::from_ints(&[&[0, 1], &[1, 0]]));
        let sc = p.structure_constants().unwrap();
        assert_eq!(*sc.low(1, 1, 1), ExpPolynomial::exp_var(2, 1, 1));
    }

    #[test]
    fn nonconstant_metric_rejected() {
        // ∂1∂2∂2 F = t3
        let f = ExpPolynomial::poly(3, &[((1, 2), &[1, 2, 1]), ((1, 2), &[2, 0, 1])]);
        let p = FrobeniusPotential::graded("bad", f, (0, 1), &[(0, 1), (0, 1), (0, 1)]);
        assert_eq!(p.metric_eta(), Err(Error::NonConstantMetric));
    }

    #[test]
    fn origin_monodromy_examples() {
        let a3 = catalog("A3").unwrap().origin_monodromy().unwrap();
        assert_eq!(a3.mu, vec![rat(-1, 4), rat(0, 1), rat(1, 4)]);
        assert!(a3.r1.is_zero());
        let p = catalog("CP2(2)").unwrap();
        let cp2 = p.origin_monodromy().unwrap();
        assert_eq!(cp2.mu, vec![rat(-1, 1), rat(0, 1), rat(1, 1)]);
        assert_eq!(cp2.r1, ExactMatrix::from_ints(&[&[0, 0, 0], &[3, 0, 0], &[0, 3, 0]]));
        assert!(cp2.r1_respects_grading());
        assert!(cp2.antisymmetry_defect(&p.metric_eta().unwrap()).unwrap().is_zero());
    }

    #[test]
    fn cp2_euler_multiplication_at_t2() {
        let p = catalog("CP2(3)").unwrap();
        let t2: f64 = 0.3;
        let u = p.euler_multiplication(&[c(0.0), c(t2), c(0.0)]).unwrap();
        let q = t2.exp();
        let want = ComplexMatrix::from_rows(&[
            vec![c(0.0), c(0.0), c(3.0 * q)],
            vec![c(3.0), c(0.0), c(0.0)],
            vec![c(0.0), c(3.0), c(0.0)],
        ]);
        assert!(u.approx_eq(&want, 1e-12));
        let zero = catalog("A3").unwrap().euler_multiplication(&[c(0.0); 3]).unwrap();
        assert_eq!(zero.max_abs(), 0.0);
    }

    #[test]
    fn intersection_form_properties() {
        let p = catalog("A3").unwrap();
        let ig = p.intersection_form().unwrap();
        let eta_inv = p.metric_eta().unwrap().inverse().unwrap();
        let n = 3;
        for a in 0..n {
            for b in 0..n {
                let gab = ig.entry(a, b);
                // g^{αβ} = t¹η^{αβ} + (terms free of t¹)
                let lin = gab.diff(0);
                assert_eq!(lin, ExpPolynomial::constant(n, eta_inv.get(a, b).clone()));
            }
        }
        // det g · det η = det U
        let u = p.euler_multiplication_symbolic().unwrap();
        let det_u = poly_det(&u, n).unwrap();
        let det_eta = p.metric_eta().unwrap().det().unwrap();
        assert_eq!(ig.det().unwrap().scale(&det_eta).unwrap(), det_u);
        let zero = ig.eval(&[c(0.0); 3]);
        assert_eq!(zero.max_abs(), 0.0);
        assert_eq!(det_eta, qint(-1));
    }
}
