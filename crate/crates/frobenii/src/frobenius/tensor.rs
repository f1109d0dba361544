//! Tensor product of two Frobenius structures on the locus where every
//! coordinate `t^{α′α″}` with `α′ > 1` and `α″ > 1` vanishes.

use super::FrobeniusPotential;
use crate::error::Result;
use crate::kernel::rational::Rational;
use crate::kernel::{ExactMatrix, ExpPolynomial, QuadScalar};
use num_traits::One;

/// Data of `M′ ⊗ M″` on the locus; double indices `(α′, α″)` are flattened
/// row-major to `α′·n″ + α″`.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorLocus {
    pub n: usize,
    pub eta: ExactMatrix,
    /// `c_{AB}^C` at `(A·n + B)·n + C`, in the `n′n″` coordinates.
    pub c_up: Vec<ExpPolynomial>,
    pub d: Rational,
    /// `q_{α′} + q_{α″}`.
    pub q: Vec<Rational>,
    pub euler: Vec<ExpPolynomial>,
}

pub fn tensor_locus(p1: &FrobeniusPotential, p2: &FrobeniusPotential) -> Result<TensorLocus> {
    let (n1, n2) = (p1.n(), p2.n());
    let n = n1 * n2;
    let s1 = p1.structure_constants()?;
    let s2 = p2.structure_constants()?;
    let eta = s1.eta.kron(&s2.eta)?;
    // t′ lives on (α′, 1″), t″ on (1′, α″).
    let map1: Vec<usize> = (0..n1).map(|a| a * n2).collect();
    let map2: Vec<usize> = (0..n2).collect();
    let mut c_up = vec![ExpPolynomial::zero(n); n * n * n];
    for a1 in 0..n1 {
        for b1 in 0..n1 {
            for g1 in 0..n1 {
                let x = s1.up(a1, b1, g1);
                if x.is_zero() {
                    continue;
                }
                let x = x.embed(n, &map1);
                for a2 in 0..n2 {
                    for b2 in 0..n2 {
                        for g2 in 0..n2 {
                            let y = s2.up(a2, b2, g2);
                            if y.is_zero() {
                                continue;
                            }
                            let (ai, bi, gi) = (a1 * n2 + a2, b1 * n2 + b2, g1 * n2 + g2);
                            c_up[(ai * n + bi) * n + gi] = x.try_mul(&y.embed(n, &map2))?;
                        }
                    }
                }
            }
        }
    }
    let mut q = Vec::with_capacity(n);
    let mut euler = Vec::with_capacity(n);
    for a1 in 0..n1 {
        for a2 in 0..n2 {
            let qa = &p1.q[a1] + &p2.q[a2];
            let idx = a1 * n2 + a2;
            let mut e = ExpPolynomial::var(n, idx).scale_rational(&(Rational::one() - &qa));
            if a2 == 0 {
                e = e + ExpPolynomial::constant(n, QuadScalar::rational(p1.r[a1].clone()));
            }
            if a1 == 0 {
                e = e + ExpPolynomial::constant(n, QuadScalar::rational(p2.r[a2].clone()));
            }
            q.push(qa);
            euler.push(e);
        }
    }
    Ok(TensorLocus { n, eta, c_up, d: &p1.d + &p2.d, q, euler })
}

impl TensorLocus {
    pub fn up(&self, a: usize, b: usize, g: usize) -> &ExpPolynomial {
        &self.c_up[(a * self.n + b) * self.n + g]
    }
}
