//! Deformed flat coordinates `h_α(t; z) = Σ_p h_{α,p}(t) z^p`.
//!
//! Each `h_{α,p+1}` is obtained from `∂_β∂_γ h_{α,p+1} = c_{βγ}^ε ∂_ε h_{α,p}`
//! by two exact integrations. Integration constants are chosen so that
//! `h_{α,p}` is quasihomogeneous of degree `p + 1 − d/2 + μ_α` (and each
//! gradient component of the matching degree) whenever a constant shift can
//! achieve it; otherwise they are left at zero and the pair is reported.

use super::{FrobeniusPotential, StructureConstants};
use crate::error::{Error, Result};
use crate::kernel::rational::{int, rat, Rational};
use crate::kernel::ExpPolynomial;
use num_traits::{One, Zero};

/// Integrates a closed 1-form `Σ ω_γ dt^γ` to a function vanishing
/// (in its polynomial constant term) at the origin.
pub fn integrate_closed_form(omega: &[ExpPolynomial]) -> Result<ExpPolynomial> {
    let n = omega.len();
    let nv = omega.first().map(|w| w.nvars()).unwrap_or(0);
    let mut g = ExpPolynomial::zero(nv);
    for (k, w) in omega.iter().enumerate() {
        let rest = w.try_sub(&g.diff(k))?;
        if (0..k).any(|j| rest.depends_on(j)) {
            return Err(Error::NotClosed(format!("component {} of a 1-form", k + 1)));
        }
        g = g.try_add(&rest.integrate(k)?)?;
    }
    for (k, w) in omega.iter().enumerate().take(n) {
        if g.diff(k) != *w {
            return Err(Error::NotClosed(format!("component {} of a 1-form", k + 1)));
        }
    }
    Ok(g)
}

/// `h[α][p]` for `p = 0..=depth`, with their gradients.
#[derive(Clone, Debug, PartialEq)]
pub struct DeformedFlatCoords {
    pub depth: usize,
    pub h: Vec<Vec<ExpPolynomial>>,
    pub grad: Vec<Vec<Vec<ExpPolynomial>>>,
    /// Pairs `(α, p)` where the quasihomogeneity relation could not pin the
    /// integration constants (resonance); constants were set to zero there.
    pub unpinned: Vec<(usize, usize)>,
}

/// Shifts `g` by a constant so that `E(g) = w·g`, when the defect is constant
/// and `w ≠ 0`. Returns whether the relation holds afterwards.
fn pin_constant(g: &mut ExpPolynomial, e: &super::EulerField, w: &Rational) -> Result<bool> {
    let nv = g.nvars();
    let defect = e.apply(g)?.try_sub(&g.scale_rational(w))?;
    if defect.is_zero() {
        return Ok(true);
    }
    match defect.as_constant() {
        Some(c) if !w.is_zero() => {
            // E(g + k) − w(g + k) = defect − w k
            let k = c.scale(&(Rational::one() / w));
            *g = g.try_add(&ExpPolynomial::constant(nv, k))?;
            Ok(true)
        }
        _ => Ok(false),
    }
}

pub fn deformed_flat_coords(p: &FrobeniusPotential, depth: usize) -> Result<DeformedFlatCoords> {
    let n = p.n();
    let sc = p.structure_constants()?;
    let e = p.euler();
    let half_d = &p.d / int(2);
    let mut h = vec![Vec::with_capacity(depth + 1); n];
    let mut grad = vec![Vec::with_capacity(depth + 1); n];
    let mut unpinned = vec![];
    for a in 0..n {
        // h_{α,0} = η_{αε} t^ε
        let mut h0 = ExpPolynomial::zero(n);
        for eps in 0..n {
            let w = sc.eta.get(a, eps);
            if !w.is_zero() {
                h0 = h0 + ExpPolynomial::var(n, eps).scale(w)?;
            }
        }
        grad[a].push((0..n).map(|b| h0.diff(b)).collect::<Vec<_>>());
        h[a].push(h0);
        let mu = &p.q[a] - &half_d;
        for k in 1..=depth {
            let prev = grad[a][k - 1].clone();
            let mut ok = true;
            let deg_h = int(k as i64) + Rational::one() - &half_d + &mu;
            let mut g = Vec::with_capacity(n);
            for b in 0..n {
                // ω_γ = c_{βγ}^ε ∂_ε h_{α,k−1}
                let omega = (0..n)
                    .map(|c| prod_row(&sc, b, c, &prev))
                    .collect::<Result<Vec<_>>>()?;
                let mut gb = integrate_closed_form(&omega)?;
                let w = &deg_h - (Rational::one() - &p.q[b]);
                ok &= pin_constant(&mut gb, &e, &w)?;
                g.push(gb);
            }
            let mut hk = integrate_closed_form(&g)?;
            ok &= pin_constant(&mut hk, &e, &deg_h)?;
            if !ok {
                unpinned.push((a, k));
            }
            h[a].push(hk);
            grad[a].push(g);
        }
    }
    Ok(DeformedFlatCoords { depth, h, grad, unpinned })
}

fn prod_row(sc: &StructureConstants, b: usize, c: usize, v: &[ExpPolynomial]) -> Result<ExpPolynomial> {
    let n = sc.n;
    let mut acc = ExpPolynomial::zero(v[0].nvars());
    for eps in 0..n {
        let x = sc.up(b, c, eps);
        if !x.is_zero() && !v[eps].is_zero() {
            acc = acc.try_add(&x.try_mul(&v[eps])?)?;
        }
    }
    Ok(acc)
}

/// `<a, b> = a_λ η^{λμ} b_μ` for covectors.
pub fn pairing(sc: &StructureConstants, a: &[ExpPolynomial], b: &[ExpPolynomial]) -> Result<ExpPolynomial> {
    let n = sc.n;
    let mut acc = ExpPolynomial::zero(a[0].nvars());
    for l in 0..n {
        for m in 0..n {
            let w = sc.eta_inv.get(l, m);
            if !w.is_zero() && !a[l].is_zero() && !b[m].is_zero() {
                acc = acc.try_add(&a[l].try_mul(&b[m])?.scale(w)?)?;
            }
        }
    }
    Ok(acc)
}

/// Algebra product of covectors: `(a·b)_γ = c_γ^{λμ} a_λ b_μ`.
pub fn covector_product(sc: &StructureConstants, a: &[ExpPolynomial], b: &[ExpPolynomial]) -> Result<Vec<ExpPolynomial>> {
    let n = sc.n;
    (0..n)
        .map(|g| {
            let mut acc = ExpPolynomial::zero(a[0].nvars());
            for l in 0..n {
                if a[l].is_zero() {
                    continue;
                }
                for m in 0..n {
                    if b[m].is_zero() {
                        continue;
                    }
                    // c_γ^{λμ} = η^{λρ} c_{ργ}^μ
                    let mut c = ExpPolynomial::zero(a[0].nvars());
                    for r in 0..n {
                        let w = sc.eta_inv.get(l, r);
                        if !w.is_zero() {
                            c = c.try_add(&sc.up(r, g, m).scale(w)?)?;
                        }
                    }
                    if !c.is_zero() {
                        acc = acc.try_add(&c.try_mul(&a[l])?.try_mul(&b[m])?)?;
                    }
                }
            }
            Ok(acc)
        })
        .collect()
}

impl DeformedFlatCoords {
    /// `<∇h_{α,0}, ∇h_{1,1}> − t_α` for every `α` (all zero when the identity holds).
    pub fn identity_linear(&self, sc: &StructureConstants) -> Result<Vec<ExpPolynomial>> {
        let n = sc.n;
        (0..n)
            .map(|a| Ok(pairing(sc, &self.grad[a][0], &self.grad[0][1])?.try_sub(&self.h[a][0])?))
            .collect()
    }

    /// The right-hand side of the reconstruction identity for `F` in terms of
    /// `h_{1,p}` and `h_{α,1}` (requires depth ≥ 3).
    pub fn reconstruct_potential(&self, sc: &StructureConstants) -> Result<ExpPolynomial> {
        let n = sc.n;
        if self.depth < 3 {
            return Err(Error::Invalid("reconstruction needs depth >= 3".into()));
        }
        let nv = self.h[0][0].nvars();
        let mut first = ExpPolynomial::zero(nv);
        let left: Vec<ExpPolynomial> =
            (0..n).map(|a| pairing(sc, &self.grad[a][1], &self.grad[0][1])).collect::<Result<_>>()?;
        let right: Vec<ExpPolynomial> =
            (0..n).map(|b| pairing(sc, &self.grad[b][0], &self.grad[0][1])).collect::<Result<_>>()?;
        for a in 0..n {
            for b in 0..n {
                let w = sc.eta_inv.get(a, b);
                if !w.is_zero() {
                    first = first.try_add(&left[a].try_mul(&right[b])?.scale(w)?)?;
                }
            }
        }
        let s = first
            .try_sub(&pairing(sc, &self.grad[0][1], &self.grad[0][2])?)?
            .try_sub(&pairing(sc, &self.grad[0][3], &self.grad[0][0])?)?;
        Ok(s.scale_rational(&rat(1, 2)))
    }

    /// Residuals of `∂_γ<∇h_{α,p}, ∇h_{β,q}> = (∇h_{α,p−1}·∇h_{β,q} + ∇h_{α,p}·∇h_{β,q−1})_γ`
    /// for all `p + q ≤ depth`; returns the number of nonzero residual components.
    pub fn product_identity_failures(&self, sc: &StructureConstants) -> Result<usize> {
        let n = sc.n;
        let nv = self.h[0][0].nvars();
        let zero = vec![ExpPolynomial::zero(nv); n];
        let mut bad = 0;
        for a in 0..n {
            for b in 0..n {
                for p in 0..=self.depth {
                    for q in 0..=(self.depth - p) {
                        let lhs = pairing(sc, &self.grad[a][p], &self.grad[b][q])?;
                        let t1 = if p > 0 { covector_product(sc, &self.grad[a][p - 1], &self.grad[b][q])? } else { zero.clone() };
                        let t2 = if q > 0 { covector_product(sc, &self.grad[a][p], &self.grad[b][q - 1])? } else { zero.clone() };
                        for g in 0..n {
                            if lhs.diff(g) != t1[g].try_add(&t2[g])? {
                                bad += 1;
                            }
                        }
                    }
                }
            }
        }
        Ok(bad)
    }

    /// `Σ_{p+q=N} (−1)^q <∇h_{α,p}, ∇h_{β,q}>` for `N ≤ depth`; each must be constant.
    pub fn opposite_pairings(&self, sc: &StructureConstants) -> Result<Vec<ExpPolynomial>> {
        let n = sc.n;
        let nv = self.h[0][0].nvars();
        let mut out = vec![];
        for a in 0..n {
            for b in 0..n {
                for total in 0..=self.depth {
                    let mut acc = ExpPolynomial::zero(nv);
                    for q in 0..=total {
                        let v = pairing(sc, &self.grad[a][total - q], &self.grad[b][q])?;
                        acc = if q % 2 == 0 { acc.try_add(&v)? } else { acc.try_sub(&v)? };
                    }
                    out.push(acc);
                }
            }
        }
        Ok(out)
    }
}

/// True iff `e` equals a constant.
pub fn is_constant(e: &ExpPolynomial) -> bool {
    e.as_constant().is_some() || e.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::catalog;

    #[test]
    fn closed_forms() {
        let n = 2;
        // d(t1² t2 + e^{t2}) = 2 t1 t2 dt1 + (t1² + e^{t2}) dt2
        let f = ExpPolynomial::poly(n, &[((1, 1), &[2, 1])]) + ExpPolynomial::exp_var(n, 1, 1);
        let g = integrate_closed_form(&[f.diff(0), f.diff(1)]).unwrap();
        assert_eq!(g.diff(0), f.diff(0));
        assert_eq!(g.diff(1), f.diff(1));
        // t2 dt1 is not closed
        assert!(integrate_closed_form(&[ExpPolynomial::var(n, 1), ExpPolynomial::zero(n)]).is_err());
    }

    #[test]
    fn a3_low_orders() {
        let p = catalog("A3").unwrap();
        let sc = p.structure_constants().unwrap();
        let h = deformed_flat_coords(&p, 3).unwrap();
        let t = |i| ExpPolynomial::var(3, i);
        assert_eq!(h.h[0][0], t(2));
        assert_eq!(h.h[1][0], t(1));
        assert_eq!(h.h[2][0], t(0));
        assert!(h.identity_linear(&sc).unwrap().iter().all(|r| r.is_zero()));
        assert_eq!(h.product_identity_failures(&sc).unwrap(), 0);
        assert!(h.opposite_pairings(&sc).unwrap().iter().all(is_constant));
    }

    #[test]
    fn cp1_gradients_close() {
        let p = catalog("CP1").unwrap();
        let sc = p.structure_constants().unwrap();
        let h = deformed_flat_coords(&p, 3).unwrap();
        assert_eq!(h.product_identity_failures(&sc).unwrap(), 0);
    }
}
