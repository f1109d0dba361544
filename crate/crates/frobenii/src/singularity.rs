//! Frobenius structures on the versal deformation of the `A_n` singularity
//! `x^{n+1}`, built from residues.
//!
//! Polynomials in `x` are stored as ascending coefficient vectors whose
//! entries are polynomials in the deformation parameters.

use crate::error::{Error, Result};
use crate::frobenius::FrobeniusPotential;
use crate::kernel::rational::{int, rat, Rational};
use crate::kernel::{ExactMatrix, ExpPolynomial, QuadScalar};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Largest `n` accepted by the symbolic routines.
pub const MAX_N: usize = 6;

/// Polynomial in `x` with coefficients polynomial in the parameters.
pub type XPoly = Vec<ExpPolynomial>;

fn trim(mut p: XPoly) -> XPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn xmul(a: &XPoly, b: &XPoly, nv: usize) -> XPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut c = vec![ExpPolynomial::zero(nv); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] = &c[i + j] + &(x * y);
        }
    }
    trim(c)
}

/// Residue at `x = ∞` of `p(x)/qd(x) dx`, i.e. minus the coefficient of
/// `x^{-1}` in the Laurent expansion at infinity. The leading coefficient of
/// `qd` must be a nonzero constant.
pub fn residue_symbolic(p: &[ExpPolynomial], qd: &[ExpPolynomial], nv: usize) -> Result<ExpPolynomial> {
    let (p, qd) = (trim(p.to_vec()), trim(qd.to_vec()));
    let m = qd.len().checked_sub(1).filter(|&m| m >= 1).ok_or_else(|| Error::Invalid("deg qd < 1".into()))?;
    let lead = qd[m].as_constant().filter(|c| !c.is_zero()).ok_or(Error::DivisionByZero)?;
    let inv = lead.inverse()?;
    if p.is_empty() || p.len() < m {
        return Ok(ExpPolynomial::zero(nv));
    }
    let dp = p.len() - 1;
    // with u = 1/x: p/qd = x^{dp−m} P(u)/Q(u), P(u) = Σ p_{dp−k} u^k, Q(u) = Σ q_{m−k} u^k
    let order = dp + 1 - m;
    let pu = |k: usize| if k <= dp { p[dp - k].clone() } else { ExpPolynomial::zero(nv) };
    let qu = |k: usize| if k <= m { qd[m - k].clone() } else { ExpPolynomial::zero(nv) };
    let mut r: Vec<ExpPolynomial> = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut s = pu(k);
        for j in 1..=k {
            s = &s - &(&qu(j) * &r[k - j]);
        }
        r.push(s.scale(&inv)?);
    }
    Ok(-&r[order])
}

/// Exact residue at infinity for numeric polynomials (ascending coefficients).
pub fn residue_at_infinity(p: &[QuadScalar], qd: &[QuadScalar]) -> Result<QuadScalar> {
    let lift = |v: &[QuadScalar]| v.iter().map(|c| ExpPolynomial::constant(0, c.clone())).collect::<Vec<_>>();
    let r = residue_symbolic(&lift(p), &lift(qd), 0)?;
    Ok(r.constant_term())
}

fn check_n(n: usize, max: usize) -> Result<()> {
    if n == 0 || n > max {
        return Err(Error::Invalid(format!("n = {n} outside 1..={max}")));
    }
    Ok(())
}

fn q(c: Rational) -> QuadScalar {
    QuadScalar::rational(c)
}

/// `f_s = x^{n+1} + Σ s_i x^{i−1}` over the parameters `s_1..s_n`.
pub fn versal_deformation(n: usize) -> XPoly {
    let mut f: XPoly = (0..n).map(|i| ExpPolynomial::var(n, i)).collect();
    f.push(ExpPolynomial::zero(n));
    f.push(ExpPolynomial::one(n));
    f
}

fn xderiv(f: &XPoly) -> XPoly {
    trim(f.iter().enumerate().skip(1).map(|(k, c)| c.scale_rational(&int(k as i64))).collect())
}

fn monomial_x(k: usize, nv: usize) -> XPoly {
    let mut p = vec![ExpPolynomial::zero(nv); k + 1];
    p[k] = ExpPolynomial::one(nv);
    p
}

/// `η_{ij}(s) = −(n+1) res_∞ [x^{i−1} x^{j−1} / f_s′]`, symbolic in `s`.
pub fn a_n_metric(n: usize) -> Result<Vec<Vec<ExpPolynomial>>> {
    check_n(n, MAX_N)?;
    let fp = xderiv(&versal_deformation(n));
    let scale = int(-(n as i64 + 1));
    let mut eta = vec![vec![ExpPolynomial::zero(n); n]; n];
    for i in 0..n {
        for j in i..n {
            let e = residue_symbolic(&monomial_x(i + j, n), &fp, n)?.scale_rational(&scale);
            eta[i][j] = e.clone();
            eta[j][i] = e;
        }
    }
    Ok(eta)
}

/// Grading weights in units of `deg x = 1`: `deg s_i = deg t_i = n + 2 − i`.
pub fn weights(n: usize) -> Vec<i64> {
    (1..=n).map(|i| (n + 2 - i) as i64).collect()
}

/// Exponent vectors of total degree ≥ 2 with the given weighted degree.
fn quasihomogeneous(w: &[i64], target: i64) -> Vec<Vec<i32>> {
    fn go(w: &[i64], i: usize, left: i64, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if i == w.len() {
            if left == 0 && cur.iter().sum::<i32>() >= 2 {
                out.push(cur.clone());
            }
            return;
        }
        let mut k = 0;
        while k as i64 * w[i] <= left {
            cur.push(k);
            go(w, i + 1, left - k as i64 * w[i], cur, out);
            cur.pop();
            k += 1;
        }
    }
    let mut out = vec![];
    go(w, 0, target, &mut vec![], &mut out);
    out
}

/// Splits `p(t, c)` into `t`-monomials with coefficients polynomial in `c`.
fn split(p: &ExpPolynomial, nt: usize, nc: usize) -> BTreeMap<Vec<i32>, ExpPolynomial> {
    let mut out: BTreeMap<Vec<i32>, ExpPolynomial> = BTreeMap::new();
    for (m, c) in p.terms() {
        let tp = m.powers[..nt].to_vec();
        let cp = m.powers[nt..].to_vec();
        let term = ExpPolynomial::monomial(nc, c.clone(), &cp, &vec![0; nc]);
        let e = out.entry(tp).or_insert_with(|| ExpPolynomial::zero(nc));
        *e = &*e + &term;
    }
    out
}

fn degree_in(p: &ExpPolynomial, var: usize) -> i32 {
    p.terms().map(|(m, _)| m.powers[var]).max().unwrap_or(0)
}

fn vars_of(p: &ExpPolynomial) -> Vec<usize> {
    (0..p.nvars()).filter(|&v| p.depends_on(v)).collect()
}

/// Solves polynomial equations by repeatedly eliminating unknowns that occur
/// linearly and alone in some equation.
fn solve_propagate(mut eqs: Vec<ExpPolynomial>, nc: usize) -> Option<Vec<Rational>> {
    let mut val: Vec<Option<Rational>> = vec![None; nc];
    loop {
        eqs.retain(|e| !e.is_zero());
        if eqs.iter().any(|e| e.as_constant().is_some()) {
            return None;
        }
        if val.iter().all(|v| v.is_some()) {
            break;
        }
        let pick = eqs.iter().find_map(|e| {
            let vs = vars_of(e);
            (vs.len() == 1 && degree_in(e, vs[0]) == 1).then(|| (vs[0], e.clone()))
        });
        let found: Vec<(usize, Rational)> = match pick {
            Some((v, e)) => {
                // e = a·c_v + b with constants a, b
                let x = (-&e.constant_term()).try_div(&e.coeff_of(&unit(nc, v))).ok()?;
                vec![(v, x.as_rational()?.clone())]
            }
            None => solve_linear_part(&eqs, nc)?,
        };
        if found.is_empty() {
            return None;
        }
        let mut images: Vec<ExpPolynomial> = (0..nc).map(|i| ExpPolynomial::var(nc, i)).collect();
        for (v, x) in found {
            images[v] = ExpPolynomial::constant(nc, q(x.clone()));
            val[v] = Some(x);
        }
        eqs = eqs.iter().map(|e| e.substitute(&images)).collect::<Result<_>>().ok()?;
    }
    val.into_iter().collect()
}

fn unit(n: usize, v: usize) -> Vec<i32> {
    let mut u = vec![0; n];
    u[v] = 1;
    u
}

/// Row-reduces the affine equations among `eqs` and returns every unknown
/// they pin down.
fn solve_linear_part(eqs: &[ExpPolynomial], nc: usize) -> Option<Vec<(usize, Rational)>> {
    let mut rows: Vec<Vec<Rational>> = eqs
        .iter()
        .filter(|e| e.is_polynomial_of_degree_at_most(1))
        .map(|e| {
            let mut r: Vec<Rational> =
                (0..nc).map(|v| e.coeff_of(&unit(nc, v)).as_rational().cloned().unwrap_or_default()).collect();
            r.push(-e.constant_term().as_rational().cloned().unwrap_or_default());
            r
        })
        .collect();
    let mut pivots = vec![];
    let mut row = 0;
    for col in 0..nc {
        let Some(p) = (row..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(row, p);
        let inv = Rational::one() / &rows[row][col];
        for x in rows[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..rows.len() {
            if r != row && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for k in 0..=nc {
                    let d = &f * &rows[row][k];
                    rows[r][k] -= d;
                }
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    if rows[row..].iter().any(|r| !r[nc].is_zero()) {
        return None;
    }
    Some(
        pivots
            .into_iter()
            .filter(|&(r, c)| (0..nc).all(|k| k == c || rows[r][k].is_zero()))
            .map(|(r, c)| (c, rows[r][nc].clone()))
            .collect(),
    )
}

/// Polynomial change of parameters `s = s(t)` making the residue metric
/// constant.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatCoordinates {
    pub n: usize,
    /// `s_i` as polynomials in `t_1..t_n`.
    pub s_of_t: Vec<ExpPolynomial>,
    /// The constant metric in the `t` coordinates.
    pub eta: ExactMatrix,
}

/// Solves for flat coordinates with the quasihomogeneous ansatz
/// `s_i = t_i + Σ c·(monomials of weight deg s_i and degree ≥ 2)`.
pub fn flat_coordinates(n: usize) -> Result<FlatCoordinates> {
    check_n(n, MAX_N)?;
    let w = weights(n);
    let shapes: Vec<Vec<Vec<i32>>> = (0..n).map(|i| quasihomogeneous(&w, w[i])).collect();
    let nc: usize = shapes.iter().map(|s| s.len()).sum();
    let nt = n + nc;
    let mut s_of_t = Vec::with_capacity(n);
    let mut k = n;
    for (i, sh) in shapes.iter().enumerate() {
        let mut s = ExpPolynomial::var(nt, i);
        for pw in sh {
            let mut full = pw.clone();
            full.resize(nt, 0);
            full[k] = 1;
            s = &s + &ExpPolynomial::monomial(nt, QuadScalar::one(), &full, &vec![0; nt]);
            k += 1;
        }
        s_of_t.push(s);
    }
    let eta_s = a_n_metric(n)?;
    let eta_t = pullback(&eta_s, &s_of_t)?;
    let mut eqs = vec![];
    for row in &eta_t {
        for e in row {
            for (tp, c) in split(e, n, nc) {
                if tp.iter().any(|&p| p != 0) {
                    eqs.push(c);
                }
            }
        }
    }
    let sol = solve_propagate(eqs, nc).ok_or(Error::AnsatzExhausted(n))?;
    let mut images: Vec<ExpPolynomial> = (0..n).map(|i| ExpPolynomial::var(n, i)).collect();
    images.extend(sol.iter().map(|c| ExpPolynomial::constant(n, q(c.clone()))));
    let s_of_t: Vec<ExpPolynomial> = s_of_t.iter().map(|s| s.substitute(&images)).collect::<Result<_>>()?;
    let eta_t = pullback(&eta_s, &s_of_t)?;
    let mut eta = ExactMatrix::zero(n);
    for a in 0..n {
        for b in 0..n {
            let c = eta_t[a][b].as_constant().ok_or(Error::NonConstantMetric)?;
            eta.set(a, b, c);
        }
    }
    Ok(FlatCoordinates { n, s_of_t, eta })
}

/// `J^T η(s(t)) J` with `J_{iα} = ∂s_i/∂t_α`.
fn pullback(eta_s: &[Vec<ExpPolynomial>], s_of_t: &[ExpPolynomial]) -> Result<Vec<Vec<ExpPolynomial>>> {
    let n = eta_s.len();
    let nv = s_of_t[0].nvars();
    let sub: Vec<Vec<ExpPolynomial>> =
        eta_s.iter().map(|r| r.iter().map(|e| e.substitute(s_of_t)).collect::<Result<_>>()).collect::<Result<_>>()?;
    let jac: Vec<Vec<ExpPolynomial>> = s_of_t.iter().map(|s| (0..n).map(|a| s.diff(a)).collect()).collect();
    let mut g = vec![vec![ExpPolynomial::zero(nv); n]; n];
    for a in 0..n {
        for b in a..n {
            let mut acc = ExpPolynomial::zero(nv);
            for i in 0..n {
                if jac[i][a].is_zero() {
                    continue;
                }
                for j in 0..n {
                    if jac[j][b].is_zero() || sub[i][j].is_zero() {
                        continue;
                    }
                    acc = &acc + &(&(&jac[i][a] * &sub[i][j]) * &jac[j][b]);
                }
            }
            g[a][b] = acc.clone();
            g[b][a] = acc;
        }
    }
    Ok(g)
}

/// Three-point functions and the potential of the `A_n` Frobenius manifold.
#[derive(Clone, Debug)]
pub struct AnStructure {
    pub flat: FlatCoordinates,
    /// `c_{αβγ}` for `α ≤ β ≤ γ` (zero-based keys).
    pub c: BTreeMap<(usize, usize, usize), ExpPolynomial>,
    pub potential: FrobeniusPotential,
}

impl AnStructure {
    pub fn c(&self, a: usize, b: usize, g: usize) -> &ExpPolynomial {
        let mut k = [a, b, g];
        k.sort_unstable();
        &self.c[&(k[0], k[1], k[2])]
    }
}

/// `c_{αβγ} = −(n+1) res_∞ [∂_αP ∂_βP ∂_γP / ∂_xP]` in flat coordinates,
/// integrated to `F` with no quadratic part.
pub fn a_n_structure(n: usize) -> Result<AnStructure> {
    let flat = flat_coordinates(n)?;
    // P_t(x) = x^{n+1} + Σ s_i(t) x^{i−1}
    let mut pt: XPoly = flat.s_of_t.clone();
    pt.push(ExpPolynomial::zero(n));
    pt.push(ExpPolynomial::one(n));
    let px = xderiv(&pt);
    let dp: Vec<XPoly> = (0..n).map(|a| trim(pt.iter().map(|c| c.diff(a)).collect())).collect();
    let scale = int(-(n as i64 + 1));
    let mut c = BTreeMap::new();
    for a in 0..n {
        for b in a..n {
            let ab = xmul(&dp[a], &dp[b], n);
            for g in b..n {
                let num = xmul(&ab, &dp[g], n);
                c.insert((a, b, g), residue_symbolic(&num, &px, n)?.scale_rational(&scale));
            }
        }
    }
    let f = integrate_three_point(&c, n)?;
    let q: Vec<Rational> = (0..n).map(|a| rat(a as i64, n as i64 + 1)).collect();
    let potential = FrobeniusPotential::new(
        &format!("A{n}-residue"),
        f,
        rat(n as i64 - 1, n as i64 + 1),
        q,
        vec![Rational::zero(); n],
    )?;
    Ok(AnStructure { flat, c, potential })
}

/// `F` with `∂_α∂_β∂_γ F = c_{αβγ}`, checked exactly.
fn integrate_three_point(c: &BTreeMap<(usize, usize, usize), ExpPolynomial>, n: usize) -> Result<ExpPolynomial> {
    let mut coeffs: BTreeMap<Vec<i32>, QuadScalar> = BTreeMap::new();
    for (&(a, b, g), e) in c {
        for (m, v) in e.terms() {
            let mut pw = m.powers.clone();
            for i in [a, b, g] {
                pw[i] += 1;
            }
            // ∂_a∂_b∂_g t^pw = (falling factorials) t^{m}
            let mut k = pw.clone();
            let mut fac = Rational::one();
            for i in [a, b, g] {
                fac *= int(k[i] as i64);
                k[i] -= 1;
            }
            let val = v.scale(&(Rational::one() / fac));
            match coeffs.get(&pw) {
                Some(old) if *old != val => {
                    return Err(Error::NotClosed(format!("three-point functions at monomial {pw:?}")));
                }
                _ => {
                    coeffs.insert(pw, val);
                }
            }
        }
    }
    let f = ExpPolynomial::from_terms(n, coeffs.into_iter().map(|(p, v)| (v, p, vec![0; n])))?;
    for (&(a, b, g), e) in c {
        if &f.diff(a).diff(b).diff(g) != e {
            return Err(Error::NotClosed(format!("c_{{{a}{b}{g}}}")));
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::{catalog, check_quasihomogeneity, check_wdvv1};

    fn qs(v: &[i64]) -> Vec<QuadScalar> {
        v.iter().map(|&x| QuadScalar::int(x)).collect()
    }

    #[test]
    fn residues() {
        for n in 1..6 {
            let mut p = vec![QuadScalar::zero(); n];
            p[n - 1] = QuadScalar::one();
            let mut d = vec![QuadScalar::zero(); n + 1];
            d[n] = QuadScalar::int(n as i64 + 1);
            // the pairing on the local algebra is minus the residue at infinity
            assert_eq!(residue_at_infinity(&p, &d).unwrap(), QuadScalar::rational(rat(-1, n as i64 + 1)));
        }
        assert_eq!(residue_at_infinity(&qs(&[1]), &qs(&[0, 1])).unwrap(), QuadScalar::int(-1));
        assert!(residue_at_infinity(&qs(&[3, 1, 4]), &qs(&[1])).is_err());
        // a polynomial has no residue: p·qd / qd
        assert!(residue_at_infinity(&qs(&[0, 2, 0, 5]), &qs(&[0, 1])).unwrap().is_zero());
        // x²/(x² − 1) = 1 + 1/x² + … has no 1/x term; x³/(x² − 1) = x + 1/x + …
        assert!(residue_at_infinity(&qs(&[0, 0, 1]), &qs(&[-1, 0, 1])).unwrap().is_zero());
        assert_eq!(residue_at_infinity(&qs(&[0, 0, 0, 1]), &qs(&[-1, 0, 1])).unwrap(), QuadScalar::int(-1));
    }

    fn p3(terms: &[((i64, i64), &[i32])]) -> ExpPolynomial {
        ExpPolynomial::poly(3, terms)
    }

    #[test]
    fn a3_metric_and_coordinates() {
        let eta = a_n_metric(3).unwrap();
        let zero = ExpPolynomial::zero(3);
        let one = ExpPolynomial::one(3);
        let want = [
            [zero.clone(), zero.clone(), one.clone()],
            [zero.clone(), one.clone(), zero.clone()],
            [one.clone(), zero.clone(), p3(&[((-1, 2), &[0, 0, 1])])],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(eta[i][j], want[i][j], "{i}{j}");
            }
        }
        let fc = flat_coordinates(3).unwrap();
        assert_eq!(fc.s_of_t[0], p3(&[((1, 1), &[1, 0, 0]), ((1, 8), &[0, 0, 2])]));
        assert_eq!(fc.s_of_t[1], p3(&[((1, 1), &[0, 1, 0])]));
        assert_eq!(fc.s_of_t[2], p3(&[((1, 1), &[0, 0, 1])]));
        assert_eq!(fc.eta, ExactMatrix::from_ints(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]));
    }

    #[test]
    fn small_n() {
        // A2: the metric is already constant
        let eta = a_n_metric(2).unwrap();
        assert!(eta.iter().flatten().all(|e| e.as_constant().is_some()));
        let fc = flat_coordinates(2).unwrap();
        for (i, s) in fc.s_of_t.iter().enumerate() {
            assert_eq!(s, &ExpPolynomial::var(2, i));
        }
        assert!(a_n_metric(0).is_err());
        assert!(a_n_metric(MAX_N + 1).is_err());
    }

    #[test]
    fn a3_potential() {
        let st = a_n_structure(3).unwrap();
        assert_eq!(st.potential.f, catalog("A3").unwrap().f);
        assert_eq!(st.c(0, 0, 2), &ExpPolynomial::one(3));
        assert_eq!(st.c(0, 1, 1), &ExpPolynomial::one(3));
        assert_eq!(st.c(1, 1, 2), &p3(&[((-1, 4), &[0, 0, 1])]));
        assert_eq!(st.c(1, 2, 2), &p3(&[((-1, 4), &[0, 1, 0])]));
        assert_eq!(st.c(2, 2, 2), &p3(&[((1, 16), &[0, 0, 2])]));
    }

    #[test]
    fn reconstructed_potentials_pass_checks() {
        for n in 2..=4 {
            let st = a_n_structure(n).unwrap();
            let p = &st.potential;
            assert!(check_wdvv1(p).unwrap().pass, "A{n}");
            assert!(check_quasihomogeneity(p).unwrap().report.pass, "A{n}");
            // η from the residue route equals ∂₁∂_α∂_β F
            assert_eq!(p.metric_eta().unwrap(), st.flat.eta, "A{n}");
            for a in 0..n {
                for b in 0..n {
                    for g in 0..n {
                        assert_eq!(st.c(a, b, g), st.c(g, a, b));
                    }
                }
            }
        }
    }

    #[test]
    fn larger_n() {
        for n in 5..=MAX_N {
            let st = a_n_structure(n).unwrap();
            assert_eq!(st.potential.metric_eta().unwrap(), st.flat.eta);
            assert!(check_wdvv1(&st.potential).unwrap().pass, "A{n}");
        }
    }

    #[test]
    fn ansatz_shapes() {
        assert_eq!(quasihomogeneous(&weights(3), 4), vec![vec![0, 0, 2]]);
        assert_eq!(quasihomogeneous(&weights(4), 5), vec![vec![0, 0, 1, 1]]);
        assert!(quasihomogeneous(&weights(4), 3).is_empty());
    }
}
