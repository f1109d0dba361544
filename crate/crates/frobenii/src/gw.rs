//! Genus-zero and elliptic Gromov–Witten invariants of CP², and diagnostics
//! of the growth of the genus-zero series.
//!
//! The potential is `½t₁²t₃ + ½t₁t₂² + t₃⁻¹ φ(t₂ + 3 log t₃)` with
//! `φ = Σ A_k e^{kx}`; the coefficients come from the third-order ODE for `φ`
//! solved order by order.

use crate::error::{Error, Result};
use crate::frobenius::FrobeniusPotential;
use crate::kernel::rational::{big, fmt_rational, int, rat, to_f64, Rational};
use crate::kernel::{ExpPolynomial, GWSeries, QuadScalar};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::io::Write;

/// `r` in the ODE; CP² has `r = 3`.
pub const R: i64 = 3;

/// Coefficient of `e^{kx}` in
/// `φ‴(r³ + 2φ′ − rφ″) − (φ″)² − 6r²φ″ + 11rφ′ − 6φ`,
/// where `a[j-1]` is the coefficient of `e^{jx}` in `φ` (missing entries are 0).
pub fn ode_coefficient(a: &[Rational], k: usize, r: i64) -> Rational {
    let get = |j: usize| -> Rational { a.get(j.wrapping_sub(1)).cloned().unwrap_or_else(Rational::zero) };
    let d = |j: usize, m: u32| -> Rational { get(j) * int((j as i64).pow(m)) };
    let mut s = Rational::zero();
    // linear part
    s += d(k, 3) * int(r.pow(3)) - d(k, 2) * int(6 * r * r) + d(k, 1) * int(11 * r) - get(k) * int(6);
    // quadratic part
    for i in 1..k {
        let j = k - i;
        let (p3, p2, p1) = (d(i, 3), d(j, 2), d(j, 1));
        if p3.is_zero() && d(i, 2).is_zero() {
            continue;
        }
        s += &p3 * (p1 * int(2) - p2 * int(r)) - d(i, 2) * d(j, 2);
    }
    s
}

/// One row of the genus-zero table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Genus0Row {
    pub k: usize,
    #[serde(serialize_with = "ser_big")]
    pub n_k: BigInt,
    #[serde(serialize_with = "ser_rat")]
    pub a_k: Rational,
}

fn ser_big<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_rat<S: serde::Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(x))
}

fn factorial(n: usize) -> BigInt {
    crate::kernel::rational::factorial(n as u64)
}

/// `A_1..A_K` from the ODE, normalized by `A_1 = 1/2`.
pub fn genus0_coefficients(kmax: usize) -> Vec<Rational> {
    let mut a: Vec<Rational> = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        if k == 1 {
            a.push(rat(1, 2));
            continue;
        }
        // The ODE is affine in A_k at order k: residual(A_k) = c + L·A_k.
        let c = ode_coefficient(&a, k, R);
        let mut unit = vec![Rational::zero(); k];
        unit[k - 1] = Rational::one();
        let l = ode_coefficient(&unit, k, R);
        a.push(-c / l);
    }
    a
}

/// `(k, N_k, A_k)` for `k = 1..=K`, with `N_k = (3k − 1)! A_k` checked integral.
pub fn genus0_invariants(kmax: usize) -> Result<Vec<Genus0Row>> {
    if kmax == 0 {
        return Err(Error::Invalid("K must be positive".into()));
    }
    genus0_coefficients(kmax)
        .into_iter()
        .enumerate()
        .map(|(i, a_k)| {
            let k = i + 1;
            let n = &a_k * big(&factorial(3 * k - 1));
            if !n.is_integer() {
                return Err(Error::NonIntegral(k));
            }
            Ok(Genus0Row { k, n_k: n.to_integer(), a_k })
        })
        .collect()
}

/// Independent route: substitute `f = Σ A_k y^{3k−1} e^{kx}` into
/// `f_{xxy}² = f_{yyy} + f_{xxx} f_{xyy}` and match the `y^{3K−4} e^{Kx}` terms.
pub fn genus0_via_pde(kmax: usize) -> Result<Vec<Rational>> {
    let term = |a: &Rational, k: usize| {
        ExpPolynomial::monomial(2, QuadScalar::rational(a.clone()), &[0, (3 * k - 1) as i32], &[k as i64, 0])
    };
    let residual = |f: &ExpPolynomial| -> Result<ExpPolynomial> {
        let fxxy = f.diff(0).diff(0).diff(1);
        let fyyy = f.diff(1).diff(1).diff(1);
        let fxxx = f.diff(0).diff(0).diff(0);
        let fxyy = f.diff(0).diff(1).diff(1);
        fxxy.try_mul(&fxxy)?.try_sub(&fyyy)?.try_sub(&fxxx.try_mul(&fxyy)?)
    };
    let coeff = |e: &ExpPolynomial, k: usize| -> Rational {
        let m = crate::kernel::Monomial { powers: vec![0, 3 * k as i32 - 4], exps: vec![k as i64, 0] };
        e.coeff(&m).as_rational().cloned().unwrap_or_else(Rational::zero)
    };
    let mut a = vec![rat(1, 2)];
    let mut f = term(&a[0], 1);
    for k in 2..=kmax {
        let c = coeff(&residual(&f)?, k);
        let l = coeff(&residual(&term(&Rational::one(), k))?, k);
        let ak = -c / l;
        f = f.try_add(&term(&ak, k))?;
        a.push(ak);
    }
    Ok(a)
}

/// `φ` as a series of order `K`.
pub fn phi_series(kmax: usize) -> GWSeries {
    GWSeries::from_coeffs(genus0_coefficients(kmax))
}

/// Full ODE residual as a series (zero to order `K` for the computed `φ`).
pub fn ode_residual_series(phi: &GWSeries) -> Result<GWSeries> {
    let k = phi.order();
    let (p1, p2, p3) = (phi.diff(), phi.diff().diff(), phi.diff().diff().diff());
    let r = int(R);
    let bracket = GWSeries::constant_series(k, int(R.pow(3))).add(&p1.scale(&int(2)))?.sub(&p2.scale(&r))?;
    p3.mul(&bracket)?
        .sub(&p2.mul(&p2)?)?
        .sub(&p2.scale(&int(6 * R * R)))?
        .add(&p1.scale(&int(11 * R)))?
        .sub(&phi.scale(&int(6)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Division {
    Recursive,
    Newton,
}

/// `ψ = (φ‴ − 27) / (8(27 + 2φ′ − 3φ″))` to order `K`.
pub fn psi_series(phi: &GWSeries, method: Division) -> Result<GWSeries> {
    let k = phi.order();
    let (p1, p2, p3) = (phi.diff(), phi.diff().diff(), phi.diff().diff().diff());
    let num = p3.sub(&GWSeries::constant_series(k, int(27)))?;
    let den = GWSeries::constant_series(k, int(27)).add(&p1.scale(&int(2)))?.sub(&p2.scale(&int(3)))?.scale(&int(8));
    match method {
        Division::Recursive => num.div_recursive(&den),
        Division::Newton => num.div_newton(&den),
    }
}

/// `ψ·8(27 + 2φ′ − 3φ″) − (φ‴ − 27)`, which must vanish to order `K`.
pub fn psi_defect(phi: &GWSeries, psi: &GWSeries) -> Result<GWSeries> {
    let k = phi.order();
    let (p1, p2, p3) = (phi.diff(), phi.diff().diff(), phi.diff().diff().diff());
    let den = GWSeries::constant_series(k, int(27)).add(&p1.scale(&int(2)))?.sub(&p2.scale(&int(3)))?.scale(&int(8));
    psi.mul(&den)?.sub(&p3.sub(&GWSeries::constant_series(k, int(27)))?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EllipticRow {
    pub k: usize,
    #[serde(serialize_with = "ser_big")]
    pub n1_k: BigInt,
}

/// `N_k^{(1)}` from `ψ = −1/8 + Σ k N_k^{(1)} / (3k)! e^{kx}`.
pub fn elliptic_invariants(kmax: usize) -> Result<Vec<EllipticRow>> {
    elliptic_with(kmax, Division::Recursive)
}

pub fn elliptic_with(kmax: usize, method: Division) -> Result<Vec<EllipticRow>> {
    let psi = psi_series(&phi_series(kmax), method)?;
    if *psi.coeff(0) != rat(-1, 8) {
        return Err(Error::Invalid(format!("constant term of ψ is {}", fmt_rational(psi.coeff(0)))));
    }
    (1..=kmax)
        .map(|k| {
            let v = psi.coeff(k) * big(&factorial(3 * k)) / int(k as i64);
            if !v.is_integer() {
                return Err(Error::NonIntegral(k));
            }
            Ok(EllipticRow { k, n1_k: v.to_integer() })
        })
        .collect()
}

/// Natural logarithm of a positive rational of any size.
pub fn ln_rational(r: &Rational) -> f64 {
    fn ln_big(n: &BigInt) -> f64 {
        let bits = n.bits() as i64;
        let shift = (bits - 60).max(0) as usize;
        let top = (n.abs() >> shift).to_f64().unwrap_or(f64::NAN);
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
    ln_big(r.numer()) - ln_big(r.denom())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoticFit {
    pub a_hat: f64,
    pub b_hat: f64,
    pub r_hat: f64,
    pub window: (usize, usize),
}

/// Least-squares fit of `log A_k ≈ k log a + log b − (7/2) log k` over `[K/2, K]`.
pub fn asymptotic_fit(kmax: usize) -> Result<AsymptoticFit> {
    if kmax < 20 {
        return Err(Error::Invalid("asymptotic fit needs K >= 20".into()));
    }
    let a = genus0_coefficients(kmax);
    let lo = kmax / 2;
    let pts: Vec<(f64, f64)> =
        (lo..=kmax).map(|k| (k as f64, ln_rational(&a[k - 1]) + 3.5 * (k as f64).ln())).collect();
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    let icept = (sy - slope * sx) / m;
    Ok(AsymptoticFit { a_hat: slope.exp(), b_hat: icept.exp(), r_hat: -slope, window: (lo, kmax) })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceCheck {
    pub x: f64,
    pub converges: bool,
    /// `e^x A_{k+1}/A_k` over the last quarter of the computed range.
    pub tail_ratios: Vec<f64>,
    /// `A_K / A_{K−1}`.
    pub last_ratio: f64,
    /// `A_K / A_{K−1} · (K/(K−1))^{7/2}`, which removes the power-law factor.
    pub corrected_ratio: f64,
}

/// Ratio test for `Σ A_k e^{kx}` on the computed coefficients.
pub fn convergence_bound_check(kmax: usize, x: f64) -> Result<ConvergenceCheck> {
    if kmax < 5 {
        return Err(Error::Invalid("convergence check needs K >= 5".into()));
    }
    let a = genus0_coefficients(kmax);
    let ratio = |k: usize| to_f64(&(&a[k] / &a[k - 1]));
    let start = kmax - kmax / 4;
    let tail_ratios: Vec<f64> = (start..kmax).map(|k| ratio(k) * x.exp()).collect();
    let last_ratio = ratio(kmax - 1);
    let kf = kmax as f64;
    Ok(ConvergenceCheck {
        x,
        converges: tail_ratios.iter().all(|&r| r < 1.0),
        tail_ratios,
        last_ratio,
        corrected_ratio: last_ratio * (kf / (kf - 1.0)).powf(3.5),
    })
}

/// `½t₁²t₃ + ½t₁t₂² + Σ_{k≤K} A_k t₃^{3k−1} e^{kt₂}` with `q = (0,1,2)`,
/// `r = (0,3,0)`, `d = 2`.
pub fn truncated_potential(kmax: usize) -> Result<FrobeniusPotential> {
    let mut f = ExpPolynomial::poly(3, &[((1, 2), &[2, 0, 1]), ((1, 2), &[1, 2, 0])]);
    for (i, a) in genus0_coefficients(kmax).into_iter().enumerate() {
        let k = i + 1;
        f = f + ExpPolynomial::monomial(3, QuadScalar::rational(a), &[0, 0, (3 * k - 1) as i32], &[0, k as i64, 0]);
    }
    FrobeniusPotential::new(
        &format!("CP2({kmax})"),
        f,
        int(2),
        vec![int(0), int(1), int(2)],
        vec![int(0), int(R), int(0)],
    )
}

/// Combined table row for the CSV/JSON emitters.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub k: usize,
    #[serde(rename = "N_k")]
    pub n_k: String,
    #[serde(rename = "N1_k")]
    pub n1_k: String,
    #[serde(rename = "A_k")]
    pub a_k: String,
    pub ratio: String,
}

pub fn table(kmax: usize) -> Result<Vec<TableRow>> {
    let g0 = genus0_invariants(kmax)?;
    let g1 = elliptic_invariants(kmax)?;
    Ok(g0
        .iter()
        .zip(&g1)
        .enumerate()
        .map(|(i, (r0, r1))| TableRow {
            k: r0.k,
            n_k: r0.n_k.to_string(),
            n1_k: r1.n1_k.to_string(),
            a_k: format!("{:.17e}", to_f64(&r0.a_k)),
            ratio: if i == 0 { String::new() } else { format!("{:.17e}", to_f64(&(&r0.a_k / &g0[i - 1].a_k))) },
        })
        .collect())
}

pub fn write_csv<W: Write>(rows: &[TableRow], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r).map_err(|e| Error::Invalid(e.to_string()))?;
    }
    wr.flush().map_err(|e| Error::Invalid(e.to_string()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::{check_quasihomogeneity, check_wdvv1_mod};

    #[test]
    fn first_invariants() {
        let rows = genus0_invariants(6).unwrap();
        let n: Vec<String> = rows.iter().map(|r| r.n_k.to_string()).collect();
        assert_eq!(n, ["1", "1", "12", "620", "87304", "26312976"]);
        assert_eq!(rows[1].a_k, rat(1, 120));
    }

    #[test]
    fn pde_route_agrees() {
        assert_eq!(genus0_via_pde(10).unwrap(), genus0_coefficients(10));
    }

    #[test]
    fn residual_vanishes() {
        let phi = phi_series(12);
        assert!(ode_residual_series(&phi).unwrap().is_zero());
    }

    #[test]
    fn elliptic_first_values() {
        let e: Vec<String> = elliptic_invariants(5).unwrap().iter().map(|r| r.n1_k.to_string()).collect();
        assert_eq!(e, ["0", "0", "1", "225", "87192"]);
        let phi = phi_series(8);
        let a = psi_series(&phi, Division::Recursive).unwrap();
        let b = psi_series(&phi, Division::Newton).unwrap();
        assert_eq!(a, b);
        assert!(psi_defect(&phi, &a).unwrap().is_zero());
    }

    #[test]
    fn truncated_potential_checks() {
        let p = truncated_potential(4).unwrap();
        assert!(check_wdvv1_mod(&p, 1, 4).unwrap().pass);
        assert!(check_quasihomogeneity(&p).unwrap().report.pass);
        // the K = 1 term is t₃² e^{t₂} / 2!
        let m = crate::kernel::Monomial { powers: vec![0, 0, 2], exps: vec![0, 1, 0] };
        assert_eq!(p.f.coeff(&m), QuadScalar::rational(rat(1, 2)));
    }

    #[test]
    fn convergence_near_origin() {
        let c = convergence_bound_check(30, 0.0).unwrap();
        assert!(c.converges);
        let c = convergence_bound_check(30, (1.2f64).ln() - 0.01).unwrap();
        assert!(c.converges);
        assert!(convergence_bound_check(30, 2.5).map(|c| !c.converges).unwrap());
    }

    #[test]
    fn csv_columns() {
        let mut buf = vec![];
        write_csv(&table(4).unwrap(), &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("k,N_k,N1_k,A_k,ratio\n1,1,0,"));
        assert!(s.contains("\n4,620,225,"));
    }
}
