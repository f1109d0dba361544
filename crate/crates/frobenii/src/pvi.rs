//! The Painlevé-VI equation `PVI(μ)` attached to three-dimensional
//! semisimple Frobenius manifolds, its algebraic solutions, and the passage
//! between `y(x)` and the data `(q, p, k)`, `Ψ`.

use crate::error::{Error, Result};
use crate::kernel::matrix::ComplexMatrix;
use crate::kernel::ode::{integrate, OdeOptions};
use crate::kernel::rational::{int, rat, to_f64, Rational};
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;
use std::io::Write;

type C = Complex64;

/// Distance below which `x` or `y` counts as hitting a singular value.
pub const SINGULAR_MARGIN: f64 = 1e-6;

/// Dense univariate polynomial with rational coefficients (ascending).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<Rational>);

impl Poly {
    pub fn from_ints(c: &[i64]) -> Self {
        Poly(c.iter().map(|&x| int(x)).collect()).trim()
    }

    fn trim(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn one() -> Self {
        Poly(vec![Rational::one()])
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.0.is_empty() || o.0.is_empty() {
            return Poly(vec![]);
        }
        let mut c = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly(c).trim()
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    pub fn deriv(&self) -> Poly {
        Poly(self.0.iter().enumerate().skip(1).map(|(k, c)| c * int(k as i64)).collect()).trim()
    }

    /// `p(s²)`.
    pub fn compose_square(&self) -> Poly {
        let mut c = vec![Rational::zero(); (2 * self.0.len()).saturating_sub(1)];
        for (k, a) in self.0.iter().enumerate() {
            c[2 * k] = a.clone();
        }
        Poly(c).trim()
    }

    pub fn eval(&self, s: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * s + c)
    }

    pub fn eval_c(&self, s: C) -> C {
        self.0.iter().rev().fold(C::new(0.0, 0.0), |acc, c| acc * s + to_f64(c))
    }
}

fn prod(fs: &[(Poly, u32)]) -> Poly {
    fs.iter().fold(Poly::one(), |acc, (p, e)| acc.mul(&p.pow(*e)))
}

/// Quotient `num/den` of polynomials in the parameter `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFn {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFn {
    fn new(num: Poly, den: Poly) -> Self {
        RationalFn { num, den }
    }

    pub fn eval(&self, s: &Rational) -> Result<Rational> {
        let d = self.den.eval(s);
        if d.is_zero() {
            return Err(Error::SingularApproach(format!("pole of the parametrization at s = {s}")));
        }
        Ok(self.num.eval(s) / d)
    }

    /// Value and first two `s`-derivatives, exactly.
    pub fn jet(&self, s: &Rational) -> Result<[Rational; 3]> {
        let (n, d) = (self.num.eval(s), self.den.eval(s));
        if d.is_zero() {
            return Err(Error::SingularApproach(format!("pole of the parametrization at s = {s}")));
        }
        let (n1, d1) = (self.num.deriv().eval(s), self.den.deriv().eval(s));
        let (n2, d2) = (self.num.deriv().deriv().eval(s), self.den.deriv().deriv().eval(s));
        let f = &n / &d;
        let f1 = (&n1 - &f * &d1) / &d;
        let f2 = (&n2 - &f * &d2 - &f1 * &d1 * int(2)) / &d;
        Ok([f, f1, f2])
    }

    pub fn jet_c(&self, s: C) -> Result<[C; 3]> {
        let (n, d) = (self.num.eval_c(s), self.den.eval_c(s));
        if d.norm() == 0.0 {
            return Err(Error::SingularApproach(format!("pole of the parametrization at s = {s}")));
        }
        let (n1, d1) = (self.num.deriv().eval_c(s), self.den.deriv().eval_c(s));
        let (n2, d2) = (self.num.deriv().deriv().eval_c(s), self.den.deriv().deriv().eval_c(s));
        let f = n / d;
        let f1 = (n1 - f * d1) / d;
        let f2 = (n2 - f * d2 - f1 * d1 * 2.0) / d;
        Ok([f, f1, f2])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    A3,
    B3,
    H3,
}

impl Family {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "A3" => Ok(Family::A3),
            "B3" => Ok(Family::B3),
            "H3" => Ok(Family::H3),
            _ => Err(Error::UnknownName(s.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::A3 => "A3",
            Family::B3 => "B3",
            Family::H3 => "H3",
        }
    }

    /// `μ₁` for the family.
    pub fn mu(&self) -> Rational {
        match self {
            Family::A3 => rat(-1, 4),
            Family::B3 => rat(-1, 3),
            Family::H3 => rat(-2, 5),
        }
    }

    pub fn all() -> [Family; 3] {
        [Family::A3, Family::B3, Family::H3]
    }
}

/// A parametrized curve `s ↦ (x(s), y(s))`.
#[derive(Clone, Debug, PartialEq)]
pub struct Parametrization {
    pub x: RationalFn,
    pub y: RationalFn,
}

fn p(c: &[i64]) -> Poly {
    Poly::from_ints(c)
}

/// `P(z)` for the icosahedral family, with the `z⁴` coefficient given.
fn h3_p(z4: i64) -> Poly {
    p(&[49, -2133, 34308, -259044, z4, -7616646, 13758708, 5963724, -719271, 42483])
}

fn h3_parametrization(z4: i64) -> Parametrization {
    let (sm1, s_p1) = (p(&[-1, 1]), p(&[1, 1]));
    let (t3p1, t3m1) = (p(&[1, 3]), p(&[-1, 3]));
    let q_plus = p(&[-1, 4, 1]);
    let q_minus = p(&[-1, -4, 1]);
    let big = p(&[7, 0, -108, 0, 314, 0, -588, 0, 119]);
    Parametrization {
        y: RationalFn::new(
            prod(&[(sm1.clone(), 2), (t3p1.clone(), 2), (q_plus.clone(), 1), (big, 2)]),
            prod(&[(s_p1.clone(), 3), (t3m1.clone(), 1), (h3_p(z4).compose_square(), 1)]),
        ),
        x: RationalFn::new(
            prod(&[(sm1, 5), (t3p1, 3), (q_plus, 1)]),
            prod(&[(s_p1, 5), (t3m1, 3), (q_minus, 1)]),
        ),
    }
}

/// The parametrization used for computation (see [`printed_solution`] for
/// the forms as typeset).
pub fn parametrization(f: Family) -> Parametrization {
    match f {
        Family::A3 => Parametrization {
            y: RationalFn::new(
                prod(&[(p(&[-1, 1]), 2), (p(&[1, 3]), 1), (p(&[-5, 0, 9]), 2)]),
                prod(&[(p(&[1, 1]), 1), (p(&[25, 0, -207, 0, 1539, 0, 243]), 1)]),
            ),
            x: RationalFn::new(prod(&[(p(&[1, -1]), 3), (p(&[1, 3]), 1)]), prod(&[(p(&[1, 1]), 3), (p(&[1, -3]), 1)])),
        },
        Family::B3 => Parametrization {
            y: RationalFn::new(
                prod(&[(p(&[2, -1]), 1), (p(&[1, 1]), 1), (p(&[-3, 0, 1]), 2)]),
                prod(&[(p(&[2, 1]), 1), (p(&[9, 0, -10, 0, 5]), 1)]),
            ),
            x: RationalFn::new(prod(&[(p(&[2, -1]), 2), (p(&[1, 1]), 1)]), prod(&[(p(&[2, 1]), 2), (p(&[1, -1]), 1)])),
        },
        Family::H3 => h3_parametrization(1_642_878),
    }
}

/// The three parametric forms exactly as typeset.
pub fn printed_parametrization(f: Family) -> Parametrization {
    match f {
        Family::A3 => Parametrization {
            x: RationalFn::new(prod(&[(p(&[-1, 1]), 3), (p(&[1, 3]), 1)]), prod(&[(p(&[1, 1]), 3), (p(&[1, -3]), 1)])),
            ..parametrization(Family::A3)
        },
        Family::B3 => Parametrization {
            y: RationalFn::new(
                prod(&[(p(&[2, -1]), 2), (p(&[1, 1]), 1)]),
                prod(&[(p(&[2, 1]), 1), (p(&[9, 0, -10, 0, 5]), 1)]),
            ),
            ..parametrization(Family::B3)
        },
        Family::H3 => h3_parametrization(16_422_878),
    }
}

/// `(x, y)` at a rational parameter.
pub fn algebraic_solution(f: Family, s: &Rational) -> Result<(Rational, Rational)> {
    let c = parametrization(f);
    Ok((c.x.eval(s)?, c.y.eval(s)?))
}

pub fn printed_solution(f: Family, s: &Rational) -> Result<(Rational, Rational)> {
    let c = printed_parametrization(f);
    Ok((c.x.eval(s)?, c.y.eval(s)?))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PviPoint {
    pub mu1: Rational,
    pub x: C,
    pub y: C,
    pub yprime: C,
}

fn check_margins(x: C, y: C) -> Result<()> {
    for (v, what) in [(x, "x = 0"), (x - 1.0, "x = 1"), (y, "y = 0"), (y - 1.0, "y = 1"), (y - x, "y = x")] {
        if v.norm() < SINGULAR_MARGIN {
            return Err(Error::SingularApproach(what.to_string()));
        }
    }
    Ok(())
}

/// Right-hand side `y″` of `PVI(μ)`.
pub fn pvi_rhs(pt: &PviPoint) -> Result<C> {
    let (x, y, yp) = (pt.x, pt.y, pt.yprime);
    check_margins(x, y)?;
    let m = to_f64(&(int(2) * &pt.mu1 - int(1)));
    let first = (1.0 / y + 1.0 / (y - 1.0) + 1.0 / (y - x)) * 0.5;
    let second = 1.0 / x + 1.0 / (x - 1.0) + 1.0 / (y - x);
    let third = y * (y - 1.0) * (y - x) / (x * x * (x - 1.0) * (x - 1.0)) * 0.5 * (m * m + x * (x - 1.0) / ((y - x) * (y - x)));
    Ok(first * yp * yp - second * yp + third)
}

/// `y″ − rhs` for exact data.
pub fn pvi_residual_exact(mu1: &Rational, x: &Rational, y: &Rational, y1: &Rational, y2: &Rational) -> Result<Rational> {
    let one = Rational::one();
    let half = rat(1, 2);
    for v in [x.clone(), x - &one, y.clone(), y - &one, y - x] {
        if v.is_zero() {
            return Err(Error::SingularApproach("exact point on a singular line".into()));
        }
    }
    let m = int(2) * mu1 - &one;
    let first = (one.clone() / y + one.clone() / (y - &one) + one.clone() / (y - x)) * &half;
    let second = one.clone() / x + one.clone() / (x - &one) + one.clone() / (y - x);
    let yx = y - x;
    let third = y * (y - &one) * &yx / (x * x * (x - &one) * (x - &one)) * &half * (&m * &m + x * (x - &one) / (&yx * &yx));
    Ok(y2 - (first * y1 * y1 - second * y1 + third))
}

/// `(x, y, dy/dx, d²y/dx²)` on a curve at rational `s`, exactly.
pub fn curve_jet_exact(c: &Parametrization, s: &Rational) -> Result<[Rational; 4]> {
    let [x, x1, x2] = c.x.jet(s)?;
    let [y, y1, y2] = c.y.jet(s)?;
    if x1.is_zero() {
        return Err(Error::SingularApproach(format!("dx/ds = 0 at s = {s}")));
    }
    let dy = &y1 / &x1;
    let d2y = (&y2 * &x1 - &y1 * &x2) / (&x1 * &x1 * &x1);
    Ok([x, y, dy, d2y])
}

pub fn curve_jet(c: &Parametrization, s: C) -> Result<[C; 4]> {
    let [x, x1, x2] = c.x.jet_c(s)?;
    let [y, y1, y2] = c.y.jet_c(s)?;
    if x1.norm() < 1e-300 {
        return Err(Error::SingularApproach(format!("dx/ds = 0 at s = {s}")));
    }
    Ok([x, y, y1 / x1, (y2 * x1 - y1 * x2) / (x1 * x1 * x1)])
}

/// Exact `PVI(μ)` residual of a curve at rational `s`.
pub fn exact_residual(c: &Parametrization, mu1: &Rational, s: &Rational) -> Result<Rational> {
    let [x, y, y1, y2] = curve_jet_exact(c, s)?;
    pvi_residual_exact(mu1, &x, &y, &y1, &y2)
}

/// `|y″ − rhs| / (1 + |y″|)` in floating point.
fn residual_at(c: &Parametrization, mu1: &Rational, s: C) -> Result<(C, C, f64)> {
    let [x, y, y1, y2] = curve_jet(c, s)?;
    let r = pvi_rhs(&PviPoint { mu1: mu1.clone(), x, y, yprime: y1 })?;
    Ok((x, y, (y2 - r).norm() / (1.0 + y2.norm())))
}

/// Sample parameters `s_k = 1/10 + 4k/(5N)` in `[1/10, 9/10]`, dropping any
/// point where a denominator vanishes exactly or a singular line is too near.
pub fn sample_parameters(c: &Parametrization, count: usize) -> Vec<Rational> {
    let n = count.max(1) as i64;
    let mut out = Vec::with_capacity(count);
    let mut k = 0;
    while out.len() < count && k < 4 * n {
        let s = rat(1, 10) + rat(4 * k, 5 * n);
        k += 1;
        let ok = curve_jet_exact(c, &s).ok().is_some_and(|[x, y, _, _]| {
            let (xf, yf) = (to_f64(&x), to_f64(&y));
            [xf, xf - 1.0, yf, yf - 1.0, yf - xf].iter().all(|v| v.abs() > 1e-4)
        });
        if ok {
            out.push(s);
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub family: String,
    pub mu: String,
    pub samples: usize,
    pub max_residual: f64,
    #[serde(skip)]
    pub trace: Vec<(f64, C, C, f64)>,
}

/// Maximum relative `PVI(μ)` residual over `sample_count` points of the curve.
pub fn verify_algebraic(f: Family, sample_count: usize, mu1: Option<&Rational>) -> Result<VerifyReport> {
    verify_curve(&parametrization(f), f.name(), sample_count, mu1.cloned().unwrap_or_else(|| f.mu()))
}

pub fn verify_curve(c: &Parametrization, name: &str, sample_count: usize, mu1: Rational) -> Result<VerifyReport> {
    let ss = sample_parameters(c, sample_count);
    if ss.is_empty() {
        return Err(Error::SingularApproach("every sample hits a pole".into()));
    }
    let mut trace = Vec::with_capacity(ss.len());
    let mut worst: f64 = 0.0;
    for s in &ss {
        let sf = to_f64(s);
        let (x, y, r) = residual_at(c, &mu1, C::new(sf, 0.0))?;
        worst = worst.max(r);
        trace.push((sf, x, y, r));
    }
    Ok(VerifyReport { family: name.into(), mu: crate::kernel::rational::fmt_rational(&mu1), samples: ss.len(), max_residual: worst, trace })
}

/// CSV with columns `s, x, y, residual` (real parts).
pub fn write_trace_csv<W: Write>(r: &VerifyReport, w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["s", "x", "y", "residual"]).map_err(|e| Error::Invalid(e.to_string()))?;
    for (s, x, y, res) in &r.trace {
        wr.write_record([s.to_string(), x.re.to_string(), y.re.to_string(), res.to_string()])
            .map_err(|e| Error::Invalid(e.to_string()))?;
    }
    wr.flush().map_err(|e| Error::Invalid(e.to_string()))
}

#[derive(Clone, Debug)]
pub struct PviTrace {
    pub end: PviPoint,
    pub points: Vec<(C, C, C)>,
    pub steps: usize,
}

/// Integrates `PVI(μ)` along the segment from `pt0.x` to `x1`.
pub fn pvi_integrate(pt0: &PviPoint, x1: C, tol: f64) -> Result<PviTrace> {
    let x0 = pt0.x;
    let dx = x1 - x0;
    if dx.norm() == 0.0 {
        return Ok(PviTrace { end: pt0.clone(), points: vec![(x0, pt0.y, pt0.yprime)], steps: 0 });
    }
    for a in [0.0, 1.0] {
        let a = C::new(a, 0.0);
        let t = (-((x0 - a).conj() * dx).re / dx.norm_sqr()).clamp(0.0, 1.0);
        if (x0 + dx * t - a).norm() < SINGULAR_MARGIN {
            return Err(Error::SingularApproach(format!("path passes through x = {}", a.re)));
        }
    }
    let mu1 = pt0.mu1.clone();
    let rhs = |t: f64, y: &[C]| -> Result<Vec<C>> {
        let x = x0 + dx * t;
        let ypp = pvi_rhs(&PviPoint { mu1: mu1.clone(), x, y: y[0], yprime: y[1] })?;
        Ok(vec![y[1] * dx, ypp * dx])
    };
    let guard = |t: f64, y: &[C]| check_margins(x0 + dx * t, y[0]);
    let opts = OdeOptions { keep_trace: true, ..OdeOptions::with_tol(tol) };
    let sol = integrate(rhs, 0.0, 1.0, &[pt0.y, pt0.yprime], &opts, guard)?;
    let points = sol.trace.iter().map(|(t, y)| (x0 + dx * *t, y[0], y[1])).collect();
    Ok(PviTrace { end: PviPoint { mu1: pt0.mu1.clone(), x: x1, y: sol.y[0], yprime: sol.y[1] }, points, steps: sol.steps })
}

/// Integrates along the polyline `pt0.x → waypoints…`, e.g. to pass
/// around a point where the solution meets `y ∈ {0, 1, x}`.
pub fn pvi_integrate_path(pt0: &PviPoint, waypoints: &[C], tol: f64) -> Result<PviTrace> {
    let mut out = PviTrace { end: pt0.clone(), points: vec![(pt0.x, pt0.y, pt0.yprime)], steps: 0 };
    for &w in waypoints {
        let seg = pvi_integrate(&out.end, w, tol)?;
        out.points.extend(seg.points.into_iter().skip(1));
        out.steps += seg.steps;
        out.end = seg.end;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct QpkState {
    pub u: [C; 3],
    pub q: C,
    pub p: C,
    pub logk: C,
}

/// `P(λ) = Π (λ − u_i)`.
pub fn p_poly(u: &[C; 3], l: C) -> C {
    (l - u[0]) * (l - u[1]) * (l - u[2])
}

/// `P′(λ)`.
pub fn p_prime(u: &[C; 3], l: C) -> C {
    (l - u[1]) * (l - u[2]) + (l - u[0]) * (l - u[2]) + (l - u[0]) * (l - u[1])
}

fn check_u(u: &[C; 3]) -> Result<()> {
    let g = crate::semisimple::min_gap(u);
    if g < SINGULAR_MARGIN {
        return Err(Error::Collision(g));
    }
    Ok(())
}

/// `x = (u₃ − u₁)/(u₂ − u₁)`.
pub fn invariant_x(u: &[C; 3]) -> C {
    (u[2] - u[0]) / (u[1] - u[0])
}

pub fn y_to_qp(y: C, yprime: C, x: C, u: [C; 3]) -> Result<QpkState> {
    check_u(&u)?;
    if (invariant_x(&u) - x).norm() > 1e-9 * (1.0 + x.norm()) {
        return Err(Error::Invalid("x does not match (u3 - u1)/(u2 - u1)".into()));
    }
    let q = (u[1] - u[0]) * y + u[0];
    let pq = p_poly(&u, q);
    if pq.norm() < 1e-300 {
        return Err(Error::SingularApproach("P(q) = 0".into()));
    }
    let p = p_prime(&u, u[2]) / pq * yprime * 0.5 - 0.5 / (q - u[2]);
    Ok(QpkState { u, q, p, logk: C::new(0.0, 0.0) })
}

/// Inverse of [`y_to_qp`]: `(x, y, y′)`.
pub fn qp_to_y(st: &QpkState) -> (C, C, C) {
    let u = &st.u;
    let y = (st.q - u[0]) / (u[1] - u[0]);
    let yp = (st.p + 0.5 / (st.q - u[2])) * 2.0 * p_poly(u, st.q) / p_prime(u, u[2]);
    (invariant_x(u), y, yp)
}

/// `∂_i q`, `∂_i p`, `∂_i log k` from the compatibility equations.
pub fn qp_derivatives(st: &QpkState, mu1: f64, i: usize) -> (C, C, C) {
    let u = &st.u;
    let (q, p) = (st.q, st.p);
    let ppi = p_prime(u, u[i]);
    let su: C = u.iter().sum();
    let dq = p_poly(u, q) / ppi * (p * 2.0 + 1.0 / (q - u[i]));
    let dp = -(p_prime(u, q) * p * p + (q * 2.0 + u[i] - su) * p + mu1 * (1.0 - mu1)) / ppi;
    let dlogk = (q - u[i]) * (2.0 * mu1 - 1.0) / ppi;
    (dq, dp, dlogk)
}

/// A solution `y(x)` given through a parametrized curve, inverted by Newton
/// iteration near a reference parameter.
#[derive(Clone, Debug)]
pub struct Curve {
    pub param: Parametrization,
    pub s_ref: C,
}

impl Curve {
    pub fn new(f: Family, s_ref: f64) -> Self {
        Curve { param: parametrization(f), s_ref: C::new(s_ref, 0.0) }
    }

    /// `(y, y′)` at `x`.
    pub fn at_x(&self, x: C) -> Result<(C, C)> {
        let mut s = self.s_ref;
        for _ in 0..60 {
            let [xs, x1, _] = self.param.x.jet_c(s)?;
            let step = (xs - x) / x1;
            s -= step;
            if step.norm() < 1e-15 * (1.0 + s.norm()) {
                break;
            }
        }
        let [xs, y, y1, _] = curve_jet(&self.param, s)?;
        if (xs - x).norm() > 1e-10 * (1.0 + x.norm()) {
            return Err(Error::NoConvergence);
        }
        Ok((y, y1))
    }

    /// `(q, p)` at `u` through `y(x(u))`.
    pub fn qp_at(&self, u: [C; 3]) -> Result<QpkState> {
        let x = invariant_x(&u);
        let (y, y1) = self.at_x(x)?;
        y_to_qp(y, y1, x, u)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FlowCheck {
    /// `max_i |∂_i q (finite difference) − rhs|`.
    pub q_mismatch: f64,
    pub p_mismatch: f64,
}

/// Central differences of `(q, p)` in every `u_i` against the compatibility
/// equations.
pub fn qp_flow_check(curve: &Curve, u: [C; 3], mu1: &Rational, h: f64) -> Result<FlowCheck> {
    check_u(&u)?;
    let st = curve.qp_at(u)?;
    let m = to_f64(mu1);
    let mut out = FlowCheck { q_mismatch: 0.0, p_mismatch: 0.0 };
    for i in 0..3 {
        let mut up = u;
        let mut dn = u;
        up[i] += h;
        dn[i] -= h;
        let (a, b) = (curve.qp_at(up)?, curve.qp_at(dn)?);
        let (dq, dp, _) = qp_derivatives(&st, m, i);
        let fq = (a.q - b.q) / (2.0 * h);
        let fp = (a.p - b.p) / (2.0 * h);
        out.q_mismatch = out.q_mismatch.max((fq - dq).norm() / (1.0 + dq.norm()));
        out.p_mismatch = out.p_mismatch.max((fp - dp).norm() / (1.0 + dp.norm()));
    }
    Ok(out)
}

/// `log k` at the end of the segment `u0 → u1`, with `log k = 0` at `u0`.
pub fn integrate_logk(curve: &Curve, u0: [C; 3], u1: [C; 3], mu1: &Rational, tol: f64) -> Result<C> {
    let m = to_f64(mu1);
    let du: Vec<C> = (0..3).map(|i| u1[i] - u0[i]).collect();
    let rhs = |t: f64, _y: &[C]| -> Result<Vec<C>> {
        let u = [u0[0] + du[0] * t, u0[1] + du[1] * t, u0[2] + du[2] * t];
        let st = curve.qp_at(u)?;
        let d: C = (0..3).map(|i| qp_derivatives(&st, m, i).2 * du[i]).sum();
        Ok(vec![d])
    };
    let sol = integrate(rhs, 0.0, 1.0, &[C::new(0.0, 0.0)], &OdeOptions::with_tol(tol), |_, _| Ok(()))?;
    Ok(sol.y[0])
}

/// `Ψ` from `(q, p, k)`: columns 1 and 3 from the squares and products, and
/// column 2 as `+i` times the cross product of columns 1 and 3.
pub fn reconstruct_psi(st: &QpkState, mu1: &Rational) -> Result<ComplexMatrix> {
    let u = &st.u;
    check_u(u)?;
    let m = to_f64(mu1);
    if m == 0.0 {
        return Err(Error::Invalid("mu1 = 0".into()));
    }
    let k = st.logk.exp();
    let (q, p) = (st.q, st.p);
    let pq = p_poly(u, q);
    let su: C = u.iter().sum();
    let mut psi = ComplexMatrix::zero(3);
    for i in 0..3 {
        let ppi = p_prime(u, u[i]);
        let br = pq * p * p + pq / (q - u[i]) * p * (2.0 * m) + (q + u[i] * 2.0 - su) * (m * m);
        let prod13 = -(q - u[i]) / (ppi * 2.0 * m * m) * br;
        let sq3 = -k * (q - u[i]) / ppi;
        let sq1 = -(q - u[i]) / (k * ppi * 4.0 * m.powi(4)) * br * br;
        let scale = (sq1.norm() * sq3.norm()).max(prod13.norm_sqr()).max(1e-300);
        if (sq1 * sq3 - prod13 * prod13).norm() > 1e-8 * scale {
            return Err(Error::Invalid("inconsistent squares in the reconstruction".into()));
        }
        let (psi1, psi3) = if sq3.norm() > 0.0 {
            let r3 = sq3.sqrt();
            (prod13 / r3, r3)
        } else {
            (sq1.sqrt(), C::new(0.0, 0.0))
        };
        psi[(i, 0)] = psi1;
        psi[(i, 2)] = psi3;
    }
    let a = |i: usize, c: usize| psi[(i, c)];
    let cross = [
        a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0),
        a(0, 2) * a(2, 0) - a(0, 0) * a(2, 2),
        a(0, 0) * a(1, 2) - a(0, 2) * a(1, 0),
    ];
    for (i, c) in cross.iter().enumerate() {
        psi[(i, 1)] = C::new(0.0, 1.0) * c;
    }
    Ok(psi)
}

/// `V = Ψ diag(μ₁, 0, −μ₁) Ψ⁻¹`.
pub fn v_from_psi(psi: &ComplexMatrix, mu1: &Rational) -> Result<ComplexMatrix> {
    let m = to_f64(mu1);
    let mu = ComplexMatrix::diag(&[C::new(m, 0.0), C::new(0.0, 0.0), C::new(-m, 0.0)]);
    Ok(psi.mul(&mu).mul(&psi.inverse()?))
}
