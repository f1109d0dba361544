//! Adaptive Dormand–Prince 5(4) integration of complex systems along a real
//! parameter.

use crate::error::{Error, Result};
use num_complex::Complex64;

type C = Complex64;

#[derive(Clone, Debug)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step; `None` picks `|s1 − s0| / 100`.
    pub h0: Option<f64>,
    pub hmin: f64,
    pub max_steps: usize,
    /// Keep every accepted point in the returned trace.
    pub keep_trace: bool,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { rtol: 1e-11, atol: 1e-13, h0: None, hmin: 1e-14, max_steps: 200_000, keep_trace: false }
    }
}

impl OdeOptions {
    pub fn with_tol(tol: f64) -> Self {
        OdeOptions { rtol: tol, atol: tol * 1e-2, ..Default::default() }
    }
}

#[derive(Clone, Debug)]
pub struct OdeSolution {
    pub s: f64,
    pub y: Vec<C>,
    pub steps: usize,
    pub rejected: usize,
    pub trace: Vec<(f64, Vec<C>)>,
}

const A21: f64 = 1.0 / 5.0;
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] = [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0];
const B5: [f64; 6] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const CS: [f64; 6] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0];

fn axpy(y: &[C], h: f64, ks: &[&[C]], w: &[f64]) -> Vec<C> {
    let mut out = y.to_vec();
    for (k, &wi) in ks.iter().zip(w) {
        if wi == 0.0 {
            continue;
        }
        for (o, &kv) in out.iter_mut().zip(k.iter()) {
            *o += kv * (h * wi);
        }
    }
    out
}

/// Integrates `y' = f(s, y)` from `s0` to `s1`. `guard` runs after every
/// accepted step and may abort the integration with an error.
pub fn integrate<F, G>(mut f: F, s0: f64, s1: f64, y0: &[C], opts: &OdeOptions, mut guard: G) -> Result<OdeSolution>
where
    F: FnMut(f64, &[C]) -> Result<Vec<C>>,
    G: FnMut(f64, &[C]) -> Result<()>,
{
    let dir = if s1 >= s0 { 1.0 } else { -1.0 };
    let span = (s1 - s0).abs();
    let mut sol = OdeSolution { s: s0, y: y0.to_vec(), steps: 0, rejected: 0, trace: vec![] };
    if opts.keep_trace {
        sol.trace.push((s0, y0.to_vec()));
    }
    if span == 0.0 {
        return Ok(sol);
    }
    let mut h = opts.h0.unwrap_or(span / 100.0).min(span);
    let mut k1 = f(s0, y0)?;
    while (s1 - sol.s) * dir > 0.0 {
        if sol.steps + sol.rejected > opts.max_steps {
            return Err(Error::NoConvergence);
        }
        let remaining = (s1 - sol.s).abs();
        let last = h >= remaining;
        if last {
            h = remaining;
        }
        let hs = h * dir;
        let s = sol.s;
        let y = &sol.y;
        let k2 = f(s + CS[1] * hs, &axpy(y, hs, &[&k1], &[A21]))?;
        let k3 = f(s + CS[2] * hs, &axpy(y, hs, &[&k1, &k2], &A3))?;
        let k4 = f(s + CS[3] * hs, &axpy(y, hs, &[&k1, &k2, &k3], &A4))?;
        let k5 = f(s + CS[4] * hs, &axpy(y, hs, &[&k1, &k2, &k3, &k4], &A5))?;
        let k6 = f(s + CS[5] * hs, &axpy(y, hs, &[&k1, &k2, &k3, &k4, &k5], &A6))?;
        let ynew = axpy(y, hs, &[&k1, &k2, &k3, &k4, &k5, &k6], &B5);
        let k7 = f(s + hs, &ynew)?;
        let ks: [&[C]; 7] = [&k1, &k2, &k3, &k4, &k5, &k6, &k7];
        let mut err: f64 = 0.0;
        for i in 0..y.len() {
            let e: C = ks.iter().zip(E).map(|(k, w)| k[i] * w).sum::<C>() * hs;
            let sc = opts.atol + opts.rtol * y[i].norm().max(ynew[i].norm());
            err = err.max(e.norm() / sc);
        }
        if !err.is_finite() {
            h *= 0.25;
            sol.rejected += 1;
            if h < opts.hmin {
                return Err(Error::StepUnderflow(sol.s));
            }
            continue;
        }
        if err <= 1.0 {
            sol.s = if last { s1 } else { s + hs };
            sol.y = ynew;
            sol.steps += 1;
            k1 = k7;
            guard(sol.s, &sol.y)?;
            if opts.keep_trace {
                sol.trace.push((sol.s, sol.y.clone()));
            }
        } else {
            sol.rejected += 1;
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= fac;
        if h < opts.hmin && (s1 - sol.s).abs() > opts.hmin {
            return Err(Error::StepUnderflow(sol.s));
        }
    }
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_and_rotation() {
        let opts = OdeOptions::default();
        let sol = integrate(
            |_, y| Ok(vec![y[0], y[1] * C::new(0.0, 1.0)]),
            0.0,
            2.0,
            &[C::new(1.0, 0.0), C::new(1.0, 0.0)],
            &opts,
            |_, _| Ok(()),
        )
        .unwrap();
        assert!((sol.y[0].re - 2f64.exp()).abs() < 1e-9);
        assert!((sol.y[1] - C::from_polar(1.0, 2.0)).norm() < 1e-9);
        let back =
            integrate(|_, y| Ok(vec![y[0]]), 1.0, 0.0, &[C::new(1.0, 0.0)], &opts, |_, _| Ok(())).unwrap();
        assert!((back.y[0].re - (-1f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn guard_aborts() {
        let r = integrate(
            |_, y| Ok(vec![y[0] * y[0]]),
            0.0,
            2.0,
            &[C::new(1.0, 0.0)],
            &OdeOptions::default(),
            |s, y| if y[0].norm() > 1e6 { Err(Error::SingularApproach(format!("blow-up near s={s}"))) } else { Ok(()) },
        );
        assert!(r.is_err());
    }
}
