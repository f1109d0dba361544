//! Roots of complex polynomials by the Aberth–Ehrlich iteration.

use crate::error::{Error, Result};
use num_complex::Complex64;

type C = Complex64;

/// Horner evaluation of `p` and `p'` (ascending coefficients).
fn horner(p: &[C], z: C) -> (C, C) {
    let mut v = C::new(0.0, 0.0);
    let mut d = C::new(0.0, 0.0);
    for &c in p.iter().rev() {
        d = d * z + v;
        v = v * z + c;
    }
    (v, d)
}

/// All roots of `p` (ascending coefficients, nonzero leading term).
pub fn poly_roots(p: &[C]) -> Result<Vec<C>> {
    let mut p = p.to_vec();
    while p.len() > 1 && p.last().is_some_and(|c| c.norm() == 0.0) {
        p.pop();
    }
    let n = p.len() - 1;
    if n == 0 {
        return Ok(vec![]);
    }
    let lead = p[n];
    let p: Vec<C> = p.iter().map(|c| c / lead).collect();
    // Factor out exact zero roots first.
    let zeros = p.iter().take_while(|c| c.norm() == 0.0).count();
    let q = &p[zeros..];
    let m = q.len() - 1;
    let mut roots = vec![C::new(0.0, 0.0); zeros];
    if m == 0 {
        return Ok(roots);
    }
    // Initial guesses on a circle of the Cauchy-bound radius, slightly rotated
    // so that symmetric spectra do not start on a symmetry axis.
    let radius = 1.0 + q[..m].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let r0 = radius.min(q[0].norm().powf(1.0 / m as f64).max(1e-3) * 2.0).max(1e-3);
    let mut z: Vec<C> = (0..m)
        .map(|k| C::from_polar(r0, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / m as f64 + 0.4))
        .collect();
    let mut converged = false;
    for _ in 0..2000 {
        let mut max_step: f64 = 0.0;
        for i in 0..m {
            let (v, d) = horner(q, z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let s: C = (0..m).filter(|&j| j != i).map(|j| C::new(1.0, 0.0) / (z[i] - z[j])).sum();
            let w = ratio / (C::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                max_step = max_step.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-15 {
            converged = true;
            break;
        }
    }
    if !converged && z.iter().any(|x| !x.is_finite()) {
        return Err(Error::NoConvergence);
    }
    // Newton polish on the full polynomial.
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (v, d) = horner(q, *zi);
            if d.norm() == 0.0 {
                break;
            }
            let step = v / d;
            if !step.is_finite() || step.norm() > 1e-6 * (1.0 + zi.norm()) {
                break;
            }
            *zi -= step;
        }
    }
    roots.extend(z);
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_roots() {
        // (z-1)(z-2)(z+3) = z^3 - 7z + 6
        let p = [6.0, -7.0, 0.0, 1.0].map(|x| C::new(x, 0.0));
        let mut r = poly_roots(&p).unwrap();
        r.sort_by(|a, b| a.re.total_cmp(&b.re));
        for (a, b) in r.iter().zip([-3.0, 1.0, 2.0]) {
            assert!((a - C::new(b, 0.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn zero_roots_and_double_root() {
        let p = [0.0, 0.0, 1.0, -2.0, 1.0].map(|x| C::new(x, 0.0));
        let r = poly_roots(&p).unwrap();
        assert_eq!(r.len(), 4);
        assert_eq!(r.iter().filter(|z| z.norm() == 0.0).count(), 2);
        assert!(r.iter().filter(|z| (**z - C::new(1.0, 0.0)).norm() < 1e-7).count() == 2);
    }
}
