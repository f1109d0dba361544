//! Transports V along a closed loop in canonical coordinates and reports the
//! drift of its spectrum and the change of log τ.

use frobenii::kernel::matrix::ComplexMatrix;
use frobenii::semisimple::{integrate_isomonodromic, IsoState};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn main() -> frobenii::Result<()> {
    let mut v = ComplexMatrix::zero(3);
    for (a, b, x) in [(0, 1, 0.3), (0, 2, -0.7), (1, 2, 0.45)] {
        v[(a, b)] = c(x, 0.1);
        v[(b, a)] = -c(x, 0.1);
    }
    let u0 = vec![c(0.0, 0.0), c(1.0, 0.2), c(-0.4, 1.3)];
    let state = IsoState::new(u0.clone(), v)?;

    let shift = |k: usize, z: Complex64| {
        let mut u = u0.clone();
        u[k] += z;
        u
    };
    let around = vec![shift(1, c(0.3, 0.0)), shift(1, c(0.3, 0.3)), shift(1, c(0.0, 0.3)), u0.clone()];
    let r = integrate_isomonodromic(&state, &around, 1e-11)?;
    println!("closed loop: steps = {}, spectral drift = {:.2e}, skew = {:.2e}", r.diagnostics.steps, r.diagnostics.max_spectral_drift, r.diagnostics.max_skew);
    println!("  delta log tau = {:.3e}", r.log_tau.norm());
    println!("  |V_end - V_start| = {:.2e}", r.state.v.sub(&state.v).max_abs());

    let open = vec![shift(2, c(0.5, -0.5))];
    let r = integrate_isomonodromic(&state, &open, 1e-11)?;
    println!("open segment: delta log tau = {:.6}", r.log_tau);

    let blocked = vec![vec![c(0.0, 0.0), c(1.0, 0.2), c(1.0, 0.2)]];
    match integrate_isomonodromic(&state, &blocked, 1e-11) {
        Err(e) => println!("colliding path refused: {e}"),
        Ok(_) => println!("colliding path unexpectedly accepted"),
    }
    Ok(())
}
