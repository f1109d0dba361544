//! The three algebraic Painlevé VI solutions: exact and sampled residuals,
//! a negative control, numerical integration and the passage to (q, p, Ψ).

use frobenii::kernel::rational::rat;
use frobenii::pvi::{
    curve_jet, exact_residual, parametrization, pvi_integrate_path, qp_flow_check, reconstruct_psi,
    verify_algebraic, Curve, Family, PviPoint,
};
use num_complex::Complex64;

fn main() -> frobenii::Result<()> {
    for f in Family::all() {
        let r = verify_algebraic(f, 60, None)?;
        let exact = exact_residual(&parametrization(f), &f.mu(), &rat(2, 7))?;
        println!("{}: mu = {}, {} samples, max residual {:.2e}, exact residual at s = 2/7: {}", r.family, r.mu, r.samples, r.max_residual, exact);
    }
    let neg = verify_algebraic(Family::B3, 60, Some(&rat(-1, 4)))?;
    println!("B3 with mu = -1/4: max residual {:.2e}", neg.max_residual);

    // the B3 curve touches y = 1 at s = sqrt(2) - 1, so go around it in complex x
    let c = parametrization(Family::B3);
    let [x0, y0, yp0, _] = curve_jet(&c, Complex64::new(0.4, 0.0))?;
    let [x1, y1, _, _] = curve_jet(&c, Complex64::new(0.6, 0.0))?;
    let pt = PviPoint { mu1: Family::B3.mu(), x: x0, y: y0, yprime: yp0 };
    let mid = (x0 + x1) * 0.5 + Complex64::new(0.0, 0.05);
    let tr = pvi_integrate_path(&pt, &[mid, x1], 1e-12)?;
    println!("integrated y({:.6}) = {:.12}, curve gives {:.12}", x1.re, tr.end.y, y1);

    let curve = Curve::new(Family::B3, 0.7);
    let x = c.x.jet_c(Complex64::new(0.7, 0.0))?[0];
    let u = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), x];
    let fc = qp_flow_check(&curve, u, &Family::B3.mu(), 1e-5)?;
    println!("(q, p) flow check: {:.2e} {:.2e}", fc.q_mismatch, fc.p_mismatch);
    let psi = reconstruct_psi(&curve.qp_at(u)?, &Family::B3.mu())?;
    println!("Psi^T Psi =\n{:.6?}", psi.transpose().mul(&psi).rows());
    Ok(())
}
