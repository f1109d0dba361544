//! Counts of rational and elliptic plane curves from the CP² potential, and
//! the growth rate of the genus-zero coefficients.

use frobenii::gw::{asymptotic_fit, convergence_bound_check, elliptic_invariants, genus0_invariants, genus0_via_pde};

fn main() -> frobenii::Result<()> {
    let rows = genus0_invariants(12)?;
    let ell = elliptic_invariants(12)?;
    println!("{:>3} {:>40} {:>40}", "k", "N_k", "N1_k");
    for (r, e) in rows.iter().zip(&ell) {
        println!("{:>3} {:>40} {:>40}", r.k, r.n_k, e.n1_k);
    }

    let pde = genus0_via_pde(12)?;
    let same = rows.iter().zip(&pde).all(|(r, a)| &r.a_k == a);
    println!("\nPDE route agrees through k = 12: {same}");

    let fit = asymptotic_fit(40)?;
    println!("fit over k in {:?}: a = {:.5}, b = {:.4}, R = {:.5}", fit.window, fit.a_hat, fit.b_hat, fit.r_hat);
    let c = convergence_bound_check(40, -2.0)?;
    println!("ratio test at x = -2: converges = {}, corrected ratio = {:.5}", c.converges, c.corrected_ratio);
    Ok(())
}
