//! Runs the exact WDVV and quasihomogeneity checks on every embedded
//! potential, then on a deliberately broken one.

use frobenii::frobenius::{catalog, catalog_names, check_quasihomogeneity, check_wdvv1};
use frobenii::kernel::ExpPolynomial;

fn main() -> frobenii::Result<()> {
    for name in catalog_names() {
        let p = catalog(name)?;
        let w = check_wdvv1(&p)?;
        let q = check_quasihomogeneity(&p)?;
        println!("{name:>6}  n={}  d={}  wdvv1={} ({} checked)  quasi={}", p.n(), p.d, w.pass, w.checked, q.report.pass);
    }

    let mut bad = catalog("A3")?;
    bad.f = bad.f + ExpPolynomial::poly(3, &[((1, 100), &[0, 0, 5])]);
    let w = check_wdvv1(&bad)?;
    println!("\nA3 with t3^5 nudged: pass={}, {} nonzero residuals", w.pass, w.failures.len());
    if let Some((label, r)) = w.failures.first() {
        println!("  first: {label} = {r}");
    }
    Ok(())
}
