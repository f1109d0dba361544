//! Grading data attached to a potential: the monodromy data at the origin,
//! the intersection form and the deformed flat coordinates.

use frobenii::frobenius::{catalog, deformed_flat_coords};
use frobenii::gw::truncated_potential;
use num_complex::Complex64;

fn main() -> frobenii::Result<()> {
    let cp2 = truncated_potential(4)?;
    let m = cp2.origin_monodromy()?;
    println!("CP2: mu = {:?}", m.mu.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    println!("R1 =\n{}", m.r1);
    println!("R1 respects grading: {}", m.r1_respects_grading());

    let a3 = catalog("A3")?;
    let g = a3.intersection_form()?;
    println!("\nA3 intersection form:");
    for a in 0..3 {
        let row: Vec<String> = (0..3).map(|b| g.entry(a, b).to_string()).collect();
        println!("  [{}]", row.join(", "));
    }
    println!("det g = {}", g.det()?);
    let t = [Complex64::new(0.1, 0.0), Complex64::new(0.2, 0.0), Complex64::new(0.3, 0.0)];
    println!("g at t = (0.1, 0.2, 0.3): det = {:.6}", g.eval(&t).det());

    let h = deformed_flat_coords(&a3, 2)?;
    for (a, hs) in h.h.iter().enumerate() {
        println!("h[{a}] up to z^2: {}", hs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" | "));
    }
    Ok(())
}
