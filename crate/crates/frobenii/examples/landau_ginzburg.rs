//! Frobenius structure on the versal deformation of x^{n+1}: residue metric,
//! flat coordinates, three-point functions and the potential.

use frobenii::frobenius::check_wdvv1;
use frobenii::singularity::{a_n_metric, a_n_structure};

fn main() -> frobenii::Result<()> {
    let eta = a_n_metric(3)?;
    println!("A3 metric in the deformation parameters:");
    for row in &eta {
        println!("  [{}]", row.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", "));
    }
    for n in 2..=5 {
        let st = a_n_structure(n)?;
        println!("\nA{n}: s(t) = {}", st.flat.s_of_t.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", "));
        println!("  F = {}", st.potential.f);
        println!("  WDVV: {}", check_wdvv1(&st.potential)?.pass);
    }
    Ok(())
}
