//! Reflections built from the CP² Stokes matrix and the identities of the
//! monodromy group they generate.

use frobenii::stokes::{cp2_modular_check, cp2_monodromy_matrices, gram_and_reflections, StokesMatrix};

fn main() -> frobenii::Result<()> {
    let s = StokesMatrix::from_upper_ints(3, &[3, -3, -3]);
    let r = gram_and_reflections(&s)?;
    println!("Gram matrix S + S^T:\n{}", r.gram);
    for (i, m) in r.r.iter().enumerate() {
        println!("R{}:\n{}", i + 1, m);
    }
    let (_, t) = cp2_monodromy_matrices();
    println!("T:\n{t}");
    let report = cp2_modular_check()?;
    println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    println!("all identities hold: {}", report.pass());
    Ok(())
}
