//! Braid group action on Stokes matrices: Markoff triples, finite orbits of
//! Coxeter matrices and the unipotency spectrum.

use frobenii::stokes::{
    braid_apply, canonical_form, orbit, stokes_catalog, stokes_names, unipotency_spectrum, BraidWord, Orbit,
};

fn main() -> frobenii::Result<()> {
    let cp2 = stokes_catalog("CP2")?;
    let mut cur = cp2.clone();
    println!("(3,3,3) under sigma1 sigma2^-1:");
    for _ in 0..5 {
        cur = braid_apply(&cur, &BraidWord::new(vec![1, -2]))?;
        let t = cur.upper().iter().map(|x| x.to_string()).collect::<Vec<_>>();
        println!("  {}", t.join(", "));
    }
    let one = canonical_form(&braid_apply(&cp2, &BraidWord::parse("1")?)?);
    println!("sigma1 (3,3,3) up to signs: {:?}", one.upper().iter().map(|x| x.to_string()).collect::<Vec<_>>());
    println!("S^T S^-1 char poly for CP2: {:?}", unipotency_spectrum(&cp2)?.char_poly.iter().map(|x| x.to_string()).collect::<Vec<_>>());

    println!("\norbit sizes modulo signs:");
    for name in stokes_names() {
        let s = stokes_catalog(name)?;
        match orbit(&s, 20_000) {
            Orbit::Finite(v) => println!("  {name:>12}: {}", v.len()),
            Orbit::Exceeded { visited, frontier } => {
                println!("  {name:>12}: more than 20000 (visited {visited}, frontier {frontier})")
            }
        }
    }
    Ok(())
}
