//! Canonical coordinates, the matrix Ψ and the skew matrix V for CP² at a
//! generic point, followed by the Hamiltonians of the isomonodromic flow.

use frobenii::gw::truncated_potential;
use frobenii::kernel::matrix::eigenvalues;
use frobenii::semisimple::{canonical_coordinates, hamiltonians, poisson_commutation_check, IsoState};
use num_complex::Complex64;

fn main() -> frobenii::Result<()> {
    let p = truncated_potential(6)?;
    let t = [Complex64::new(0.0, 0.0), Complex64::new(-0.4, 0.0), Complex64::new(0.05, 0.0)];
    let frame = canonical_coordinates(&p, &t)?;
    println!("u = {:.6?}", frame.u);
    println!("orthogonality residual {:.2e}", frame.orthogonality_residual());
    println!("unit field residual    {:.2e}", frame.unit_field_residual()?);

    let v = frame.v()?;
    let mut spec = eigenvalues(&v)?;
    spec.sort_by(|a, b| a.re.total_cmp(&b.re));
    println!("spectrum of V ~ {:.6?}", spec);

    let st = IsoState::from_frame(&frame)?;
    println!("H = {:.6?}", hamiltonians(&st)?);
    println!("max |{{H_i, H_j}}| = {:.2e}", poisson_commutation_check(&st)?);
    println!("\nstate JSON:\n{}", st.to_json());
    Ok(())
}
