//! Complex numbers as `[re, im]` pairs in JSON.

use super::matrix::ComplexMatrix;
use num_complex::Complex64;

pub type Pair = [f64; 2];

pub fn pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

pub fn unpair(p: &Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

pub fn vec_to_pairs(v: &[Complex64]) -> Vec<Pair> {
    v.iter().map(|&z| pair(z)).collect()
}

pub fn pairs_to_vec(v: &[Pair]) -> Vec<Complex64> {
    v.iter().map(unpair).collect()
}

pub fn matrix_to_pairs(m: &ComplexMatrix) -> Vec<Vec<Pair>> {
    m.rows().iter().map(|r| vec_to_pairs(r)).collect()
}

pub fn pairs_to_matrix(rows: &[Vec<Pair>]) -> ComplexMatrix {
    ComplexMatrix::from_rows(&rows.iter().map(|r| pairs_to_vec(r)).collect::<Vec<_>>())
}
