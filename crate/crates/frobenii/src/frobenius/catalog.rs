//! Embedded solutions: Coxeter-group polynomials in dimensions 3 and 4, the
//! dihedral family, quantum cohomology of CP¹ and truncations for CP².

use super::FrobeniusPotential;
use crate::error::{Error, Result};
use crate::kernel::rational::{rat, Rational};
use crate::kernel::{ExpPolynomial, QuadScalar};
use num_traits::Zero;

type Terms<'a> = &'a [((i64, i64), &'a [i32])];

const A3: Terms = &[((1, 2), &[2, 0, 1]), ((1, 2), &[1, 2, 0]), ((-1, 16), &[0, 2, 2]), ((1, 960), &[0, 0, 5])];

const B3: Terms = &[
    ((1, 2), &[2, 0, 1]),
    ((1, 2), &[1, 2, 0]),
    ((1, 6), &[0, 3, 1]),
    ((1, 6), &[0, 2, 3]),
    ((1, 210), &[0, 0, 7]),
];

const H3: Terms = &[
    ((1, 2), &[2, 0, 1]),
    ((1, 2), &[1, 2, 0]),
    ((1, 6), &[0, 3, 2]),
    ((1, 20), &[0, 2, 5]),
    ((1, 3960), &[0, 0, 11]),
];

const A4: Terms = &[
    ((1, 2), &[2, 0, 0, 1]),
    ((1, 1), &[1, 1, 1, 0]),
    ((1, 2), &[0, 3, 0, 0]),
    ((1, 3), &[0, 0, 4, 0]),
    ((6, 1), &[0, 1, 2, 1]),
    ((9, 1), &[0, 2, 0, 2]),
    ((24, 1), &[0, 0, 2, 3]),
    ((216, 5), &[0, 0, 0, 6]),
];

const B4: Terms = &[
    ((1, 2), &[2, 0, 0, 1]),
    ((1, 1), &[1, 1, 1, 0]),
    ((1, 1), &[0, 3, 0, 0]),
    ((1, 3), &[0, 1, 3, 0]),
    ((3, 1), &[0, 2, 1, 1]),
    ((1, 4), &[0, 0, 4, 1]),
    ((3, 1), &[0, 1, 2, 2]),
    ((6, 1), &[0, 2, 0, 3]),
    ((1, 1), &[0, 0, 3, 3]),
    ((18, 5), &[0, 0, 2, 5]),
    ((18, 7), &[0, 0, 0, 9]),
];

const D4: Terms = &[
    ((1, 2), &[2, 0, 0, 1]),
    ((1, 1), &[1, 1, 1, 0]),
    ((1, 1), &[0, 3, 0, 1]),
    ((1, 1), &[0, 0, 3, 1]),
    ((6, 1), &[0, 1, 1, 3]),
    ((54, 35), &[0, 0, 0, 7]),
];

const F4: Terms = &[
    ((1, 2), &[2, 0, 0, 1]),
    ((1, 1), &[1, 1, 1, 0]),
    ((1, 18), &[0, 3, 0, 1]),
    ((3, 4), &[0, 0, 4, 1]),
    ((1, 2), &[0, 1, 2, 3]),
    ((1, 60), &[0, 2, 0, 5]),
    ((1, 28), &[0, 0, 2, 7]),
    ((1, 16 * 9 * 11 * 13), &[0, 0, 0, 13]),
];

const H4: Terms = &[
    ((1, 1), &[1, 1, 1, 0]),
    ((1, 2), &[2, 0, 0, 1]),
    ((2, 3), &[0, 3, 0, 1]),
    ((1, 240), &[0, 0, 5, 1]),
    ((1, 18), &[0, 1, 3, 3]),
    ((1, 15), &[0, 2, 1, 5]),
    ((1, 8 * 27 * 5), &[0, 0, 4, 7]),
    ((1, 2 * 81 * 5), &[0, 1, 2, 9]),
    ((8, 81 * 25 * 11), &[0, 2, 0, 11]),
    ((1, 4 * 729 * 25), &[0, 0, 3, 13]),
    ((2, 6561 * 125 * 19), &[0, 0, 2, 19]),
    ((32, 1_594_323 * 15_625 * 29 * 31), &[0, 0, 0, 31]),
];

/// Names accepted by [`catalog`] (plus `I2(k)` for any `k ≥ 3` and `CP2(K)`).
pub fn catalog_names() -> Vec<&'static str> {
    vec!["A3", "B3", "H3", "A4", "B4", "D4", "F4", "H4", "I2(3)", "I2(4)", "I2(5)", "CP1"]
}

fn parse_arg(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix)?.strip_suffix(')')?.parse().ok()
}

pub fn catalog(name: &str) -> Result<FrobeniusPotential> {
    let g = |terms: Terms, n: usize, d: (i64, i64), q: &[(i64, i64)]| {
        FrobeniusPotential::graded(name, ExpPolynomial::poly(n, terms), d, q)
    };
    Ok(match name {
        "A3" => g(A3, 3, (1, 2), &[(0, 1), (1, 4), (1, 2)]),
        "B3" => g(B3, 3, (2, 3), &[(0, 1), (1, 3), (2, 3)]),
        "H3" => g(H3, 3, (4, 5), &[(0, 1), (2, 5), (4, 5)]),
        "A4" => g(A4, 4, (3, 5), &[(0, 1), (1, 5), (2, 5), (3, 5)]),
        "B4" => g(B4, 4, (3, 4), &[(0, 1), (1, 4), (1, 2), (3, 4)]),
        "D4" => g(D4, 4, (2, 3), &[(0, 1), (1, 3), (1, 3), (2, 3)]),
        "F4" => g(F4, 4, (5, 6), &[(0, 1), (1, 3), (1, 2), (5, 6)]),
        "H4" => g(H4, 4, (14, 15), &[(0, 1), (1, 3), (3, 5), (14, 15)]),
        "A2" => dihedral(3)?,
        "CP1" => {
            let f = ExpPolynomial::poly(2, &[((1, 2), &[2, 1])]) + ExpPolynomial::exp_var(2, 1, 1);
            FrobeniusPotential::new(name, f, rat(1, 1), vec![rat(0, 1), rat(1, 1)], vec![rat(0, 1), rat(2, 1)])?
        }
        _ => {
            if let Some(k) = parse_arg(name, "I2(") {
                dihedral(k)?
            } else if let Some(k) = parse_arg(name, "CP2(") {
                crate::gw::truncated_potential(k)?
            } else {
                return Err(Error::UnknownName(name.to_string()));
            }
        }
    })
}

/// `½ t₁² t₂ + t₂^{k+1}` with charge `1 − 2/k`.
pub fn dihedral(k: usize) -> Result<FrobeniusPotential> {
    if k < 3 {
        return Err(Error::Invalid(format!("I2({k}) needs k >= 3")));
    }
    let k = k as i64;
    let f = ExpPolynomial::poly(2, &[((1, 2), &[2, 1]), ((1, 1), &[0, (k + 1) as i32])]);
    let d = rat(k - 2, k);
    Ok(FrobeniusPotential::new(&format!("I2({k})"), f, d.clone(), vec![Rational::zero(), d], vec![Rational::zero(); 2])
        .expect("two-dimensional grading"))
}

/// `½ t₁² t₄ + t₁ t₂ t₃ + f(t₂)` with `E = t₁∂₁ − t₃∂₃ − 2t₄∂₄` (charge 3);
/// `f` is a one-variable exp-polynomial.
pub fn nonsemisimple_family(f: &ExpPolynomial) -> Result<FrobeniusPotential> {
    if f.nvars() != 1 {
        return Err(Error::ArityMismatch(1, f.nvars()));
    }
    let base = ExpPolynomial::poly(4, &[((1, 2), &[2, 0, 0, 1]), ((1, 1), &[1, 1, 1, 0])]);
    let full = base.try_add(&f.embed(4, &[1]))?;
    FrobeniusPotential::new(
        "nonsemisimple",
        full,
        rat(3, 1),
        vec![rat(0, 1), rat(1, 1), rat(2, 1), rat(3, 1)],
        vec![Rational::zero(); 4],
    )
}

/// Coefficient of a monomial of a catalog entry, for spot checks.
pub fn coefficient(p: &FrobeniusPotential, powers: &[i32]) -> QuadScalar {
    p.f.coeff_of(powers)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_resolve() {
        for name in catalog_names() {
            assert_eq!(catalog(name).unwrap().name, name);
        }
        assert!(catalog("E8").is_err());
        assert_eq!(catalog("I2(3)").unwrap().f, ExpPolynomial::poly(2, &[((1, 2), &[2, 1]), ((1, 1), &[0, 4])]));
    }

    #[test]
    fn h4_leading_terms() {
        let p = catalog("H4").unwrap();
        assert_eq!(coefficient(&p, &[1, 1, 1, 0]), QuadScalar::int(1));
        assert_eq!(coefficient(&p, &[2, 0, 0, 1]), QuadScalar::rational(rat(1, 2)));
    }
}
