//! JSON interchange for potentials.

use super::FrobeniusPotential;
use crate::error::{Error, Result};
use crate::kernel::rational::{fmt_rational, parse_rational};
use crate::kernel::{ExpPolynomial, QuadScalar};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermFile {
    pub coeff: String,
    pub powers: Vec<i32>,
    pub exps: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub n: usize,
    pub d: String,
    pub q: Vec<String>,
    pub r: Vec<String>,
    pub discriminant: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unity: Option<usize>,
    pub terms: Vec<TermFile>,
}

impl From<&FrobeniusPotential> for PotentialFile {
    fn from(p: &FrobeniusPotential) -> Self {
        PotentialFile {
            name: Some(p.name.clone()),
            n: p.n(),
            d: fmt_rational(&p.d),
            q: p.q.iter().map(fmt_rational).collect(),
            r: p.r.iter().map(fmt_rational).collect(),
            discriminant: p.f.field().unwrap_or(1),
            unity: (p.unity != 0).then_some(p.unity + 1),
            terms: p
                .f
                .terms()
                .map(|(m, c)| TermFile { coeff: c.to_string(), powers: m.powers.clone(), exps: m.exps.clone() })
                .collect(),
        }
    }
}

impl TryFrom<&PotentialFile> for FrobeniusPotential {
    type Error = Error;
    fn try_from(f: &PotentialFile) -> Result<Self> {
        let terms = f
            .terms
            .iter()
            .map(|t| Ok((t.coeff.parse::<QuadScalar>()?, t.powers.clone(), t.exps.clone())))
            .collect::<Result<Vec<_>>>()?;
        let poly = ExpPolynomial::from_terms(f.n, terms)?;
        if let Some(m) = poly.field() {
            if m != f.discriminant {
                return Err(Error::FieldMismatch(f.discriminant, m));
            }
        }
        let parse_all = |v: &[String]| v.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>();
        let mut p = FrobeniusPotential::new(
            f.name.as_deref().unwrap_or("file"),
            poly,
            parse_rational(&f.d)?,
            parse_all(&f.q)?,
            parse_all(&f.r)?,
        )?;
        if let Some(u) = f.unity {
            if u == 0 || u > f.n {
                return Err(Error::Invalid(format!("unity index {u} out of range")));
            }
            p.unity = u - 1;
        }
        Ok(p)
    }
}

pub fn to_json(p: &FrobeniusPotential) -> String {
    serde_json::to_string_pretty(&PotentialFile::from(p)).expect("serializable")
}

pub fn from_json(s: &str) -> Result<FrobeniusPotential> {
    let f: PotentialFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    FrobeniusPotential::try_from(&f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::{catalog, catalog_names};

    #[test]
    fn round_trip_is_bit_exact() {
        for name in catalog_names() {
            let p = catalog(name).unwrap();
            let s = to_json(&p);
            let back = from_json(&s).unwrap();
            assert_eq!(back, p);
            assert_eq!(to_json(&back), s);
        }
    }

    #[test]
    fn quadratic_field_coefficients() {
        let mut p = catalog("A3").unwrap();
        p.f = p.f + ExpPolynomial::monomial(3, "1/2+1/2√5".parse().unwrap(), &[0, 0, 2], &[0, 0, 0]);
        let s = to_json(&p);
        assert!(s.contains("\"discriminant\": 5"));
        assert_eq!(from_json(&s).unwrap(), p);
        assert!(from_json("{\"n\": 1}").is_err());
    }
}
