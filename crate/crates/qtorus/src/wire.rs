//! JSON wire formats shared with the command-line front end.
//!
//! Matrices: `{"n": int, "m": int, "rows": [[int, ...], ...]}` with `m = 0`
//! meaning matrices over `Z`. Presentations: `{"n": int, "m": int,
//! "B": [[int, ...], ...]}`. Elements: a list of terms, each a lattice point
//! plus the coefficient vector of the field residue, numerators and
//! denominators as decimal strings.

use crate::cyclic_ring::Modulus;
use crate::cyclotomic::{euler_phi, CycloElt, Rational};
use crate::matrix::RingMat;
use crate::torus::{TorusElement, TorusPresentation};
use crate::{Error, Result};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::str::FromStr;
use std::sync::Arc;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct MatrixJson {
    pub n: usize,
    pub m: u64,
    pub rows: Vec<Vec<i64>>,
}

impl MatrixJson {
    pub fn to_ring_mat(&self) -> Result<RingMat> {
        let m = Modulus::new(self.m)?;
        let mat = RingMat::from_rows(&self.rows, m)?;
        if mat.size() != self.n {
            return Err(Error::DimensionMismatch(mat.size(), self.n));
        }
        Ok(mat)
    }

    pub fn from_ring_mat(mat: &RingMat) -> MatrixJson {
        MatrixJson {
            n: mat.size(),
            m: mat.modulus().value(),
            rows: mat.to_rows(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PresentationJson {
    pub n: usize,
    pub m: u64,
    #[serde(rename = "B")]
    pub b: Vec<Vec<i64>>,
}

impl PresentationJson {
    pub fn to_presentation(&self) -> Result<TorusPresentation> {
        TorusPresentation::new(self.n, self.m, &self.b)
    }

    pub fn from_presentation(t: &TorusPresentation) -> PresentationJson {
        PresentationJson {
            n: t.rank(),
            m: t.q_order(),
            b: t.exponent_rows(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CoeffJson {
    pub num: Vec<String>,
    pub den: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TermJson {
    pub gamma: Vec<i64>,
    pub coeff: CoeffJson,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ElementJson {
    pub terms: Vec<TermJson>,
}

fn coeff_to_json(c: &CycloElt) -> CoeffJson {
    CoeffJson {
        num: c.coeffs().iter().map(|r| r.numer().to_string()).collect(),
        den: c.coeffs().iter().map(|r| r.denom().to_string()).collect(),
    }
}

fn coeff_from_json(conductor: u64, c: &CoeffJson) -> Result<CycloElt> {
    let deg = euler_phi(conductor) as usize;
    if c.num.len() != c.den.len() || c.num.len() > deg {
        return Err(Error::DimensionMismatch(c.num.len(), deg));
    }
    let parse = |s: &str| -> Result<BigInt> {
        BigInt::from_str(s).map_err(|_| Error::Unsupported(format!("bad integer literal: {s}")))
    };
    let mut coeffs = Vec::with_capacity(deg);
    for (n, d) in c.num.iter().zip(&c.den) {
        let den = parse(d)?;
        if den == BigInt::from(0) {
            return Err(Error::DivisionByZero);
        }
        coeffs.push(Rational::new(parse(n)?, den));
    }
    CycloElt::from_coeffs(conductor, coeffs)
}

pub fn element_to_json(x: &TorusElement) -> ElementJson {
    ElementJson {
        terms: x
            .terms()
            .map(|(g, c)| TermJson {
                gamma: g.clone(),
                coeff: coeff_to_json(c),
            })
            .collect(),
    }
}

pub fn element_from_json(
    pres: Arc<TorusPresentation>,
    json: &ElementJson,
) -> Result<TorusElement> {
    let conductor = pres.conductor();
    let terms = json
        .terms
        .iter()
        .map(|t| Ok((t.gamma.clone(), coeff_from_json(conductor, &t.coeff)?)))
        .collect::<Result<Vec<_>>>()?;
    TorusElement::from_terms(pres, terms)
}
