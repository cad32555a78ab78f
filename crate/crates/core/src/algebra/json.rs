//! JSON form of an element:
//! `{"m":…, "n":…, "terms":[{"z":[[a,α,exp]…], "zstar":[[a,α,exp]…], "coeff":"…"}…]}`.

use serde::{Deserialize, Serialize};

use super::element::Element;
use super::generator::Shape;
use super::monomial::{zero_exps, Exps, Monomial};
use crate::error::{Error, Result};
use crate::scalar::QRational;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub z: Vec<[usize; 3]>,
    pub zstar: Vec<[usize; 3]>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElementJson {
    pub m: usize,
    pub n: usize,
    pub terms: Vec<TermJson>,
}

pub(crate) fn exps_from_list(shape: Shape, list: &[[usize; 3]]) -> Result<Exps> {
    let mut e = zero_exps(shape.gens());
    for &[a, alpha, k] in list {
        if !(1..=shape.n).contains(&a) || !(1..=shape.m).contains(&alpha) {
            return Err(Error::IndexOutOfRange(format!("[{a},{alpha}] outside a {}x{} matrix", shape.m, shape.n)));
        }
        let k = u16::try_from(k).map_err(|_| Error::Parse(format!("exponent {k} too large")))?;
        let g = shape.index(a, alpha);
        e[g] = e[g].checked_add(k).ok_or_else(|| Error::Parse("exponent overflow".into()))?;
    }
    Ok(e)
}

impl Element {
    pub fn to_json(&self) -> ElementJson {
        let shape = self.shape();
        let terms = self
            .terms()
            .iter()
            .map(|(mono, c)| {
                let (z, zstar) = mono.index_lists(shape);
                TermJson { z, zstar, coeff: c.to_string() }
            })
            .collect();
        ElementJson { m: shape.m, n: shape.n, terms }
    }

    /// Parses the JSON form. Terms are taken to be normal-ordered already.
    pub fn from_json(j: &ElementJson) -> Result<Element> {
        let shape = Shape::new(j.m, j.n)?;
        let mut out = Element::zero(shape);
        for t in &j.terms {
            let c: QRational = t.coeff.parse()?;
            let mono = Monomial::new(exps_from_list(shape, &t.z)?, exps_from_list(shape, &t.zstar)?);
            out.add_term(mono, c);
        }
        Ok(out)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("plain data serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Element> {
        let j: ElementJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Element::from_json(&j)
    }
}
