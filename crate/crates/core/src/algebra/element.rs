use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use super::generator::{GenIndex, Shape, Word};
use super::monomial::Monomial;
use super::product::with_engine;
use crate::error::Result;
use crate::scalar::QRational;

/// A member of `Pol(Mat_mn)_q`: a finite combination of normal-ordered
/// monomials. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Element {
    shape: Shape,
    terms: BTreeMap<Monomial, QRational>,
}

impl Element {
    pub fn zero(shape: Shape) -> Element {
        Element { shape, terms: BTreeMap::new() }
    }

    pub fn one(shape: Shape) -> Element {
        Element::constant(shape, QRational::one())
    }

    pub fn constant(shape: Shape, c: QRational) -> Element {
        Element::from_monomial(shape, Monomial::one(shape), c)
    }

    pub fn from_monomial(shape: Shape, mono: Monomial, c: QRational) -> Element {
        let mut e = Element::zero(shape);
        e.add_term(mono, c);
        e
    }

    /// A single generator `z_a^α` or its adjoint.
    pub fn generator(shape: Shape, g: GenIndex) -> Result<Element> {
        g.validate(shape)?;
        Ok(Element::from_monomial(shape, Monomial::generator(shape, g), QRational::one()))
    }

    pub fn from_terms(shape: Shape, terms: impl IntoIterator<Item = (Monomial, QRational)>) -> Element {
        let mut e = Element::zero(shape);
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    }

    pub(crate) fn from_hash(shape: Shape, terms: HashMap<Monomial, QRational>) -> Element {
        Element { shape, terms: terms.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, QRational> {
        &self.terms
    }

    pub fn coeff(&self, mono: &Monomial) -> QRational {
        self.terms.get(mono).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mono: Monomial, c: QRational) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&mono) {
            Some(old) => old + &c,
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&mono);
        } else {
            self.terms.insert(mono, sum);
        }
    }

    pub fn scale(&self, c: &QRational) -> Element {
        if c.is_zero() {
            return Element::zero(self.shape);
        }
        Element { shape: self.shape, terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    /// The normal-ordered product `self · other`.
    pub fn mul(&self, other: &Element) -> Result<Element> {
        self.shape.check(other.shape)?;
        let mut acc: HashMap<Monomial, QRational> = HashMap::new();
        with_engine(self.shape, |eng| {
            for (m1, c1) in &self.terms {
                for (m2, c2) in &other.terms {
                    let c12 = c1 * c2;
                    for (m, c) in eng.mul_monomials(m1, m2) {
                        let v = &c12 * &c;
                        match acc.get_mut(&m) {
                            Some(old) => *old = &*old + &v,
                            None => {
                                acc.insert(m, v);
                            }
                        }
                    }
                }
            }
        });
        Ok(Element::from_hash(self.shape, acc))
    }

    /// The involution: an antihomomorphism, linear on coefficients.
    pub fn star(&self) -> Element {
        let mut out = Element::zero(self.shape);
        for (mono, c) in &self.terms {
            // (Z S)* = S* Z*, and S* is holomorphic with letters reversed.
            let mut word: Word = Vec::new();
            for g in mono.word(self.shape).into_iter().rev() {
                word.push(GenIndex { starred: !g.starred, ..g });
            }
            let nf = normal_form(self.shape, &word).expect("indices come from a valid monomial");
            out = &out + &nf.scale(c);
        }
        out
    }

    /// Homogeneous components keyed by `(z-degree, -z*-degree)`.
    pub fn bidegree_split(&self) -> BTreeMap<(i64, i64), Element> {
        let mut out: BTreeMap<(i64, i64), Element> = BTreeMap::new();
        for (mono, c) in &self.terms {
            out.entry(mono.bidegree())
                .or_insert_with(|| Element::zero(self.shape))
                .add_term(mono.clone(), c.clone());
        }
        out
    }

    /// True when every monomial has equal z- and z*-degree.
    pub fn is_balanced(&self) -> bool {
        self.terms.keys().all(|m| m.z_degree() == m.zs_degree())
    }

    pub fn is_holomorphic(&self) -> bool {
        self.terms.keys().all(|m| m.zs_degree() == 0)
    }

    pub fn max_z_degree(&self) -> usize {
        self.terms.keys().map(Monomial::z_degree).max().unwrap_or(0)
    }

    pub fn max_zs_degree(&self) -> usize {
        self.terms.keys().map(Monomial::zs_degree).max().unwrap_or(0)
    }
}

/// Normal form of a free word.
pub fn normal_form(shape: Shape, word: &[GenIndex]) -> Result<Element> {
    for g in word {
        g.validate(shape)?;
    }
    let mut state: HashMap<Monomial, QRational> = HashMap::new();
    state.insert(Monomial::one(shape), QRational::one());
    with_engine(shape, |eng| {
        for g in word.iter().rev() {
            state = eng.left_mul_letter(g.letter(shape), &state);
        }
    });
    Ok(Element::from_hash(shape, state))
}

/// Normal form of a formal sum of words.
pub fn normal_form_sum(shape: Shape, words: &[(QRational, Word)]) -> Result<Element> {
    let mut out = Element::zero(shape);
    for (c, w) in words {
        out = &out + &normal_form(shape, w)?.scale(c);
    }
    Ok(out)
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        assert_eq!(self.shape, rhs.shape, "adding elements of different shapes");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self + &(-rhs)
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element { shape: self.shape, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (mono, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for g in mono.word(self.shape) {
                write!(f, " {g}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::generator::parse_word;

    fn nf(shape: Shape, s: &str) -> Element {
        normal_form(shape, &parse_word(shape, s).unwrap()).unwrap()
    }

    #[test]
    fn disc_relation() {
        let s = Shape::new(1, 1).unwrap();
        let e = nf(s, "zs[1,1] z[1,1]");
        let zzs = nf(s, "z[1,1] zs[1,1]");
        let expect = &zzs.scale(&QRational::q_pow(2)) + &Element::constant(s, QRational::one_minus_q_pow(2));
        assert_eq!(e, expect);
    }

    #[test]
    fn same_column_swap() {
        let s = Shape::new(2, 1).unwrap();
        let e = nf(s, "z[1,2] z[1,1]");
        assert_eq!(e, nf(s, "z[1,1] z[1,2]").scale(&QRational::q_pow(-1)));
    }

    #[test]
    fn ball_off_diagonal() {
        let s = Shape::new(1, 2).unwrap();
        assert_eq!(nf(s, "zs[2,1] z[1,1]"), nf(s, "z[1,1] zs[2,1]").scale(&QRational::q_pow(1)));
    }

    #[test]
    fn star_is_involutive_antihomomorphism() {
        let s = Shape::new(2, 2).unwrap();
        let f = nf(s, "z[2,2] zs[1,1] z[1,2]");
        let g = nf(s, "zs[2,1] z[1,1]");
        assert_eq!(f.star().star(), f);
        assert_eq!(f.mul(&g).unwrap().star(), g.star().mul(&f.star()).unwrap());
    }

    #[test]
    fn split_reassembles() {
        let s = Shape::new(1, 1).unwrap();
        let e = nf(s, "zs[1,1] z[1,1]");
        let parts = e.bidegree_split();
        assert_eq!(parts.len(), 2);
        let sum = parts.values().fold(Element::zero(s), |a, b| &a + b);
        assert_eq!(sum, e);
    }
}
