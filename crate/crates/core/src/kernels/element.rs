use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::generator::Shape;
use crate::algebra::json::exps_from_list;
use crate::algebra::monomial::{degree, zero_exps, Exps, Monomial};
use crate::algebra::product::with_engine;
use crate::algebra::Element;
use crate::error::{Error, Result};
use crate::scalar::{QRational, Real, UPoly};

/// Key of a kernel term: a holomorphic exponent vector on the left and an
/// antiholomorphic one on the right.
pub type KernelKey = (Exps, Exps);

/// A truncated kernel `Σ c(u) p ⊗ r` in `C[Mat]^op ⊗ C[Mat̄]`.
///
/// Every stored pair has equal left and right degree, at most `trunc`.
/// The left factor multiplies in the opposite order.
#[derive(Clone, PartialEq, Eq)]
pub struct KernelElement {
    shape: Shape,
    trunc: usize,
    terms: BTreeMap<KernelKey, UPoly>,
}

impl KernelElement {
    pub fn zero(shape: Shape, trunc: usize) -> Self {
        KernelElement { shape, trunc, terms: BTreeMap::new() }
    }

    pub fn one(shape: Shape, trunc: usize) -> Self {
        let mut k = Self::zero(shape, trunc);
        k.terms.insert((zero_exps(shape.gens()), zero_exps(shape.gens())), UPoly::one());
        k
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn terms(&self) -> &BTreeMap<KernelKey, UPoly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, left: &[u16], right: &[u16]) -> UPoly {
        self.terms.get(&(left.into(), right.into())).cloned().unwrap_or_default()
    }

    /// Adds `c · left ⊗ right`; pairs beyond the truncation are dropped.
    pub fn add_term(&mut self, left: Exps, right: Exps, c: UPoly) -> Result<()> {
        let (dl, dr) = (degree(&left), degree(&right));
        if dl != dr {
            return Err(Error::UnbalancedKernel { left: dl, right: dr });
        }
        if dl > self.trunc || c.is_zero() {
            return Ok(());
        }
        let key = (left, right);
        let sum = match self.terms.remove(&key) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
        Ok(())
    }

    /// `Σ a_i b_j  p_i ⊗ r_j` for a holomorphic `p` and antiholomorphic `r`.
    pub fn from_tensor(p: &Element, r: &Element, trunc: usize) -> Result<Self> {
        p.shape().check(r.shape())?;
        let mut k = Self::zero(p.shape(), trunc);
        for (mp, cp) in p.terms() {
            if mp.zs_degree() > 0 {
                return Err(Error::InvalidParameter("left tensor factor must be holomorphic".into()));
            }
            for (mr, cr) in r.terms() {
                if mr.z_degree() > 0 {
                    return Err(Error::InvalidParameter("right tensor factor must be antiholomorphic".into()));
                }
                k.add_term(mp.z.clone(), mr.zs.clone(), UPoly::constant(cp * cr))?;
            }
        }
        Ok(k)
    }

    /// Same kernel, truncated at a (smaller) order.
    pub fn truncate(&self, trunc: usize) -> Self {
        let terms = self.terms.iter().filter(|((l, _), _)| degree(l) <= trunc).map(|(k, v)| (k.clone(), v.clone())).collect();
        KernelElement { shape: self.shape, trunc, terms }
    }

    /// Part of bidegree `(d, d)`.
    pub fn homogeneous(&self, d: usize) -> Self {
        let terms = self.terms.iter().filter(|((l, _), _)| degree(l) == d).map(|(k, v)| (k.clone(), v.clone())).collect();
        KernelElement { shape: self.shape, trunc: self.trunc, terms }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.shape.check(other.shape)?;
        let mut out = self.truncate(self.trunc.min(other.trunc));
        for ((l, r), c) in &other.terms {
            out.add_term(l.clone(), r.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&QRational::from_int(-1)))
    }

    pub fn scale(&self, c: &QRational) -> Self {
        self.map_coeffs(|p| p.scale(c))
    }

    /// Multiplies every coefficient by a polynomial in `u`.
    pub fn scale_upoly(&self, c: &UPoly) -> Self {
        self.map_coeffs(|p| p * c)
    }

    /// Substitutes `u -> c u` in every coefficient.
    pub fn scale_variable(&self, c: &QRational) -> Self {
        self.map_coeffs(|p| p.scale_variable(c))
    }

    fn map_coeffs(&self, f: impl Fn(&UPoly) -> UPoly) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| (k.clone(), f(v)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        KernelElement { shape: self.shape, trunc: self.trunc, terms }
    }

    /// Product in the kernel algebra:
    /// `(p1 ⊗ r1)(p2 ⊗ r2) = (p2 p1) ⊗ (r1 r2)`, truncated at `trunc`.
    pub fn mul(&self, other: &Self, trunc: usize) -> Result<Self> {
        self.shape.check(other.shape)?;
        let mut acc: HashMap<KernelKey, UPoly> = HashMap::new();
        with_engine(self.shape, |eng| {
            for ((p1, r1), c1) in &self.terms {
                for ((p2, r2), c2) in &other.terms {
                    if degree(p1) + degree(p2) > trunc {
                        continue;
                    }
                    let c12 = c1 * c2;
                    let left = eng.mul_same(p2, p1, false);
                    let right = eng.mul_same(r1, r2, true);
                    for (l, cl) in &left {
                        for (r, cr) in &right {
                            let v = c12.scale(&(cl * cr));
                            let slot = acc.entry((l.clone(), r.clone())).or_default();
                            *slot = &*slot + &v;
                        }
                    }
                }
            }
        });
        let terms = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(KernelElement { shape: self.shape, trunc, terms })
    }

    /// Inverse of `1 + A'` with `A'` of positive bidegree, as a truncated
    /// geometric series.
    pub fn invert(&self, trunc: usize) -> Result<Self> {
        let zero = (zero_exps(self.shape.gens()), zero_exps(self.shape.gens()));
        if !self.terms.get(&zero).is_some_and(UPoly::is_one) {
            return Err(Error::NotInvertible);
        }
        let mut rest = self.truncate(trunc);
        rest.terms.remove(&zero);
        let minus_rest = rest.scale(&QRational::from_int(-1));
        let mut power = KernelElement::one(self.shape, trunc);
        let mut out = KernelElement::one(self.shape, trunc);
        for _ in 0..trunc {
            power = power.mul(&minus_rest, trunc)?;
            if power.is_zero() {
                break;
            }
            out = out.add(&power)?;
        }
        Ok(out)
    }

    /// Evaluates every coefficient at `u = u0`.
    pub fn substitute(&self, u0: &QRational) -> Self {
        self.map_coeffs(|p| UPoly::constant(p.eval(u0)))
    }

    /// Evaluates every coefficient at `q = q0`, `u = u0`.
    pub fn substitute_numeric(&self, q0: &Real, u0: &Real) -> Result<BTreeMap<KernelKey, Real>> {
        self.terms.iter().map(|(k, p)| Ok((k.clone(), p.eval_real(q0, u0)?))).collect()
    }

    /// Largest `u`-degree among the coefficients of bidegree `(d, d)`.
    pub fn u_degree(&self, d: usize) -> Option<usize> {
        self.terms.iter().filter(|((l, _), _)| degree(l) == d).filter_map(|(_, p)| p.degree()).max()
    }

    /// The left and right factors of a key as monomials.
    pub fn key_monomials(&self, key: &KernelKey) -> (Monomial, Monomial) {
        (Monomial::holomorphic(key.0.clone()), Monomial::antiholomorphic(key.1.clone()))
    }

    pub fn to_json(&self) -> KernelJson {
        let terms = self
            .terms
            .iter()
            .map(|((l, r), c)| {
                let (left, _) = Monomial::holomorphic(l.clone()).index_lists(self.shape);
                let (_, right) = Monomial::antiholomorphic(r.clone()).index_lists(self.shape);
                KernelTermJson { left, right, coeff: c.coeffs().iter().map(ToString::to_string).collect() }
            })
            .collect();
        KernelJson { m: self.shape.m, n: self.shape.n, trunc: self.trunc, terms }
    }

    pub fn from_json(j: &KernelJson) -> Result<Self> {
        let shape = Shape::new(j.m, j.n)?;
        let mut k = KernelElement::zero(shape, j.trunc);
        for t in &j.terms {
            let coeffs = t.coeff.iter().map(|s| s.parse()).collect::<Result<Vec<QRational>>>()?;
            k.add_term(exps_from_list(shape, &t.left)?, exps_from_list(shape, &t.right)?, UPoly::from_coeffs(coeffs))?;
        }
        Ok(k)
    }
}

/// JSON form of one kernel term. `coeff[j]` is the coefficient of `u^j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelTermJson {
    pub left: Vec<[usize; 3]>,
    pub right: Vec<[usize; 3]>,
    pub coeff: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelJson {
    pub m: usize,
    pub n: usize,
    pub trunc: usize,
    pub terms: Vec<KernelTermJson>,
}

impl fmt::Debug for KernelElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for ((l, r), c) in &self.terms {
            m.entry(&(&l[..], &r[..]), c);
        }
        m.finish()
    }
}
