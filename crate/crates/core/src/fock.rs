//! The Fock representation on `H = C[Mat]_q f0`, where `z* f0 = 0`.
//!
//! `H` is graded by degree, and `H_k` has the PBW basis of holomorphic
//! monomials of degree `k`. A generator `z` raises the degree by one through
//! left multiplication. A starred generator lowers it: normal-order
//! `z* · v` and drop every term that still carries a `z*`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::algebra::generator::{GenIndex, Letter, Shape};
use crate::algebra::monomial::{first_letter, with_removed, Exps, Monomial};
use crate::algebra::product::{with_engine, Engine};
use crate::algebra::Element;
use crate::error::{Error, Result};
use crate::scalar::{QRational, Real};

/// Exponent multi-index of a basis vector of `H`.
pub type FockIndex = Exps;

/// The PBW basis of `H_k` with a reverse lookup.
#[derive(Debug)]
pub struct FockBasis {
    pub degree: usize,
    pub indices: Vec<FockIndex>,
    pos: HashMap<FockIndex, usize>,
}

impl FockBasis {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn position(&self, idx: &[u16]) -> Option<usize> {
        self.pos.get(idx).copied()
    }
}

thread_local! {
    static BASES: RefCell<HashMap<(Shape, usize), Arc<FockBasis>>> = RefCell::new(HashMap::new());
    static GRAMS: RefCell<HashMap<(Shape, usize), Arc<FockBlock<QRational>>>> = RefCell::new(HashMap::new());
}

/// Basis of `H_k`, in descending lexicographic order of exponent vectors.
pub fn fock_basis(shape: Shape, k: usize) -> Arc<FockBasis> {
    if let Some(b) = BASES.with(|c| c.borrow().get(&(shape, k)).cloned()) {
        return b;
    }
    fn go(pos: usize, left: usize, cur: &mut Vec<u16>, out: &mut Vec<FockIndex>) {
        if pos + 1 == cur.len() {
            cur[pos] = left as u16;
            out.push(cur.clone().into_boxed_slice());
            return;
        }
        for e in (0..=left).rev() {
            cur[pos] = e as u16;
            go(pos + 1, left - e, cur, out);
        }
        cur[pos] = 0;
    }
    let mut indices = Vec::new();
    go(0, k, &mut vec![0; shape.gens()], &mut indices);
    let pos = indices.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
    let basis = Arc::new(FockBasis { degree: k, indices, pos });
    BASES.with(|c| c.borrow_mut().insert((shape, k), basis.clone()));
    basis
}

/// `dim H_k = binomial(k + mn - 1, mn - 1)`.
pub fn fock_dim(shape: Shape, k: usize) -> usize {
    let g = shape.gens();
    (1..g).fold(1u128, |acc, i| acc * (k + i) as u128 / i as u128) as usize
}

/// A dense matrix of a graded operator `H_src -> H_tgt`, row-major with
/// `rows = dim H_tgt`.
#[derive(Clone, Debug, PartialEq)]
pub struct FockBlock<T> {
    pub src: usize,
    pub tgt: usize,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<T>,
}

impl<T: Clone> FockBlock<T> {
    pub fn filled(src: usize, tgt: usize, rows: usize, cols: usize, v: T) -> Self {
        FockBlock { src, tgt, rows, cols, entries: vec![v; rows * cols] }
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }
}

impl FockBlock<QRational> {
    pub fn zeros(shape: Shape, src: usize, tgt: usize) -> Self {
        Self::filled(src, tgt, fock_dim(shape, tgt), fock_dim(shape, src), QRational::zero())
    }

    pub fn identity(shape: Shape, k: usize) -> Self {
        let mut b = Self::zeros(shape, k, k);
        for i in 0..b.rows {
            b.set(i, i, QRational::one());
        }
        b
    }

    pub fn scale(&self, c: &QRational) -> Self {
        FockBlock { entries: self.entries.iter().map(|x| x * c).collect(), ..self.clone() }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::filled(self.tgt, self.src, self.cols, self.rows, QRational::zero());
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// `self ∘ rhs`, i.e. the matrix product `self · rhs`.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::InvalidParameter(format!(
                "cannot compose {}x{} with {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::filled(rhs.src, self.tgt, self.rows, rhs.cols, QRational::zero());
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(l, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn eval(&self, q0: &Real) -> Result<FockBlock<Real>> {
        let entries = self.entries.iter().map(|c| c.eval(q0)).collect::<Result<_>>()?;
        Ok(FockBlock { src: self.src, tgt: self.tgt, rows: self.rows, cols: self.cols, entries })
    }
}

impl FockBlock<Real> {
    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).to_f64())
    }
}

/// A vector of `H` as a sparse map from basis index to coefficient.
pub type FockVector = HashMap<FockIndex, QRational>;

fn add_to(acc: &mut FockVector, key: FockIndex, c: QRational) {
    if c.is_zero() {
        return;
    }
    let v = match acc.remove(&key) {
        Some(old) => &old + &c,
        None => c,
    };
    if !v.is_zero() {
        acc.insert(key, v);
    }
}

/// `Θ(z*_x)` applied to the basis vector `z`: the part of `z*_x · z` with no
/// `z*` left.
pub(crate) fn annihilate(eng: &mut Engine, x: usize, z: &Exps) -> Vec<(Exps, QRational)> {
    eng.pass_star(x, z).iter().filter(|t| t.1.is_none()).map(|t| (t.0.clone(), t.2.clone())).collect()
}

/// Applies one letter to a vector.
pub(crate) fn apply_letter(eng: &mut Engine, l: Letter, v: &FockVector) -> FockVector {
    let mut out = FockVector::new();
    for (e, c) in v {
        if l.star {
            for (e2, c2) in annihilate(eng, l.gen, e) {
                add_to(&mut out, e2, c * &c2);
            }
        } else {
            for (e2, c2) in eng.insert_z(l.gen, e).iter() {
                add_to(&mut out, e2.clone(), c * c2);
            }
        }
    }
    out
}

/// `Θ(Z S) v`: the `z*` letters act first, rightmost first.
pub(crate) fn apply_monomial(eng: &mut Engine, mono: &Monomial, v: &FockVector) -> FockVector {
    let mut cur = v.clone();
    for l in mono.letters().into_iter().rev() {
        if cur.is_empty() {
            break;
        }
        cur = apply_letter(eng, l, &cur);
    }
    cur
}

/// Matrix of `Θ(g)` on `H_k`.
pub fn theta_gen_block(shape: Shape, g: GenIndex, k: usize) -> Result<FockBlock<QRational>> {
    g.validate(shape)?;
    let tgt = if g.starred { k.checked_sub(1) } else { Some(k + 1) };
    let Some(tgt) = tgt else {
        // z* on H_0: the empty map into the zero space.
        return Ok(FockBlock::filled(0, 0, 0, 1, QRational::zero()));
    };
    let src_basis = fock_basis(shape, k);
    let tgt_basis = fock_basis(shape, tgt);
    let mut block = FockBlock::zeros(shape, k, tgt);
    let letter = g.letter(shape);
    with_engine(shape, |eng| {
        for (j, e) in src_basis.indices.iter().enumerate() {
            let v = FockVector::from([(e.clone(), QRational::one())]);
            for (e2, c) in apply_letter(eng, letter, &v) {
                let i = tgt_basis.position(&e2).expect("image lies in the target degree");
                block.set(i, j, c);
            }
        }
    });
    Ok(block)
}

/// Blocks of `Θ(f)` on `H_k`, keyed by target degree.
pub fn theta_apply(f: &Element, k: usize) -> BTreeMap<usize, FockBlock<QRational>> {
    let shape = f.shape();
    let src_basis = fock_basis(shape, k);
    let mut out: BTreeMap<usize, FockBlock<QRational>> = BTreeMap::new();
    with_engine(shape, |eng| {
        for (mono, c) in f.terms() {
            if mono.zs_degree() > k {
                continue;
            }
            let tgt = k - mono.zs_degree() + mono.z_degree();
            let tgt_basis = fock_basis(shape, tgt);
            let block = out.entry(tgt).or_insert_with(|| FockBlock::zeros(shape, k, tgt));
            for (j, e) in src_basis.indices.iter().enumerate() {
                let v = FockVector::from([(e.clone(), QRational::one())]);
                for (e2, c2) in apply_monomial(eng, mono, &v) {
                    let i = tgt_basis.position(&e2).expect("image lies in the target degree");
                    let val = block.get(i, j) + &(c * &c2);
                    block.set(i, j, val);
                }
            }
        }
    });
    out
}

/// Gram matrix of the scalar product on `H_k`: entry `(u, v)` is the
/// coefficient of `1` in the normal form of `(z^v)* z^u`.
///
/// With `z^v = z_g z^{v'}` where `g` is the first letter of `v`,
/// `(z^v)* z^u = (z^{v'})* (z*_g z^u)`. So row `u` of `gram(k)` is obtained
/// from `gram(k-1)` through the annihilation block of `z*_g`.
pub fn gram(shape: Shape, k: usize) -> Arc<FockBlock<QRational>> {
    if let Some(g) = GRAMS.with(|c| c.borrow().get(&(shape, k)).cloned()) {
        return g;
    }
    let result = if k == 0 {
        FockBlock::identity(shape, 0)
    } else {
        let prev = gram(shape, k - 1);
        let basis = fock_basis(shape, k);
        let lower = fock_basis(shape, k - 1);
        let dim = basis.len();
        let mut g = FockBlock::zeros(shape, k, k);
        // Annihilated images of every basis vector, per generator.
        let mut images: HashMap<usize, Vec<Vec<(usize, QRational)>>> = HashMap::new();
        with_engine(shape, |eng| {
            for v in &basis.indices {
                let first = first_letter(v).expect("positive degree");
                images.entry(first).or_insert_with(|| {
                    basis
                        .indices
                        .iter()
                        .map(|u| {
                            annihilate(eng, first, u)
                                .into_iter()
                                .map(|(w, c)| (lower.position(&w).expect("degree k-1"), c))
                                .collect()
                        })
                        .collect()
                });
            }
        });
        for (vi, v) in basis.indices.iter().enumerate() {
            let first = first_letter(v).expect("positive degree");
            let vp = lower.position(&with_removed(v, first)).expect("degree k-1");
            let img = &images[&first];
            for ui in 0..dim {
                let mut acc = QRational::zero();
                for (w, c) in &img[ui] {
                    let gv = prev.get(*w, vp);
                    if !gv.is_zero() {
                        acc = &acc + &(c * gv);
                    }
                }
                g.set(ui, vi, acc);
            }
        }
        g
    };
    let result = Arc::new(result);
    GRAMS.with(|c| c.borrow_mut().insert((shape, k), result.clone()));
    result
}

/// Same recursion as [`gram`], carried out numerically at `q0` for all
/// degrees up to `kmax`.
pub fn gram_numeric(shape: Shape, kmax: usize, q0: &Real) -> Result<Vec<FockBlock<Real>>> {
    let mut out = vec![FockBlock::filled(0, 0, 1, 1, Real::one())];
    for k in 1..=kmax {
        let prev = &out[k - 1];
        let basis = fock_basis(shape, k);
        let lower = fock_basis(shape, k - 1);
        let dim = basis.len();
        let mut images: HashMap<usize, Vec<Vec<(usize, Real)>>> = HashMap::new();
        let mut err = None;
        with_engine(shape, |eng| {
            for v in &basis.indices {
                let first = first_letter(v).expect("positive degree");
                if images.contains_key(&first) {
                    continue;
                }
                let mut rows = Vec::with_capacity(dim);
                for u in &basis.indices {
                    let mut row = Vec::new();
                    for (w, c) in annihilate(eng, first, u) {
                        match c.eval(q0) {
                            Ok(x) => row.push((lower.position(&w).expect("degree k-1"), x)),
                            Err(e) => err = Some(e),
                        }
                    }
                    rows.push(row);
                }
                images.insert(first, rows);
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        let mut g = FockBlock::filled(k, k, dim, dim, Real::zero());
        for (vi, v) in basis.indices.iter().enumerate() {
            let first = first_letter(v).expect("positive degree");
            let vp = lower.position(&with_removed(v, first)).expect("degree k-1");
            for ui in 0..dim {
                let acc: Real = images[&first][ui].iter().map(|(w, c)| c * prev.get(*w, vp)).sum();
                g.set(ui, vi, acc);
            }
        }
        out.push(g);
    }
    Ok(out)
}

/// Lower-triangular Cholesky factor `L` with `G = L L^T`.
pub fn cholesky(g: &FockBlock<Real>) -> Result<FockBlock<Real>> {
    let n = g.rows;
    let mut l = FockBlock::filled(g.src, g.tgt, n, n, Real::zero());
    for j in 0..n {
        let mut d = g.get(j, j).clone();
        for p in 0..j {
            d = &d - &(l.get(j, p) * l.get(j, p));
        }
        if d.is_negative() || d.is_zero() {
            return Err(Error::NotPositiveDefinite(g.src));
        }
        let djj = d.sqrt();
        for i in j + 1..n {
            let mut s = g.get(i, j).clone();
            for p in 0..j {
                s = &s - &(l.get(i, p) * l.get(j, p));
            }
            l.set(i, j, &s / &djj);
        }
        l.set(j, j, djj);
    }
    Ok(l)
}

/// `Γ` weight of a basis vector: `q^{-2 Σ k_{aα} (N + 1 - a - α)}`.
pub fn gamma_weight(shape: Shape, idx: &[u16]) -> QRational {
    QRational::q_pow(-2 * gamma_exponent(shape, idx))
}

pub(crate) fn gamma_exponent(shape: Shape, idx: &[u16]) -> i64 {
    let big_n = shape.big_n() as i64;
    idx.iter()
        .enumerate()
        .map(|(g, &k)| {
            let (a, alpha) = shape.col_row(g);
            k as i64 * (big_n + 1 - a as i64 - alpha as i64)
        })
        .sum()
}

/// Which matrix of generators the norm check uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormMatrix {
    /// Entries `z_{αa} = (-q)^{α-1} z_a^{m+1-α}`.
    Lowered,
    /// Entries `z_a^α` as they are.
    Raw,
}

#[derive(Clone, Debug)]
pub struct NormReport {
    /// Operator norm of the restriction to each source degree `0..=D`.
    pub per_degree: Vec<f64>,
    pub max: f64,
}

/// Operator norm of the matrix of generators, acting as a map
/// `⊕_a H_{≤D} -> ⊕_α H`, measured in a Gram-orthonormal basis.
///
/// The map raises the degree by one and distinct degrees are orthogonal, so
/// the norm is the largest of the per-degree norms.
pub fn truncated_norm(shape: Shape, q0: &Real, d: usize, which: NormMatrix) -> Result<NormReport> {
    let grams = gram_numeric(shape, d + 1, q0)?;
    let chol: Vec<FockBlock<Real>> = grams.iter().map(cholesky).collect::<Result<_>>()?;
    let (m, n) = (shape.m, shape.n);
    let mut per_degree = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let (dk, dk1) = (fock_dim(shape, k), fock_dim(shape, k + 1));
        let lk = &chol[k];
        let lk1 = &chol[k + 1];
        let mut big = DMatrix::<f64>::zeros(m * dk1, n * dk);
        for alpha in 1..=m {
            for a in 1..=n {
                let (row, scale) = match which {
                    NormMatrix::Lowered => {
                        let s = q0.powi(alpha as i64 - 1);
                        let s = if alpha % 2 == 0 { -s } else { s };
                        (m + 1 - alpha, s)
                    }
                    NormMatrix::Raw => (alpha, Real::one()),
                };
                let block = theta_gen_block(shape, GenIndex::z(a, row), k)?.eval(q0)?;
                let tilde = orthonormalize(&block, lk, lk1);
                for i in 0..dk1 {
                    for j in 0..dk {
                        big[((alpha - 1) * dk1 + i, (a - 1) * dk + j)] = (&scale * tilde.get(i, j)).to_f64();
                    }
                }
            }
        }
        let sv = big.singular_values();
        per_degree.push(sv.iter().cloned().fold(0.0, f64::max));
    }
    let max = per_degree.iter().cloned().fold(0.0, f64::max);
    Ok(NormReport { per_degree, max })
}

/// `L_{k+1}^T B L_k^{-T}` for `B: H_k -> H_{k+1}`.
fn orthonormalize(b: &FockBlock<Real>, lk: &FockBlock<Real>, lk1: &FockBlock<Real>) -> FockBlock<Real> {
    let (rows, cols) = (b.rows, b.cols);
    // C = B L_k^{-T}: solve C L_k^T = B row by row (forward substitution).
    let mut c = FockBlock::filled(b.src, b.tgt, rows, cols, Real::zero());
    for i in 0..rows {
        for j in 0..cols {
            let mut s = b.get(i, j).clone();
            for p in 0..j {
                s = &s - &(c.get(i, p) * lk.get(j, p));
            }
            c.set(i, j, &s / lk.get(j, j));
        }
    }
    let mut out = FockBlock::filled(b.src, b.tgt, rows, cols, Real::zero());
    for i in 0..rows {
        for j in 0..cols {
            let s: Real = (i..rows).map(|p| lk1.get(p, i) * c.get(p, j)).sum();
            out.set(i, j, s);
        }
    }
    out
}
