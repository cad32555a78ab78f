use std::fmt;

use super::generator::{GenIndex, Letter, Shape};

/// Exponent vector indexed by canonical generator position.
pub type Exps = Box<[u16]>;

pub(crate) fn zero_exps(gens: usize) -> Exps {
    vec![0u16; gens].into_boxed_slice()
}

pub(crate) fn degree(e: &[u16]) -> usize {
    e.iter().map(|&k| k as usize).sum()
}

pub(crate) fn first_letter(e: &[u16]) -> Option<usize> {
    e.iter().position(|&k| k > 0)
}

pub(crate) fn with_added(e: &[u16], g: usize) -> Exps {
    let mut v: Exps = e.into();
    v[g] += 1;
    v
}

pub(crate) fn with_removed(e: &[u16], g: usize) -> Exps {
    let mut v: Exps = e.into();
    v[g] -= 1;
    v
}

/// Generator positions of `e` in canonical (ascending) order, with repeats.
pub(crate) fn letters(e: &[u16]) -> Vec<usize> {
    let mut out = Vec::with_capacity(degree(e));
    for (g, &k) in e.iter().enumerate() {
        out.extend(std::iter::repeat_n(g, k as usize));
    }
    out
}

/// A normal-ordered PBW monomial: all `z` factors in canonical order,
/// followed by all `z*` factors in canonical order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub(crate) z: Exps,
    pub(crate) zs: Exps,
}

impl Monomial {
    pub fn one(shape: Shape) -> Monomial {
        Monomial { z: zero_exps(shape.gens()), zs: zero_exps(shape.gens()) }
    }

    pub fn new(z: Exps, zs: Exps) -> Monomial {
        assert_eq!(z.len(), zs.len());
        Monomial { z, zs }
    }

    pub fn holomorphic(z: Exps) -> Monomial {
        let zs = zero_exps(z.len());
        Monomial { z, zs }
    }

    pub fn antiholomorphic(zs: Exps) -> Monomial {
        let z = zero_exps(zs.len());
        Monomial { z, zs }
    }

    /// A single generator.
    pub fn generator(shape: Shape, g: GenIndex) -> Monomial {
        let mut m = Monomial::one(shape);
        let idx = shape.index(g.col, g.row);
        if g.starred {
            m.zs[idx] = 1;
        } else {
            m.z[idx] = 1;
        }
        m
    }

    pub fn z_exps(&self) -> &[u16] {
        &self.z
    }

    pub fn zs_exps(&self) -> &[u16] {
        &self.zs
    }

    pub fn z_degree(&self) -> usize {
        degree(&self.z)
    }

    pub fn zs_degree(&self) -> usize {
        degree(&self.zs)
    }

    /// `(z-degree, -z*-degree)`.
    pub fn bidegree(&self) -> (i64, i64) {
        (self.z_degree() as i64, -(self.zs_degree() as i64))
    }

    pub fn is_one(&self) -> bool {
        self.z.iter().chain(self.zs.iter()).all(|&k| k == 0)
    }

    pub(crate) fn letters(&self) -> Vec<Letter> {
        let mut out: Vec<Letter> = letters(&self.z).into_iter().map(|gen| Letter { gen, star: false }).collect();
        out.extend(letters(&self.zs).into_iter().map(|gen| Letter { gen, star: true }));
        out
    }

    /// The monomial as a word of generators, in normal order.
    pub fn word(&self, shape: Shape) -> Vec<GenIndex> {
        self.letters()
            .into_iter()
            .map(|l| {
                let (col, row) = shape.col_row(l.gen);
                GenIndex { row, col, starred: l.star }
            })
            .collect()
    }

    /// `[[a, α, exp], ...]` lists for the `z` and `z*` parts.
    pub fn index_lists(&self, shape: Shape) -> (Vec<[usize; 3]>, Vec<[usize; 3]>) {
        let list = |e: &[u16]| {
            e.iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(g, &k)| {
                    let (a, alpha) = shape.col_row(g);
                    [a, alpha, k as usize]
                })
                .collect()
        };
        (list(&self.z), list(&self.zs))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z{:?} zs{:?}", &self.z[..], &self.zs[..])
    }
}
