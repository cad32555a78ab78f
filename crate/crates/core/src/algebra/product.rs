//! Memoized normal ordering.
//!
//! Products are built by inserting one letter at a time into an already
//! normal-ordered monomial:
//!
//! * a `z` letter only interacts with the `z` part;
//! * a `z*` letter inserted on the left of `Z` passes through it, leaving
//!   at most one `z*` behind, so `z*_x Z = Σ c Z' z*_b + Σ c Z''`;
//! * the surviving `z*` is then inserted into the `z*` part.
//!
//! Results are cached per thread and per shape.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use super::generator::{Letter, Shape};
use super::monomial::{first_letter, letters, with_added, with_removed, zero_exps, Exps, Monomial};
use super::relations::RuleTable;
use crate::scalar::QRational;

pub(crate) type Combo = Vec<(Exps, QRational)>;
pub(crate) type PassCombo = Vec<(Exps, Option<usize>, QRational)>;

pub(crate) struct Engine {
    shape: Shape,
    rules: RuleTable,
    zins: HashMap<(usize, Exps), Rc<Combo>>,
    sins: HashMap<(usize, Exps), Rc<Combo>>,
    pass: HashMap<(usize, Exps), Rc<PassCombo>>,
}

thread_local! {
    static ENGINES: RefCell<HashMap<Shape, Rc<RefCell<Engine>>>> = RefCell::new(HashMap::new());
}

/// Runs `f` with the cached engine for `shape`.
pub(crate) fn with_engine<R>(shape: Shape, f: impl FnOnce(&mut Engine) -> R) -> R {
    let engine = ENGINES.with(|all| {
        all.borrow_mut()
            .entry(shape)
            .or_insert_with(|| Rc::new(RefCell::new(Engine::new(shape))))
            .clone()
    });
    let mut guard = engine.borrow_mut();
    f(&mut guard)
}

fn accumulate<K: std::hash::Hash + Eq>(acc: &mut HashMap<K, QRational>, key: K, c: QRational) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(&key) {
        Some(v) => *v = &*v + &c,
        None => {
            acc.insert(key, c);
        }
    }
}

fn into_combo(acc: HashMap<Exps, QRational>) -> Combo {
    let mut v: Combo = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    v
}

impl Engine {
    fn new(shape: Shape) -> Engine {
        Engine {
            shape,
            rules: RuleTable::new(shape),
            zins: HashMap::new(),
            sins: HashMap::new(),
            pass: HashMap::new(),
        }
    }

    /// `z_x · Z` for a normal-ordered holomorphic monomial `Z`.
    pub fn insert_z(&mut self, x: usize, z: &Exps) -> Rc<Combo> {
        self.insert(x, z, false)
    }

    /// `z*_x · S` for a normal-ordered antiholomorphic monomial `S`.
    pub fn insert_s(&mut self, x: usize, s: &Exps) -> Rc<Combo> {
        self.insert(x, s, true)
    }

    fn insert(&mut self, x: usize, e: &Exps, starred: bool) -> Rc<Combo> {
        let key = (x, e.clone());
        let memo = if starred { &self.sins } else { &self.zins };
        if let Some(r) = memo.get(&key) {
            return r.clone();
        }
        let result = match first_letter(e) {
            Some(y) if x > y => {
                let rest = with_removed(e, y);
                let rule = if starred { self.rules.ss(x, y).to_vec() } else { self.rules.zz(x, y).to_vec() };
                let mut acc = HashMap::new();
                for (c, u, v) in rule {
                    let inner = self.insert(v, &rest, starred);
                    for (m1, c1) in inner.iter() {
                        let c01 = &c * c1;
                        let outer = self.insert(u, m1, starred);
                        for (m2, c2) in outer.iter() {
                            accumulate(&mut acc, m2.clone(), &c01 * c2);
                        }
                    }
                }
                into_combo(acc)
            }
            _ => vec![(with_added(e, x), QRational::one())],
        };
        let result = Rc::new(result);
        let memo = if starred { &mut self.sins } else { &mut self.zins };
        memo.insert(key, result.clone());
        result
    }

    /// `z*_x · Z = Σ c Z' (z*_b or 1)`.
    pub fn pass_star(&mut self, x: usize, z: &Exps) -> Rc<PassCombo> {
        let key = (x, z.clone());
        if let Some(r) = self.pass.get(&key) {
            return r.clone();
        }
        let result = match first_letter(z) {
            None => vec![(z.clone(), Some(x), QRational::one())],
            Some(y) => {
                let rest = with_removed(z, y);
                let rule = self.rules.sz(x, y).clone();
                let mut acc: HashMap<(Exps, Option<usize>), QRational> = HashMap::new();
                for (c, a, b) in rule.terms {
                    let inner = self.pass_star(b, &rest);
                    for (z3, s, c3) in inner.iter() {
                        let c03 = &c * c3;
                        let outer = self.insert_z(a, z3);
                        for (z4, c4) in outer.iter() {
                            accumulate(&mut acc, (z4.clone(), *s), &c03 * c4);
                        }
                    }
                }
                if let Some(c) = rule.scalar {
                    accumulate(&mut acc, (rest, None), c);
                }
                let mut v: PassCombo = acc.into_iter().map(|((e, s), c)| (e, s, c)).collect();
                v.sort_by(|p, q| (&p.0, p.1).cmp(&(&q.0, q.1)));
                v
            }
        };
        let result = Rc::new(result);
        self.pass.insert(key, result.clone());
        result
    }

    /// Left multiplication of a normal-ordered combination by one letter.
    pub fn left_mul_letter(&mut self, letter: Letter, input: &HashMap<Monomial, QRational>) -> HashMap<Monomial, QRational> {
        let mut acc = HashMap::new();
        for (mono, c) in input {
            if letter.star {
                let passed = self.pass_star(letter.gen, &mono.z);
                for (z2, s, c2) in passed.iter() {
                    let c02 = c * c2;
                    match s {
                        None => accumulate(&mut acc, Monomial { z: z2.clone(), zs: mono.zs.clone() }, c02),
                        Some(b) => {
                            let ins = self.insert_s(*b, &mono.zs);
                            for (s3, c3) in ins.iter() {
                                accumulate(&mut acc, Monomial { z: z2.clone(), zs: s3.clone() }, &c02 * c3);
                            }
                        }
                    }
                }
            } else {
                let ins = self.insert_z(letter.gen, &mono.z);
                for (z2, c2) in ins.iter() {
                    accumulate(&mut acc, Monomial { z: z2.clone(), zs: mono.zs.clone() }, c * c2);
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        acc
    }

    /// Normal form of the product of two normal-ordered monomials.
    pub fn mul_monomials(&mut self, left: &Monomial, right: &Monomial) -> HashMap<Monomial, QRational> {
        // S1 · Z2 first, keeping S2 aside.
        let gens = self.shape.gens();
        let mut state: HashMap<Monomial, QRational> = HashMap::new();
        state.insert(Monomial { z: right.z.clone(), zs: zero_exps(gens) }, QRational::one());
        for s in letters(&left.zs).into_iter().rev() {
            state = self.left_mul_letter(Letter { gen: s, star: true }, &state);
        }
        for z in letters(&left.z).into_iter().rev() {
            state = self.left_mul_letter(Letter { gen: z, star: false }, &state);
        }
        // (Z S) · S2: insert the letters of S into S2 from the right.
        let mut out = HashMap::new();
        for (mono, c) in state {
            let mut part: HashMap<Exps, QRational> = HashMap::new();
            part.insert(right.zs.clone(), QRational::one());
            for s in letters(&mono.zs).into_iter().rev() {
                let mut next = HashMap::new();
                for (e, c1) in &part {
                    for (e2, c2) in self.insert_s(s, e).iter() {
                        accumulate(&mut next, e2.clone(), c1 * c2);
                    }
                }
                part = next;
            }
            for (zs, c1) in part {
                accumulate(&mut out, Monomial { z: mono.z.clone(), zs }, &c * &c1);
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }
}

impl Engine {
    /// `left · right` for two holomorphic (or, with `starred`, two
    /// antiholomorphic) normal-ordered monomials.
    pub fn mul_same(&mut self, left: &Exps, right: &Exps, starred: bool) -> Combo {
        let mut part: HashMap<Exps, QRational> = HashMap::new();
        part.insert(right.clone(), QRational::one());
        for x in letters(left).into_iter().rev() {
            let mut next = HashMap::new();
            for (e, c) in &part {
                for (e2, c2) in self.insert(x, e, starred).iter() {
                    accumulate(&mut next, e2.clone(), c * c2);
                }
            }
            part = next;
        }
        into_combo(part)
    }
}
