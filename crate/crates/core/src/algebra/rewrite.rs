//! Plain word rewriting, independent of the memoized engine.
//!
//! Used as a cross-check: reducing the same word with different choices of
//! redex must give the same element.

use std::collections::HashMap;

use super::element::Element;
use super::generator::{GenIndex, Letter, Shape};
use super::monomial::{zero_exps, Monomial};
use super::relations::RuleTable;
use crate::error::Result;
use crate::scalar::QRational;

/// Which adjacent out-of-order pair to rewrite first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

fn out_of_order(x: Letter, y: Letter) -> bool {
    match (x.star, y.star) {
        (true, false) => true,
        (false, true) => false,
        _ => x.gen > y.gen,
    }
}

/// One rewrite step at position `i` (the pair `w[i] w[i+1]`).
fn rewrite_at(rules: &RuleTable, w: &[Letter], i: usize) -> Vec<(QRational, Vec<Letter>)> {
    let (x, y) = (w[i], w[i + 1]);
    let splice = |mid: &[Letter]| {
        let mut v = Vec::with_capacity(w.len());
        v.extend_from_slice(&w[..i]);
        v.extend_from_slice(mid);
        v.extend_from_slice(&w[i + 2..]);
        v
    };
    let mut out = Vec::new();
    if x.star && !y.star {
        let rule = rules.sz(x.gen, y.gen);
        for (c, a, b) in &rule.terms {
            out.push((c.clone(), splice(&[Letter { gen: *a, star: false }, Letter { gen: *b, star: true }])));
        }
        if let Some(c) = &rule.scalar {
            out.push((c.clone(), splice(&[])));
        }
    } else {
        let star = x.star;
        let rule = if star { rules.ss(x.gen, y.gen) } else { rules.zz(x.gen, y.gen) };
        for (c, u, v) in rule {
            out.push((c.clone(), splice(&[Letter { gen: *u, star }, Letter { gen: *v, star }])));
        }
    }
    out
}

/// Reduces a word to normal form by repeated single-pair rewrites.
pub fn reduce_word(shape: Shape, word: &[GenIndex], strategy: Strategy) -> Result<Element> {
    for g in word {
        g.validate(shape)?;
    }
    let rules = RuleTable::new(shape);
    let start: Vec<Letter> = word.iter().map(|g| g.letter(shape)).collect();
    let mut pending: HashMap<Vec<Letter>, QRational> = HashMap::new();
    pending.insert(start, QRational::one());
    let mut done = Element::zero(shape);
    while let Some(w) = pending.keys().next().cloned() {
        let c = pending.remove(&w).expect("key just read");
        if c.is_zero() {
            continue;
        }
        let mut redexes = (0..w.len().saturating_sub(1)).filter(|&i| out_of_order(w[i], w[i + 1]));
        let pos = match strategy {
            Strategy::Leftmost => redexes.next(),
            Strategy::Rightmost => redexes.next_back(),
        };
        match pos {
            None => {
                let mut z = zero_exps(shape.gens());
                let mut zs = zero_exps(shape.gens());
                for l in &w {
                    if l.star {
                        zs[l.gen] += 1;
                    } else {
                        z[l.gen] += 1;
                    }
                }
                done.add_term(Monomial::new(z, zs), c);
            }
            Some(i) => {
                for (c1, w1) in rewrite_at(&rules, &w, i) {
                    let v = &c * &c1;
                    let e = pending.entry(w1).or_default();
                    *e = &*e + &v;
                }
            }
        }
    }
    Ok(done)
}
