use super::element::{normal_form, Element};
use super::generator::{GenIndex, Shape};
use crate::error::{Error, Result};
use crate::scalar::QRational;

/// All permutations of `0..k` with their inversion counts.
pub(crate) fn permutations(k: usize) -> Vec<(Vec<usize>, usize)> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<(Vec<usize>, usize)>) {
        let k = used.len();
        if prefix.len() == k {
            let inv = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).filter(|&(i, j)| prefix[i] > prefix[j]).count();
            out.push((prefix.clone(), inv));
            return;
        }
        for i in 0..k {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// All strictly increasing `k`-subsets of `1..=n`.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// The q-minor with row set `rows` and column set `cols`:
/// `Σ_s (-q)^{l(s)} z_{a_1}^{α_{s(1)}} ... z_{a_k}^{α_{s(k)}}`.
pub fn qminor(shape: Shape, rows: &[usize], cols: &[usize]) -> Result<Element> {
    if rows.len() != cols.len() || rows.is_empty() {
        return Err(Error::MinorSizeMismatch { rows: rows.len(), cols: cols.len() });
    }
    let increasing = |v: &[usize]| v.windows(2).all(|p| p[0] < p[1]);
    if !increasing(rows) || !increasing(cols) {
        return Err(Error::InvalidParameter("minor indices must be strictly increasing".into()));
    }
    let mut out = Element::zero(shape);
    for (perm, inv) in permutations(rows.len()) {
        let word: Vec<GenIndex> = cols.iter().zip(&perm).map(|(&a, &s)| GenIndex::z(a, rows[s])).collect();
        let sign = QRational::term(if inv % 2 == 0 { 1 } else { -1 }, inv as i64);
        out = &out + &normal_form(shape, &word)?.scale(&sign);
    }
    Ok(out)
}

/// All `k`-minors of the shape, as `(rows, cols, minor)`.
pub fn all_minors(shape: Shape, k: usize) -> Result<Vec<(Vec<usize>, Vec<usize>, Element)>> {
    let mut out = Vec::new();
    for rows in subsets(shape.m, k) {
        for cols in subsets(shape.n, k) {
            let e = qminor(shape, &rows, &cols)?;
            out.push((rows.clone(), cols, e));
        }
    }
    Ok(out)
}

/// `y = 1 + Σ_k (-1)^k Σ_{J',J''} z^{∧k} (z^{∧k})*`.
pub fn build_y(shape: Shape) -> Result<Element> {
    let mut y = Element::one(shape);
    for k in 1..=shape.m.min(shape.n) {
        let sign = QRational::from_int(if k % 2 == 0 { 1 } else { -1 });
        for (_, _, minor) in all_minors(shape, k)? {
            y = &y + &minor.mul(&minor.star())?.scale(&sign);
        }
    }
    Ok(y)
}
