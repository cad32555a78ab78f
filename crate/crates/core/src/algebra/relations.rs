//! Two-letter rewrite rules derived from the commutation relations.
//!
//! Every adjacent pair that is out of canonical order is rewritten into a
//! combination of in-order pairs (or a scalar):
//!
//! * `z_x z_y` with `x > y` uses the three holomorphic relations (scalar swap
//!   by `q^{-1}`, free commutation, or swap plus a `(q - q^{-1})` correction);
//! * `z*_x z*_y` with `x > y` uses their images under the involution;
//! * `z*_x z_y` uses the mixed relation with the R-matrix.

use super::generator::Shape;
use crate::scalar::QRational;

/// The R-matrix entry `R_{ij}^{kl}`.
pub fn r_matrix(i: usize, j: usize, k: usize, l: usize) -> QRational {
    if i != j && i == k && j == l {
        QRational::q_pow(-1)
    } else if i == j && j == k && k == l {
        QRational::one()
    } else if i == j && k == l && l > j {
        &QRational::one() - &QRational::q_pow(-2)
    } else {
        QRational::zero()
    }
}

/// `q - q^{-1}`.
pub(crate) fn q_minus_q_inv() -> QRational {
    &QRational::q_pow(1) - &QRational::q_pow(-1)
}

/// Result of rewriting `z*_x z_y`: terms `c * z_a z*_b` plus an optional scalar.
#[derive(Clone, Debug, Default)]
pub(crate) struct MixedRule {
    pub terms: Vec<(QRational, usize, usize)>,
    pub scalar: Option<QRational>,
}

/// Rewrite rules for one shape, indexed by canonical generator positions.
#[derive(Clone, Debug)]
pub(crate) struct RuleTable {
    gens: usize,
    /// `zz[x * gens + y]` for `x > y`: terms `c * z_u z_v` with `u <= v`.
    zz: Vec<Vec<(QRational, usize, usize)>>,
    /// `ss[x * gens + y]` for `x > y`: terms `c * z*_u z*_v` with `u <= v`.
    ss: Vec<Vec<(QRational, usize, usize)>>,
    sz: Vec<MixedRule>,
}

impl RuleTable {
    pub fn new(shape: Shape) -> RuleTable {
        let g = shape.gens();
        let mut zz = vec![Vec::new(); g * g];
        let mut ss = vec![Vec::new(); g * g];
        let mut sz = vec![MixedRule::default(); g * g];
        for x in 0..g {
            for y in 0..g {
                if x > y {
                    zz[x * g + y] = holomorphic_rule(shape, x, y, false);
                    ss[x * g + y] = holomorphic_rule(shape, x, y, true);
                }
                sz[x * g + y] = mixed_rule(shape, x, y);
            }
        }
        RuleTable { gens: g, zz, ss, sz }
    }

    pub fn zz(&self, x: usize, y: usize) -> &[(QRational, usize, usize)] {
        &self.zz[x * self.gens + y]
    }

    pub fn ss(&self, x: usize, y: usize) -> &[(QRational, usize, usize)] {
        &self.ss[x * self.gens + y]
    }

    pub fn sz(&self, x: usize, y: usize) -> &MixedRule {
        &self.sz[x * self.gens + y]
    }
}

/// Rule for the out-of-order pair `x y` (`x > y`), either among the `z` or,
/// with `starred`, among the `z*`.
fn holomorphic_rule(shape: Shape, x: usize, y: usize, starred: bool) -> Vec<(QRational, usize, usize)> {
    let (b, beta) = shape.col_row(x);
    let (a, alpha) = shape.col_row(y);
    // The holomorphic swap factor is q^{-1}; its adjoint is q.
    let swap = if starred { QRational::q_pow(1) } else { QRational::q_pow(-1) };
    if b == a || beta == alpha {
        return vec![(swap, y, x)];
    }
    debug_assert!(b > a);
    if beta < alpha {
        return vec![(QRational::one(), y, x)];
    }
    // beta > alpha, b > a. The correction pair z_a^β z_b^α is already in
    // order; its starred image z*_b^α z*_a^β commutes freely into order.
    let u = shape.index(a, beta);
    let v = shape.index(b, alpha);
    debug_assert!(u < v);
    let corr = if starred { q_minus_q_inv() } else { -&q_minus_q_inv() };
    vec![(QRational::one(), y, x), (corr, u, v)]
}

/// `(z_b^β)* z_a^α = q^2 Σ R_{ba}^{b'a'} R_{βα}^{β'α'} z_{a'}^{α'} (z_{b'}^{β'})* + (1 - q^2) δ_ab δ^{αβ}`.
fn mixed_rule(shape: Shape, x: usize, y: usize) -> MixedRule {
    let (b, beta) = shape.col_row(x);
    let (a, alpha) = shape.col_row(y);
    let q2 = QRational::q_pow(2);
    let mut terms = Vec::new();
    for b1 in 1..=shape.n {
        for a1 in 1..=shape.n {
            let rc = r_matrix(b, a, b1, a1);
            if rc.is_zero() {
                continue;
            }
            for beta1 in 1..=shape.m {
                for alpha1 in 1..=shape.m {
                    let rr = r_matrix(beta, alpha, beta1, alpha1);
                    if rr.is_zero() {
                        continue;
                    }
                    let c = &(&q2 * &rc) * &rr;
                    terms.push((c, shape.index(a1, alpha1), shape.index(b1, beta1)));
                }
            }
        }
    }
    let scalar = (a == b && alpha == beta).then(|| QRational::one_minus_q_pow(2));
    MixedRule { terms, scalar }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_matrix_cases() {
        assert_eq!(r_matrix(2, 1, 2, 1), QRational::q_pow(-1));
        assert_eq!(r_matrix(1, 1, 1, 1), QRational::one());
        assert_eq!(r_matrix(1, 1, 2, 2), &QRational::one() - &QRational::q_pow(-2));
        assert!(r_matrix(2, 2, 1, 1).is_zero());
        assert!(r_matrix(1, 2, 2, 1).is_zero());
    }

    #[test]
    fn disc_mixed_rule() {
        let s = Shape::new(1, 1).unwrap();
        let t = RuleTable::new(s);
        let r = t.sz(0, 0);
        assert_eq!(r.terms, vec![(QRational::q_pow(2), 0, 0)]);
        assert_eq!(r.scalar, Some(QRational::one_minus_q_pow(2)));
    }

    #[test]
    fn ball_mixed_rule_off_diagonal() {
        // m=1, n=2: z2* z1 = q z1 z2*.
        let s = Shape::new(1, 2).unwrap();
        let t = RuleTable::new(s);
        let r = t.sz(1, 0);
        assert_eq!(r.terms, vec![(QRational::q_pow(1), 0, 1)]);
        assert!(r.scalar.is_none());
    }
}
