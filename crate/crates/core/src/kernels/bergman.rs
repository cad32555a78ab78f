//! The Bergman projection `P_λ f = (id ⊗ ν_λ)(K_λ (1 ⊗ f))` and an
//! independent brute-force projection used to check it.

use std::collections::BTreeMap;

use super::family::k_lambda_numeric;
use crate::algebra::generator::Shape;
use crate::algebra::monomial::Monomial;
use crate::algebra::Element;
use crate::error::{Error, Result};
use crate::fock::fock_basis;
use crate::integral::{IntegralParams, Integrator};
use crate::scalar::{QRational, Real};

/// An element with numeric coefficients.
pub type NumericElement = BTreeMap<Monomial, Real>;

/// Evaluates the coefficients of an element at `q0`.
pub fn to_numeric(f: &Element, q0: &Real) -> Result<NumericElement> {
    f.terms().iter().map(|(m, c)| Ok((m.clone(), c.eval(q0)?))).collect()
}

/// Largest coefficientwise difference.
pub fn max_abs_diff(a: &NumericElement, b: &NumericElement) -> Real {
    let mut worst = Real::zero();
    for (m, x) in a {
        let d = match b.get(m) {
            Some(y) => (x - y).abs(),
            None => x.abs(),
        };
        worst = worst.max(&d);
    }
    for (m, y) in b {
        if !a.contains_key(m) {
            worst = worst.max(&y.abs());
        }
    }
    worst
}

/// Default kernel truncation for applying `P_λ` to `f`.
pub fn default_trunc(f: &Element) -> usize {
    f.max_z_degree() + 1
}

/// Result of a tail-controlled Bergman projection.
#[derive(Clone, Debug)]
pub struct Projection {
    pub value: NumericElement,
    /// Bound on the neglected integral tails, summed with kernel weights.
    pub error_bound: Real,
}

/// `P_λ f = Σ c(p, r) ν_λ(r f) p` over the kernel terms `c(p, r) p ⊗ r`.
pub fn bergman_apply(f: &Element, params: &IntegralParams, trunc: usize) -> Result<Projection> {
    let mut integ = Integrator::new(f.shape(), params.clone())?;
    bergman_apply_with(&mut integ, f, trunc)
}

/// [`bergman_apply`] with a caller-provided integrator, reusing its cache.
pub fn bergman_apply_with(integ: &mut Integrator, f: &Element, trunc: usize) -> Result<Projection> {
    let shape = f.shape();
    shape.check(integ.shape())?;
    let p = integ.params().clone();
    let kernel = k_lambda_numeric(shape, &p.q0, &p.lambda, trunc)?;
    let mut value = NumericElement::new();
    let mut error_bound = Real::zero();
    for ((left, right), c) in kernel {
        if c.is_zero() {
            continue;
        }
        let r = Element::from_monomial(shape, Monomial::antiholomorphic(right), QRational::one());
        let est = integ.integrate(&r.mul(f)?)?;
        if est.value.is_zero() {
            continue;
        }
        error_bound = &error_bound + &(&c.abs() * &est.tail_bound);
        let slot = value.entry(Monomial::holomorphic(left)).or_insert_with(Real::zero);
        *slot = &*slot + &(&c * &est.value);
    }
    Ok(Projection { value, error_bound })
}

/// Orthogonal projection of `f` onto holomorphic polynomials of degree at
/// most `d_hol`, through the Gram matrix `⟨z^I, z^K⟩ = ν_λ(z^{K*} z^I)`.
/// All integrals are summed over Fock degrees `0..=d_full`.
pub fn bergman_oracle(f: &Element, params: &IntegralParams, d_hol: usize, d_full: usize) -> Result<NumericElement> {
    BergmanOracle::new(f.shape(), params.clone(), d_hol, d_full)?.project(f)
}

/// Brute-force projector. Holomorphic monomials of different degrees are
/// orthogonal, so the Gram matrix is assembled one degree at a time and
/// reused across inputs.
pub struct BergmanOracle {
    integ: Integrator,
    d_full: usize,
    /// Per degree: basis monomials, their adjoints, and `g[K][I] = ⟨z^I, z^K⟩`.
    blocks: Vec<(Vec<Monomial>, Vec<Element>, Vec<Vec<Real>>)>,
}

impl BergmanOracle {
    pub fn new(shape: Shape, params: IntegralParams, d_hol: usize, d_full: usize) -> Result<BergmanOracle> {
        let mut integ = Integrator::new(shape, params)?;
        let mut blocks = Vec::with_capacity(d_hol + 1);
        for k in 0..=d_hol {
            let monos: Vec<Monomial> =
                fock_basis(shape, k).indices.iter().map(|e| Monomial::holomorphic(e.clone())).collect();
            let basis: Vec<Element> =
                monos.iter().map(|m| Element::from_monomial(shape, m.clone(), QRational::one())).collect();
            let stars: Vec<Element> = basis.iter().map(Element::star).collect();
            let mut g = vec![vec![Real::zero(); basis.len()]; basis.len()];
            for (kk, s) in stars.iter().enumerate() {
                for (i, b) in basis.iter().enumerate() {
                    g[kk][i] = integ.integrate_truncated(&s.mul(b)?, d_full)?;
                }
            }
            blocks.push((monos, stars, g));
        }
        Ok(BergmanOracle { integ, d_full, blocks })
    }

    /// Solves `Σ_I c_I ⟨z^I, z^K⟩ = ⟨f, z^K⟩` degree by degree.
    pub fn project(&mut self, f: &Element) -> Result<NumericElement> {
        f.shape().check(self.integ.shape())?;
        let mut out = NumericElement::new();
        for (monos, stars, g) in &self.blocks {
            let b = stars
                .iter()
                .map(|s| self.integ.integrate_truncated(&s.mul(f)?, self.d_full))
                .collect::<Result<Vec<Real>>>()?;
            for (mono, x) in monos.iter().zip(solve(g.clone(), b)?) {
                if !x.is_zero() {
                    out.insert(mono.clone(), x);
                }
            }
        }
        Ok(out)
    }
}

/// Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<Real>>, mut b: Vec<Real>) -> Result<Vec<Real>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).expect("finite"))
            .expect("nonempty range");
        if a[pivot][col].is_zero() {
            return Err(Error::SingularGram);
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = &a[row][col] / &a[col][col];
            if factor.is_zero() {
                continue;
            }
            for j in col..n {
                let v = &a[row][j] - &(&factor * &a[col][j]);
                a[row][j] = v;
            }
            let v = &b[row] - &(&factor * &b[col]);
            b[row] = v;
        }
    }
    let mut x = vec![Real::zero(); n];
    for row in (0..n).rev() {
        let mut s = b[row].clone();
        for j in row + 1..n {
            s = &s - &(&a[row][j] * &x[j]);
        }
        x[row] = &s / &a[row][row];
    }
    Ok(x)
}
