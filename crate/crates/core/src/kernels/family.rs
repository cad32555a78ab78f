//! The invariant kernels `χ_k`, the finite products `K_l`, the polynomial
//! kernel `K(u)` and its specialisations `K_λ = K(q^{2λ})`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use super::element::{KernelElement, KernelKey};
use crate::algebra::generator::Shape;
use crate::algebra::minors::all_minors;
use crate::error::{Error, Result};
use crate::scalar::{QRational, Real, UPoly};

/// `χ_k = Σ_{J',J''} z^{∧k} ⊗ (z^{∧k})*`.
pub fn chi(shape: Shape, k: usize, trunc: usize) -> Result<KernelElement> {
    if k == 0 || k > shape.m.min(shape.n) {
        return Err(Error::InvalidParameter(format!(
            "chi index {k} outside 1..={}",
            shape.m.min(shape.n)
        )));
    }
    let mut out = KernelElement::zero(shape, trunc);
    for (_, _, minor) in all_minors(shape, k)? {
        out = out.add(&KernelElement::from_tensor(&minor, &minor.star(), trunc)?)?;
    }
    Ok(out)
}

/// `1 + Σ_k (-t)^k χ_k`, with `t` a coefficient polynomial in `u`.
fn factor(shape: Shape, t: &UPoly, trunc: usize) -> Result<KernelElement> {
    let mut out = KernelElement::one(shape, trunc);
    let minus_t = t.scale(&QRational::from_int(-1));
    let mut power = UPoly::one();
    for k in 1..=shape.m.min(shape.n).min(trunc) {
        power = &power * &minus_t;
        out = out.add(&chi(shape, k, trunc)?.scale_upoly(&power))?;
    }
    Ok(out)
}

/// `1 + Σ_k (-q^{2j})^k χ_k`.
pub fn k_factor(shape: Shape, j: i64, trunc: usize) -> Result<KernelElement> {
    factor(shape, &UPoly::constant(QRational::q_pow(2 * j)), trunc)
}

/// `K_l = Π_{j=l}^{-1} (1 + Σ_k (-q^{2j})^k χ_k)`, factors multiplied from
/// `j = l` on the left to `j = -1` on the right.
pub fn k_finite(shape: Shape, l: i64, trunc: usize) -> Result<KernelElement> {
    if l > -1 {
        return Err(Error::InvalidParameter(format!("finite product needs l <= -1, got {l}")));
    }
    let mut out = KernelElement::one(shape, trunc);
    for j in (l..=-1).rev() {
        out = k_factor(shape, j, trunc)?.mul(&out, trunc)?;
    }
    Ok(out)
}

thread_local! {
    static K_POLY: RefCell<HashMap<Shape, Rc<Vec<KernelElement>>>> = RefCell::new(HashMap::new());
}

/// Homogeneous parts `K_d(u)`, `d = 0..=trunc`, of the polynomial kernel.
///
/// `K(u) = (1 + Σ_k (-u)^k χ_k) K(q^2 u)` read at bidegree `(d,d)` and at
/// `u^j` gives `(1 - q^{2j}) c_{d,j} = [u^j] Σ_{k≥1} (-u)^k χ_k K_{d-k}(q^2 u)`.
/// For `j = 0` both sides vanish; `c_{d,0}` then follows from `K_d(1) = 0`.
fn k_poly_parts(shape: Shape, trunc: usize) -> Result<Rc<Vec<KernelElement>>> {
    let cached = K_POLY.with(|c| c.borrow().get(&shape).cloned());
    if let Some(parts) = &cached {
        if parts.len() > trunc {
            return Ok(parts.clone());
        }
    }
    let mut parts: Vec<KernelElement> = cached.map(|p| (*p).clone()).unwrap_or_default();
    let kmax = shape.m.min(shape.n);
    let chis: Vec<KernelElement> = (1..=kmax).map(|k| chi(shape, k, trunc)).collect::<Result<_>>()?;
    let q2 = QRational::q_pow(2);
    for d in parts.len()..=trunc {
        if d == 0 {
            parts.push(KernelElement::one(shape, 0));
            continue;
        }
        let mut rhs = KernelElement::zero(shape, d);
        for k in 1..=kmax.min(d) {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let uk = UPoly::monomial(QRational::from_int(sign), k);
            let shifted = parts[d - k].scale_variable(&q2);
            rhs = rhs.add(&chis[k - 1].mul(&shifted, d)?.scale_upoly(&uk))?;
        }
        let mut kd = KernelElement::zero(shape, d);
        for ((l, r), p) in rhs.terms() {
            let mut coeffs = vec![QRational::zero(); p.coeffs().len().max(1)];
            let mut c0 = QRational::zero();
            for j in 1..p.coeffs().len() {
                let cj = &p.coeff(j) / &QRational::one_minus_q_pow(2 * j as i64);
                c0 = &c0 - &cj;
                coeffs[j] = cj;
            }
            debug_assert!(p.coeff(0).is_zero());
            coeffs[0] = c0;
            kd.add_term(l.clone(), r.clone(), UPoly::from_coeffs(coeffs))?;
        }
        parts.push(kd);
    }
    let parts = Rc::new(parts);
    K_POLY.with(|c| c.borrow_mut().insert(shape, parts.clone()));
    Ok(parts)
}

/// The polynomial kernel `K(u)` up to bidegree `trunc`.
pub fn k_poly(shape: Shape, trunc: usize) -> Result<KernelElement> {
    let parts = k_poly_parts(shape, trunc)?;
    let mut out = KernelElement::zero(shape, trunc);
    for part in parts.iter().take(trunc + 1) {
        out = out.add(&KernelElement::clone(part).truncate(trunc))?;
    }
    Ok(out)
}

/// `K_λ` for integral `λ`: exact substitution `u = q^{2λ}`.
pub fn k_lambda_exact(shape: Shape, lambda: i64, trunc: usize) -> Result<KernelElement> {
    Ok(k_poly(shape, trunc)?.substitute(&QRational::q_pow(2 * lambda)))
}

/// `K_λ` at numeric `q0`, `λ`.
pub fn k_lambda_numeric(shape: Shape, q0: &Real, lambda: &Real, trunc: usize) -> Result<BTreeMap<KernelKey, Real>> {
    let u0 = q0.pow(&(&Real::from_i64(2) * lambda));
    k_poly(shape, trunc)?.substitute_numeric(q0, &u0)
}

/// `χ_j χ_k - χ_k χ_j` at truncation `trunc`; `true` when it vanishes.
pub fn commutator_check(shape: Shape, j: usize, k: usize, trunc: usize) -> Result<(bool, KernelElement)> {
    let a = chi(shape, j, trunc)?;
    let b = chi(shape, k, trunc)?;
    let residual = a.mul(&b, trunc)?.sub(&b.mul(&a, trunc)?)?;
    Ok((residual.is_zero(), residual))
}
