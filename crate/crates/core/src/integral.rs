//! Invariant integrals as weighted traces over the Fock space.
//!
//! `ν_λ(f) = C(λ) Σ_k q^{2kλ} Σ_{v ∈ H_k} Θ(f)_{vv} Γ(v)`. The trace is taken
//! in the PBW basis, which need not be orthogonal. The trace does not depend
//! on the basis, so no Gram factor enters.

use std::collections::HashMap;
use std::rc::Rc;

use crate::algebra::generator::Shape;
use crate::algebra::monomial::{Exps, Monomial};
use crate::algebra::product::{with_engine, Engine};
use crate::algebra::Element;
use crate::error::{Error, Result};
use crate::fock::{annihilate, fock_basis, gamma_exponent};
use crate::scalar::{QRational, Real, UPoly};

/// Numeric parameters of an invariant integral.
#[derive(Clone, Debug)]
pub struct IntegralParams {
    pub q0: Real,
    pub lambda: Real,
    /// Tail tolerance: summation stops once a per-degree term is below this.
    pub eps: Real,
    /// Hard cap on the summation degree.
    pub max_degree: usize,
}

impl IntegralParams {
    pub fn new(q0: Real, lambda: Real) -> IntegralParams {
        IntegralParams { q0, lambda, eps: Real::from_f64(1e-16), max_degree: 400 }
    }

    pub fn from_f64(q0: f64, lambda: f64) -> IntegralParams {
        IntegralParams::new(Real::from_f64(q0), Real::from_f64(lambda))
    }

    pub fn with_eps(mut self, eps: Real) -> IntegralParams {
        self.eps = eps;
        self
    }

    pub fn validate(&self, shape: Shape) -> Result<()> {
        if !(self.q0 > Real::zero() && self.q0 < Real::one()) {
            return Err(Error::InvalidParameter(format!("q must lie in (0,1), got {}", self.q0.to_f64())));
        }
        let bound = Real::from_i64(shape.big_n() as i64 - 1);
        if self.lambda <= bound {
            return Err(Error::Divergent(format!(
                "lambda = {} must exceed N - 1 = {}",
                self.lambda.to_f64(),
                shape.big_n() - 1
            )));
        }
        if self.eps.is_negative() || self.eps.is_zero() {
            return Err(Error::InvalidParameter("tail tolerance must be positive".into()));
        }
        Ok(())
    }

    /// `u = q^{2λ}`.
    pub fn u(&self) -> Real {
        self.q0.pow(&(&Real::from_i64(2) * &self.lambda))
    }

    /// Geometric decay ratio allowed by the tail rule:
    /// `1.5 q^{2(λ + 1 - N)}`.
    pub fn tail_ratio(&self, shape: Shape) -> Real {
        let e = &Real::from_i64(2) * &(&self.lambda + &Real::from_i64(1 - shape.big_n() as i64));
        &Real::from_f64(1.5) * &self.q0.pow(&e)
    }
}

/// A tail-controlled sum.
#[derive(Clone, Debug)]
pub struct Estimate {
    pub value: Real,
    /// Bound on the neglected tail.
    pub tail_bound: Real,
    /// Last degree included.
    pub degree: usize,
}

/// Stopping rule: three consecutive terms decreasing by at most `ratio`,
/// the last below `eps`.
struct TailRule {
    ratio: Real,
    eps: Real,
    last: Vec<Real>,
}

impl TailRule {
    fn new(ratio: Real, eps: Real) -> Result<TailRule> {
        if ratio >= Real::one() {
            return Err(Error::NotConverging(format!("decay ratio {} is not below 1", ratio.to_f64())));
        }
        Ok(TailRule { ratio, eps, last: Vec::new() })
    }

    /// Feeds `|T_k|`; returns the tail bound once the rule is met.
    fn push(&mut self, t: Real) -> Option<Real> {
        self.last.push(t.abs());
        if self.last.len() > 3 {
            self.last.remove(0);
        }
        if self.last.len() < 3 {
            return None;
        }
        let [a, b, c] = [&self.last[0], &self.last[1], &self.last[2]];
        let decays = *b <= &self.ratio * a && *c <= &self.ratio * b;
        if decays && *c < self.eps {
            Some(&(c * &self.ratio) / &(&Real::one() - &self.ratio))
        } else {
            None
        }
    }
}

/// `C(λ)` as a polynomial in `u = q^{2λ}`:
/// `Π_{j<n, k<m} (1 - u q^{2(1-N)} q^{2(j+k)})`.
pub fn c_lambda(shape: Shape) -> UPoly {
    let mut out = UPoly::one();
    for j in 0..shape.n {
        for k in 0..shape.m {
            let e = 2 * (1 - shape.big_n() as i64) + 2 * (j + k) as i64;
            let factor = UPoly::from_coeffs(vec![QRational::one(), -QRational::q_pow(e)]);
            out = &out * &factor;
        }
    }
    out
}

/// `C(λ)` evaluated at `q0`, `λ`.
pub fn c_lambda_numeric(shape: Shape, q0: &Real, lambda: &Real) -> Real {
    let base = &Real::from_i64(2) * &(&(lambda + &Real::one()) - &Real::from_i64(shape.big_n() as i64));
    let lead = q0.pow(&base);
    let mut out = Real::one();
    for j in 0..shape.n {
        for k in 0..shape.m {
            out = &out * &(&Real::one() - &(&lead * &q0.powi(2 * (j + k) as i64)));
        }
    }
    out
}

/// Closed form of `tr(Θ(y)^λ Γ) = 1 / C(λ)`.
pub fn trace_y_closed(shape: Shape, q0: &Real, lambda: &Real) -> Result<Real> {
    if *lambda <= Real::from_i64(shape.big_n() as i64 - 1) {
        return Err(Error::Divergent(format!(
            "lambda = {} must exceed N - 1 = {}",
            lambda.to_f64(),
            shape.big_n() - 1
        )));
    }
    let c = c_lambda_numeric(shape, q0, lambda);
    if c.is_negative() || c.is_zero() || !c.is_finite() {
        return Err(Error::Divergent("nonpositive normalising factor".into()));
    }
    Ok(&Real::one() / &c)
}

/// Per-generator weights `q^{2(λ - (N + 1 - a - α))}`.
fn trace_weights(shape: Shape, q0: &Real, lambda: &Real) -> Vec<Real> {
    let two = Real::from_i64(2);
    (0..shape.gens())
        .map(|g| {
            let mut idx = vec![0u16; shape.gens()];
            idx[g] = 1;
            let e = &two * &(lambda - &Real::from_i64(gamma_exponent(shape, &idx)));
            q0.pow(&e)
        })
        .collect()
}

/// `tr(Θ(y)^λ Γ)` summed degree by degree. The degree-`k` term is the
/// complete homogeneous symmetric polynomial `h_k` of the weights.
pub fn trace_y_series(shape: Shape, q0: &Real, lambda: &Real, eps: &Real, max_degree: usize) -> Result<Estimate> {
    let params = IntegralParams { q0: q0.clone(), lambda: lambda.clone(), eps: eps.clone(), max_degree };
    params.validate(shape)?;
    let w = trace_weights(shape, q0, lambda);
    let mut rule = TailRule::new(params.tail_ratio(shape), eps.clone())?;
    // h[j] = h_k(w_0, ..., w_j) for the current k.
    let mut h = vec![Real::one(); w.len()];
    let mut value = Real::zero();
    for k in 0..=max_degree {
        if k > 0 {
            let mut prev = Real::zero();
            for j in 0..w.len() {
                h[j] = &prev + &(&w[j] * &h[j]);
                prev = h[j].clone();
            }
        }
        let t = h[w.len() - 1].clone();
        value = &value + &t;
        if let Some(tail_bound) = rule.push(t) {
            return Ok(Estimate { value, tail_bound, degree: k });
        }
    }
    Err(Error::NotConverging(format!("no geometric decay up to degree {max_degree}")))
}

/// Evaluates `ν_λ` with caching of per-monomial, per-degree traces.
pub struct Integrator {
    shape: Shape,
    params: IntegralParams,
    c: Real,
    /// `q^{2(λ - (N+1-a-α))}` per generator.
    weights: Vec<Real>,
    cache: HashMap<(Monomial, usize), Real>,
    /// Numeric images of basis vectors under single letters.
    actions: HashMap<(usize, bool, Exps), Rc<Vec<(Exps, Real)>>>,
}

impl Integrator {
    pub fn new(shape: Shape, params: IntegralParams) -> Result<Integrator> {
        params.validate(shape)?;
        let c = c_lambda_numeric(shape, &params.q0, &params.lambda);
        let weights = trace_weights(shape, &params.q0, &params.lambda);
        Ok(Integrator { shape, params, c, weights, cache: HashMap::new(), actions: HashMap::new() })
    }

    pub fn params(&self) -> &IntegralParams {
        &self.params
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    /// `Θ(letter)` on one basis vector, evaluated at `q0`.
    fn letter_action(&mut self, eng: &mut Engine, gen: usize, star: bool, e: &Exps) -> Result<Rc<Vec<(Exps, Real)>>> {
        let key = (gen, star, e.clone());
        if let Some(v) = self.actions.get(&key) {
            return Ok(v.clone());
        }
        let exact: Vec<(Exps, QRational)> = if star {
            annihilate(eng, gen, e)
        } else {
            eng.insert_z(gen, e).iter().cloned().collect()
        };
        let numeric = exact.into_iter().map(|(e2, c)| Ok((e2, c.eval(&self.params.q0)?))).collect::<Result<Vec<_>>>()?;
        let numeric = Rc::new(numeric);
        self.actions.insert(key, numeric.clone());
        Ok(numeric)
    }

    /// `Σ_{v ∈ H_k} Θ(mono)_{vv} q^{2kλ} Γ(v)` for a balanced monomial.
    fn monomial_term(&mut self, mono: &Monomial, k: usize) -> Result<Real> {
        if let Some(v) = self.cache.get(&(mono.clone(), k)) {
            return Ok(v.clone());
        }
        let basis = fock_basis(self.shape, k);
        let letters: Vec<_> = mono.letters().into_iter().rev().collect();
        let shape = self.shape;
        let mut total = Real::zero();
        with_engine(shape, |eng| -> Result<()> {
            for e in basis.indices.iter() {
                // z* letters act first, rightmost first.
                let mut cur: HashMap<Exps, Real> = HashMap::from([(e.clone(), Real::one())]);
                for l in &letters {
                    let mut next: HashMap<Exps, Real> = HashMap::new();
                    for (src, c) in &cur {
                        for (tgt, c2) in self.letter_action(eng, l.gen, l.star, src)?.iter() {
                            let slot = next.entry(tgt.clone()).or_insert_with(Real::zero);
                            *slot = &*slot + &(c * c2);
                        }
                    }
                    cur = next;
                    if cur.is_empty() {
                        break;
                    }
                }
                if let Some(c) = cur.get(e) {
                    let mut w = c.clone();
                    for (g, &kg) in e.iter().enumerate() {
                        if kg > 0 {
                            w = &w * &self.weights[g].powi(kg as i64);
                        }
                    }
                    total = &total + &w;
                }
            }
            Ok(())
        })?;
        self.cache.insert((mono.clone(), k), total.clone());
        Ok(total)
    }

    /// Unnormalised degree-`k` trace term of `f`.
    fn degree_term(&mut self, f: &Element, k: usize) -> Result<Real> {
        let mut t = Real::zero();
        for (mono, c) in f.terms() {
            if mono.z_degree() != mono.zs_degree() || mono.zs_degree() > k {
                continue;
            }
            let x = self.monomial_term(mono, k)?;
            if !x.is_zero() {
                t = &t + &(&c.eval(&self.params.q0)? * &x);
            }
        }
        Ok(t)
    }

    /// `ν_λ(f)` with the tail rule.
    pub fn integrate(&mut self, f: &Element) -> Result<Estimate> {
        self.shape.check(f.shape())?;
        let balanced: Vec<&Monomial> = f.terms().keys().filter(|m| m.z_degree() == m.zs_degree()).collect();
        if balanced.is_empty() {
            return Ok(Estimate { value: Real::zero(), tail_bound: Real::zero(), degree: 0 });
        }
        // Below the largest z*-degree some monomials vanish identically, so
        // decay is only judged from there on.
        let start = balanced.iter().map(|m| m.zs_degree()).max().unwrap_or(0);
        let mut rule = TailRule::new(self.params.tail_ratio(self.shape), self.params.eps.clone())?;
        let mut value = Real::zero();
        for k in 0..=self.params.max_degree {
            let t = self.degree_term(f, k)?;
            value = &value + &t;
            if k >= start {
                if let Some(tail) = rule.push(&t * &self.c) {
                    return Ok(Estimate { value: &value * &self.c, tail_bound: tail, degree: k });
                }
            }
        }
        Err(Error::NotConverging(format!("no geometric decay up to degree {}", self.params.max_degree)))
    }

    /// `ν_λ(f)` summed over degrees `0..=d` with no tail control.
    pub fn integrate_truncated(&mut self, f: &Element, d: usize) -> Result<Real> {
        self.shape.check(f.shape())?;
        let mut value = Real::zero();
        for k in 0..=d {
            value = &value + &self.degree_term(f, k)?;
        }
        Ok(&value * &self.c)
    }
}

/// One-shot `ν_λ(f)`.
pub fn nu_lambda(f: &Element, params: &IntegralParams) -> Result<Estimate> {
    Integrator::new(f.shape(), params.clone())?.integrate(f)
}
