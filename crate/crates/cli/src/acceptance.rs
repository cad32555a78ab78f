//! The acceptance suite: ten checks, each reporting pass or fail with a
//! short measurement summary.

use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

use qball::algebra::monomial::Monomial;
use qball::algebra::{build_y, classical_eval, Element, GenIndex, Shape};
use qball::fock::{cholesky, gram, theta_apply, theta_gen_block, truncated_norm, FockBlock, NormMatrix};
use qball::integral::{trace_y_closed, trace_y_series, IntegralParams, Integrator};
use qball::kernels::{
    bergman_apply_with, commutator_check, k_factor, k_finite, k_poly, max_abs_diff, to_numeric, BergmanOracle,
    KernelElement,
};
use qball::scalar::{QRational, Rational, Real, UPoly};
use qball::Result;

#[derive(Clone, Debug)]
pub struct Report {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl Report {
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        format!("criterion {:>2} [{verdict}] {} ({:.2}s): {}", self.id, self.title, self.seconds, self.detail)
    }
}

fn shape(m: usize, n: usize) -> Shape {
    Shape::new(m, n).expect("valid acceptance shape")
}

/// Runs `body`, turning errors into a failed report and applying a time limit.
fn timed(id: usize, title: &'static str, limit: Option<f64>, body: impl FnOnce() -> Result<(bool, String)>) -> Report {
    let start = Instant::now();
    let (mut passed, mut detail) = match body() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    let seconds = start.elapsed().as_secs_f64();
    if let Some(max) = limit {
        if seconds > max {
            passed = false;
            detail = format!("{detail}; exceeded the {max}s limit");
        }
    }
    Report { id, title, passed, detail, seconds }
}

fn q_pow(k: i64) -> QRational {
    QRational::q_pow(k)
}

/// Every generator `z_a^α` of the shape.
fn generators(s: Shape) -> Vec<GenIndex> {
    (1..=s.n).flat_map(|a| (1..=s.m).map(move |alpha| GenIndex::z(a, alpha))).collect()
}

/// `z y = q^{-2} y z` and `z* y = q^2 y z*` as exact equalities.
pub fn criterion_1() -> Report {
    timed(1, "commutation of generators with y", Some(30.0), || {
        let mut checked = 0;
        let mut failed = Vec::new();
        for (m, n) in [(1, 1), (1, 2), (2, 2), (2, 3)] {
            let s = shape(m, n);
            let y = build_y(s)?;
            for g in generators(s) {
                let z = Element::generator(s, g)?;
                let zs = z.star();
                if z.mul(&y)? != y.mul(&z)?.scale(&q_pow(-2)) {
                    failed.push(format!("({m},{n}) {g}"));
                }
                if zs.mul(&y)? != y.mul(&zs)?.scale(&q_pow(2)) {
                    failed.push(format!("({m},{n}) {}", GenIndex { starred: true, ..g }));
                }
                checked += 2;
            }
        }
        Ok((failed.is_empty(), format!("{checked} identities checked, failures: {failed:?}")))
    })
}

/// `Θ(y)` restricted to `H_k` is `q^{2k}` times the identity.
pub fn criterion_2() -> Report {
    timed(2, "Θ(y) = q^{2k} I on H_k", Some(60.0), || {
        let mut failed = Vec::new();
        for (m, n) in [(1, 1), (1, 2), (2, 2)] {
            let s = shape(m, n);
            let y = build_y(s)?;
            for k in 0..=4 {
                let blocks = theta_apply(&y, k);
                let expect = FockBlock::identity(s, k).scale(&q_pow(2 * k as i64));
                let ok = blocks.len() == 1 && blocks.get(&k) == Some(&expect);
                if !ok {
                    failed.push(format!("({m},{n}) k={k}"));
                }
            }
        }
        Ok((failed.is_empty(), format!("shapes (1,1),(1,2),(2,2), k<=4, failures: {failed:?}")))
    })
}

/// Series and product forms of the weighted trace of `y^λ`.
/// `extended` adds the shape (2,3) and q = 0.2.
pub fn criterion_3(extended: bool) -> Report {
    timed(3, "trace series vs product formula", Some(60.0), || {
        let mut worst = 0f64;
        let mut shapes = vec![(1, 1), (1, 2), (2, 2)];
        let mut qs = vec![0.3, 0.5, 0.7];
        if extended {
            shapes.push((2, 3));
            qs.push(0.2);
        }
        for (m, n) in shapes {
            let s = shape(m, n);
            let lambda = Real::from_f64(s.big_n() as f64 + 0.5);
            for &q in &qs {
                let q0 = Real::from_f64(q);
                let closed = trace_y_closed(s, &q0, &lambda)?;
                let series = trace_y_series(s, &q0, &lambda, &Real::from_f64(1e-16), 2000)?;
                worst = worst.max(((&closed - &series.value).abs() / closed).to_f64());
            }
        }
        Ok((worst <= 1e-10, format!("max relative error {worst:.3e} (tolerance 1e-10)")))
    })
}

/// Positive definiteness of the Gram matrices and adjointness of `Θ(z)`,
/// `Θ(z*)` with respect to them.
pub fn criterion_4() -> Report {
    timed(4, "Gram positivity and Θ-adjointness", None, || {
        let q0 = Real::from_f64(0.5);
        let mut failed = Vec::new();
        let mut min_pivot = f64::INFINITY;
        for (m, n) in [(1, 1), (1, 2), (2, 2), (2, 3)] {
            let s = shape(m, n);
            for k in 0..=4 {
                match cholesky(&gram(s, k).eval(&q0)?) {
                    Ok(l) => {
                        for i in 0..l.rows {
                            min_pivot = min_pivot.min(l.get(i, i).to_f64());
                        }
                    }
                    Err(_) => failed.push(format!("cholesky ({m},{n}) k={k}")),
                }
            }
            for k in 0..=3 {
                let (g0, g1) = (gram(s, k), gram(s, k + 1));
                for g in generators(s) {
                    let up = theta_gen_block(s, g, k)?;
                    let down = theta_gen_block(s, GenIndex { starred: true, ..g }, k + 1)?;
                    if g1.compose(&up)? != down.transpose().compose(&g0)? {
                        failed.push(format!("adjointness ({m},{n}) k={k} {g}"));
                    }
                }
            }
        }
        Ok((
            failed.is_empty(),
            format!("Cholesky k<=4 at q=0.5 (smallest pivot {min_pivot:.3e}), exact adjointness k<=3, failures: {failed:?}"),
        ))
    })
}

/// `[χ_j, χ_k] = 0` exactly.
pub fn criterion_5() -> Report {
    timed(5, "commutativity of the χ_k", Some(300.0), || {
        let mut failed = Vec::new();
        let mut checked = 0;
        for (m, n) in [(2, 2), (2, 3)] {
            let s = shape(m, n);
            for j in 1..=m {
                for k in 1..=m {
                    let (zero, _) = commutator_check(s, j, k, j + k + 1)?;
                    checked += 1;
                    if !zero {
                        failed.push(format!("({m},{n}) [{j},{k}]"));
                    }
                }
            }
        }
        Ok((failed.is_empty(), format!("{checked} commutators at truncation j+k+1, failures: {failed:?}")))
    })
}

/// Explicit left-to-right product of the factors of `K_l`.
fn k_finite_left_to_right(s: Shape, l: i64, trunc: usize) -> Result<KernelElement> {
    let mut out = KernelElement::one(s, trunc);
    for j in l..=-1 {
        out = out.mul(&k_factor(s, j, trunc)?, trunc)?;
    }
    Ok(out)
}

/// `K(q^{2l}) = K_l`, the recursion for `K_l`, and `deg_u K_d <= d`.
pub fn criterion_6() -> Report {
    timed(6, "polynomial kernel vs finite products", None, || {
        let trunc = 3;
        let mut failed = Vec::new();
        for (m, n) in [(1, 1), (1, 2), (2, 2), (2, 3)] {
            let s = shape(m, n);
            let kp = k_poly(s, trunc)?;
            for l in [-1i64, -2, -3] {
                let direct = k_finite_left_to_right(s, l, trunc)?;
                if kp.substitute(&q_pow(2 * l)) != direct {
                    failed.push(format!("({m},{n}) specialisation l={l}"));
                }
                if k_finite(s, l, trunc)? != direct {
                    failed.push(format!("({m},{n}) finite product l={l}"));
                }
            }
            for l in [-2i64, -3] {
                let rec = k_factor(s, l, trunc)?.mul(&k_finite(s, l + 1, trunc)?, trunc)?;
                if rec != k_finite(s, l, trunc)? {
                    failed.push(format!("({m},{n}) recursion l={l}"));
                }
            }
            for d in 0..=trunc {
                if kp.u_degree(d).is_some_and(|e| e > d) {
                    failed.push(format!("({m},{n}) u-degree at d={d}"));
                }
            }
        }
        Ok((failed.is_empty(), format!("shapes (1,1),(1,2),(2,2),(2,3), bidegree<=3, failures: {failed:?}")))
    })
}

/// A random element with z- and z*-degrees at most 2.
pub fn random_mixed(s: Shape, rng: &mut StdRng) -> Element {
    let mut f = Element::zero(s);
    let terms = rng.gen_range(1..=4);
    for _ in 0..terms {
        let mut z = vec![0u16; s.gens()];
        let mut zs = vec![0u16; s.gens()];
        for _ in 0..rng.gen_range(0..=2) {
            z[rng.gen_range(0..s.gens())] += 1;
        }
        for _ in 0..rng.gen_range(0..=2) {
            zs[rng.gen_range(0..s.gens())] += 1;
        }
        let c = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let coeff = &QRational::from_int(c) * &q_pow(rng.gen_range(-1..=1));
        f.add_term(Monomial::new(z.into(), zs.into()), coeff);
    }
    f
}

/// The kernel formula for the Bergman projection against a brute-force
/// orthogonal projection.
pub fn criterion_7() -> Report {
    timed(7, "Bergman projection vs brute-force projection", Some(300.0), || {
        let tol = 1e-8;
        let mut worst_oracle = 0f64;
        let mut worst_identity = 0f64;
        let mut worst_zero = 0f64;
        let mut count = 0;
        let mut rng = StdRng::seed_from_u64(0x5eed_0007);
        for (m, n) in [(1, 1), (1, 2)] {
            let s = shape(m, n);
            let params = IntegralParams::from_f64(0.6, (s.big_n() + 1) as f64);
            let q0 = params.q0.clone();
            let mut integ = Integrator::new(s, params.clone())?;
            let mut oracle = BergmanOracle::new(s, params, 2, 30)?;
            let mut inputs: Vec<(Element, &str)> = Vec::new();
            for k in 0..=2 {
                for e in qball::fock::fock_basis(s, k).indices.iter() {
                    inputs.push((Element::from_monomial(s, Monomial::holomorphic(e.clone()), QRational::one()), "hol"));
                }
            }
            for k in 1..=2 {
                for e in qball::fock::fock_basis(s, k).indices.iter() {
                    inputs.push((Element::from_monomial(s, Monomial::antiholomorphic(e.clone()), QRational::one()), "anti"));
                }
            }
            for _ in 0..20 {
                inputs.push((random_mixed(s, &mut rng), "mixed"));
            }
            for (f, kind) in inputs {
                let applied = bergman_apply_with(&mut integ, &f, f.max_z_degree() + 1)?.value;
                let projected = oracle.project(&f)?;
                worst_oracle = worst_oracle.max(max_abs_diff(&applied, &projected).to_f64());
                match kind {
                    "hol" => worst_identity = worst_identity.max(max_abs_diff(&applied, &to_numeric(&f, &q0)?).to_f64()),
                    "anti" => worst_zero = worst_zero.max(max_abs_diff(&applied, &Default::default()).to_f64()),
                    _ => {}
                }
                count += 1;
            }
        }
        let passed = worst_oracle <= tol && worst_identity <= tol && worst_zero <= tol;
        Ok((
            passed,
            format!(
                "{count} inputs; max |apply - oracle| {worst_oracle:.3e}, holomorphic reproduction {worst_identity:.3e}, antiholomorphic {worst_zero:.3e} (tolerance 1e-8)"
            ),
        ))
    })
}

/// A random complex matrix with operator norm below one.
pub fn random_contraction(m: usize, n: usize, rng: &mut StdRng) -> DMatrix<Complex64> {
    let z = DMatrix::from_fn(m, n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let norm = z.clone().singular_values().max();
    let target = rng.gen_range(0.05..0.95);
    z.map(|x| x * (target / norm))
}

/// `y` at `q = 1` is `det(I - Z Z*)`. `extended` uses 200 samples per shape.
pub fn criterion_8(extended: bool) -> Report {
    timed(8, "classical limit of y", None, || {
        let mut rng = StdRng::seed_from_u64(0x5eed_0008);
        let mut worst = 0f64;
        let mut count = 0;
        for (m, n) in [(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)] {
            let s = shape(m, n);
            let y = build_y(s)?;
            for _ in 0..if extended { 200 } else { 20 } {
                let z = random_contraction(m, n, &mut rng);
                let expect = (DMatrix::<Complex64>::identity(m, m) - &z * z.adjoint()).determinant();
                worst = worst.max((classical_eval(&y, &z)? - expect).norm());
                count += 1;
            }
        }
        Ok((worst <= 1e-12, format!("{count} random contractions, max |y(Z) - det(I - ZZ*)| {worst:.3e} (tolerance 1e-12)")))
    })
}

/// Truncated operator norm of the matrix of generators.
pub fn criterion_9() -> Report {
    timed(9, "norm bound for the matrix of generators", None, || {
        let q0 = Real::from_f64(0.5);
        let mut norms = Vec::new();
        for (m, n) in [(1, 1), (1, 2), (2, 2)] {
            norms.push(truncated_norm(shape(m, n), &q0, 6, NormMatrix::Lowered)?.max);
        }
        let worst = norms.iter().cloned().fold(0.0, f64::max);
        Ok((worst <= 1.0 + 1e-9, format!("norms {norms:?} at q=0.5, degree<=6 (bound 1 + 1e-9)")))
    })
}

/// `(u;q^2)_d / (q^2;q^2)_d` as a polynomial in `u`.
fn disc_coefficient(d: usize) -> UPoly {
    let mut num = UPoly::one();
    let mut den = QRational::one();
    for i in 0..d {
        num = &num * &UPoly::from_coeffs(vec![QRational::one(), -q_pow(2 * i as i64)]);
        den = &den * &QRational::one_minus_q_pow(2 * (i as i64 + 1));
    }
    num.scale(&den.inv().expect("nonzero"))
}

/// `Π_{i<d} (1 - u q^{2i}) / (1 - q^{2i+2})` evaluated directly.
fn disc_coefficient_numeric(d: usize, q0: &Real, lambda: &Real) -> Real {
    let u0 = q0.pow(&(&Real::from_i64(2) * lambda));
    let mut out = Real::one();
    for i in 0..d {
        let num = &Real::one() - &(&u0 * &q0.powi(2 * i as i64));
        let den = &Real::one() - &q0.powi(2 * i as i64 + 2);
        out = &out * &(&num / &den);
    }
    out
}

/// Generalised binomial coefficient `binomial(λ + d - 1, d)`.
fn binomial(lambda: f64, d: usize) -> f64 {
    (0..d).fold(1.0, |acc, i| acc * (lambda + i as f64) / (i as f64 + 1.0))
}

/// Disc kernel coefficients and their classical limit.
pub fn criterion_10() -> Report {
    timed(10, "disc kernel coefficients and q -> 1 limit", None, || {
        let s = shape(1, 1);
        let trunc = 5;
        let kp = k_poly(s, trunc)?;
        let mut exact_ok = true;
        let mut worst_numeric = 0f64;
        for d in 0..=trunc {
            let e: Box<[u16]> = vec![d as u16].into();
            let coeff = kp.coeff(&e, &e);
            exact_ok &= coeff == disc_coefficient(d);
            for (q, lambda) in [(0.5, 2.0), (0.5, 2.5), (0.9, 3.0)] {
                let (q0, lam) = (Real::from_f64(q), Real::from_f64(lambda));
                let u0 = q0.pow(&(&Real::from_i64(2) * &lam));
                let a = coeff.eval_real(&q0, &u0)?;
                let b = disc_coefficient_numeric(d, &q0, &lam);
                worst_numeric = worst_numeric.max((&a - &b).abs().to_f64());
            }
        }
        // The limit is read off at q0 = 0.999 as stated; the exact value at
        // q = 1 for integral λ is reported for comparison.
        let q0 = Real::from_f64(0.999);
        let mut worst_limit = 0f64;
        let mut worst_exact_limit = 0f64;
        for lambda in [2.0, 2.5] {
            let lam = Real::from_f64(lambda);
            let u0 = q0.pow(&(&Real::from_i64(2) * &lam));
            let exact = (lambda.fract() == 0.0).then(|| kp.substitute(&q_pow(2 * lambda as i64)));
            for d in 0..=trunc {
                let e: Box<[u16]> = vec![d as u16].into();
                let at_q0 = kp.coeff(&e, &e).eval_real(&q0, &u0)?.to_f64();
                worst_limit = worst_limit.max((at_q0 - binomial(lambda, d)).abs());
                if let Some(kl) = &exact {
                    let at_one = kl.coeff(&e, &e).coeff(0).eval_rational(&Rational::from_integer(1.into()))?;
                    let at_one = Real::from_rational(&at_one).to_f64();
                    worst_exact_limit = worst_exact_limit.max((at_one - binomial(lambda, d)).abs());
                }
            }
        }
        let passed = exact_ok && worst_numeric <= 1e-12 && worst_limit <= 1e-6;
        Ok((
            passed,
            format!(
                "exact match with the q-binomial product: {exact_ok}; numeric max diff {worst_numeric:.3e}; \
                 |coefficient(q=0.999) - binomial| max {worst_limit:.3e} (tolerance 1e-6); \
                 exact q=1 value (integral λ) deviates by {worst_exact_limit:.3e}"
            ),
        ))
    })
}

/// All criteria, run concurrently and reported in order. `extended` widens
/// the parameter sweeps of the cheap numeric checks.
pub fn run_all(extended: bool) -> Vec<Report> {
    let checks: Vec<Box<dyn FnOnce() -> Report + Send>> = vec![
        Box::new(criterion_1),
        Box::new(criterion_2),
        Box::new(move || criterion_3(extended)),
        Box::new(criterion_4),
        Box::new(criterion_5),
        Box::new(criterion_6),
        Box::new(criterion_7),
        Box::new(move || criterion_8(extended)),
        Box::new(criterion_9),
        Box::new(criterion_10),
    ];
    std::thread::scope(|scope| {
        let handles: Vec<_> = checks
            .into_iter()
            .map(|check| {
                std::thread::Builder::new()
                    .stack_size(64 << 20)
                    .spawn_scoped(scope, check)
                    .expect("spawn acceptance thread")
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("acceptance check panicked")).collect()
    })
}

pub fn reports_json(reports: &[Report]) -> Value {
    let items: Vec<Value> = reports
        .iter()
        .map(|r| json!({"criterion": r.id, "title": r.title, "passed": r.passed, "seconds": r.seconds, "detail": r.detail}))
        .collect();
    json!({"passed": reports.iter().all(|r| r.passed), "criteria": items})
}
