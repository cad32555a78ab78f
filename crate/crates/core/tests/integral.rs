use std::cell::RefCell;
use std::collections::HashMap;

use proptest::prelude::*;

use qball::algebra::{build_y, normal_form, Element, GenIndex, Monomial, Shape};
use qball::fock::theta_apply;
use qball::integral::{c_lambda, c_lambda_numeric, nu_lambda, trace_y_closed, trace_y_series, Estimate, IntegralParams, Integrator};
use qball::scalar::{QRational, Real, UPoly};
use qball::Error;

fn shape(m: usize, n: usize) -> Shape {
    Shape::new(m, n).unwrap()
}

fn r(x: f64) -> Real {
    Real::from_f64(x)
}

fn rel(a: &Real, b: &Real) -> f64 {
    ((a - b).abs() / b.abs()).to_f64()
}

/// `1 - u q^{-2k}` as a polynomial in `u`.
fn linear(k: i64) -> UPoly {
    UPoly::from_coeffs(vec![QRational::one(), -QRational::q_pow(-2 * k)])
}

#[test]
fn normalising_constants() {
    assert_eq!(c_lambda(shape(1, 1)), linear(1));
    assert_eq!(c_lambda(shape(1, 2)), &linear(2) * &linear(1));
    for (m, n) in [(1, 1), (1, 2), (2, 2)] {
        assert_eq!(c_lambda(shape(m, n)).eval(&QRational::zero()), QRational::one());
    }
    // C(λ) = 1 - q^{2(λ-1)} for the disc.
    let c = c_lambda_numeric(shape(1, 1), &r(0.5), &r(3.0));
    assert!(rel(&c, &r(1.0 - 0.0625)) < 1e-15);
}

#[test]
fn closed_trace_values() {
    let v = trace_y_closed(shape(1, 1), &r(0.5), &r(2.0)).unwrap();
    assert!(rel(&v, &(&Real::from_i64(4) / &Real::from_i64(3))) < 1e-45);
    let v = trace_y_closed(shape(1, 2), &r(0.5), &r(3.0)).unwrap();
    assert!(rel(&v, &r(1.0 / (0.75 * 0.9375))) < 1e-15);
    let big = trace_y_closed(shape(2, 2), &r(0.5), &r(50.0)).unwrap();
    assert!((big.to_f64() - 1.0).abs() < 1e-25);
    assert!(matches!(trace_y_closed(shape(1, 2), &r(0.5), &r(2.0)), Err(Error::Divergent(_))));
}

#[test]
fn series_trace_values() {
    let four_thirds = &Real::from_i64(4) / &Real::from_i64(3);
    let est = trace_y_series(shape(1, 1), &r(0.5), &r(2.0), &r(1e-14), 400).unwrap();
    assert!((&est.value - &four_thirds).abs().to_f64() < 1e-12);
    assert!(est.tail_bound.to_f64() < 1e-13);
    let closed = trace_y_closed(shape(2, 2), &r(0.4), &r(5.0)).unwrap();
    let series = trace_y_series(shape(2, 2), &r(0.4), &r(5.0), &r(1e-16), 400).unwrap();
    assert!(rel(&series.value, &closed) <= 1e-10);
}

#[test]
fn integral_examples() {
    let s = shape(1, 1);
    let (q, lambda) = (0.5f64, 2.0f64);
    let p = IntegralParams::from_f64(q, lambda);
    assert!((nu_lambda(&Element::one(s), &p).unwrap().value.to_f64() - 1.0).abs() < 1e-15);
    let z = Element::generator(s, GenIndex::z(1, 1)).unwrap();
    let zz = z.mul(&z.star()).unwrap();
    let expect = (1.0 - q * q) * q.powf(2.0 * (lambda - 1.0)) / (1.0 - q.powf(2.0 * lambda));
    let got = nu_lambda(&zz, &p).unwrap();
    assert!((got.value.to_f64() - expect).abs() < 1e-15);
    assert!(got.tail_bound.to_f64() < 1e-15);
    let zero = nu_lambda(&z, &p).unwrap();
    assert!(zero.value.is_zero() && zero.tail_bound.is_zero());
}

/// `ν_λ(y^j) = C(λ) / C(λ + j)`: the weight `y^λ` absorbs powers of `y`.
#[test]
fn powers_of_y() {
    for (m, n) in [(1, 1), (1, 2), (2, 2)] {
        let s = shape(m, n);
        let lambda = r((s.big_n() + 1) as f64);
        let p = IntegralParams::new(r(0.5), lambda.clone());
        let y = build_y(s).unwrap();
        let y2 = y.mul(&y).unwrap();
        let c = |shift: i64| c_lambda_numeric(s, &r(0.5), &(&lambda + &Real::from_i64(shift)));
        assert!(rel(&nu_lambda(&y, &p).unwrap().value, &(&c(0) / &c(1))) < 1e-14, "({m},{n})");
        assert!(rel(&nu_lambda(&y2, &p).unwrap().value, &(&c(0) / &c(2))) < 1e-14, "({m},{n})");
    }
}

#[test]
fn parameters_are_validated() {
    let s = shape(1, 2);
    assert!(Integrator::new(s, IntegralParams::from_f64(0.5, 1.5)).is_err());
    assert!(Integrator::new(s, IntegralParams::from_f64(1.5, 4.0)).is_err());
    assert!(Integrator::new(s, IntegralParams::from_f64(0.5, 2.5)).is_ok());
}

#[test]
fn unbalanced_monomials_have_no_diagonal() {
    let s = shape(1, 2);
    let p = IntegralParams::from_f64(0.5, 4.0);
    let mut integ = Integrator::new(s, p).unwrap();
    for (z, zs) in [(vec![1, 0], vec![0, 0]), (vec![0, 0], vec![0, 1]), (vec![2, 0], vec![0, 1]), (vec![1, 1], vec![0, 3])] {
        let f = Element::from_monomial(s, Monomial::new(z.into(), zs.into()), QRational::one());
        assert!(integ.integrate(&f).unwrap().value.is_zero());
        assert!(integ.integrate_truncated(&f, 8).unwrap().is_zero());
        for k in 0..=4 {
            assert!(!theta_apply(&f, k).contains_key(&k));
        }
    }
}

fn letter(s: Shape) -> impl Strategy<Value = GenIndex> {
    (1..=s.n, 1..=s.m, any::<bool>()).prop_map(|(col, row, starred)| GenIndex { row, col, starred })
}

/// Random element with z- and z*-degrees at most 2.
fn element(s: Shape) -> impl Strategy<Value = Element> {
    let mono = (prop::collection::vec(letter(s), 0..=2), prop::collection::vec(letter(s), 0..=2));
    prop::collection::vec((-3i64..=3, -1i64..=1, mono), 1..=3).prop_map(move |ts| {
        let mut f = Element::zero(s);
        for (c, k, (a, b)) in ts {
            let mut word: Vec<GenIndex> = a.into_iter().map(|g| GenIndex { starred: false, ..g }).collect();
            word.extend(b.into_iter().map(|g| GenIndex { starred: true, ..g }));
            f = &f + &normal_form(s, &word).unwrap().scale(&QRational::term(c, k));
        }
        f
    })
}

fn shape_and_element() -> impl Strategy<Value = (Shape, Element, Element)> {
    prop_oneof![Just(shape(1, 1)), Just(shape(1, 2)), Just(shape(2, 2))]
        .prop_flat_map(|s| (Just(s), element(s), element(s)))
}

thread_local! {
    static INTEGRATORS: RefCell<HashMap<Shape, Integrator>> = RefCell::new(HashMap::new());
}

/// Integrates with one cached integrator per shape at q = 0.5, λ = N + 1.
fn integrate(f: &Element) -> Estimate {
    let s = f.shape();
    INTEGRATORS.with(|c| {
        let mut map = c.borrow_mut();
        let integ = map.entry(s).or_insert_with(|| {
            Integrator::new(s, IntegralParams::from_f64(0.5, (s.big_n() + 1) as f64)).unwrap()
        });
        integ.integrate(f).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn integral_is_positive((_s, f, _g) in shape_and_element()) {
        let v = integrate(&f.star().mul(&f).unwrap()).value.to_f64();
        prop_assert!(v >= -1e-12, "{}", v);
    }

    #[test]
    fn integral_form_is_hermitian((_s, f, g) in shape_and_element()) {
        let fg = integrate(&g.star().mul(&f).unwrap());
        let gf = integrate(&f.star().mul(&g).unwrap());
        let tol = fg.tail_bound.to_f64() + gf.tail_bound.to_f64() + 1e-14;
        prop_assert!((fg.value.to_f64() - gf.value.to_f64()).abs() <= tol);
    }
}
