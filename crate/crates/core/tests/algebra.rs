use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use qball::algebra::{
    build_y, classical_eval, normal_form, qminor, reduce_word, Element, GenIndex, Monomial, Shape, Strategy as Order,
};
use qball::scalar::QRational;

fn shape(m: usize, n: usize) -> Shape {
    Shape::new(m, n).unwrap()
}

fn gen(s: Shape, g: GenIndex) -> Element {
    Element::generator(s, g).unwrap()
}

fn q(k: i64) -> QRational {
    QRational::q_pow(k)
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn letter(s: Shape) -> impl Strategy<Value = GenIndex> {
    (1..=s.n, 1..=s.m, any::<bool>()).prop_map(|(col, row, starred)| GenIndex { row, col, starred })
}

fn shape_and_word(max_len: usize) -> impl Strategy<Value = (Shape, Vec<GenIndex>)> {
    prop_oneof![Just(shape(1, 1)), Just(shape(1, 2)), Just(shape(2, 2))]
        .prop_flat_map(move |s| (Just(s), prop::collection::vec(letter(s), 0..=max_len)))
}

/// Sum of up to three words with small integer coefficients.
fn element(s: Shape) -> impl Strategy<Value = Element> {
    prop::collection::vec((-2i64..=2, -1i64..=1, prop::collection::vec(letter(s), 0..=3)), 1..=3).prop_map(move |ws| {
        let mut f = Element::zero(s);
        for (c, k, w) in ws {
            f = &f + &normal_form(s, &w).unwrap().scale(&QRational::term(c, k));
        }
        f
    })
}

fn shape_and_pair() -> impl Strategy<Value = (Element, Element)> {
    prop_oneof![Just(shape(1, 1)), Just(shape(1, 2)), Just(shape(2, 2))]
        .prop_flat_map(|s| (element(s), element(s)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn reduction_is_confluent((s, word) in shape_and_word(6)) {
        let left = reduce_word(s, &word, Order::Leftmost).unwrap();
        let right = reduce_word(s, &word, Order::Rightmost).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(&left, &normal_form(s, &word).unwrap());
    }

    #[test]
    fn degrees_never_grow((s, word) in shape_and_word(6)) {
        let zs = word.iter().filter(|g| g.starred).count();
        let z = word.len() - zs;
        for mono in normal_form(s, &word).unwrap().terms().keys() {
            prop_assert!(mono.z_degree() <= z && mono.zs_degree() <= zs);
            prop_assert_eq!(z as i64 - mono.z_degree() as i64, zs as i64 - mono.zs_degree() as i64);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn star_is_an_antihomomorphism((f, g) in shape_and_pair()) {
        prop_assert_eq!(f.mul(&g).unwrap().star(), g.star().mul(&f.star()).unwrap());
        prop_assert_eq!(f.star().star(), f);
    }

    #[test]
    fn multiplication_is_associative((f, g) in shape_and_pair()) {
        let h = f.star();
        prop_assert_eq!(f.mul(&g).unwrap().mul(&h).unwrap(), f.mul(&g.mul(&h).unwrap()).unwrap());
    }
}

#[test]
fn holomorphic_normal_monomials_are_counted_by_stars_and_bars() {
    for (m, n) in [(1, 1), (1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (2, 2), (2, 3)] {
        let s = shape(m, n);
        let gens: Vec<GenIndex> = (1..=n).flat_map(|a| (1..=m).map(move |r| GenIndex::z(a, r))).collect();
        // Every holomorphic word reduces to a combination of monomials
        // reachable by appending one generator to a normal monomial.
        let mut level: BTreeSet<Monomial> = BTreeSet::from([Monomial::one(s)]);
        for k in 0..=5 {
            assert_eq!(level.len(), binomial(k + m * n - 1, m * n - 1), "({m},{n}) k={k}");
            let mut next = BTreeSet::new();
            for mono in &level {
                assert_eq!((mono.z_degree(), mono.zs_degree()), (k, 0));
                for g in &gens {
                    let word = [mono.word(s), vec![*g]].concat();
                    next.extend(normal_form(s, &word).unwrap().terms().keys().cloned());
                }
            }
            level = next;
        }
    }
}

#[test]
fn ball_mixed_pair() {
    let s = shape(1, 2);
    let got = normal_form(s, &[GenIndex::zs(2, 1), GenIndex::z(1, 1)]).unwrap();
    let expect = gen(s, GenIndex::z(1, 1)).mul(&gen(s, GenIndex::zs(2, 1))).unwrap().scale(&q(1));
    assert_eq!(got, expect);
}

#[test]
fn same_column_rows_swap() {
    let s = shape(2, 1);
    let got = normal_form(s, &[GenIndex::z(1, 2), GenIndex::z(1, 1)]).unwrap();
    let expect = normal_form(s, &[GenIndex::z(1, 1), GenIndex::z(1, 2)]).unwrap().scale(&q(-1));
    assert_eq!(got, expect);
}

#[test]
fn unit_and_generator_products() {
    let s = shape(2, 3);
    let f = &gen(s, GenIndex::z(3, 2)) + &gen(s, GenIndex::zs(1, 1)).scale(&q(2));
    assert_eq!(Element::one(s).mul(&f).unwrap(), f);
    assert_eq!(f.star(), &gen(s, GenIndex::zs(3, 2)) + &gen(s, GenIndex::z(1, 1)).scale(&q(2)));
}

#[test]
fn disc_y_commutes_up_to_q_squared() {
    let s = shape(1, 1);
    let (z, y) = (gen(s, GenIndex::z(1, 1)), build_y(s).unwrap());
    assert_eq!(y.mul(&z).unwrap(), z.mul(&y).unwrap().scale(&q(2)));
    let one_plus = &Element::one(s) + &z.mul(&z.star()).unwrap();
    assert_eq!(one_plus.star(), one_plus);
}

#[test]
fn y_is_self_adjoint() {
    for (m, n) in [(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)] {
        let y = build_y(shape(m, n)).unwrap();
        assert_eq!(y.star(), y, "({m},{n})");
    }
}

#[test]
fn ball_y() {
    let s = shape(1, 3);
    let mut expect = Element::one(s);
    for a in 1..=3 {
        let z = gen(s, GenIndex::z(a, 1));
        expect = &expect - &z.mul(&z.star()).unwrap();
    }
    assert_eq!(build_y(s).unwrap(), expect);
}

#[test]
fn square_y_expansion() {
    let s = shape(2, 2);
    let mut expect = Element::one(s);
    for a in 1..=2 {
        for r in 1..=2 {
            let z = gen(s, GenIndex::z(a, r));
            expect = &expect - &z.mul(&z.star()).unwrap();
        }
    }
    let minor = qminor(s, &[1, 2], &[1, 2]).unwrap();
    expect = &expect + &minor.mul(&minor.star()).unwrap();
    assert_eq!(build_y(s).unwrap(), expect);

    let expect_minor = &gen(s, GenIndex::z(1, 1)).mul(&gen(s, GenIndex::z(2, 2))).unwrap()
        - &gen(s, GenIndex::z(1, 2)).mul(&gen(s, GenIndex::z(2, 1))).unwrap().scale(&q(1));
    assert_eq!(minor, expect_minor);
}

#[test]
fn bidegree_split_of_y() {
    let s = shape(1, 1);
    let parts = build_y(s).unwrap().bidegree_split();
    assert_eq!(parts.len(), 2);
    assert_eq!(parts[&(0, 0)], Element::one(s));
    let z = gen(s, GenIndex::z(1, 1));
    assert_eq!(parts[&(1, -1)], -&z.mul(&z.star()).unwrap());
    let disc = normal_form(s, &[GenIndex::zs(1, 1), GenIndex::z(1, 1)]).unwrap().bidegree_split();
    assert_eq!(disc[&(0, 0)], Element::constant(s, QRational::one_minus_q_pow(2)));
    assert_eq!(disc[&(1, -1)], z.mul(&z.star()).unwrap().scale(&q(2)));
}

#[test]
fn classical_values() {
    let s = shape(2, 2);
    let z = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.3].map(|x| Complex64::new(x, 0.0)));
    let v = classical_eval(&build_y(s).unwrap(), &z).unwrap();
    assert!((v - Complex64::new(0.6825, 0.0)).norm() < 1e-14);
    assert_eq!(classical_eval(&Element::one(s), &z).unwrap(), Complex64::new(1.0, 0.0));

    let s = shape(3, 3);
    let z = DMatrix::from_fn(3, 3, |i, j| Complex64::new((i * 3 + j) as f64 * 0.1 - 0.3, 0.05 * j as f64));
    let minor = qminor(s, &[1, 2, 3], &[1, 2, 3]).unwrap();
    let got = classical_eval(&minor, &z).unwrap();
    assert!((got - z.determinant()).norm() < 1e-14);
}

#[test]
fn holomorphic_and_antiholomorphic_monomials() {
    let s = shape(1, 2);
    let z = Monomial::holomorphic(vec![1, 2].into());
    assert_eq!((z.z_degree(), z.zs_degree()), (3, 0));
    let zs = Monomial::antiholomorphic(vec![0, 1].into());
    assert_eq!(zs.bidegree(), (0, -1));
    assert!(Element::from_monomial(s, z, QRational::one()).is_holomorphic());
}
