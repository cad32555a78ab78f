use std::collections::BTreeMap;

use proptest::prelude::*;

use qball::algebra::{build_y, normal_form, Element, GenIndex, Shape};
use qball::fock::{
    cholesky, fock_basis, fock_dim, gamma_weight, gram, gram_numeric, theta_apply, theta_gen_block, truncated_norm,
    FockBlock, NormMatrix,
};
use qball::scalar::{QRational, Real};

fn shape(m: usize, n: usize) -> Shape {
    Shape::new(m, n).unwrap()
}

fn q_pochhammer(k: usize) -> QRational {
    (1..=k as i64).fold(QRational::one(), |acc, j| &acc * &QRational::one_minus_q_pow(2 * j))
}

fn add_blocks(a: &FockBlock<QRational>, b: &FockBlock<QRational>) -> FockBlock<QRational> {
    let mut out = a.clone();
    for i in 0..a.rows {
        for j in 0..a.cols {
            out.set(i, j, a.get(i, j) + b.get(i, j));
        }
    }
    out
}

fn letter(s: Shape) -> impl Strategy<Value = GenIndex> {
    (1..=s.n, 1..=s.m, any::<bool>()).prop_map(|(col, row, starred)| GenIndex { row, col, starred })
}

fn word_element(s: Shape) -> impl Strategy<Value = Element> {
    prop::collection::vec((-2i64..=2, prop::collection::vec(letter(s), 0..=3)), 1..=2).prop_map(move |ws| {
        let mut f = Element::zero(s);
        for (c, w) in ws {
            f = &f + &normal_form(s, &w).unwrap().scale(&QRational::from_int(c));
        }
        f
    })
}

fn pair() -> impl Strategy<Value = (Element, Element, usize)> {
    prop_oneof![Just(shape(1, 1)), Just(shape(1, 2)), Just(shape(2, 2))]
        .prop_flat_map(|s| (word_element(s), word_element(s), 0usize..=2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Θ(fg) restricted to H_k is the sum over intermediate degrees of Θ(f) ∘ Θ(g).
    #[test]
    fn theta_is_a_representation((f, g, k) in pair()) {
        let lhs = theta_apply(&f.mul(&g).unwrap(), k);
        let mut rhs: BTreeMap<usize, FockBlock<QRational>> = BTreeMap::new();
        for (mid, gb) in theta_apply(&g, k) {
            for (tgt, fb) in theta_apply(&f, mid) {
                let c = fb.compose(&gb).unwrap();
                let acc = match rhs.remove(&tgt) {
                    Some(prev) => add_blocks(&prev, &c),
                    None => c,
                };
                rhs.insert(tgt, acc);
            }
        }
        let zero = |b: &FockBlock<QRational>| (0..b.rows).all(|i| b.row(i).iter().all(QRational::is_zero));
        for (tgt, block) in &rhs {
            match lhs.get(tgt) {
                Some(l) => prop_assert_eq!(l, block),
                None => prop_assert!(zero(block)),
            }
        }
        for (tgt, block) in &lhs {
            if !rhs.contains_key(tgt) {
                prop_assert!(zero(block));
            }
        }
    }
}

#[test]
fn basis_examples() {
    let disc = fock_basis(shape(1, 1), 3);
    assert_eq!(disc.indices.len(), 1);
    assert_eq!(&*disc.indices[0], &[3]);
    let ball = fock_basis(shape(1, 2), 2);
    let idx: Vec<Vec<u16>> = ball.indices.iter().map(|e| e.to_vec()).collect();
    assert_eq!(idx, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    assert_eq!(fock_dim(shape(2, 2), 1), 4);
    assert_eq!(fock_dim(shape(2, 3), 4), 126);
}

#[test]
fn disc_gram_is_q_pochhammer() {
    let s = shape(1, 1);
    for k in 0..=6 {
        let g = gram(s, k);
        assert_eq!((g.rows, g.cols), (1, 1));
        assert_eq!(g.get(0, 0), &q_pochhammer(k), "k={k}");
    }
}

#[test]
fn disc_theta_of_z_zstar() {
    let s = shape(1, 1);
    let z = Element::generator(s, GenIndex::z(1, 1)).unwrap();
    assert!(theta_apply(&z.mul(&z.star()).unwrap(), 0).is_empty());
    for k in 1..=5 {
        let blocks = theta_apply(&z.mul(&z.star()).unwrap(), k);
        let expect = FockBlock::identity(s, k).scale(&QRational::one_minus_q_pow(2 * k as i64));
        assert_eq!(blocks.get(&k), Some(&expect));
        assert_eq!(theta_gen_block(s, GenIndex::z(1, 1), k).unwrap().get(0, 0), &QRational::one());
    }
}

#[test]
fn unit_acts_as_identity() {
    for (m, n) in [(1, 2), (2, 3)] {
        let s = shape(m, n);
        for k in 0..=3 {
            let blocks = theta_apply(&Element::one(s), k);
            assert_eq!(blocks.len(), 1);
            assert_eq!(blocks[&k], FockBlock::identity(s, k));
        }
    }
}

#[test]
fn y_acts_diagonally_on_larger_shapes() {
    let s = shape(2, 3);
    let y = build_y(s).unwrap();
    for k in 0..=2 {
        let blocks = theta_apply(&y, k);
        assert_eq!(blocks[&k], FockBlock::identity(s, k).scale(&QRational::q_pow(2 * k as i64)));
    }
}

#[test]
fn grams_are_symmetric_and_positive() {
    for (m, n) in [(1, 3), (2, 2), (2, 3)] {
        let s = shape(m, n);
        for k in 0..=3 {
            let g = gram(s, k);
            assert_eq!(*g, g.transpose());
        }
        for (k, g) in gram_numeric(s, 4, &Real::from_f64(0.5)).unwrap().iter().enumerate() {
            assert!(cholesky(g).is_ok(), "({m},{n}) k={k}");
        }
    }
}

#[test]
fn cholesky_rejects_indefinite_matrix() {
    let s = shape(1, 1);
    let mut g = gram(s, 1).eval(&Real::from_f64(0.5)).unwrap();
    g.set(0, 0, Real::from_f64(-1.0));
    assert!(cholesky(&g).is_err());
}

#[test]
fn gamma_weights() {
    let s = shape(1, 1);
    assert!(gamma_weight(s, &[0]).is_one());
    assert_eq!(gamma_weight(s, &[5]), QRational::q_pow(-10));
    let s = shape(1, 2);
    assert_eq!(gamma_weight(s, &[1, 0]), QRational::q_pow(-4));
    assert_eq!(gamma_weight(s, &[0, 1]), QRational::q_pow(-2));
}

#[test]
fn generator_matrix_norm_needs_row_scaling() {
    let s = shape(2, 2);
    let q0 = Real::from_f64(0.5);
    let lowered = truncated_norm(s, &q0, 4, NormMatrix::Lowered).unwrap();
    assert!(lowered.max <= 1.0 + 1e-9, "{}", lowered.max);
    assert_eq!(lowered.per_degree.len(), 5);
    let raw = truncated_norm(s, &q0, 4, NormMatrix::Raw).unwrap();
    assert!(raw.max > 1.5, "{}", raw.max);
}
