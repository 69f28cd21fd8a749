mod common;

use common::{field_by_index, oracle};
use herr_core::linalg::{field_automorphism, inverse, kernel, rank, rank_profile, rref, solve_linear};
use herr_core::random::{instance_rng, random_matrix, random_scalar};
use herr_core::{FieldSpec, Mat};
use proptest::prelude::*;
use rand::seq::SliceRandom;

fn arb_matrix() -> impl Strategy<Value = Mat> {
    (0usize..5, 0usize..6, 0usize..6, any::<u64>()).prop_map(|(fi, r, c, seed)| {
        let f = field_by_index(fi);
        random_matrix(&f, r, c, &mut instance_rng(seed, 0))
    })
}

fn low_rank(f: &FieldSpec, r: usize, c: usize, k: usize, seed: u64) -> Mat {
    let mut rng = instance_rng(seed, 1);
    let a = random_matrix(f, r, k, &mut rng);
    let b = random_matrix(f, k, c, &mut rng);
    a.mul(&b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_plus_nullity(m in arb_matrix()) {
        let p = rank_profile(&m);
        prop_assert_eq!(p.rank + p.kernel_basis.cols(), m.cols());
        prop_assert_eq!(p.image_basis.cols(), p.rank);
        prop_assert!(m.mul(&p.kernel_basis).unwrap().is_zero());
    }

    #[test]
    fn rank_matches_oracle(fi in 0usize..3, r in 0usize..7, c in 0usize..7, k in 0usize..4, seed in any::<u64>()) {
        let f = field_by_index(fi);
        let m = low_rank(&f, r, c, k, seed);
        prop_assert_eq!(rank(&m), oracle::mat_rank(&m));
    }

    #[test]
    fn row_permutation_keeps_rank_and_kernel(m in arb_matrix(), seed in any::<u64>()) {
        let mut idx: Vec<usize> = (0..m.rows()).collect();
        idx.shuffle(&mut instance_rng(seed, 2));
        let pm = m.select_rows(&idx);
        prop_assert_eq!(rank(&pm), rank(&m));
        prop_assert_eq!(rref(&pm).0, rref(&m).0);
        prop_assert_eq!(kernel(&pm), kernel(&m));
    }

    #[test]
    fn rank_of_transpose(m in arb_matrix()) {
        prop_assert_eq!(rank(&m.transpose()), rank(&m));
    }

    #[test]
    fn rref_is_idempotent(m in arb_matrix()) {
        let (r, piv) = rref(&m);
        let (rr, piv2) = rref(&r);
        prop_assert_eq!(&rr, &r);
        prop_assert_eq!(piv, piv2);
    }

    #[test]
    fn solve_finds_preimages(m in arb_matrix(), seed in any::<u64>()) {
        let f = m.field().clone();
        let x = random_matrix(&f, m.cols(), 2, &mut instance_rng(seed, 3));
        let b = m.mul(&x).unwrap();
        let sol = solve_linear(&m, &b).unwrap().expect("b is in the image");
        prop_assert_eq!(m.mul(&sol).unwrap(), b);
    }

    #[test]
    fn inverse_round_trips(fi in 0usize..5, n in 1usize..5, seed in any::<u64>()) {
        let f = field_by_index(fi);
        let m = random_matrix(&f, n, n, &mut instance_rng(seed, 4));
        match inverse(&m).unwrap() {
            Some(inv) => prop_assert_eq!(m.mul(&inv).unwrap(), Mat::identity(&f, n)),
            None => prop_assert!(rank(&m) < n),
        }
    }

    #[test]
    fn field_axioms(fi in 0usize..5, seed in any::<u64>()) {
        let f = field_by_index(fi);
        let mut rng = instance_rng(seed, 5);
        let (a, b, c) = (random_scalar(&f, &mut rng), random_scalar(&f, &mut rng), random_scalar(&f, &mut rng));
        prop_assert_eq!(f.add(&a, &b), f.add(&b, &a));
        prop_assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
        prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
        prop_assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
        prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
        prop_assert!(f.is_zero(&f.add(&a, &f.neg(&a))));
        if !f.is_zero(&a) {
            prop_assert!(f.is_one(&f.mul(&a, &f.inv(&a).unwrap())));
        } else {
            prop_assert!(f.inv(&a).is_err());
        }
        let text = f.format_scalar(&a);
        prop_assert_eq!(f.parse_scalar(&text).unwrap(), a);
    }

    #[test]
    fn frobenius_is_additive_and_multiplicative(n in 2usize..4, pi in 0usize..2, seed in any::<u64>()) {
        let p = [2u64, 3][pi];
        let f = FieldSpec::extension_auto(p, n).unwrap();
        let mut rng = instance_rng(seed, 6);
        let (a, b) = (random_scalar(&f, &mut rng), random_scalar(&f, &mut rng));
        prop_assert_eq!(f.frobenius(&f.add(&a, &b)), f.add(&f.frobenius(&a), &f.frobenius(&b)));
        prop_assert_eq!(f.frobenius(&f.mul(&a, &b)), f.mul(&f.frobenius(&a), &f.frobenius(&b)));
        let sigma = field_automorphism(&f, n).unwrap();
        prop_assert_eq!(sigma.apply_scalar(&a), a);
    }
}

#[test]
fn gf4_and_gf9_defaults() {
    let f4 = FieldSpec::parse("gf:2^2").unwrap();
    let f9 = FieldSpec::parse("gf:3^2").unwrap();
    let FieldSpec::Extension(e4) = &f4 else { panic!() };
    let FieldSpec::Extension(e9) = &f9 else { panic!() };
    assert_eq!(e4.min_poly(), &[1, 1, 1]);
    assert_eq!(e9.min_poly(), &[1, 0, 1]);
    // t has order 3 in GF(4)^* and order 4 in GF(9)^*
    let t = f4.generator().unwrap();
    assert!(f4.is_one(&f4.pow(&t, 3)));
    let s = f9.generator().unwrap();
    assert!(!f9.is_one(&f9.pow(&s, 2)) && f9.is_one(&f9.pow(&s, 4)));
}

#[test]
fn mixed_fields_are_rejected() {
    let f2 = FieldSpec::prime(2).unwrap();
    let q = FieldSpec::rationals();
    let a = Mat::identity(&f2, 2);
    let b = Mat::identity(&q, 2);
    assert!(a.mul(&b).is_err());
    assert!(Mat::from_vec(&f2, 1, 1, vec![q.one()]).is_err());
}

#[test]
fn known_ranks() {
    let q = FieldSpec::rationals();
    let m = Mat::from_i64(&q, 3, 3, &[1, 2, 3, 4, 5, 6, 7, 8, 9]);
    assert_eq!(rank(&m), 2);
    let f2 = FieldSpec::prime(2).unwrap();
    // the all-ones 2x2 has rank 1 everywhere; [[1,1],[1,-1]] drops rank only in characteristic 2
    assert_eq!(rank(&Mat::from_i64(&f2, 2, 2, &[1, 1, 1, -1])), 1);
    assert_eq!(rank(&Mat::from_i64(&q, 2, 2, &[1, 1, 1, -1])), 2);
    assert_eq!(rank(&Mat::zeros(&q, 0, 4)), 0);
}
