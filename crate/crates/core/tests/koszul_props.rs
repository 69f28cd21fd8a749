mod common;

use common::{field_by_index, oracle};
use herr_core::combinatorics::{binomial, n_chi, n_chi_via_complexes, occurrence_count, y_sequence};
use herr_core::complexes::cohomology;
use herr_core::koszul::{decompose, duality_check, koszul_chain, koszul_cochain, rhom_vs_tensor_check, OperatorModule};
use herr_core::random::{instance_rng, random_commuting_family};
use herr_core::{FieldSpec, Mat};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn arb_module(max_ops: usize) -> impl Strategy<Value = OperatorModule> {
    (0usize..5, 1usize..=3, 1usize..=max_ops, any::<u64>()).prop_map(|(fi, dim, count, seed)| {
        let f = field_by_index(fi);
        let mut rng = instance_rng(seed, 0);
        let zero_from = rng.gen_range(1..=count);
        random_commuting_family(&f, dim, count, zero_from, &mut rng)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn cochain_matches_oracle(fi in 0usize..3, dim in 1usize..=3, count in 1usize..=4, seed in any::<u64>()) {
        let f = field_by_index(fi);
        let m = random_commuting_family(&f, dim, count, count, &mut instance_rng(seed, 0));
        let ops: Vec<&Mat> = m.ops().iter().collect();
        let h = cohomology(&koszul_cochain(&m, &m.all_indices()).unwrap());
        prop_assert_eq!(h.dims_over(0, count as i32), oracle::koszul_h(&f, dim, &ops));
    }

    #[test]
    fn chain_and_cochain_are_dual(m in arb_module(4)) {
        let iso = duality_check(&m, &m.all_indices()).unwrap();
        prop_assert!(iso.is_isomorphism());
        let hc = cohomology(&koszul_chain(&m, &m.all_indices()).unwrap());
        let hk = cohomology(&koszul_cochain(&m, &m.all_indices()).unwrap());
        let l = m.op_count() as i32;
        for q in 0..=l {
            prop_assert_eq!(hc.dim(q - l), hk.dim(q));
        }
    }

    #[test]
    fn rhom_equals_shifted_tensor(m in arb_module(4)) {
        let r = rhom_vs_tensor_check(&m, &m.all_indices()).unwrap();
        prop_assert!(r.agree, "{:?}", r);
    }

    #[test]
    fn reordering_operators_keeps_cohomology(m in arb_module(4), seed in any::<u64>()) {
        let mut idx = m.all_indices();
        idx.shuffle(&mut instance_rng(seed, 1));
        let a = cohomology(&koszul_cochain(&m, &m.all_indices()).unwrap());
        let b = cohomology(&koszul_cochain(&m, &idx).unwrap());
        prop_assert_eq!(a.dims(), b.dims());
    }

    #[test]
    fn decomposition_is_an_isomorphism(m in arb_module(5)) {
        let k = (0..=m.op_count()).find(|&j| m.ops()[j..].iter().all(|x| x.is_zero())).unwrap().max(1);
        let dec = decompose(&m, k).unwrap();
        prop_assert!(dec.iso_verified);
        prop_assert!(dec.dims_agree(), "{:?}", dec.dim_table);
        prop_assert_eq!(dec.l, m.op_count() - k);
    }

    #[test]
    fn invertible_operator_kills_everything(fi in 0usize..5, dim in 1usize..=3, count in 1usize..=3, seed in any::<u64>()) {
        let f = field_by_index(fi);
        let base = random_commuting_family(&f, dim, count, count, &mut instance_rng(seed, 0));
        let mut ops = base.ops().to_vec();
        ops.push(Mat::identity(&f, dim));
        let m = OperatorModule::with_default_labels(&f, dim, ops).unwrap();
        let h = cohomology(&koszul_cochain(&m, &m.all_indices()).unwrap());
        prop_assert!(h.dims().iter().all(|&x| x == 0));
    }
}

#[test]
fn occurrence_counts_are_binomials() {
    for n in 0..=20 {
        for k in 0..=n {
            assert_eq!(occurrence_count(k, n), binomial(n as u64, k as u64), "k={k} n={n}");
        }
    }
    let y = y_sequence(3).unwrap();
    assert_eq!(y.entries(), &[3, 2, 2, 1, 2, 1, 1, 0]);
}

#[test]
fn n_chi_values() {
    assert_eq!(n_chi(1).unwrap(), 1);
    for d in 2..=10 {
        assert_eq!(n_chi(d).unwrap(), 0);
        assert_eq!(n_chi_via_complexes(d).unwrap(), 0);
    }
    assert_eq!(n_chi_via_complexes(1).unwrap(), 1);
}

#[test]
fn trivial_module_dims() {
    let f = FieldSpec::rationals();
    for l in 1..=5 {
        let m = OperatorModule::trivial(&f, l);
        let h = cohomology(&koszul_cochain(&m, &m.all_indices()).unwrap());
        let expected: Vec<usize> = (0..=l).map(|q| binomial(l as u64, q as u64) as usize).collect();
        assert_eq!(h.dims(), expected.as_slice());
    }
}

#[test]
fn noncommuting_family_rejected() {
    let f = FieldSpec::rationals();
    let a = Mat::from_i64(&f, 2, 2, &[0, 1, 0, 0]);
    let b = Mat::from_i64(&f, 2, 2, &[0, 0, 1, 0]);
    assert!(OperatorModule::with_default_labels(&f, 2, vec![a, b]).is_err());
}
