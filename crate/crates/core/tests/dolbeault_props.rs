mod common;

use common::field_by_index;
use herr_core::dolbeault::{
    dolbeault_resolution_check, frolicher_check, grassmann_checks, grassmann_model, omega_complexes,
    quad_matrix_check, sol, truncated_counterexample, DolbeaultModel, DolbeaultPair, QUAD_SIGNS,
};
use herr_core::random::{instance_rng, random_commuting_family, random_matrix, random_scalar};
use herr_core::{FieldSpec, Mat, Scalar};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Grassmann model with random commuting `F`, `A` and shift coefficients.
fn random_model(f: &FieldSpec, rng: &mut ChaCha8Rng, d_max: usize, w_max: usize) -> DolbeaultModel {
    let d = rng.gen_range(2..=d_max);
    let w = rng.gen_range(1..=w_max);
    let base = grassmann_model(d, w, f).unwrap();
    let fam = random_commuting_family(f, w, 2, 2, rng);
    let shifts: Vec<Scalar> = (0..d - 1).map(|_| random_scalar(f, rng)).collect();
    base.with_operators(fam.op(0), fam.op(1), &shifts).unwrap()
}

/// Two Grassmann models with scalar `A = c`, shared shifts and arbitrary `Φ, ρ: W_I -> W_J`.
fn random_pair(f: &FieldSpec, rng: &mut ChaCha8Rng) -> DolbeaultPair {
    let d = rng.gen_range(2..=3);
    let (wi, wj) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
    let c = random_scalar(f, rng);
    let shifts: Vec<Scalar> = (0..d - 1).map(|_| random_scalar(f, rng)).collect();
    let model = |w: usize| {
        let a = Mat::scalar_identity(f, w, &c);
        grassmann_model(d, w, f).unwrap().with_operators(&Mat::zeros(f, w, w), &a, &shifts).unwrap()
    };
    let (mi, mj) = (model(wi), model(wj));
    let ib = Mat::identity(f, 1 << (d - 1));
    let phi = ib.kron(&random_matrix(f, wj, wi, rng)).unwrap();
    let rho = ib.kron(&random_matrix(f, wj, wi, rng)).unwrap();
    DolbeaultPair::new(mi, mj, phi, rho).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn grassmann_properties(fi in 0usize..5, d in 2usize..=5, w in 1usize..=3) {
        let f = field_by_index(fi);
        let m = grassmann_model(d, w, &f).unwrap();
        prop_assert_eq!(m.module().dim(), w << (d - 1));
        let c = grassmann_checks(&m).unwrap();
        prop_assert!(c.surjective && c.solvable);
        prop_assert_eq!(c.sol_dim, w);
        for i in 2..=d {
            for j in 2..=d {
                prop_assert!(m.module().op(i).commutes_with(m.module().op(j)).unwrap());
            }
        }
    }

    #[test]
    fn resolution_with_random_operators(fi in 0usize..5, seed in any::<u64>()) {
        let f = field_by_index(fi);
        let m = random_model(&f, &mut instance_rng(seed, 0), 4, 2);
        let r = dolbeault_resolution_check(&m).unwrap();
        prop_assert!(r.holds, "{:?}", r);
        prop_assert_eq!(r.sol_dim, m.w());
    }

    #[test]
    fn quad_matrix(fi in 0usize..5, seed in any::<u64>()) {
        let f = field_by_index(fi);
        let mut rng = instance_rng(seed, 0);
        let pair = if rng.gen_bool(0.5) {
            DolbeaultPair::from_model(&random_model(&f, &mut rng, 3, 2)).unwrap()
        } else {
            random_pair(&f, &mut rng)
        };
        let r = quad_matrix_check(&pair).unwrap();
        prop_assert!(r.holds);
        prop_assert_eq!(r.signs, Some(QUAD_SIGNS));
    }

    #[test]
    fn frolicher_single(fi in 0usize..5, seed in any::<u64>()) {
        let f = field_by_index(fi);
        let m = random_model(&f, &mut instance_rng(seed, 0), 3, 2);
        let r = frolicher_check(&DolbeaultPair::from_model(&m).unwrap()).unwrap();
        prop_assert!(r.hypothesis);
        prop_assert!(r.consistent(), "{:?}", r);
    }

    #[test]
    fn frolicher_pair(fi in 0usize..5, seed in any::<u64>()) {
        let f = field_by_index(fi);
        let pair = random_pair(&f, &mut instance_rng(seed, 0));
        let r = frolicher_check(&pair).unwrap();
        prop_assert!(r.hypothesis && r.consistent(), "{:?}", r);
    }

    #[test]
    fn sol_is_stable_under_nabla(fi in 0usize..5, seed in any::<u64>()) {
        let f = field_by_index(fi);
        let m = random_model(&f, &mut instance_rng(seed, 0), 4, 2);
        let s = sol(m.module(), 2);
        let img = m.nabla().mul(&s).unwrap();
        let both = Mat::hstack(&f, s.rows(), &[&s, &img]).unwrap();
        prop_assert_eq!(herr_core::linalg::rank(&both), s.cols());
    }
}

#[test]
fn resolution_on_the_full_grid() {
    for f in [FieldSpec::prime(2).unwrap(), FieldSpec::rationals()] {
        for d in 2..=5 {
            for w in 1..=3 {
                let r = dolbeault_resolution_check(&grassmann_model(d, w, &f).unwrap()).unwrap();
                assert!(r.holds, "d={d} w={w}");
                let mut expected = vec![0; d];
                expected[0] = w;
                assert_eq!(r.h_sigma0, expected);
            }
        }
    }
}

#[test]
fn counterexample_takes_the_other_branch() {
    let f = FieldSpec::prime(5).unwrap();
    let m = truncated_counterexample(&f);
    assert!(!dolbeault_resolution_check(&m).unwrap().holds);
    let r = frolicher_check(&DolbeaultPair::from_model(&m).unwrap()).unwrap();
    assert!(!r.hypothesis && !r.identities_hold);
    assert!(r.consistent());
}

#[test]
fn identity_phi_matches_sol_side() {
    let f = FieldSpec::rationals();
    let m = grassmann_model(3, 1, &f).unwrap();
    let id = Mat::identity(&f, m.module().dim());
    let pair = DolbeaultPair::new(m.clone(), m, id.clone(), id).unwrap();
    let r = frolicher_check(&pair).unwrap();
    assert_eq!(r.h_omega_phi, r.h_phi_nabla_sol);
    let o = omega_complexes(&pair).unwrap();
    assert!(o.c_sigma_phi.check_d_squared());
}

#[test]
fn one_dimensional_trivial_quad() {
    // d = 2, w = 1 with all operators zero: 8-dimensional total complex, zero differential up to ∂
    let f = FieldSpec::prime(3).unwrap();
    let m = grassmann_model(2, 1, &f).unwrap();
    let pair = DolbeaultPair::from_model(&m).unwrap();
    assert!(quad_matrix_check(&pair).unwrap().holds);
    let o = omega_complexes(&pair).unwrap();
    assert_eq!(o.c_sigma_phi.total_dim(), 12);
}

#[test]
fn non_intertwining_phi_rejected() {
    let f = FieldSpec::rationals();
    let m = grassmann_model(2, 1, &f).unwrap();
    let bad = Mat::from_i64(&f, 2, 2, &[0, 0, 1, 0]);
    assert!(DolbeaultPair::new(m.clone(), m, bad, Mat::identity(&f, 2)).is_err());
}
