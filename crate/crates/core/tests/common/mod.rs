#![allow(dead_code)]

pub mod oracle;

use herr_core::herr::HerrInstance;
use herr_core::koszul::OperatorModule;
use herr_core::random::{instance_rng, random_commuting_family};
use herr_core::FieldSpec;
use rand::Rng;

pub fn fields() -> Vec<FieldSpec> {
    vec![FieldSpec::prime(2).unwrap(), FieldSpec::prime(5).unwrap(), FieldSpec::rationals()]
}

pub fn field_by_index(i: usize) -> FieldSpec {
    match i % 5 {
        0 => FieldSpec::prime(2).unwrap(),
        1 => FieldSpec::prime(5).unwrap(),
        2 => FieldSpec::rationals(),
        3 => FieldSpec::parse("gf:2^2").unwrap(),
        _ => FieldSpec::prime(3).unwrap(),
    }
}

/// d in 1..=d_max, dim in 1..=dim_max, x_j = 0 for j >= 2.
pub fn analytic_instance(field: &FieldSpec, seed: u64, index: u64, d_max: usize, dim_max: usize) -> HerrInstance {
    let mut rng = instance_rng(seed, index);
    let d = rng.gen_range(1..=d_max);
    let dim = rng.gen_range(1..=dim_max);
    let m = random_commuting_family(field, dim, d + 1, 2, &mut rng);
    HerrInstance::analytic(m).unwrap()
}

pub fn family(field: &FieldSpec, seed: u64, dim: usize, count: usize, zero_from: usize) -> OperatorModule {
    random_commuting_family(field, dim, count, zero_from, &mut instance_rng(seed, 0))
}
