//! Seeded random scalars, matrices and commuting operator families.
//!
//! Families are polynomials in one random matrix, so they commute by
//! construction. Instance `i` of a run with seed `s` draws from
//! `ChaCha8Rng::seed_from_u64(s)` on stream `i`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::field::{FieldSpec, Scalar};
use crate::koszul::OperatorModule;
use crate::matrix::Mat;

pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform over a finite field; small numerators and denominators over Q.
pub fn random_scalar(field: &FieldSpec, rng: &mut impl Rng) -> Scalar {
    match field {
        FieldSpec::Rationals => {
            let num = rng.gen_range(-3i64..=3);
            let den = if rng.gen_bool(0.25) { rng.gen_range(2i64..=3) } else { 1 };
            field.from_rational(num, den).unwrap()
        }
        FieldSpec::Prime(p) => Scalar::Prime(rng.gen_range(0..*p)),
        FieldSpec::Extension(e) => {
            let coeffs: Vec<u64> = (0..e.degree()).map(|_| rng.gen_range(0..e.characteristic())).collect();
            field.from_coeffs(&coeffs).unwrap()
        }
    }
}

pub fn random_matrix(field: &FieldSpec, rows: usize, cols: usize, rng: &mut impl Rng) -> Mat {
    let data = (0..rows * cols).map(|_| random_scalar(field, rng)).collect();
    Mat::from_vec(field, rows, cols, data).unwrap()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseKind {
    General,
    /// Strictly upper triangular.
    Nilpotent,
    /// A random matrix with one zero row.
    RankDeficient,
}

fn base_matrix(field: &FieldSpec, dim: usize, kind: BaseKind, rng: &mut impl Rng) -> Mat {
    let mut a = random_matrix(field, dim, dim, rng);
    match kind {
        BaseKind::General => {}
        BaseKind::Nilpotent => {
            for i in 0..dim {
                for j in 0..=i {
                    a.set(i, j, field.zero());
                }
            }
        }
        BaseKind::RankDeficient => {
            if dim > 0 {
                let r = rng.gen_range(0..dim);
                for j in 0..dim {
                    a.set(r, j, field.zero());
                }
            }
        }
    }
    a
}

/// Random polynomial `c0 + c1 a + c2 a^2`; the constant term is dropped half the time.
fn random_poly_in(field: &FieldSpec, a: &Mat, rng: &mut impl Rng) -> Mat {
    let n = a.rows();
    let c0 = if rng.gen_bool(0.5) { field.zero() } else { random_scalar(field, rng) };
    let c1 = random_scalar(field, rng);
    let c2 = if rng.gen_bool(0.5) { field.zero() } else { random_scalar(field, rng) };
    let a2 = a.mul(a).unwrap();
    Mat::scalar_identity(field, n, &c0)
        .add(&a.scale(&c1))
        .unwrap()
        .add(&a2.scale(&c2))
        .unwrap()
}

/// `count` commuting operators on `dim`-space; indices `>= zero_from` are zero.
pub fn random_commuting_family(
    field: &FieldSpec,
    dim: usize,
    count: usize,
    zero_from: usize,
    rng: &mut impl Rng,
) -> OperatorModule {
    let kind = match rng.gen_range(0..3) {
        0 => BaseKind::General,
        1 => BaseKind::Nilpotent,
        _ => BaseKind::RankDeficient,
    };
    random_family_of_kind(field, dim, count, zero_from, kind, rng)
}

pub fn random_family_of_kind(
    field: &FieldSpec,
    dim: usize,
    count: usize,
    zero_from: usize,
    kind: BaseKind,
    rng: &mut impl Rng,
) -> OperatorModule {
    let a = base_matrix(field, dim, kind, rng);
    let ops = (0..count)
        .map(|i| if i >= zero_from { Mat::zeros(field, dim, dim) } else { random_poly_in(field, &a, rng) })
        .collect();
    OperatorModule::with_default_labels(field, dim, ops).expect("polynomials in one matrix commute")
}

/// A random cochain vector of the given length.
pub fn random_vector(field: &FieldSpec, len: usize, rng: &mut impl Rng) -> Vec<Scalar> {
    (0..len).map(|_| random_scalar(field, rng)).collect()
}
