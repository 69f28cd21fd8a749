//! Row reduction, ranks, kernels and linear solves.
//!
//! Every routine reduces to [`rref`]. Prime fields run on raw `u64` residues,
//! the rationals use fraction-free Gauss-Jordan on integer rows, and extension
//! fields fall back to generic scalar arithmetic. Pivots are always the first
//! nonzero entry in column order, so bases are reproducible.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::Mat;

/// Reduced row echelon form and the pivot columns (one per nonzero row).
pub fn rref(m: &Mat) -> (Mat, Vec<usize>) {
    match m.field() {
        FieldSpec::Prime(p) => rref_prime(m, *p),
        FieldSpec::Rationals => rref_rational(m),
        FieldSpec::Extension(_) => rref_generic(m),
    }
}

fn rref_prime(m: &Mat, p: u64) -> (Mat, Vec<usize>) {
    let (rows, cols) = m.shape();
    let mut a: Vec<u64> = m.entries().iter().map(|s| s.as_prime().unwrap()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                a.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = inv_u64(a[r * cols + c], p);
        for j in c..cols {
            a[r * cols + j] = mulm(a[r * cols + j], inv, p);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = a[i * cols + c];
            if factor == 0 {
                continue;
            }
            for j in c..cols {
                let v = a[r * cols + j];
                if v != 0 {
                    let cur = a[i * cols + j];
                    let sub = mulm(factor, v, p);
                    a[i * cols + j] = if cur >= sub { cur - sub } else { p - (sub - cur) };
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let data = a.into_iter().map(Scalar::Prime).collect();
    (Mat::from_vec(m.field(), rows, cols, data).unwrap(), pivots)
}

#[inline]
fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_u64(a: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulm(acc, base, p);
        }
        base = mulm(base, base, p);
        e >>= 1;
    }
    acc
}

/// Fraction-free Gauss-Jordan: rows are cleared of denominators, then every
/// update `a_ij <- (piv*a_ij - a_ic*a_rj) / prev` divides exactly, and at the
/// end all pivot entries equal the last pivot.
fn rref_rational(m: &Mat) -> (Mat, Vec<usize>) {
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            let row = m.row(i);
            let lcm = row
                .iter()
                .map(|s| s.as_rational().unwrap().denom().clone())
                .fold(BigInt::one(), |acc, d| acc.lcm(&d));
            row.iter()
                .map(|s| {
                    let q = s.as_rational().unwrap();
                    q.numer() * (&lcm / q.denom())
                })
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(pr, r);
        let piv = a[r][c].clone();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = a[i][c].clone();
            for j in 0..cols {
                let v = &piv * &a[i][j] - &factor * &a[r][j];
                let (q, rem) = v.div_rem(&prev);
                debug_assert!(rem.is_zero(), "fraction-free step must divide exactly");
                a[i][j] = q;
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    let f = m.field();
    let mut data = Vec::with_capacity(rows * cols);
    for (i, row) in a.into_iter().enumerate() {
        if i < pivots.len() {
            let lead = row[pivots[i]].clone();
            for v in row {
                data.push(Scalar::Rational(BigRational::new(v, lead.clone())));
            }
        } else {
            for v in row {
                debug_assert!(v.is_zero());
                data.push(Scalar::Rational(BigRational::from_integer(v)));
            }
        }
    }
    // lowest terms with positive denominators
    for s in data.iter_mut() {
        if let Scalar::Rational(q) = s {
            if q.denom().is_negative() {
                *q = BigRational::new(-q.numer().clone(), -q.denom().clone());
            }
        }
    }
    (Mat::from_vec(f, rows, cols, data).unwrap(), pivots)
}

fn rref_generic(m: &Mat) -> (Mat, Vec<usize>) {
    let f = m.field().clone();
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<Scalar>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !f.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(pr, r);
        let inv = f.inv(&a[r][c]).unwrap();
        for j in c..cols {
            a[r][j] = f.mul(&a[r][j], &inv);
        }
        for i in 0..rows {
            if i == r || f.is_zero(&a[i][c]) {
                continue;
            }
            let factor = a[i][c].clone();
            for j in c..cols {
                let t = f.mul(&factor, &a[r][j]);
                a[i][j] = f.sub(&a[i][j], &t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (Mat::from_vec(&f, rows, cols, a.into_iter().flatten().collect()).unwrap(), pivots)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankProfile {
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
    /// Columns form a basis of the null space (`cols x nullity`).
    pub kernel_basis: Mat,
    /// The pivot columns of the input (`rows x rank`).
    pub image_basis: Mat,
}

pub fn rank_profile(m: &Mat) -> RankProfile {
    let (red, pivots) = rref(m);
    let kernel_basis = kernel_from_rref(&red, &pivots);
    RankProfile {
        rank: pivots.len(),
        image_basis: m.select_cols(&pivots),
        pivot_cols: pivots,
        kernel_basis,
    }
}

fn kernel_from_rref(red: &Mat, pivots: &[usize]) -> Mat {
    let f = red.field();
    let cols = red.cols();
    let mut is_pivot = vec![None; cols];
    for (i, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(i);
    }
    let free: Vec<usize> = (0..cols).filter(|&c| is_pivot[c].is_none()).collect();
    let mut k = Mat::zeros(f, cols, free.len());
    for (j, &fc) in free.iter().enumerate() {
        k.set(fc, j, f.one());
        for (i, &pc) in pivots.iter().enumerate() {
            let v = red.get(i, fc);
            if !f.is_zero(v) {
                k.set(pc, j, f.neg(v));
            }
        }
    }
    k
}

pub fn rank(m: &Mat) -> usize {
    rref(m).1.len()
}

pub fn kernel(m: &Mat) -> Mat {
    rank_profile(m).kernel_basis
}

/// A basis (as columns) of the span of the columns of `m`.
pub fn column_basis(m: &Mat) -> Mat {
    rank_profile(m).image_basis
}

/// Dimension of the span of the given column blocks, all with `rows` rows.
pub fn span_dim(field: &FieldSpec, rows: usize, parts: &[&Mat]) -> usize {
    rank(&Mat::hstack(field, rows, parts).expect("span_dim blocks must share row count"))
}

/// Some `x` with `a x = b`, or `None` when the system is inconsistent.
pub fn solve_linear(a: &Mat, b: &Mat) -> Result<Option<Mat>> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field().to_string(), b.field().to_string()));
    }
    if a.rows() != b.rows() {
        return Err(Error::Shape(format!("{} equations but {} right-hand rows", a.rows(), b.rows())));
    }
    let f = a.field();
    let n = a.cols();
    let aug = Mat::hstack(f, a.rows(), &[a, b])?;
    let (red, pivots) = rref(&aug);
    if pivots.iter().any(|&c| c >= n) {
        return Ok(None);
    }
    let mut x = Mat::zeros(f, n, b.cols());
    for (i, &pc) in pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x.set(pc, j, red.get(i, n + j).clone());
        }
    }
    Ok(Some(x))
}

/// Inverse of a square matrix, or `None` when singular.
pub fn inverse(m: &Mat) -> Result<Option<Mat>> {
    if !m.is_square() {
        return Err(Error::Shape("inverse of a non-square matrix".into()));
    }
    let id = Mat::identity(m.field(), m.rows());
    if rank(m) < m.rows() {
        return Ok(None);
    }
    solve_linear(m, &id)
}

pub fn is_invertible(m: &Mat) -> bool {
    m.is_square() && rank(m) == m.rows()
}

/// The entrywise automorphism `x -> x^(p^power)` of an extension field.
#[derive(Clone, Debug)]
pub struct FieldAutomorphism {
    field: FieldSpec,
    power: usize,
}

pub fn field_automorphism(fs: &FieldSpec, power: usize) -> Result<FieldAutomorphism> {
    if power > 0 && !fs.is_extension() {
        return Err(Error::UnsupportedAutomorphism(format!(
            "{fs} has no nontrivial Frobenius power"
        )));
    }
    Ok(FieldAutomorphism { field: fs.clone(), power })
}

impl FieldAutomorphism {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn power(&self) -> usize {
        self.power
    }

    pub fn apply_scalar(&self, s: &Scalar) -> Scalar {
        let mut out = s.clone();
        for _ in 0..self.power % self.field.degree().max(1) {
            out = self.field.frobenius(&out);
        }
        out
    }

    pub fn apply(&self, m: &Mat) -> Result<Mat> {
        if m.field() != &self.field {
            return Err(Error::FieldMismatch(self.field.to_string(), m.field().to_string()));
        }
        Ok(m.map(|_, s| self.apply_scalar(s)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_over_gf5() {
        let f = FieldSpec::prime(5).unwrap();
        let rp = rank_profile(&Mat::identity(&f, 2));
        assert_eq!(rp.rank, 2);
        assert_eq!(rp.kernel_basis.cols(), 0);
    }

    #[test]
    fn nilpotent_over_q() {
        let q = FieldSpec::rationals();
        let rp = rank_profile(&Mat::from_i64(&q, 2, 2, &[0, 1, 0, 0]));
        assert_eq!(rp.rank, 1);
        assert_eq!(rp.kernel_basis, Mat::from_i64(&q, 2, 1, &[1, 0]));
        assert_eq!(rp.pivot_cols, vec![1]);
    }

    #[test]
    fn rational_rref_is_reduced() {
        let q = FieldSpec::rationals();
        let m = Mat::from_vec(
            &q,
            3,
            4,
            ["1/2", "2/3", "0", "5", "3", "-1/7", "2", "0", "7/2", "11/21", "2", "5"]
                .iter()
                .map(|s| q.parse_scalar(s).unwrap())
                .collect(),
        )
        .unwrap();
        let (red, piv) = rref(&m);
        assert_eq!(piv, vec![0, 1]);
        assert!(q.is_one(red.get(0, 0)) && q.is_one(red.get(1, 1)));
        assert!(q.is_zero(red.get(0, 1)) && q.is_zero(red.get(1, 0)));
        assert!((0..4).all(|j| q.is_zero(red.get(2, j))));
        let k = kernel(&m);
        assert_eq!(k.cols(), 2);
        assert!(m.mul(&k).unwrap().is_zero());
    }

    #[test]
    fn solve_zero_system() {
        let q = FieldSpec::rationals();
        let x = solve_linear(&Mat::zeros(&q, 2, 2), &Mat::zeros(&q, 2, 1)).unwrap().unwrap();
        assert!(x.is_zero());
        assert!(solve_linear(&Mat::zeros(&q, 2, 2), &Mat::from_i64(&q, 2, 1, &[1, 0]))
            .unwrap()
            .is_none());
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let f = FieldSpec::prime(3).unwrap();
        let b = Mat::from_i64(&f, 3, 2, &[1, 2, 0, 1, 2, 2]);
        assert_eq!(solve_linear(&Mat::identity(&f, 3), &b).unwrap().unwrap(), b);
    }

    #[test]
    fn automorphism_rules() {
        let gf4 = FieldSpec::extension(2, vec![1, 1, 1]).unwrap();
        let g = gf4.generator().unwrap();
        let m = Mat::from_vec(&gf4, 1, 1, vec![g.clone()]).unwrap();
        assert_eq!(field_automorphism(&gf4, 0).unwrap().apply(&m).unwrap(), m);
        let sigma = field_automorphism(&gf4, 1).unwrap();
        let img = sigma.apply(&m).unwrap();
        assert_eq!(img.get(0, 0), &gf4.add(&g, &gf4.one()));
        assert_eq!(sigma.apply(&img).unwrap(), m);
        assert!(matches!(
            field_automorphism(&FieldSpec::prime(5).unwrap(), 1),
            Err(Error::UnsupportedAutomorphism(_))
        ));
        assert!(field_automorphism(&FieldSpec::rationals(), 0).is_ok());
        assert!(field_automorphism(&FieldSpec::rationals(), 2).is_err());
    }

    #[test]
    fn extension_kernel() {
        let f = FieldSpec::parse("gf:3^2").unwrap();
        let t = f.generator().unwrap();
        // rank one: second row is t times the first
        let r0 = vec![f.one(), t.clone(), f.from_i64(2)];
        let r1: Vec<Scalar> = r0.iter().map(|x| f.mul(&t, x)).collect();
        let m = Mat::from_rows(&f, vec![r0, r1]).unwrap();
        let rp = rank_profile(&m);
        assert_eq!(rp.rank, 1);
        assert!(m.mul(&rp.kernel_basis).unwrap().is_zero());
    }
}
