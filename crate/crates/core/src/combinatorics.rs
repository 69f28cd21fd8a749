//! The sequences `y_n`, occurrence counts and the sign count `N_chi`.

use crate::complexes::{direct_sum, euler_char, shift, Cplx};
use crate::error::{Error, Result};
use crate::field::FieldSpec;

/// Largest `n` for which `y_n` is materialised.
pub const MAX_MATERIALISED: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YSeq {
    n: usize,
    entries: Vec<u8>,
}

impl YSeq {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn count(&self, k: usize) -> u64 {
        self.entries.iter().filter(|&&e| e as usize == k).count() as u64
    }
}

/// `y_0 = (0)`, `y_{i+1}` = `y_i` with every entry raised by one, followed by `y_i`.
pub fn y_sequence(n: usize) -> Result<YSeq> {
    if n > MAX_MATERIALISED {
        return Err(Error::TooLarge(format!("y_{n} has 2^{n} entries")));
    }
    let mut entries = vec![0u8];
    for _ in 0..n {
        let mut next: Vec<u8> = entries.iter().map(|e| e + 1).collect();
        next.extend_from_slice(&entries);
        entries = next;
    }
    Ok(YSeq { n, entries })
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial overflows u64")
}

/// Number of occurrences of `k` in `y_n`; counted directly when `y_n` is
/// small enough to build, closed form otherwise.
pub fn occurrence_count(k: usize, n: usize) -> u64 {
    match y_sequence(n) {
        Ok(y) => y.count(k),
        Err(_) => binomial(n as u64, k as u64),
    }
}

/// `sum_{k=0}^{d-1} (-1)^k N(k, d-1)`.
pub fn n_chi(d: usize) -> Result<i64> {
    if d == 0 {
        return Err(Error::Precondition("d must be at least 1".into()));
    }
    Ok((0..d)
        .map(|k| {
            let s = if k % 2 == 0 { 1 } else { -1 };
            s * occurrence_count(k, d - 1) as i64
        })
        .sum())
}

/// `C_0 = V[0]` for a line `V`, `C_{i+1} = C_i ⊕ C_i[-1]`.
pub fn iterated_line_complex(field: &FieldSpec, i: usize) -> Result<Cplx> {
    let mut c = Cplx::concentrated(field, 1, 0);
    for _ in 0..i {
        c = direct_sum(field, &[c.clone(), shift(&c, -1)])?;
    }
    Ok(c)
}

/// Euler characteristic of `C_{d-1}`.
pub fn n_chi_via_complexes(d: usize) -> Result<i64> {
    if d == 0 {
        return Err(Error::Precondition("d must be at least 1".into()));
    }
    let c = iterated_line_complex(&FieldSpec::rationals(), d - 1)?;
    Ok(euler_char(&c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_sequences() {
        assert_eq!(y_sequence(0).unwrap().entries(), &[0]);
        assert_eq!(y_sequence(1).unwrap().entries(), &[1, 0]);
        assert_eq!(y_sequence(2).unwrap().entries(), &[2, 1, 1, 0]);
        assert_eq!(y_sequence(3).unwrap().entries(), &[3, 2, 2, 1, 2, 1, 1, 0]);
        assert!(y_sequence(25).is_err());
    }

    #[test]
    fn counts() {
        for i in 0..=12 {
            assert_eq!(occurrence_count(0, i), 1);
            assert_eq!(occurrence_count(i, i), 1);
            assert_eq!(occurrence_count(1, i), i as u64);
        }
        assert_eq!(occurrence_count(2, 4), 6);
        assert_eq!(occurrence_count(30, 60), binomial(60, 30));
    }

    #[test]
    fn sign_counts() {
        assert_eq!(n_chi(1).unwrap(), 1);
        assert_eq!(n_chi(2).unwrap(), 0);
        assert_eq!(n_chi(5).unwrap(), 0);
        assert_eq!(n_chi_via_complexes(1).unwrap(), 1);
        assert_eq!(n_chi_via_complexes(3).unwrap(), 0);
        let c2 = iterated_line_complex(&FieldSpec::rationals(), 2).unwrap();
        assert_eq!(c2.dims(), &[1, 2, 1]);
        assert!(n_chi(0).is_err());
    }
}
