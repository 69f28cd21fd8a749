//! Exact fields: the rationals, prime fields GF(p) and extensions GF(p^n).
//!
//! Elements are plain [`Scalar`] values; all arithmetic goes through the
//! [`FieldSpec`] that owns them, so a prime-field residue never has to carry
//! its modulus around.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_EXTENSION_DEGREE: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
    Extension(Arc<Extension>),
}

/// GF(p)[t] / (min_poly).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Extension {
    p: u64,
    /// Monic, ascending coefficients, length `n + 1`.
    modulus: Vec<u64>,
}

impl Extension {
    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn min_poly(&self) -> &[u64] {
        &self.modulus
    }
}

/// Residue of degree `< n` with coefficients in `[0, p)`, padded with zeros.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct ExtElem(pub(crate) [u64; MAX_EXTENSION_DEGREE]);

impl ExtElem {
    pub fn coeffs(&self) -> &[u64; MAX_EXTENSION_DEGREE] {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime(u64),
    Ext(ExtElem),
}

impl Scalar {
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_prime(&self) -> Option<u64> {
        match self {
            Scalar::Prime(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_ext(&self) -> Option<&ExtElem> {
        match self {
            Scalar::Ext(e) => Some(e),
            _ => None,
        }
    }
}

// ---------------------------------------------------------------------------
// modular helpers

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        return None;
    }
    // p is prime
    Some(pow_mod(a, p - 2, p))
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

// ---------------------------------------------------------------------------
// dense polynomials over GF(p), ascending coefficients

pub(crate) mod poly {
    use super::{add_mod, inv_mod, mul_mod, sub_mod};

    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
            }
        }
        trim(&mut out);
        out
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out: Vec<u64> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                sub_mod(x, y, p)
            })
            .collect();
        trim(&mut out);
        out
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn div_rem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let mut r = a.to_vec();
        trim(&mut r);
        let mut b = b.to_vec();
        trim(&mut b);
        assert!(!b.is_empty(), "polynomial division by zero");
        let lead_inv = inv_mod(*b.last().unwrap(), p).expect("leading coefficient invertible");
        let db = b.len() - 1;
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let mut q = vec![0u64; r.len() - db];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = mul_mod(*r.last().unwrap(), lead_inv, p);
            q[shift] = c;
            for (j, &bj) in b.iter().enumerate() {
                r[shift + j] = sub_mod(r[shift + j], mul_mod(c, bj, p), p);
            }
            trim(&mut r);
        }
        trim(&mut q);
        (q, r)
    }

    pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        div_rem(a, b, p).1
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        if let Some(&lead) = x.last() {
            let inv = inv_mod(lead, p).unwrap();
            for c in x.iter_mut() {
                *c = mul_mod(*c, inv, p);
            }
        }
        x
    }

    pub fn pow_mod(base: &[u64], mut exp: u64, modulus: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = rem(base, modulus, p);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = rem(&mul(&acc, &b, p), modulus, p);
            }
            b = rem(&mul(&b, &b, p), modulus, p);
            exp >>= 1;
        }
        acc
    }

    /// Inverse of `a` modulo an irreducible `modulus`, via extended Euclid.
    pub fn inv_mod_poly(a: &[u64], modulus: &[u64], p: u64) -> Option<Vec<u64>> {
        let mut r0 = modulus.to_vec();
        let mut r1 = rem(a, modulus, p);
        if r1.is_empty() {
            return None;
        }
        let mut t0: Vec<u64> = Vec::new();
        let mut t1: Vec<u64> = vec![1];
        while !r1.is_empty() {
            let (q, r) = div_rem(&r0, &r1, p);
            let t = sub(&t0, &mul(&q, &t1, p), p);
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t;
        }
        // r0 is a nonzero constant when gcd is 1
        if r0.len() != 1 {
            return None;
        }
        let c = inv_mod(r0[0], p)?;
        let mut out: Vec<u64> = t0.iter().map(|&x| mul_mod(x, c, p)).collect();
        out = rem(&out, modulus, p);
        Some(out)
    }

    /// Ben-Or irreducibility test for a monic polynomial of degree >= 1.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let n = f.len() - 1;
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let x = vec![0u64, 1];
        let mut g = x.clone();
        for _ in 1..=n / 2 {
            g = pow_mod(&g, p, f, p);
            let h = gcd(&sub(&g, &x, p), f, p);
            if h.len() != 1 {
                return false;
            }
        }
        true
    }
}

// ---------------------------------------------------------------------------

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec::Rationals
    }

    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(FieldSpec::Prime(p))
    }

    /// GF(p^n) with an explicit monic minimal polynomial (ascending coefficients).
    pub fn extension(p: u64, min_poly: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if min_poly.len() < 2 || min_poly.len() > MAX_EXTENSION_DEGREE + 1 {
            return Err(Error::InvalidField(format!(
                "extension degree must be in 1..={MAX_EXTENSION_DEGREE}"
            )));
        }
        if min_poly.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("min-poly coefficients must be reduced mod p".into()));
        }
        if *min_poly.last().unwrap() != 1 {
            return Err(Error::InvalidField("min-poly must be monic".into()));
        }
        if !poly::is_irreducible(&min_poly, p) {
            return Err(Error::InvalidField(format!(
                "min-poly {min_poly:?} is reducible over GF({p})"
            )));
        }
        Ok(FieldSpec::Extension(Arc::new(Extension { p, modulus: min_poly })))
    }

    /// GF(p^n) with the first monic irreducible of degree n, ordering candidates
    /// by the integer `c_0 + c_1 p + ... + c_{n-1} p^{n-1}`.
    pub fn extension_auto(p: u64, n: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if n == 0 || n > MAX_EXTENSION_DEGREE {
            return Err(Error::InvalidField(format!(
                "extension degree must be in 1..={MAX_EXTENSION_DEGREE}"
            )));
        }
        let mut digits = vec![0u64; n];
        loop {
            let mut f = digits.clone();
            f.push(1);
            if poly::is_irreducible(&f, p) {
                return FieldSpec::extension(p, f);
            }
            // increment little-endian base-p counter
            let mut i = 0;
            loop {
                if i == n {
                    return Err(Error::InvalidField(format!("no irreducible of degree {n}")));
                }
                digits[i] += 1;
                if digits[i] == p {
                    digits[i] = 0;
                    i += 1;
                } else {
                    break;
                }
            }
        }
    }

    /// Parses `q`, `gf:p` or `gf:p^n`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(FieldSpec::Rationals);
        }
        let rest = t
            .strip_prefix("gf:")
            .ok_or_else(|| Error::InvalidField(format!("unrecognised field spec {text:?}")))?;
        let bad = || Error::InvalidField(format!("unrecognised field spec {text:?}"));
        match rest.split_once('^') {
            None => FieldSpec::prime(rest.parse().map_err(|_| bad())?),
            Some((p, n)) => {
                let p: u64 = p.parse().map_err(|_| bad())?;
                let n: usize = n.parse().map_err(|_| bad())?;
                if n == 1 {
                    FieldSpec::prime(p)
                } else {
                    FieldSpec::extension_auto(p, n)
                }
            }
        }
    }

    /// Characteristic; 0 for the rationals.
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
            FieldSpec::Extension(e) => e.p,
        }
    }

    /// Degree over the prime field; 1 for the rationals.
    pub fn degree(&self) -> usize {
        match self {
            FieldSpec::Extension(e) => e.degree(),
            _ => 1,
        }
    }

    pub fn is_extension(&self) -> bool {
        matches!(self, FieldSpec::Extension(_))
    }

    /// The prime subfield (the field itself for Q and GF(p)).
    pub fn prime_subfield(&self) -> FieldSpec {
        match self {
            FieldSpec::Extension(e) => FieldSpec::Prime(e.p),
            other => other.clone(),
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::zero()),
            FieldSpec::Prime(_) => Scalar::Prime(0),
            FieldSpec::Extension(_) => Scalar::Ext(ExtElem::default()),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::Prime(p) => Scalar::Prime(reduce_i64(v, *p)),
            FieldSpec::Extension(e) => {
                let mut c = [0u64; MAX_EXTENSION_DEGREE];
                c[0] = reduce_i64(v, e.p);
                Scalar::Ext(ExtElem(c))
            }
        }
    }

    pub fn from_rational(&self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        self.div(&self.from_i64(num), &self.from_i64(den))
    }

    /// Builds an extension element from ascending coefficients (reduced mod p).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Scalar> {
        match self {
            FieldSpec::Extension(e) => {
                if coeffs.len() > e.degree() {
                    return Err(Error::Shape(format!(
                        "{} coefficients for degree-{} extension",
                        coeffs.len(),
                        e.degree()
                    )));
                }
                let mut c = [0u64; MAX_EXTENSION_DEGREE];
                for (slot, &v) in c.iter_mut().zip(coeffs) {
                    *slot = v % e.p;
                }
                Ok(Scalar::Ext(ExtElem(c)))
            }
            FieldSpec::Prime(p) if coeffs.len() <= 1 => {
                Ok(Scalar::Prime(coeffs.first().copied().unwrap_or(0) % p))
            }
            other => Err(Error::InvalidField(format!("{other} has no polynomial coordinates"))),
        }
    }

    /// The residue class of `t` in an extension field.
    pub fn generator(&self) -> Result<Scalar> {
        match self {
            FieldSpec::Extension(e) if e.degree() >= 2 => self.from_coeffs(&[0, 1]),
            FieldSpec::Extension(e) => {
                // degree one: t is the root of t + c0
                Ok(self.from_i64(-(e.modulus[0] as i64)))
            }
            other => Err(Error::InvalidField(format!("{other} is not an extension field"))),
        }
    }

    /// Coordinates over the prime field (length = degree).
    pub fn prime_coordinates(&self, s: &Scalar) -> Option<Vec<u64>> {
        match (self, s) {
            (FieldSpec::Prime(_), Scalar::Prime(v)) => Some(vec![*v]),
            (FieldSpec::Extension(e), Scalar::Ext(x)) => Some(x.0[..e.degree()].to_vec()),
            _ => None,
        }
    }

    /// Whether `s` is a canonical element of this field.
    pub fn contains(&self, s: &Scalar) -> bool {
        match (self, s) {
            (FieldSpec::Rationals, Scalar::Rational(r)) => r.denom().is_positive(),
            (FieldSpec::Prime(p), Scalar::Prime(v)) => v < p,
            (FieldSpec::Extension(e), Scalar::Ext(x)) => {
                let n = e.degree();
                x.0[..n].iter().all(|&c| c < e.p) && x.0[n..].iter().all(|&c| c == 0)
            }
            _ => false,
        }
    }

    pub fn is_zero(&self, s: &Scalar) -> bool {
        match s {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime(v) => *v == 0,
            Scalar::Ext(x) => x.0.iter().all(|&c| c == 0),
        }
    }

    pub fn is_one(&self, s: &Scalar) -> bool {
        *s == self.one()
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (_, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x + y),
            (FieldSpec::Prime(p), Scalar::Prime(x), Scalar::Prime(y)) => {
                Scalar::Prime(add_mod(*x, *y, *p))
            }
            (FieldSpec::Extension(e), Scalar::Ext(x), Scalar::Ext(y)) => {
                let mut c = [0u64; MAX_EXTENSION_DEGREE];
                for i in 0..e.degree() {
                    c[i] = add_mod(x.0[i], y.0[i], e.p);
                }
                Scalar::Ext(ExtElem(c))
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (_, Scalar::Rational(x)) => Scalar::Rational(-x),
            (FieldSpec::Prime(p), Scalar::Prime(x)) => Scalar::Prime(sub_mod(0, *x, *p)),
            (FieldSpec::Extension(e), Scalar::Ext(x)) => {
                let mut c = [0u64; MAX_EXTENSION_DEGREE];
                for i in 0..e.degree() {
                    c[i] = sub_mod(0, x.0[i], e.p);
                }
                Scalar::Ext(ExtElem(c))
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (_, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x - y),
            (FieldSpec::Prime(p), Scalar::Prime(x), Scalar::Prime(y)) => {
                Scalar::Prime(sub_mod(*x, *y, *p))
            }
            _ => self.add(a, &self.neg(b)),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (_, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x * y),
            (FieldSpec::Prime(p), Scalar::Prime(x), Scalar::Prime(y)) => {
                Scalar::Prime(mul_mod(*x, *y, *p))
            }
            (FieldSpec::Extension(e), Scalar::Ext(x), Scalar::Ext(y)) => {
                Scalar::Ext(e.mul(x, y))
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(match (self, a) {
            (_, Scalar::Rational(x)) => Scalar::Rational(x.recip()),
            (FieldSpec::Prime(p), Scalar::Prime(x)) => Scalar::Prime(inv_mod(*x, *p).unwrap()),
            (FieldSpec::Extension(e), Scalar::Ext(x)) => {
                let n = e.degree();
                let mut a_poly = x.0[..n].to_vec();
                poly::trim(&mut a_poly);
                let inv = poly::inv_mod_poly(&a_poly, &e.modulus, e.p)
                    .expect("nonzero element of a field is invertible");
                let mut c = [0u64; MAX_EXTENSION_DEGREE];
                c[..inv.len()].copy_from_slice(&inv);
                Scalar::Ext(ExtElem(c))
            }
            _ => panic!("scalar does not belong to {self}"),
        })
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Scalar, mut exp: u64) -> Scalar {
        let mut acc = self.one();
        let mut base = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    /// `x -> x^p`; the identity on the rationals and on GF(p).
    pub fn frobenius(&self, a: &Scalar) -> Scalar {
        match self {
            FieldSpec::Extension(e) => self.pow(a, e.p),
            _ => a.clone(),
        }
    }

    /// Serialises a scalar: `a/b` for rationals, `c` for GF(p),
    /// `c0+c1*t+c2*t^2...` for extensions.
    pub fn format_scalar(&self, s: &Scalar) -> String {
        match s {
            Scalar::Rational(r) => format!("{}/{}", r.numer(), r.denom()),
            Scalar::Prime(v) => v.to_string(),
            Scalar::Ext(x) => {
                let n = self.degree();
                let terms: Vec<String> = (0..n)
                    .filter(|&i| x.0[i] != 0)
                    .map(|i| match i {
                        0 => x.0[0].to_string(),
                        1 => format!("{}*t", x.0[1]),
                        _ => format!("{}*t^{}", x.0[i], i),
                    })
                    .collect();
                if terms.is_empty() {
                    "0".to_string()
                } else {
                    terms.join("+")
                }
            }
        }
    }

    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let err = || Error::ScalarParse { text: text.to_string(), field: self.to_string() };
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err());
        }
        match self {
            FieldSpec::Rationals => {
                let (n, d) = match t.split_once('/') {
                    Some((n, d)) => (n, d),
                    None => (t.as_str(), "1"),
                };
                let n: BigInt = n.parse().map_err(|_| err())?;
                let d: BigInt = d.parse().map_err(|_| err())?;
                if d.is_zero() {
                    return Err(err());
                }
                Ok(Scalar::Rational(BigRational::new(n, d)))
            }
            FieldSpec::Prime(p) => {
                let v: i128 = t.parse().map_err(|_| err())?;
                Ok(Scalar::Prime(v.rem_euclid(*p as i128) as u64))
            }
            FieldSpec::Extension(e) => {
                let mut c = [0u64; MAX_EXTENSION_DEGREE];
                // normalise subtraction into addition of negated terms
                let t = t.replace('-', "+-");
                for term in t.split('+').filter(|s| !s.is_empty()) {
                    let (coef, power) = parse_ext_term(term).ok_or_else(err)?;
                    if power >= e.degree() {
                        return Err(err());
                    }
                    let v = coef.rem_euclid(e.p as i128) as u64;
                    c[power] = add_mod(c[power], v, e.p);
                }
                Ok(Scalar::Ext(ExtElem(c)))
            }
        }
    }
}

fn parse_ext_term(term: &str) -> Option<(i128, usize)> {
    let (neg, body) = match term.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, term),
    };
    let (coef, power) = if let Some(idx) = body.find('t') {
        let coef_part = body[..idx].trim_end_matches('*');
        let coef: i128 = if coef_part.is_empty() { 1 } else { coef_part.parse().ok()? };
        let rest = &body[idx + 1..];
        let power: usize = if rest.is_empty() {
            1
        } else {
            rest.strip_prefix('^')?.parse().ok()?
        };
        (coef, power)
    } else {
        (body.parse().ok()?, 0)
    };
    Some((if neg { -coef } else { coef }, power))
}

fn reduce_i64(v: i64, p: u64) -> u64 {
    (v as i128).rem_euclid(p as i128) as u64
}

impl Extension {
    fn mul(&self, x: &ExtElem, y: &ExtElem) -> ExtElem {
        let n = self.degree();
        let p = self.p;
        let mut prod = [0u64; 2 * MAX_EXTENSION_DEGREE];
        for i in 0..n {
            if x.0[i] == 0 {
                continue;
            }
            for j in 0..n {
                prod[i + j] = add_mod(prod[i + j], mul_mod(x.0[i], y.0[j], p), p);
            }
        }
        // reduce with t^n = -(m_0 + ... + m_{n-1} t^{n-1})
        for k in (n..2 * n - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..n {
                let sub = mul_mod(c, self.modulus[i], p);
                prod[k - n + i] = sub_mod(prod[k - n + i], sub, p);
            }
        }
        let mut out = [0u64; MAX_EXTENSION_DEGREE];
        out[..n].copy_from_slice(&prod[..n]);
        ExtElem(out)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "q"),
            FieldSpec::Prime(p) => write!(f, "gf:{p}"),
            FieldSpec::Extension(e) => write!(f, "gf:{}^{}", e.p, e.degree()),
        }
    }
}

/// JSON form of a field: `{"kind": "rationals"}`, `{"kind": "prime", "p": 5}`
/// or `{"kind": "extension", "p": 2, "n": 2, "min_poly": [1, 1, 1]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldRecord {
    Rationals,
    Prime { p: u64 },
    Extension { p: u64, n: usize, min_poly: Vec<u64> },
}

impl From<&FieldSpec> for FieldRecord {
    fn from(f: &FieldSpec) -> Self {
        match f {
            FieldSpec::Rationals => FieldRecord::Rationals,
            FieldSpec::Prime(p) => FieldRecord::Prime { p: *p },
            FieldSpec::Extension(e) => FieldRecord::Extension {
                p: e.p,
                n: e.degree(),
                min_poly: e.modulus.clone(),
            },
        }
    }
}

impl TryFrom<&FieldRecord> for FieldSpec {
    type Error = Error;

    fn try_from(r: &FieldRecord) -> Result<Self> {
        match r {
            FieldRecord::Rationals => Ok(FieldSpec::Rationals),
            FieldRecord::Prime { p } => FieldSpec::prime(*p),
            FieldRecord::Extension { p, n, min_poly } => {
                if min_poly.len() != n + 1 {
                    return Err(Error::InvalidField(format!(
                        "min_poly has {} coefficients, expected {}",
                        min_poly.len(),
                        n + 1
                    )));
                }
                FieldSpec::extension(*p, min_poly.clone())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf4() -> FieldSpec {
        FieldSpec::extension(2, vec![1, 1, 1]).unwrap()
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(4_294_967_291));
        assert!(!is_prime(4_294_967_297)); // 641 * 6700417
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(FieldSpec::prime(9).is_err());
    }

    #[test]
    fn gf4_generator_squares_to_g_plus_one() {
        let f = gf4();
        let g = f.generator().unwrap();
        let g2 = f.mul(&g, &g);
        assert_eq!(g2, f.add(&g, &f.one()));
        assert_eq!(f.format_scalar(&g2), "1+1*t");
    }

    #[test]
    fn irreducibility_matches_exhaustive_factor_search() {
        // every monic cubic and quartic over GF(2) and GF(3), checked by trial division
        for &p in &[2u64, 3] {
            for n in 2..=4usize {
                let total = p.pow(n as u32);
                for v in 0..total {
                    let mut f: Vec<u64> = (0..n).map(|i| (v / p.pow(i as u32)) % p).collect();
                    f.push(1);
                    let mut has_factor = false;
                    for k in 1..=n / 2 {
                        for w in 0..p.pow(k as u32) {
                            let mut g: Vec<u64> = (0..k).map(|i| (w / p.pow(i as u32)) % p).collect();
                            g.push(1);
                            if poly::rem(&f, &g, p).is_empty() {
                                has_factor = true;
                            }
                        }
                    }
                    assert_eq!(poly::is_irreducible(&f, p), !has_factor, "p={p} f={f:?}");
                }
            }
        }
    }

    #[test]
    fn auto_min_poly_selection() {
        let f = FieldSpec::parse("gf:2^2").unwrap();
        assert_eq!(FieldRecord::from(&f), FieldRecord::Extension { p: 2, n: 2, min_poly: vec![1, 1, 1] });
        let f = FieldSpec::parse("gf:3^2").unwrap();
        assert_eq!(FieldRecord::from(&f), FieldRecord::Extension { p: 3, n: 2, min_poly: vec![1, 0, 1] });
        let f = FieldSpec::parse("gf:2^3").unwrap();
        assert_eq!(FieldRecord::from(&f), FieldRecord::Extension { p: 2, n: 3, min_poly: vec![1, 1, 0, 1] });
        assert!(FieldSpec::extension(2, vec![1, 0, 1]).is_err());
        assert!(FieldSpec::parse("gf:6").is_err());
        assert!(FieldSpec::parse("r").is_err());
    }

    #[test]
    fn inverses_in_extensions() {
        for spec in ["gf:2^3", "gf:3^2", "gf:5^3", "gf:2^8"] {
            let f = FieldSpec::parse(spec).unwrap();
            let n = f.degree();
            let p = f.characteristic();
            for v in 1..200u64 {
                let coeffs: Vec<u64> = (0..n).map(|i| (v * (i as u64 + 3) + i as u64) % p).collect();
                let x = f.from_coeffs(&coeffs).unwrap();
                if f.is_zero(&x) {
                    continue;
                }
                let y = f.inv(&x).unwrap();
                assert!(f.is_one(&f.mul(&x, &y)), "{spec}: {coeffs:?}");
            }
        }
    }

    #[test]
    fn scalar_text_round_trip() {
        let q = FieldSpec::rationals();
        let s = q.parse_scalar("-6/4").unwrap();
        assert_eq!(q.format_scalar(&s), "-3/2");
        assert_eq!(q.parse_scalar("7").unwrap(), q.from_i64(7));
        assert!(q.parse_scalar("1/0").is_err());
        let f = FieldSpec::parse("gf:3^2").unwrap();
        let s = f.parse_scalar("2+1*t").unwrap();
        assert_eq!(f.parse_scalar(&f.format_scalar(&s)).unwrap(), s);
        assert_eq!(f.parse_scalar("t").unwrap(), f.generator().unwrap());
        assert_eq!(f.parse_scalar("-t").unwrap(), f.from_coeffs(&[0, 2]).unwrap());
        assert!(f.parse_scalar("t^2").is_err());
        let p = FieldSpec::prime(7).unwrap();
        assert_eq!(p.parse_scalar("-1").unwrap(), Scalar::Prime(6));
    }

    #[test]
    fn frobenius_has_order_n() {
        let f = FieldSpec::parse("gf:2^3").unwrap();
        let g = f.generator().unwrap();
        let mut x = g.clone();
        for _ in 0..3 {
            x = f.frobenius(&x);
        }
        assert_eq!(x, g);
        assert_ne!(f.frobenius(&g), g);
    }
}
