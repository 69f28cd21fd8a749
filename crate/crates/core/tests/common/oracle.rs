//! Brute-force reference: Koszul complexes straight from the subset formula
//! and ranks by textbook elimination, sharing no code with the engine.

use herr_core::{FieldSpec, Mat, Scalar};
use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq)]
pub enum V {
    P(u64),
    Q(BigRational),
}

#[derive(Clone, Copy, Debug)]
pub enum F {
    P(u64),
    Q,
}

impl F {
    pub fn of(field: &FieldSpec) -> Option<F> {
        match field {
            FieldSpec::Prime(p) => Some(F::P(*p)),
            FieldSpec::Rationals => Some(F::Q),
            FieldSpec::Extension(_) => None,
        }
    }

    pub fn zero(self) -> V {
        match self {
            F::P(_) => V::P(0),
            F::Q => V::Q(BigRational::zero()),
        }
    }

    fn is_zero(self, a: &V) -> bool {
        match a {
            V::P(x) => *x == 0,
            V::Q(x) => x.is_zero(),
        }
    }

    fn sub(self, a: &V, b: &V) -> V {
        match (self, a, b) {
            (F::P(p), V::P(x), V::P(y)) => V::P((x + p - y) % p),
            (F::Q, V::Q(x), V::Q(y)) => V::Q(x - y),
            _ => unreachable!(),
        }
    }

    fn mul(self, a: &V, b: &V) -> V {
        match (self, a, b) {
            (F::P(p), V::P(x), V::P(y)) => V::P(((*x as u128 * *y as u128) % p as u128) as u64),
            (F::Q, V::Q(x), V::Q(y)) => V::Q(x * y),
            _ => unreachable!(),
        }
    }

    fn inv(self, a: &V) -> V {
        match (self, a) {
            (F::P(p), V::P(x)) => {
                // Fermat
                let mut r: u128 = 1;
                let mut b = *x as u128;
                let mut e = p - 2;
                while e > 0 {
                    if e & 1 == 1 {
                        r = r * b % p as u128;
                    }
                    b = b * b % p as u128;
                    e >>= 1;
                }
                V::P(r as u64)
            }
            (F::Q, V::Q(x)) => V::Q(BigRational::one() / x),
            _ => unreachable!(),
        }
    }

    fn neg(self, a: &V) -> V {
        self.sub(&self.zero(), a)
    }

    pub fn value(self, s: &Scalar) -> V {
        match self {
            F::P(_) => V::P(s.as_prime().unwrap()),
            F::Q => V::Q(s.as_rational().unwrap().clone()),
        }
    }
}

pub type Dense = Vec<Vec<V>>;

pub fn dense(f: F, m: &Mat) -> Dense {
    (0..m.rows()).map(|i| m.row(i).iter().map(|s| f.value(s)).collect()).collect()
}

pub fn rank(f: F, m: &Dense) -> usize {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !f.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, piv);
        let inv = f.inv(&a[r][c]);
        for i in 0..rows {
            if i != r && !f.is_zero(&a[i][c]) {
                let factor = f.mul(&a[i][c], &inv);
                for j in c..cols {
                    let t = f.mul(&factor, &a[r][j]);
                    a[i][j] = f.sub(&a[i][j], &t);
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Lexicographic `q`-subsets of `0..l` as sorted index lists.
fn combos(l: usize, q: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, l: usize, q: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == q {
            out.push(cur.clone());
            return;
        }
        for i in start..l {
            cur.push(i);
            go(i + 1, l, q, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, l, q, &mut Vec::new(), &mut out);
    out
}

/// Differential `C^q -> C^{q+1}` of the cochain Koszul complex.
pub fn koszul_d(f: F, n: usize, ops: &[Dense], q: usize) -> Dense {
    let l = ops.len();
    let src = combos(l, q);
    let tgt = combos(l, q + 1);
    let mut d = vec![vec![f.zero(); src.len() * n]; tgt.len() * n];
    for (r, t) in tgt.iter().enumerate() {
        for (k, &i) in t.iter().enumerate() {
            let s: Vec<usize> = t.iter().copied().filter(|&x| x != i).collect();
            let c = src.iter().position(|x| *x == s).unwrap();
            for a in 0..n {
                for b in 0..n {
                    let v = &ops[i][a][b];
                    d[r * n + a][c * n + b] = if k % 2 == 1 { f.neg(v) } else { v.clone() };
                }
            }
        }
    }
    d
}

/// Cohomology dims of `K^•(ops, M)` in degrees `0..=l`.
pub fn koszul_h(field: &FieldSpec, n: usize, ops: &[&Mat]) -> Vec<usize> {
    let f = F::of(field).expect("oracle covers prime fields and Q");
    let dense_ops: Vec<Dense> = ops.iter().map(|m| dense(f, m)).collect();
    let l = ops.len();
    let dims: Vec<usize> = (0..=l).map(|q| combos(l, q).len() * n).collect();
    let ranks: Vec<usize> = (0..l).map(|q| rank(f, &koszul_d(f, n, &dense_ops, q))).collect();
    (0..=l)
        .map(|q| {
            let out = if q < l { ranks[q] } else { 0 };
            let inc = if q > 0 { ranks[q - 1] } else { 0 };
            dims[q] - out - inc
        })
        .collect()
}

pub fn mat_rank(m: &Mat) -> usize {
    let f = F::of(m.field()).expect("oracle field");
    rank(f, &dense(f, m))
}
