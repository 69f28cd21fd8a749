//! Koszul complexes of commuting operator families.
//!
//! Degree `q` of the cochain complex on operators `x_0..x_{l-1}` is indexed by
//! the `q`-subsets `S` in colex order (increasing bitmask), and
//! `(d m)_S = sum_{i in S} (-1)^{#{s in S : s < i}} x_i m_{S - i}`.

use crate::combinatorics::binomial;
use crate::complexes::{cohomology, direct_sum, fibre, shift, ChainMap, Cplx};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::Mat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorModule {
    field: FieldSpec,
    dim: usize,
    ops: Vec<Mat>,
    labels: Vec<String>,
}

impl OperatorModule {
    pub fn new(field: &FieldSpec, dim: usize, ops: Vec<Mat>, labels: Vec<String>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::Precondition("an operator module needs at least one operator".into()));
        }
        if labels.len() != ops.len() {
            return Err(Error::Shape(format!("{} labels for {} operators", labels.len(), ops.len())));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::Precondition(format!("duplicate label {l:?}")));
            }
        }
        for (op, label) in ops.iter().zip(&labels) {
            if op.field() != field {
                return Err(Error::FieldMismatch(field.to_string(), op.field().to_string()));
            }
            if op.shape() != (dim, dim) {
                return Err(Error::Shape(format!("operator {label} is {}x{}, module dim {dim}", op.rows(), op.cols())));
            }
        }
        for i in 0..ops.len() {
            for j in i + 1..ops.len() {
                if !ops[i].commutes_with(&ops[j])? {
                    return Err(Error::NotCommuting(labels[i].clone(), labels[j].clone()));
                }
            }
        }
        Ok(OperatorModule { field: field.clone(), dim, ops, labels })
    }

    /// Operators labelled `x0, x1, ...`.
    pub fn with_default_labels(field: &FieldSpec, dim: usize, ops: Vec<Mat>) -> Result<Self> {
        let labels = (0..ops.len()).map(|i| format!("x{i}")).collect();
        OperatorModule::new(field, dim, ops, labels)
    }

    /// The one-dimensional module on which `count` operators act by zero.
    pub fn trivial(field: &FieldSpec, count: usize) -> Self {
        OperatorModule::with_default_labels(field, 1, vec![Mat::zeros(field, 1, 1); count]).unwrap()
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ops(&self) -> &[Mat] {
        &self.ops
    }

    pub fn op(&self, i: usize) -> &Mat {
        &self.ops[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn op_count(&self) -> usize {
        self.ops.len()
    }

    /// The module with only the chosen operators, in the given order.
    pub fn restrict(&self, subset: &[usize]) -> Result<OperatorModule> {
        check_subset(self, subset)?;
        OperatorModule::new(
            &self.field,
            self.dim,
            subset.iter().map(|&i| self.ops[i].clone()).collect(),
            subset.iter().map(|&i| self.labels[i].clone()).collect(),
        )
    }

    /// Same operator matrices over a larger field.
    pub fn extend_scalars(&self, target: &FieldSpec) -> Result<OperatorModule> {
        let ops = self.ops.iter().map(|m| m.extend_scalars(target)).collect::<Result<Vec<_>>>()?;
        OperatorModule::new(target, self.dim, ops, self.labels.clone())
    }

    pub fn all_indices(&self) -> Vec<usize> {
        (0..self.ops.len()).collect()
    }
}

fn check_subset(m: &OperatorModule, subset: &[usize]) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::Precondition("operator subset must be nonempty".into()));
    }
    for (i, &s) in subset.iter().enumerate() {
        if s >= m.ops.len() {
            return Err(Error::Precondition(format!("operator index {s} out of range")));
        }
        if subset[..i].contains(&s) {
            return Err(Error::Precondition(format!("operator index {s} repeated")));
        }
    }
    Ok(())
}

/// `d + 1` operators `x_0..x_d`, of which those with index `>= analytic_from` vanish.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct AnalyticFlags {
    pub d: usize,
    pub analytic_from: usize,
}

impl AnalyticFlags {
    pub fn new(d: usize, analytic_from: usize) -> Self {
        AnalyticFlags { d, analytic_from }
    }

    pub fn validate(&self, m: &OperatorModule) -> Result<()> {
        if m.op_count() != self.d + 1 {
            return Err(Error::Precondition(format!(
                "{} operators but d = {} needs {}",
                m.op_count(),
                self.d,
                self.d + 1
            )));
        }
        for i in self.analytic_from.min(m.op_count())..m.op_count() {
            if !m.ops[i].is_zero() {
                return Err(Error::Precondition(format!(
                    "operator {} (index {i}) is flagged but nonzero",
                    m.labels[i]
                )));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// subsets

/// The `q`-subsets of `{0..l-1}` as bitmasks, increasing.
pub fn subsets(l: usize, q: usize) -> Vec<u32> {
    assert!(l < 32, "too many operators");
    (0u32..(1u32 << l)).filter(|s| s.count_ones() as usize == q).collect()
}

fn position(list: &[u32], s: u32) -> usize {
    list.binary_search(&s).expect("subset present")
}

fn below(s: u32, i: usize) -> u32 {
    (s & ((1u32 << i) - 1)).count_ones()
}

fn above(s: u32, i: usize) -> u32 {
    (s >> (i + 1)).count_ones()
}

fn sign_mat(m: &Mat, odd: bool) -> Mat {
    if odd {
        m.neg()
    } else {
        m.clone()
    }
}

/// The chain endomorphism acting as `x` on every `M`-block of `c`.
pub fn block_endo(c: &Cplx, x: &Mat) -> Result<ChainMap> {
    let n = x.rows();
    let field = c.field().clone();
    ChainMap::from_fn(c.clone(), c.clone(), |q| {
        let dim = c.dim(q);
        if n == 0 {
            return Ok(Mat::zeros(&field, dim, dim));
        }
        Mat::identity(&field, dim / n).kron(x)
    })
}

/// Cochain Koszul complex of the given operators on a space of dimension `dim`.
pub fn koszul_cochain_ops(field: &FieldSpec, dim: usize, ops: &[&Mat]) -> Result<Cplx> {
    let l = ops.len();
    let lists: Vec<Vec<u32>> = (0..=l).map(|q| subsets(l, q)).collect();
    let dims = lists.iter().map(|s| s.len() * dim).collect();
    Cplx::from_fn(field, 0, dims, |q| {
        let src = &lists[q as usize];
        let tgt = &lists[q as usize + 1];
        let mut d = Mat::zeros(field, tgt.len() * dim, src.len() * dim);
        for (c, &s) in src.iter().enumerate() {
            for (i, op) in ops.iter().enumerate() {
                if s & (1 << i) != 0 {
                    continue;
                }
                let r = position(tgt, s | (1 << i));
                d.set_block(r * dim, c * dim, &sign_mat(op, below(s, i) % 2 == 1));
            }
        }
        Ok(d)
    })
}

pub fn koszul_cochain(m: &OperatorModule, subset: &[usize]) -> Result<Cplx> {
    check_subset(m, subset)?;
    let ops: Vec<&Mat> = subset.iter().map(|&i| &m.ops[i]).collect();
    koszul_cochain_ops(&m.field, m.dim, &ops)
}

/// Chain Koszul complex in degrees `-l..0`, built as
/// `cone(x_0 on M[0])` followed by one cone per further operator. Degree `-t`
/// is indexed by the `t`-subsets in decreasing bitmask order.
pub fn koszul_chain(m: &OperatorModule, subset: &[usize]) -> Result<Cplx> {
    check_subset(m, subset)?;
    let mut c = Cplx::concentrated(&m.field, m.dim, 0);
    for &i in subset {
        let e = block_endo(&c, &m.ops[i])?;
        c = crate::complexes::cone(&e)?;
    }
    Ok(c)
}

/// Sign `(-1)^{sum S + |S|(|S|+1)/2}` of the duality identification.
fn duality_sign(s: u32) -> bool {
    let mut sum = 0u32;
    let mut t = s;
    while t != 0 {
        sum += t.trailing_zeros();
        t &= t - 1;
    }
    let k = s.count_ones();
    (sum + k * (k + 1) / 2) % 2 == 1
}

/// The isomorphism `K^•(x, M) -> K_•(x, M)[-l]`, `m_S -> ±m` in slot `S^c`.
pub fn duality_check(m: &OperatorModule, subset: &[usize]) -> Result<ChainMap> {
    let l = subset.len();
    let co = koszul_cochain(m, subset)?;
    let ch = shift(&koszul_chain(m, subset)?, -(l as i32));
    let field = m.field.clone();
    let dim = m.dim;
    let full = (1u32 << l) - 1;
    let f = ChainMap::from_fn(co.clone(), ch.clone(), |q| {
        if q < 0 || q as usize > l {
            return Ok(Mat::zeros(&field, ch.dim(q), co.dim(q)));
        }
        let src = subsets(l, q as usize);
        let mut tgt = subsets(l, l - q as usize);
        tgt.reverse();
        let mut out = Mat::zeros(&field, tgt.len() * dim, src.len() * dim);
        for (c, &s) in src.iter().enumerate() {
            let r = tgt.iter().position(|&t| t == full ^ s).unwrap();
            let block = Mat::identity(&field, dim);
            out.set_block(r * dim, c * dim, &sign_mat(&block, duality_sign(s)));
        }
        Ok(out)
    })?;
    if !f.is_isomorphism() {
        return Err(Error::Precondition("duality map is not an isomorphism".into()));
    }
    Ok(f)
}

#[derive(Clone, Debug)]
pub struct RhomTensorReport {
    pub hom_dims: Vec<usize>,
    pub tensor_dims: Vec<usize>,
    pub agree: bool,
}

/// Hom side: `Hom(K_•(x, R), M)` written out from the chain signs
/// `s(i, T) = (-1)^{#{t in T : t > i}}`. Tensor side: `K_•(x, M)[-l]`.
pub fn rhom_vs_tensor_check(m: &OperatorModule, subset: &[usize]) -> Result<RhomTensorReport> {
    check_subset(m, subset)?;
    let l = subset.len();
    let field = &m.field;
    let dim = m.dim;
    let lists: Vec<Vec<u32>> = (0..=l).map(|q| subsets(l, q)).collect();
    let hom = Cplx::from_fn(field, 0, lists.iter().map(|s| s.len() * dim).collect(), |q| {
        let src = &lists[q as usize];
        let tgt = &lists[q as usize + 1];
        let mut d = Mat::zeros(field, tgt.len() * dim, src.len() * dim);
        for (c, &s) in src.iter().enumerate() {
            for (i, &op) in subset.iter().enumerate() {
                if s & (1 << i) != 0 {
                    continue;
                }
                let r = position(tgt, s | (1 << i));
                d.set_block(r * dim, c * dim, &sign_mat(&m.ops[op], above(s, i) % 2 == 1));
            }
        }
        Ok(d)
    })?;
    let tensor = shift(&koszul_chain(m, subset)?, -(l as i32));
    let hom_dims = cohomology(&hom).dims_over(0, l as i32);
    let tensor_dims = cohomology(&tensor).dims_over(0, l as i32);
    Ok(RhomTensorReport { agree: hom_dims == tensor_dims, hom_dims, tensor_dims })
}

/// The identity `fibre(0: C -> C) -> C ⊕ C[-1]`, verified as a chain isomorphism.
pub fn zero_cone_split(c: &Cplx) -> Result<ChainMap> {
    let field = c.field().clone();
    let fib = fibre(&ChainMap::zero(c, c))?;
    let sum = direct_sum(&field, &[c.clone(), shift(c, -1)])?;
    let f = ChainMap::from_fn(fib.clone(), sum.clone(), |q| Ok(Mat::identity(&field, fib.dim(q))))?;
    if !f.is_isomorphism() {
        return Err(Error::Precondition("zero-cone split failed".into()));
    }
    Ok(f)
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct DimRow {
    pub degree: i32,
    pub lhs: usize,
    pub rhs: usize,
    /// `sum_j binom(l, j) h^{i-j}(C)`.
    pub predicted: usize,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub lhs: Cplx,
    pub rhs: Cplx,
    /// `C = K^•(x_0..x_{k-1}, M)`.
    pub summand: Cplx,
    pub iso: ChainMap,
    /// Number of killed operators, `d - k + 1`.
    pub l: usize,
    /// `binom(l, n)` copies of `C[-n]`.
    pub multiplicities: Vec<u64>,
    pub dim_table: Vec<DimRow>,
    pub iso_verified: bool,
}

impl Decomposition {
    pub fn dims_agree(&self) -> bool {
        self.dim_table.iter().all(|r| r.lhs == r.rhs && r.lhs == r.predicted)
    }
}

/// `K^•(x_0..x_d, M) ≅ ⊕_n C[-n]^binom(l, n)` when `x_j = 0` for `j >= k`.
pub fn decompose(m: &OperatorModule, k: usize) -> Result<Decomposition> {
    let total = m.op_count();
    if k == 0 || k > total {
        return Err(Error::Precondition(format!("k = {k} outside 1..={total}")));
    }
    for j in k..total {
        if !m.ops[j].is_zero() {
            return Err(Error::Precondition(format!(
                "operator {} (index {j}) must vanish for k = {k}",
                m.labels[j]
            )));
        }
    }
    let field = m.field.clone();
    let l = total - k;
    let base: Vec<usize> = (0..k).collect();
    let summand = koszul_cochain(m, &base)?;

    // g: K_j -> ⊕_{s in shifts} C[-s], degreewise matrices over [lo, hi] of the final lhs
    let lhs = koszul_cochain(m, &m.all_indices())?;
    let (lo, hi) = (0, total as i32);
    let mut shifts: Vec<i32> = vec![0];
    let mut g: Vec<Mat> = (lo..=hi).map(|q| Mat::identity(&field, summand.dim(q))).collect();
    let mut prev = summand.clone();
    for j in 1..=l {
        let idx: Vec<usize> = (0..k + j).collect();
        let next = koszul_cochain(m, &idx)?;
        // K_j^q = [K_{j-1}^q ; K_{j-1}^{q-1}] -> fibre(0) by diag(1, (-1)^q), then
        // the identity onto K_{j-1} ⊕ K_{j-1}[-1], then g ⊕ g[-1].
        let new_g: Vec<Mat> = (lo..=hi)
            .map(|q| {
                let a = prev.dim(q);
                let b = prev.dim(q - 1);
                let phi = Mat::block_diag(
                    &field,
                    &[&Mat::identity(&field, a), &Mat::identity(&field, b).sign(q as i64)],
                );
                let g_q = old_g(&g, &field, &prev, &summand, &shifts, q, lo, hi);
                let g_q1 = old_g(&g, &field, &prev, &summand, &shifts, q - 1, lo, hi);
                Mat::block_diag(&field, &[&g_q, &g_q1]).mul(&phi)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut next_shifts = shifts.clone();
        next_shifts.extend(shifts.iter().map(|s| s + 1));
        shifts = next_shifts;
        g = new_g;
        prev = next;
    }
    // stable sort of summands by shift
    let mut order: Vec<usize> = (0..shifts.len()).collect();
    order.sort_by_key(|&i| shifts[i]);
    let sorted: Vec<i32> = order.iter().map(|&i| shifts[i]).collect();
    let pieces: Vec<Cplx> = sorted.iter().map(|&s| shift(&summand, -s)).collect();
    let rhs = direct_sum(&field, &pieces)?;
    let maps: Vec<Mat> = (lo..=hi)
        .map(|q| {
            let sizes: Vec<usize> = shifts.iter().map(|&s| summand.dim(q - s)).collect();
            let perm = block_permutation(&field, &sizes, &order);
            perm.mul(&g[(q - lo) as usize])
        })
        .collect::<Result<Vec<_>>>()?;
    let iso = ChainMap::new(lhs.clone(), rhs.clone(), lo, maps)?;
    let iso_verified = iso.is_isomorphism();

    let multiplicities: Vec<u64> = (0..=l).map(|n| binomial(l as u64, n as u64)).collect();
    let hl = cohomology(&lhs);
    let hr = cohomology(&rhs);
    let hc = cohomology(&summand);
    let dim_table = (lo..=hi)
        .map(|i| {
            let predicted = (0..=l)
                .map(|j| multiplicities[j] as usize * hc.dim(i - j as i32))
                .sum();
            DimRow { degree: i, lhs: hl.dim(i), rhs: hr.dim(i), predicted }
        })
        .collect();
    Ok(Decomposition { lhs, rhs, summand, iso, l, multiplicities, dim_table, iso_verified })
}

#[allow(clippy::too_many_arguments)]
fn old_g(
    g: &[Mat],
    field: &FieldSpec,
    prev: &Cplx,
    summand: &Cplx,
    shifts: &[i32],
    q: i32,
    lo: i32,
    hi: i32,
) -> Mat {
    if q < lo || q > hi {
        let rows: usize = shifts.iter().map(|&s| summand.dim(q - s)).sum();
        return Mat::zeros(field, rows, prev.dim(q));
    }
    g[(q - lo) as usize].clone()
}

/// Permutation taking blocks in `order` (new position `i` holds old block
/// `order[i]`), with old block sizes `sizes`.
pub fn block_permutation(field: &FieldSpec, sizes: &[usize], order: &[usize]) -> Mat {
    let n: usize = sizes.iter().sum();
    let mut offsets = vec![0; sizes.len()];
    for i in 1..sizes.len() {
        offsets[i] = offsets[i - 1] + sizes[i - 1];
    }
    let mut p = Mat::zeros(field, n, n);
    let mut r = 0;
    for &old in order {
        for t in 0..sizes[old] {
            p.set(r, offsets[old] + t, field.one());
            r += 1;
        }
    }
    p
}

/// Iterated fibres of commuting chain endomorphisms of `c`:
/// `K(e_1..e_r; C) = fibre(e_r on K(e_1..e_{r-1}; C))`.
pub fn koszul_on_complex(c: &Cplx, endos: &[ChainMap]) -> Result<Cplx> {
    let mut cur = c.clone();
    let mut lifted: Vec<ChainMap> = endos.to_vec();
    while let Some(e) = lifted.first().cloned() {
        let rest = &lifted[1..];
        let next = fibre(&e)?;
        // each remaining endomorphism acts diagonally on the fibre
        lifted = rest
            .iter()
            .map(|x| {
                ChainMap::from_fn(next.clone(), next.clone(), |q| {
                    Ok(Mat::block_diag(cur.field(), &[&x.map(q), &x.map(q - 1)]))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        cur = next;
    }
    Ok(cur)
}
