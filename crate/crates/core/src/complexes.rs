//! Bounded cochain complexes, chain maps, cones and cohomology.
//!
//! Conventions: `(C[n])^q = C^{q+n}` with differential `(-1)^n d`;
//! `cone(f)^q = src^{q+1} ⊕ tgt^q` with `d(a, b) = (-d a, f a + d b)`;
//! `fibre(f)^q = src^q ⊕ tgt^{q-1}` with `d(a, b) = (d a, f a - d b)`.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{rank, rank_profile, solve_linear};
use crate::matrix::Mat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cplx {
    field: FieldSpec,
    lo: i32,
    dims: Vec<usize>,
    /// `diffs[i]` maps degree `lo + i` to `lo + i + 1`; one fewer than `dims`.
    diffs: Vec<Mat>,
}

impl Cplx {
    /// Validates shapes and `d∘d = 0`.
    pub fn new(field: &FieldSpec, lo: i32, dims: Vec<usize>, diffs: Vec<Mat>) -> Result<Cplx> {
        if diffs.len() + 1 != dims.len().max(1) {
            return Err(Error::Shape(format!(
                "{} differentials for {} degrees",
                diffs.len(),
                dims.len()
            )));
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.field() != field {
                return Err(Error::FieldMismatch(field.to_string(), d.field().to_string()));
            }
            if d.shape() != (dims[i + 1], dims[i]) {
                return Err(Error::Shape(format!(
                    "d^{} is {}x{}, expected {}x{}",
                    lo + i as i32,
                    d.rows(),
                    d.cols(),
                    dims[i + 1],
                    dims[i]
                )));
            }
        }
        for i in 1..diffs.len() {
            if !diffs[i].mul(&diffs[i - 1])?.is_zero() {
                return Err(Error::NotAComplex { degree: lo + i as i32 - 1 });
            }
        }
        Ok(Cplx { field: field.clone(), lo, dims, diffs })
    }

    pub fn zero(field: &FieldSpec) -> Cplx {
        Cplx { field: field.clone(), lo: 0, dims: Vec::new(), diffs: Vec::new() }
    }

    /// A single space placed in degree `degree`.
    pub fn concentrated(field: &FieldSpec, dim: usize, degree: i32) -> Cplx {
        Cplx { field: field.clone(), lo: degree, dims: vec![dim], diffs: Vec::new() }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    /// Top degree; `lo - 1` for the empty complex.
    pub fn hi(&self) -> i32 {
        self.lo + self.dims.len() as i32 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.lo..=self.hi()
    }

    pub fn dim(&self, q: i32) -> usize {
        if q < self.lo || q > self.hi() {
            0
        } else {
            self.dims[(q - self.lo) as usize]
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// `d^q: C^q -> C^{q+1}`, zero outside the stored range.
    pub fn d(&self, q: i32) -> Mat {
        if q >= self.lo && q < self.hi() {
            self.diffs[(q - self.lo) as usize].clone()
        } else {
            Mat::zeros(&self.field, self.dim(q + 1), self.dim(q))
        }
    }

    pub fn d_ref(&self, q: i32) -> Option<&Mat> {
        if q >= self.lo && q < self.hi() {
            Some(&self.diffs[(q - self.lo) as usize])
        } else {
            None
        }
    }

    /// Same complex over an explicit degree window (padding with zeros).
    pub fn over(&self, lo: i32, hi: i32) -> Cplx {
        let lo = lo.min(self.lo);
        let hi = hi.max(self.hi());
        let dims: Vec<usize> = (lo..=hi).map(|q| self.dim(q)).collect();
        let diffs = (lo..hi).map(|q| self.d(q)).collect();
        Cplx { field: self.field.clone(), lo, dims, diffs }
    }

    /// Builds from a degree window and a closure giving each `d^q`.
    pub fn from_fn(
        field: &FieldSpec,
        lo: i32,
        dims: Vec<usize>,
        mut d: impl FnMut(i32) -> Result<Mat>,
    ) -> Result<Cplx> {
        let n = dims.len();
        let diffs = (0..n.saturating_sub(1)).map(|i| d(lo + i as i32)).collect::<Result<Vec<_>>>()?;
        Cplx::new(field, lo, dims, diffs)
    }

    pub fn is_exact_zero_differential(&self) -> bool {
        self.diffs.iter().all(Mat::is_zero)
    }

    /// Re-checks `d∘d = 0` (the constructor already enforces it).
    pub fn check_d_squared(&self) -> bool {
        (self.lo..self.hi()).all(|q| {
            self.d(q + 1).mul(&self.d(q)).map(|m| m.is_zero()).unwrap_or(false)
        })
    }

    pub fn chain_dims_euler(&self) -> i64 {
        self.degrees().map(|q| sign(q) * self.dim(q) as i64).sum()
    }
}

fn sign(q: i32) -> i64 {
    if q.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: Cplx,
    target: Cplx,
    lo: i32,
    maps: Vec<Mat>,
}

impl ChainMap {
    /// `maps` is indexed from degree `lo`; degrees outside are zero maps.
    pub fn new(source: Cplx, target: Cplx, lo: i32, maps: Vec<Mat>) -> Result<ChainMap> {
        if source.field != target.field {
            return Err(Error::FieldMismatch(source.field.to_string(), target.field.to_string()));
        }
        for (i, m) in maps.iter().enumerate() {
            let q = lo + i as i32;
            if m.shape() != (target.dim(q), source.dim(q)) {
                return Err(Error::Shape(format!(
                    "f^{q} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.dim(q),
                    source.dim(q)
                )));
            }
        }
        let f = ChainMap { source, target, lo, maps };
        let qlo = f.source.lo.min(f.target.lo) - 1;
        let qhi = f.source.hi().max(f.target.hi()) + 1;
        for q in qlo..=qhi {
            let left = f.map(q + 1).mul(&f.source.d(q))?;
            let right = f.target.d(q).mul(&f.map(q))?;
            if left != right {
                return Err(Error::NotAChainMap { degree: q });
            }
        }
        Ok(f)
    }

    pub fn from_fn(
        source: Cplx,
        target: Cplx,
        mut m: impl FnMut(i32) -> Result<Mat>,
    ) -> Result<ChainMap> {
        let lo = source.lo.min(target.lo);
        let hi = source.hi().max(target.hi());
        let maps = (lo..=hi).map(&mut m).collect::<Result<Vec<_>>>()?;
        ChainMap::new(source, target, lo, maps)
    }

    pub fn identity(c: &Cplx) -> ChainMap {
        let maps = c.degrees().map(|q| Mat::identity(&c.field, c.dim(q))).collect();
        ChainMap { source: c.clone(), target: c.clone(), lo: c.lo, maps }
    }

    pub fn zero(source: &Cplx, target: &Cplx) -> ChainMap {
        ChainMap { source: source.clone(), target: target.clone(), lo: 0, maps: Vec::new() }
    }

    pub fn source(&self) -> &Cplx {
        &self.source
    }

    pub fn target(&self) -> &Cplx {
        &self.target
    }

    pub fn map(&self, q: i32) -> Mat {
        let i = q - self.lo;
        if i >= 0 && (i as usize) < self.maps.len() {
            self.maps[i as usize].clone()
        } else {
            Mat::zeros(&self.source.field, self.target.dim(q), self.source.dim(q))
        }
    }

    pub fn compose(&self, first: &ChainMap) -> Result<ChainMap> {
        if first.target != self.source {
            return Err(Error::Shape("composition of non-matching chain maps".into()));
        }
        ChainMap::from_fn(first.source.clone(), self.target.clone(), |q| {
            self.map(q).mul(&first.map(q))
        })
    }

    /// `f[n]`: the same matrices between the shifted complexes.
    pub fn shift(&self, n: i32) -> ChainMap {
        let maps = self.maps.clone();
        ChainMap {
            source: shift(&self.source, n),
            target: shift(&self.target, n),
            lo: self.lo - n,
            maps,
        }
    }

    /// Every component is an invertible matrix.
    pub fn is_isomorphism(&self) -> bool {
        let lo = self.source.lo.min(self.target.lo);
        let hi = self.source.hi().max(self.target.hi());
        (lo..=hi).all(|q| {
            let m = self.map(q);
            m.is_square() && rank(&m) == m.rows()
        })
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(Mat::is_zero)
    }
}

pub fn cone(f: &ChainMap) -> Result<Cplx> {
    let s = &f.source;
    let t = &f.target;
    let field = &s.field;
    let lo = (s.lo - 1).min(t.lo);
    let hi = (s.hi() - 1).max(t.hi());
    let dims: Vec<usize> = (lo..=hi).map(|q| s.dim(q + 1) + t.dim(q)).collect();
    Cplx::from_fn(field, lo, dims, |q| {
        Mat::from_blocks(
            field,
            &[s.dim(q + 2), t.dim(q + 1)],
            &[s.dim(q + 1), t.dim(q)],
            &[vec![Some(s.d(q + 1).neg()), None], vec![Some(f.map(q + 1)), Some(t.d(q))]],
        )
    })
}

pub fn fibre(f: &ChainMap) -> Result<Cplx> {
    let s = &f.source;
    let t = &f.target;
    let field = &s.field;
    let lo = s.lo.min(t.lo + 1);
    let hi = s.hi().max(t.hi() + 1);
    let dims: Vec<usize> = (lo..=hi).map(|q| s.dim(q) + t.dim(q - 1)).collect();
    Cplx::from_fn(field, lo, dims, |q| {
        Mat::from_blocks(
            field,
            &[s.dim(q + 1), t.dim(q)],
            &[s.dim(q), t.dim(q - 1)],
            &[vec![Some(s.d(q)), None], vec![Some(f.map(q)), Some(t.d(q - 1).neg())]],
        )
    })
}

/// `C[n]`: degree `q` holds `C^{q+n}`, differential times `(-1)^n`.
pub fn shift(c: &Cplx, n: i32) -> Cplx {
    Cplx {
        field: c.field.clone(),
        lo: c.lo - n,
        dims: c.dims.clone(),
        diffs: c.diffs.iter().map(|d| d.sign(n as i64)).collect(),
    }
}

pub fn direct_sum(field: &FieldSpec, cs: &[Cplx]) -> Result<Cplx> {
    if let Some(bad) = cs.iter().find(|c| &c.field != field) {
        return Err(Error::FieldMismatch(field.to_string(), bad.field.to_string()));
    }
    let nonempty: Vec<&Cplx> = cs.iter().filter(|c| !c.dims.is_empty()).collect();
    if nonempty.is_empty() {
        return Ok(Cplx::zero(field));
    }
    let lo = nonempty.iter().map(|c| c.lo).min().unwrap();
    let hi = nonempty.iter().map(|c| c.hi()).max().unwrap();
    let dims = (lo..=hi).map(|q| cs.iter().map(|c| c.dim(q)).sum()).collect();
    Cplx::from_fn(field, lo, dims, |q| {
        let parts: Vec<Mat> = cs.iter().map(|c| c.d(q)).collect();
        let refs: Vec<&Mat> = parts.iter().collect();
        Ok(Mat::block_diag(field, &refs))
    })
}

/// Block-diagonal sum of chain maps between the direct sums.
pub fn direct_sum_map(field: &FieldSpec, fs: &[ChainMap]) -> Result<ChainMap> {
    let src = direct_sum(field, &fs.iter().map(|f| f.source.clone()).collect::<Vec<_>>())?;
    let tgt = direct_sum(field, &fs.iter().map(|f| f.target.clone()).collect::<Vec<_>>())?;
    ChainMap::from_fn(src, tgt, |q| {
        let parts: Vec<Mat> = fs.iter().map(|f| f.map(q)).collect();
        let refs: Vec<&Mat> = parts.iter().collect();
        Ok(Mat::block_diag(field, &refs))
    })
}

/// Tensor product with Koszul signs: on `A^i ⊗ B^j`, `d = d_A ⊗ 1 + (-1)^i 1 ⊗ d_B`.
/// Degree `n` is ordered by increasing `i`.
pub fn tensor(a: &Cplx, b: &Cplx) -> Result<Cplx> {
    let field = &a.field;
    if a.dims.is_empty() || b.dims.is_empty() {
        return Ok(Cplx::zero(field));
    }
    let lo = a.lo + b.lo;
    let hi = a.hi() + b.hi();
    let pieces = |n: i32| -> Vec<(i32, i32)> { a.degrees().map(|i| (i, n - i)).collect() };
    let dims: Vec<usize> =
        (lo..=hi).map(|n| pieces(n).iter().map(|&(i, j)| a.dim(i) * b.dim(j)).sum()).collect();
    Cplx::from_fn(field, lo, dims, |n| {
        let src = pieces(n);
        let tgt = pieces(n + 1);
        let rs: Vec<usize> = tgt.iter().map(|&(i, j)| a.dim(i) * b.dim(j)).collect();
        let cs: Vec<usize> = src.iter().map(|&(i, j)| a.dim(i) * b.dim(j)).collect();
        let mut blocks = vec![vec![None; src.len()]; tgt.len()];
        for (si, &(i, j)) in src.iter().enumerate() {
            for (ti, &(i2, j2)) in tgt.iter().enumerate() {
                if i2 == i + 1 && j2 == j {
                    blocks[ti][si] = Some(a.d(i).kron(&Mat::identity(field, b.dim(j)))?);
                } else if i2 == i && j2 == j + 1 {
                    let m = Mat::identity(field, a.dim(i)).kron(&b.d(j))?;
                    blocks[ti][si] = Some(m.sign(i as i64));
                }
            }
        }
        Mat::from_blocks(field, &rs, &cs, &blocks)
    })
}

/// Per-degree cohomology data.
#[derive(Clone, Debug)]
pub struct Cohomology {
    field: FieldSpec,
    lo: i32,
    dims: Vec<usize>,
    /// Columns are cocycles whose classes form a basis of `H^q`.
    reps: Vec<Mat>,
    /// Columns span the coboundaries `B^q`.
    boundaries: Vec<Mat>,
}

pub fn cohomology(c: &Cplx) -> Cohomology {
    let mut dims = Vec::new();
    let mut reps = Vec::new();
    let mut boundaries = Vec::new();
    for q in c.degrees() {
        let z = rank_profile(&c.d(q)).kernel_basis;
        let b = rank_profile(&c.d(q - 1)).image_basis;
        let joined = Mat::hstack(&c.field, c.dim(q), &[&b, &z]).unwrap();
        let prof = rank_profile(&joined);
        let picks: Vec<usize> = prof.pivot_cols.iter().copied().filter(|&j| j >= b.cols()).collect();
        let r = joined.select_cols(&picks);
        dims.push(r.cols());
        reps.push(r);
        boundaries.push(b);
    }
    Cohomology { field: c.field.clone(), lo: c.lo, dims, reps, boundaries }
}

impl Cohomology {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.dims.len() as i32 - 1
    }

    pub fn dim(&self, q: i32) -> usize {
        self.index(q).map_or(0, |i| self.dims[i])
    }

    /// Dims over `[lo, hi]`.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Dims over an explicit window.
    pub fn dims_over(&self, lo: i32, hi: i32) -> Vec<usize> {
        (lo..=hi).map(|q| self.dim(q)).collect()
    }

    fn index(&self, q: i32) -> Option<usize> {
        if q < self.lo || q > self.hi() {
            None
        } else {
            Some((q - self.lo) as usize)
        }
    }

    /// Representative cocycles of the basis classes in degree `q`.
    pub fn representatives(&self, q: i32, space_dim: usize) -> Mat {
        match self.index(q) {
            Some(i) => self.reps[i].clone(),
            None => Mat::zeros(&self.field, space_dim, 0),
        }
    }

    pub fn boundaries(&self, q: i32, space_dim: usize) -> Mat {
        match self.index(q) {
            Some(i) => self.boundaries[i].clone(),
            None => Mat::zeros(&self.field, space_dim, 0),
        }
    }

    /// Coordinates of the class of the cocycle `v` in the representative basis.
    pub fn coordinates(&self, q: i32, v: &[Scalar]) -> Result<Vec<Scalar>> {
        let Some(i) = self.index(q) else {
            if v.iter().all(|s| self.field.is_zero(s)) {
                return Ok(Vec::new());
            }
            return Err(Error::Precondition(format!("nonzero vector in empty degree {q}")));
        };
        let reps = &self.reps[i];
        let b = &self.boundaries[i];
        let a = Mat::hstack(&self.field, v.len(), &[reps, b])?;
        let x = solve_linear(&a, &Mat::column_vector(&self.field, v))?
            .ok_or_else(|| Error::Precondition(format!("vector is not a cocycle in degree {q}")))?;
        Ok((0..reps.cols()).map(|j| x.get(j, 0).clone()).collect())
    }

    /// Coordinates for each column of `m`, as the columns of the result.
    pub fn coordinates_matrix(&self, q: i32, m: &Mat) -> Result<Mat> {
        let cols = (0..m.cols())
            .map(|j| self.coordinates(q, &m.column(j)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Mat::from_columns(&self.field, self.dim(q), &cols))
    }

    pub fn euler_char(&self) -> i64 {
        (0..self.dims.len()).map(|i| sign(self.lo + i as i32) * self.dims[i] as i64).sum()
    }
}

pub fn euler_char(c: &Cplx) -> i64 {
    cohomology(c).euler_char()
}

/// Matrix of `H^q(f)` in the representative bases.
pub fn induced_map(f: &ChainMap, hs: &Cohomology, ht: &Cohomology, q: i32) -> Result<Mat> {
    let reps = hs.representatives(q, f.source.dim(q));
    let img = f.map(q).mul(&reps)?;
    ht.coordinates_matrix(q, &img)
}

#[derive(Clone, Debug)]
pub struct QuasiIsoReport {
    pub is_quasi_iso: bool,
    /// `(degree, dim H(src), dim H(tgt), rank of induced map)`.
    pub ranks: Vec<(i32, usize, usize, usize)>,
    pub induced: Vec<Mat>,
}

pub fn is_quasi_iso(f: &ChainMap) -> Result<QuasiIsoReport> {
    let hs = cohomology(&f.source);
    let ht = cohomology(&f.target);
    let lo = f.source.lo.min(f.target.lo);
    let hi = f.source.hi().max(f.target.hi());
    let mut ok = true;
    let mut ranks = Vec::new();
    let mut induced = Vec::new();
    for q in lo..=hi {
        let m = induced_map(f, &hs, &ht, q)?;
        let r = rank(&m);
        let (a, b) = (hs.dim(q), ht.dim(q));
        ok &= a == b && r == a;
        ranks.push((q, a, b, r));
        induced.push(m);
    }
    Ok(QuasiIsoReport { is_quasi_iso: ok, ranks, induced })
}

#[derive(Clone, Debug)]
pub struct LesReport {
    pub exact: bool,
    /// Joints where exactness failed, as `(degree, position)`;
    /// position 0 is at `H(tgt)`, 1 at `H(cone)`, 2 at `H(src)`.
    pub failures: Vec<(i32, u8)>,
}

/// Exactness of `H^q(src) -> H^q(tgt) -> H^q(cone f) -> H^{q+1}(src) -> ...`.
pub fn cone_les_check(f: &ChainMap) -> Result<LesReport> {
    let field = &f.source.field;
    let s = &f.source;
    let t = &f.target;
    let c = cone(f)?;
    let hs = cohomology(s);
    let ht = cohomology(t);
    let hc = cohomology(&c);
    let lo = c.lo.min(s.lo).min(t.lo) - 1;
    let hi = c.hi().max(s.hi()).max(t.hi()) + 1;
    // inclusion tgt^q -> cone^q and projection cone^q -> src^{q+1}
    let incl = |q: i32| -> Mat {
        Mat::vstack(field, t.dim(q), &[&Mat::zeros(field, s.dim(q + 1), t.dim(q)), &Mat::identity(field, t.dim(q))])
            .unwrap()
    };
    let proj = |q: i32| -> Mat {
        Mat::hstack(field, s.dim(q + 1), &[&Mat::identity(field, s.dim(q + 1)), &Mat::zeros(field, s.dim(q + 1), t.dim(q))])
            .unwrap()
    };
    let fq = |q: i32| -> Result<Mat> { induced_map(f, &hs, &ht, q) };
    let iq = |q: i32| -> Result<Mat> {
        let reps = ht.representatives(q, t.dim(q));
        hc.coordinates_matrix(q, &incl(q).mul(&reps)?)
    };
    let pq = |q: i32| -> Result<Mat> {
        let reps = hc.representatives(q, c.dim(q));
        hs.coordinates_matrix(q + 1, &proj(q).mul(&reps)?)
    };
    let exact_at = |a: &Mat, b: &Mat, mid: usize| -> Result<bool> {
        let comp_zero = b.mul(a)?.is_zero();
        Ok(comp_zero && rank(a) + rank(b) == mid)
    };
    let mut failures = Vec::new();
    for q in lo..=hi {
        if !exact_at(&fq(q)?, &iq(q)?, ht.dim(q))? {
            failures.push((q, 0));
        }
        if !exact_at(&iq(q)?, &pq(q)?, hc.dim(q))? {
            failures.push((q, 1));
        }
        if !exact_at(&pq(q)?, &fq(q + 1)?, hs.dim(q + 1))? {
            failures.push((q + 1, 2));
        }
    }
    Ok(LesReport { exact: failures.is_empty(), failures })
}
