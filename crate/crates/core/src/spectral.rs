//! Double complexes and the pages of their two spectral sequences.
//!
//! Pages are computed on the filtered total complex by rank arithmetic:
//! with the decreasing filtration `F^p`,
//! `Z_r^p = {x in F^p : dx in F^{p+r}}`, `B_r^p = F^p ∩ d(F^{p-r})` and
//! `E_r^p = Z_r^p / (Z_{r-1}^{p+1} + B_{r-1}^p)`.

use serde::{Deserialize, Serialize};

use crate::complexes::{cohomology, Cplx};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::{rank, rank_profile};
use crate::matrix::Mat;

/// Anticommuting double complex on a rectangle of bidegrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleCplx {
    field: FieldSpec,
    p_lo: i32,
    q_lo: i32,
    /// `dims[a][b]` is the dimension at `(p_lo + a, q_lo + b)`.
    dims: Vec<Vec<usize>>,
    /// Horizontal `(p,q) -> (p+1,q)`.
    dh: Vec<Vec<Mat>>,
    /// Vertical `(p,q) -> (p,q+1)`.
    dv: Vec<Vec<Mat>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Filtration {
    /// By the first index `p`.
    Columns,
    /// By the second index `q`.
    Rows,
}

impl DoubleCplx {
    /// Differentials are given by closures over bidegrees in the rectangle.
    pub fn new(
        field: &FieldSpec,
        p_lo: i32,
        q_lo: i32,
        dims: Vec<Vec<usize>>,
        mut dh: impl FnMut(i32, i32) -> Result<Mat>,
        mut dv: impl FnMut(i32, i32) -> Result<Mat>,
    ) -> Result<DoubleCplx> {
        let np = dims.len();
        let nq = dims.first().map_or(0, Vec::len);
        if dims.iter().any(|c| c.len() != nq) {
            return Err(Error::Shape("ragged double complex".into()));
        }
        let dim = |a: i32, b: i32| -> usize {
            if a < 0 || b < 0 || a as usize >= np || b as usize >= nq {
                0
            } else {
                dims[a as usize][b as usize]
            }
        };
        let mut h = Vec::with_capacity(np);
        let mut v = Vec::with_capacity(np);
        for a in 0..np as i32 {
            let mut hrow = Vec::with_capacity(nq);
            let mut vrow = Vec::with_capacity(nq);
            for b in 0..nq as i32 {
                let (p, q) = (p_lo + a, q_lo + b);
                let mh = if a + 1 < np as i32 { dh(p, q)? } else { Mat::zeros(field, 0, dim(a, b)) };
                let mv = if b + 1 < nq as i32 { dv(p, q)? } else { Mat::zeros(field, 0, dim(a, b)) };
                if mh.shape() != (dim(a + 1, b), dim(a, b)) || mv.shape() != (dim(a, b + 1), dim(a, b)) {
                    return Err(Error::Shape(format!("differential shapes at ({p},{q})")));
                }
                hrow.push(mh);
                vrow.push(mv);
            }
            h.push(hrow);
            v.push(vrow);
        }
        let dc = DoubleCplx { field: field.clone(), p_lo, q_lo, dims, dh: h, dv: v };
        dc.validate()?;
        Ok(dc)
    }

    /// Input with commuting squares; vertical maps in column `p` are multiplied
    /// by `(-1)^p` to make them anticommute.
    pub fn from_commuting(
        field: &FieldSpec,
        p_lo: i32,
        q_lo: i32,
        dims: Vec<Vec<usize>>,
        mut dh: impl FnMut(i32, i32) -> Result<Mat>,
        mut dv: impl FnMut(i32, i32) -> Result<Mat>,
    ) -> Result<DoubleCplx> {
        let raw = DoubleCplx::raw(field, p_lo, q_lo, dims.clone(), &mut dh, &mut dv)?;
        for p in raw.p_range() {
            for q in raw.q_range() {
                let a = raw.h(p, q + 1).mul(&raw.v(p, q))?;
                let b = raw.v(p + 1, q).mul(&raw.h(p, q))?;
                if a != b {
                    return Err(Error::Precondition(format!("square at ({p},{q}) does not commute")));
                }
            }
        }
        DoubleCplx::new(field, p_lo, q_lo, dims, dh, |p, q| Ok(dv(p, q)?.sign(p as i64)))
    }

    fn raw(
        field: &FieldSpec,
        p_lo: i32,
        q_lo: i32,
        dims: Vec<Vec<usize>>,
        dh: &mut impl FnMut(i32, i32) -> Result<Mat>,
        dv: &mut impl FnMut(i32, i32) -> Result<Mat>,
    ) -> Result<DoubleCplx> {
        let np = dims.len() as i32;
        let nq = dims.first().map_or(0, Vec::len) as i32;
        let mut h = Vec::new();
        let mut v = Vec::new();
        for a in 0..np {
            let mut hr = Vec::new();
            let mut vr = Vec::new();
            for b in 0..nq {
                let d = dims[a as usize][b as usize];
                hr.push(if a + 1 < np { dh(p_lo + a, q_lo + b)? } else { Mat::zeros(field, 0, d) });
                vr.push(if b + 1 < nq { dv(p_lo + a, q_lo + b)? } else { Mat::zeros(field, 0, d) });
            }
            h.push(hr);
            v.push(vr);
        }
        Ok(DoubleCplx { field: field.clone(), p_lo, q_lo, dims, dh: h, dv: v })
    }

    fn validate(&self) -> Result<()> {
        for p in self.p_range() {
            for q in self.q_range() {
                if !self.h(p + 1, q).mul(&self.h(p, q))?.is_zero() {
                    return Err(Error::NotAComplex { degree: p });
                }
                if !self.v(p, q + 1).mul(&self.v(p, q))?.is_zero() {
                    return Err(Error::NotAComplex { degree: q });
                }
                let a = self.h(p, q + 1).mul(&self.v(p, q))?;
                let b = self.v(p + 1, q).mul(&self.h(p, q))?;
                if !a.add(&b)?.is_zero() {
                    return Err(Error::Precondition(format!("square at ({p},{q}) does not anticommute")));
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn p_range(&self) -> std::ops::Range<i32> {
        self.p_lo..self.p_lo + self.dims.len() as i32
    }

    pub fn q_range(&self) -> std::ops::Range<i32> {
        self.q_lo..self.q_lo + self.dims.first().map_or(0, Vec::len) as i32
    }

    pub fn dim(&self, p: i32, q: i32) -> usize {
        let (a, b) = (p - self.p_lo, q - self.q_lo);
        if a < 0 || b < 0 {
            return 0;
        }
        self.dims.get(a as usize).and_then(|c| c.get(b as usize)).copied().unwrap_or(0)
    }

    /// Horizontal map out of `(p, q)`.
    pub fn h(&self, p: i32, q: i32) -> Mat {
        let (a, b) = (p - self.p_lo, q - self.q_lo);
        if a >= 0 && b >= 0 && (a as usize) + 1 < self.dims.len() && (b as usize) < self.dims[0].len() {
            self.dh[a as usize][b as usize].clone()
        } else {
            Mat::zeros(&self.field, self.dim(p + 1, q), self.dim(p, q))
        }
    }

    /// Vertical map out of `(p, q)`.
    pub fn v(&self, p: i32, q: i32) -> Mat {
        let (a, b) = (p - self.p_lo, q - self.q_lo);
        if a >= 0 && b >= 0 && (a as usize) < self.dims.len() && (b as usize) + 1 < self.dims[0].len() {
            self.dv[a as usize][b as usize].clone()
        } else {
            Mat::zeros(&self.field, self.dim(p, q + 1), self.dim(p, q))
        }
    }

    /// Swaps the two indices.
    pub fn transpose(&self) -> DoubleCplx {
        let np = self.dims.len();
        let nq = self.dims.first().map_or(0, Vec::len);
        let dims = (0..nq).map(|b| (0..np).map(|a| self.dims[a][b]).collect()).collect();
        let dh = (0..nq).map(|b| (0..np).map(|a| self.dv[a][b].clone()).collect()).collect();
        let dv = (0..nq).map(|b| (0..np).map(|a| self.dh[a][b].clone()).collect()).collect();
        DoubleCplx { field: self.field.clone(), p_lo: self.q_lo, q_lo: self.p_lo, dims, dh, dv }
    }

    fn n_range(&self) -> std::ops::RangeInclusive<i32> {
        let p = self.p_range();
        let q = self.q_range();
        if p.is_empty() || q.is_empty() {
            #[allow(clippy::reversed_empty_ranges)]
            return 0..=-1;
        }
        (p.start + q.start)..=(p.end + q.end - 2)
    }

    /// Blocks of `Tot^n` as `(p, offset, size)`, increasing in `p`.
    fn blocks(&self, n: i32) -> Vec<(i32, usize, usize)> {
        let mut off = 0;
        let mut out = Vec::new();
        for p in self.p_range() {
            let d = self.dim(p, n - p);
            out.push((p, off, d));
            off += d;
        }
        out
    }

    fn tot_dim(&self, n: i32) -> usize {
        self.p_range().map(|p| self.dim(p, n - p)).sum()
    }

    fn tot_d(&self, n: i32) -> Mat {
        let src = self.blocks(n);
        let tgt = self.blocks(n + 1);
        let mut m = Mat::zeros(&self.field, self.tot_dim(n + 1), self.tot_dim(n));
        for &(p, off, size) in &src {
            if size == 0 {
                continue;
            }
            let q = n - p;
            if let Some(&(_, toff, tsize)) = tgt.iter().find(|b| b.0 == p + 1) {
                if tsize > 0 {
                    m.set_block(toff, off, &self.h(p, q));
                }
            }
            if let Some(&(_, toff, tsize)) = tgt.iter().find(|b| b.0 == p) {
                if tsize > 0 {
                    m.set_block(toff, off, &self.v(p, q));
                }
            }
        }
        m
    }

    /// Offset in `Tot^n` where `F^p` starts.
    fn f_start(&self, n: i32, p: i32) -> usize {
        self.p_range().filter(|&pp| pp < p).map(|pp| self.dim(pp, n - pp)).sum()
    }
}

pub fn total_complex(dc: &DoubleCplx) -> Result<Cplx> {
    let ns = dc.n_range();
    if ns.is_empty() {
        return Ok(Cplx::zero(&dc.field));
    }
    let lo = *ns.start();
    let dims = ns.clone().map(|n| dc.tot_dim(n)).collect();
    Cplx::from_fn(&dc.field, lo, dims, |n| Ok(dc.tot_d(n)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageEntry {
    pub p: i32,
    pub q: i32,
    pub dim: usize,
    /// Rank of `d_r` leaving this bidegree.
    pub rank_out: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralPage {
    pub r: usize,
    pub entries: Vec<PageEntry>,
}

impl SpectralPage {
    pub fn dim(&self, p: i32, q: i32) -> usize {
        self.entries.iter().find(|e| e.p == p && e.q == q).map_or(0, |e| e.dim)
    }

    pub fn all_differentials_zero(&self) -> bool {
        self.entries.iter().all(|e| e.rank_out == 0)
    }

    /// `sum_{p+q=n} dim E^{p,q}`.
    pub fn antidiagonal(&self, n: i32) -> usize {
        self.entries.iter().filter(|e| e.p + e.q == n).map(|e| e.dim).sum()
    }
}

struct Filtered<'a> {
    dc: &'a DoubleCplx,
    tot: Cplx,
}

impl Filtered<'_> {
    /// Basis of `Z_r^p` in `Tot^n`.
    fn z(&self, r: i64, p: i32, n: i32) -> Mat {
        let field = &self.dc.field;
        let len = self.tot.dim(n);
        let start = self.dc.f_start(n, p).min(len);
        let d = self.tot.d(n);
        let pr = (p as i64 + r).clamp(i32::MIN as i64, i32::MAX as i64) as i32;
        let row_end = self.dc.f_start(n + 1, pr).min(d.rows());
        let restricted = d.submatrix(0..row_end, start..len);
        let k = rank_profile(&restricted).kernel_basis;
        let mut out = Mat::zeros(field, len, k.cols());
        out.set_block(start, 0, &k);
        out
    }

    /// Spanning set of `B_s^p` in `Tot^n`.
    fn b(&self, s: i64, p: i32, n: i32) -> Mat {
        let ps = (p as i64 - s) as i32;
        let z = self.z(s, ps, n - 1);
        self.tot.d(n - 1).mul(&z).unwrap()
    }

    fn span(&self, n: i32, parts: &[&Mat]) -> usize {
        rank(&Mat::hstack(&self.dc.field, self.tot.dim(n), parts).unwrap())
    }

    fn page(&self, r: usize) -> SpectralPage {
        let r = r as i64;
        let mut entries = Vec::new();
        for p in self.dc.p_range() {
            for q in self.dc.q_range() {
                let n = p + q;
                let zr = self.z(r, p, n);
                let dim_z = rank(&zr);
                let denom = self.span(n, &[&self.z(r - 1, p + 1, n), &self.b(r - 1, p, n)]);
                let ker = self.span(n, &[&self.z(r + 1, p, n), &self.z(r - 1, p + 1, n)]);
                entries.push(PageEntry { p, q, dim: dim_z - denom, rank_out: dim_z - ker });
            }
        }
        SpectralPage { r: r as usize, entries }
    }
}

/// Pages `E_0..E_{r_max}`, bidegrees always in the original `(p, q)` labels.
pub fn ss_pages(dc: &DoubleCplx, filtration: Filtration, r_max: usize) -> Result<Vec<SpectralPage>> {
    let work = match filtration {
        Filtration::Columns => dc.clone(),
        Filtration::Rows => dc.transpose(),
    };
    let f = Filtered { tot: total_complex(&work)?, dc: &work };
    let mut pages: Vec<SpectralPage> = (0..=r_max).map(|r| f.page(r)).collect();
    if filtration == Filtration::Rows {
        for page in pages.iter_mut() {
            for e in page.entries.iter_mut() {
                std::mem::swap(&mut e.p, &mut e.q);
            }
            page.entries.sort_by_key(|e| (e.p, e.q));
        }
    }
    Ok(pages)
}

/// Page index past which every differential vanishes for bounded input.
pub fn stable_page(dc: &DoubleCplx, filtration: Filtration) -> usize {
    let width = match filtration {
        Filtration::Columns => dc.p_range().len(),
        Filtration::Rows => dc.q_range().len(),
    };
    width + 1
}

/// `E_∞` (the page at [`stable_page`]).
pub fn e_infinity(dc: &DoubleCplx, filtration: Filtration) -> Result<SpectralPage> {
    let r = stable_page(dc, filtration);
    Ok(ss_pages(dc, filtration, r)?.pop().unwrap())
}

/// Smallest `r >= 1` with `E_r = E_∞`, judged by all later differentials vanishing.
pub fn collapse_page(pages: &[SpectralPage]) -> Option<usize> {
    let mut first = None;
    for page in pages.iter().rev() {
        if page.r == 0 {
            break;
        }
        if page.all_differentials_zero() {
            first = Some(page.r);
        } else {
            break;
        }
    }
    first
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    /// `(n, sum of E_∞ on the antidiagonal, dim H^n(Tot))`.
    pub rows: Vec<(i32, usize, usize)>,
    pub holds: bool,
}

pub fn convergence_check(dc: &DoubleCplx, filtration: Filtration) -> Result<ConvergenceReport> {
    let einf = e_infinity(dc, filtration)?;
    let tot = total_complex(dc)?;
    let h = cohomology(&tot);
    let rows: Vec<(i32, usize, usize)> =
        dc.n_range().map(|n| (n, einf.antidiagonal(n), h.dim(n))).collect();
    Ok(ConvergenceReport { holds: rows.iter().all(|r| r.1 == r.2), rows })
}
