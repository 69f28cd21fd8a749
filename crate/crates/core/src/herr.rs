//! Herr complexes: fibres of `f - 1` over Koszul complexes of the Lie operators.
//!
//! A [`HerrInstance`] carries operators `x_0 = f - 1, x_1 = ∇_1, ..., x_d = ∇_d`.
//! The analytic complex uses `x_0, x_1`, the continuous one all of them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, n_chi};
use crate::complexes::{cohomology, euler_char, fibre, ChainMap, Cplx};
use crate::dolbeault::TwoIntervalModule;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::koszul::{block_endo, koszul_cochain, koszul_on_complex, subsets, AnalyticFlags, OperatorModule};
use crate::linalg::{field_automorphism, is_invertible, rank, solve_linear};
use crate::matrix::Mat;
use crate::random::random_scalar;
use crate::spectral::{collapse_page, ss_pages, stable_page, total_complex, DoubleCplx, Filtration};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Analytic,
    Continuous,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HerrInstance {
    module: OperatorModule,
    flags: AnalyticFlags,
}

impl HerrInstance {
    /// `module` must have `d + 1 >= 2` operators, with the flagged ones zero.
    pub fn new(module: OperatorModule, flags: AnalyticFlags) -> Result<HerrInstance> {
        if flags.d == 0 {
            return Err(Error::Precondition("d must be at least 1".into()));
        }
        flags.validate(&module)?;
        Ok(HerrInstance { module, flags })
    }

    /// All of `x_2..x_d` vanish.
    pub fn analytic(module: OperatorModule) -> Result<HerrInstance> {
        let d = module.op_count().saturating_sub(1);
        HerrInstance::new(module, AnalyticFlags::new(d, 2))
    }

    pub fn module(&self) -> &OperatorModule {
        &self.module
    }

    pub fn flags(&self) -> AnalyticFlags {
        self.flags
    }

    pub fn d(&self) -> usize {
        self.flags.d
    }

    pub fn is_analytic(&self) -> bool {
        self.flags.analytic_from <= 2
    }
}

pub fn herr_complex(h: &HerrInstance, variant: Variant) -> Result<Cplx> {
    match variant {
        Variant::Analytic => {
            if !h.is_analytic() {
                return Err(Error::Precondition(format!(
                    "analytic complex needs operators from index 2 on to vanish (flags start at {})",
                    h.flags.analytic_from
                )));
            }
            koszul_cochain(&h.module, &[0, 1])
        }
        Variant::Continuous => koszul_cochain(&h.module, &h.module.all_indices()),
    }
}

/// Whether the Herr complex equals `fibre(x_0)` over the Koszul complex of the
/// remaining operators after reordering basis blocks (no signs).
pub fn matches_fibre(h: &HerrInstance, variant: Variant) -> Result<bool> {
    let herr = herr_complex(h, variant)?;
    let l = match variant {
        Variant::Analytic => 1,
        Variant::Continuous => h.d(),
    };
    let lie: Vec<usize> = (1..=l).collect();
    let base = koszul_cochain(&h.module, &lie)?;
    let fib = fibre(&block_endo(&base, h.module.op(0))?)?;
    let field = h.module.field().clone();
    let dim = h.module.dim();
    let perm = |q: i32| -> Mat {
        let n = herr.dim(q) / dim.max(1);
        let mut p = Mat::zeros(&field, fib.dim(q), herr.dim(q));
        if q < 0 || q as usize > l + 1 {
            return p;
        }
        let first = if (q as usize) <= l { subsets(l, q as usize) } else { Vec::new() };
        let second = if q >= 1 { subsets(l, q as usize - 1) } else { Vec::new() };
        for (c, &s) in subsets(l + 1, q as usize).iter().enumerate().take(n) {
            let rest = s >> 1;
            let r = if s & 1 == 0 {
                first.binary_search(&rest).unwrap()
            } else {
                first.len() + second.binary_search(&rest).unwrap()
            };
            p.set_block(r * dim, c * dim, &Mat::identity(&field, dim));
        }
        p
    };
    Ok(ChainMap::from_fn(herr.clone(), fib.clone(), |q| Ok(perm(q))).is_ok())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FxReport {
    pub d: usize,
    pub h_an: Vec<usize>,
    pub h_cts: Vec<usize>,
    pub predicted: Vec<usize>,
    pub holds: bool,
}

/// `h^i_cts = sum_{j=0..2} binom(d-1, i-j) h^j_an`.
pub fn fx_dims_check(h: &HerrInstance) -> Result<FxReport> {
    let d = h.d();
    let an = cohomology(&herr_complex(h, Variant::Analytic)?).dims_over(0, 2);
    let cts = cohomology(&herr_complex(h, Variant::Continuous)?).dims_over(0, d as i32 + 1);
    let predicted: Vec<usize> = (0..=d + 1)
        .map(|i| {
            (0..=2usize)
                .filter(|&j| j <= i)
                .map(|j| binomial(d as u64 - 1, (i - j) as u64) as usize * an[j])
                .sum()
        })
        .collect();
    Ok(FxReport { d, holds: predicted == cts, h_an: an, h_cts: cts, predicted })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerReport {
    pub d: usize,
    pub chi_cts: i64,
    pub chi_an: i64,
    pub n_chi: i64,
    pub holds: bool,
    pub note: String,
}

fn euler_note(d: usize) -> String {
    if d == 1 {
        "d = 1: analytic and continuous complexes coincide".into()
    } else {
        "finite-dimensional input forces chi_an = 0, so the identity reads 0 = 0".into()
    }
}

/// `chi_cts = N_chi(d) chi_an`.
pub fn euler_factorization_check(h: &HerrInstance) -> Result<EulerReport> {
    let d = h.d();
    let chi_an = euler_char(&herr_complex(h, Variant::Analytic)?);
    let chi_cts = euler_char(&herr_complex(h, Variant::Continuous)?);
    let nc = n_chi(d)?;
    Ok(EulerReport { d, chi_cts, chi_an, n_chi: nc, holds: chi_cts == nc * chi_an, note: euler_note(d) })
}

/// Herr complexes of a two-interval module: `fibre(φ - ρ)` between the
/// Koszul complexes of the two sides.
pub fn two_interval_herr_complex(t: &TwoIntervalModule, variant: Variant) -> Result<Cplx> {
    let idx: Vec<usize> = match variant {
        Variant::Analytic => vec![0],
        Variant::Continuous => t.m_i().all_indices(),
    };
    if variant == Variant::Analytic {
        for i in 1..t.m_i().op_count() {
            if !t.m_i().op(i).is_zero() || !t.m_j().op(i).is_zero() {
                return Err(Error::Precondition(format!("operator {i} must vanish on both sides")));
            }
        }
    }
    let ki = koszul_cochain(t.m_i(), &idx)?;
    let kj = koszul_cochain(t.m_j(), &idx)?;
    fibre(&t.frobenius_minus_restriction(&ki, &kj)?)
}

pub fn euler_factorization_two_interval(t: &TwoIntervalModule) -> Result<EulerReport> {
    let d = t.m_i().op_count();
    let chi_an = euler_char(&two_interval_herr_complex(t, Variant::Analytic)?);
    let chi_cts = euler_char(&two_interval_herr_complex(t, Variant::Continuous)?);
    let nc = n_chi(d)?;
    Ok(EulerReport { d, chi_cts, chi_an, n_chi: nc, holds: chi_cts == nc * chi_an, note: euler_note(d) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IteratedRhomReport {
    pub one_shot: Vec<usize>,
    pub iterated: Vec<usize>,
    pub agree: bool,
    /// With an empty second part (and sorted first part) both sides are the same complex.
    pub identical: Option<bool>,
}

/// Koszul complex on all operators versus the Koszul complex of the `j_part`
/// operators acting on the Koszul complex of the `i_part`.
pub fn iterated_rhom_check(m: &OperatorModule, i_part: &[usize], j_part: &[usize]) -> Result<IteratedRhomReport> {
    let mut all: Vec<usize> = i_part.iter().chain(j_part).copied().collect();
    all.sort_unstable();
    if all != m.all_indices() {
        return Err(Error::Precondition("parts must partition the operator indices".into()));
    }
    let one = koszul_cochain(m, &all)?;
    let base = koszul_cochain(m, i_part)?;
    let endos = j_part.iter().map(|&j| block_endo(&base, m.op(j))).collect::<Result<Vec<_>>>()?;
    let iter = koszul_on_complex(&base, &endos)?;
    let top = all.len() as i32;
    let one_shot = cohomology(&one).dims_over(0, top);
    let iterated = cohomology(&iter).dims_over(0, top);
    let identical = j_part.is_empty().then(|| iter == one);
    Ok(IteratedRhomReport { agree: one_shot == iterated, one_shot, iterated, identical })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseChangeRow {
    pub degree: i32,
    pub dim_base: usize,
    pub dim_extended: usize,
    /// GF(p)-dimension of the Frobenius-fixed classes.
    pub fixed_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseChangeReport {
    pub p: u64,
    pub n: usize,
    pub min_poly: Vec<u64>,
    pub rows: Vec<BaseChangeRow>,
    /// Some basis had a nontrivial Frobenius matrix (equal to the identity only when n = 1).
    pub frobenius_nontrivial: bool,
    pub holds: bool,
}

/// Extends scalars of the continuous Herr complex to GF(p^n) and recovers
/// the base cohomology as Frobenius invariants. The cohomology basis over
/// GF(p^n) is scrambled by a seeded random change of basis first, so the
/// semilinear action is not the identity matrix.
pub fn base_change_descent(m: &OperatorModule, n: usize, seed: u64) -> Result<BaseChangeReport> {
    let base_field = m.field().clone();
    let FieldSpec::Prime(p) = base_field else {
        return Err(Error::InvalidField(format!("base change needs a prime field, got {base_field}")));
    };
    if n == 0 || n > 4 {
        return Err(Error::Precondition(format!("extension degree {n} outside 1..=4")));
    }
    let ext = if n == 1 { base_field.clone() } else { FieldSpec::extension_auto(p, n)? };
    let min_poly = match &ext {
        FieldSpec::Extension(e) => e.min_poly().to_vec(),
        _ => vec![0, 1],
    };
    let mn = m.extend_scalars(&ext)?;
    let all = m.all_indices();
    let c_base = koszul_cochain(m, &all)?;
    let c_ext = koszul_cochain(&mn, &all)?;
    let h_base = cohomology(&c_base);
    let h_ext = cohomology(&c_ext);
    let sigma = field_automorphism(&ext, if n == 1 { 0 } else { 1 })?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut nontrivial = false;
    for q in c_ext.degrees() {
        let h = h_ext.dim(q);
        let reps = h_ext.representatives(q, c_ext.dim(q));
        let g = random_invertible(&ext, h, &mut rng);
        let reps_g = reps.mul(&g)?;
        let g_inv = solve_linear(&g, &Mat::identity(&ext, h))?.expect("invertible");
        let a = g_inv.mul(&h_ext.coordinates_matrix(q, &sigma.apply(&reps_g)?)?)?;
        if a != Mat::identity(&ext, h) {
            nontrivial = true;
        }
        // c -> A σ(c) - c as a GF(p)-linear map on GF(p)^{n h}
        let prime = FieldSpec::Prime(p);
        let mut lin = Mat::zeros(&prime, n * h, n * h);
        for j in 0..h {
            for k in 0..n {
                let mut unit = vec![0u64; n];
                unit[k] = 1;
                let mut c = vec![ext.zero(); h];
                c[j] = ext.from_coeffs(&unit)?;
                let sc: Vec<_> = c.iter().map(|s| sigma.apply_scalar(s)).collect();
                let img = a.apply(&sc)?;
                for (row, (x, y)) in img.iter().zip(&c).enumerate() {
                    let diff = ext.sub(x, y);
                    let coords = ext.prime_coordinates(&diff).unwrap();
                    for (t, v) in coords.into_iter().enumerate() {
                        lin.set(row * n + t, j * n + k, prime.from_coeffs(&[v])?);
                    }
                }
            }
        }
        let fixed_dim = n * h - rank(&lin);
        rows.push(BaseChangeRow { degree: q, dim_base: h_base.dim(q), dim_extended: h, fixed_dim });
    }
    let holds = rows.iter().all(|r| r.dim_base == r.dim_extended && r.fixed_dim == r.dim_base);
    Ok(BaseChangeReport { p, n, min_poly, rows, frobenius_nontrivial: nontrivial, holds })
}

fn random_invertible(field: &FieldSpec, h: usize, rng: &mut ChaCha8Rng) -> Mat {
    loop {
        let data = (0..h * h).map(|_| random_scalar(field, rng)).collect();
        let g = Mat::from_vec(field, h, h, data).unwrap();
        if is_invertible(&g) {
            return g;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralComparisonReport {
    pub l: usize,
    /// Column filtration (by the resolution index).
    pub e1_differentials_zero: bool,
    pub e1_equals_e_infinity: bool,
    pub column_collapse_page: Option<usize>,
    /// Row filtration, reported for comparison.
    pub row_collapse_page: Option<usize>,
    pub total_dims: Vec<usize>,
    pub predicted: Vec<usize>,
    pub holds: bool,
}

/// The double complex `P ⊗ C` with `P` the Koszul complex of the `l = d + 1 - k`
/// killed operators on a line (zero differential) and `C = K^•(x_0..x_{k-1}, M)`.
pub fn resolution_double_complex(h: &HerrInstance, k: usize) -> Result<(DoubleCplx, Cplx, usize)> {
    let m = &h.module;
    let total = m.op_count();
    if k == 0 || k > total {
        return Err(Error::Precondition(format!("k = {k} outside 1..={total}")));
    }
    for j in k..total {
        if !m.op(j).is_zero() {
            return Err(Error::Precondition(format!("operator index {j} must vanish")));
        }
    }
    let l = total - k;
    let field = m.field().clone();
    let c = koszul_cochain(m, &(0..k).collect::<Vec<_>>())?;
    let dims: Vec<Vec<usize>> = (0..=l)
        .map(|i| c.degrees().map(|j| binomial(l as u64, i as u64) as usize * c.dim(j)).collect())
        .collect();
    let dc = DoubleCplx::from_commuting(
        &field,
        0,
        c.lo(),
        dims,
        |i, j| {
            let r = binomial(l as u64, i as u64 + 1) as usize * c.dim(j);
            let s = binomial(l as u64, i as u64) as usize * c.dim(j);
            Ok(Mat::zeros(&field, r, s))
        },
        |i, j| Mat::identity(&field, binomial(l as u64, i as u64) as usize).kron(&c.d(j)),
    )?;
    Ok((dc, c, l))
}

pub fn spectral_comparison(h: &HerrInstance, k: usize) -> Result<SpectralComparisonReport> {
    let (dc, c, l) = resolution_double_complex(h, k)?;
    let r_cols = stable_page(&dc, Filtration::Columns);
    let cols = ss_pages(&dc, Filtration::Columns, r_cols)?;
    let rows = ss_pages(&dc, Filtration::Rows, stable_page(&dc, Filtration::Rows))?;
    let e1_zero = cols[1..].iter().all(|p| p.all_differentials_zero());
    let e1_eq_inf = cols[1].entries.iter().all(|e| e.dim == cols[r_cols].dim(e.p, e.q));
    let tot = total_complex(&dc)?;
    let top = h.module.op_count() as i32;
    let total_dims = cohomology(&tot).dims_over(0, top);
    let hc = cohomology(&c);
    let predicted: Vec<usize> = (0..=top)
        .map(|n| (0..=l).map(|i| binomial(l as u64, i as u64) as usize * hc.dim(n - i as i32)).sum())
        .collect();
    let holds = e1_zero && e1_eq_inf && total_dims == predicted;
    Ok(SpectralComparisonReport {
        l,
        e1_differentials_zero: e1_zero,
        e1_equals_e_infinity: e1_eq_inf,
        column_collapse_page: collapse_page(&cols),
        row_collapse_page: collapse_page(&rows),
        total_dims,
        predicted,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trivial(field: &FieldSpec, d: usize) -> HerrInstance {
        HerrInstance::analytic(OperatorModule::trivial(field, d + 1)).unwrap()
    }

    #[test]
    fn trivial_module_dims() {
        let f = FieldSpec::rationals();
        let h = trivial(&f, 3);
        assert_eq!(cohomology(&herr_complex(&h, Variant::Analytic).unwrap()).dims(), &[1, 2, 1]);
        assert_eq!(cohomology(&herr_complex(&h, Variant::Continuous).unwrap()).dims(), &[1, 4, 6, 4, 1]);
        assert!(matches_fibre(&h, Variant::Analytic).unwrap());
        assert!(matches_fibre(&h, Variant::Continuous).unwrap());
        for d in 1..=5 {
            assert!(fx_dims_check(&trivial(&f, d)).unwrap().holds);
        }
    }

    #[test]
    fn analytic_needs_flags() {
        let f = FieldSpec::rationals();
        let m = OperatorModule::trivial(&f, 3);
        let h = HerrInstance::new(m, AnalyticFlags::new(2, 3)).unwrap();
        assert!(herr_complex(&h, Variant::Analytic).is_err());
    }

    #[test]
    fn invertible_x0_kills_everything() {
        let f = FieldSpec::prime(5).unwrap();
        let x0 = Mat::from_i64(&f, 2, 2, &[1, 1, 0, 1]);
        let z = Mat::zeros(&f, 2, 2);
        let m = OperatorModule::with_default_labels(&f, 2, vec![x0, z.clone(), z.clone(), z]).unwrap();
        let h = HerrInstance::analytic(m).unwrap();
        let r = fx_dims_check(&h).unwrap();
        assert!(r.holds);
        assert!(r.h_an.iter().chain(&r.h_cts).all(|&x| x == 0));
    }

    #[test]
    fn euler_small_cases() {
        let f = FieldSpec::rationals();
        let r1 = euler_factorization_check(&trivial(&f, 1)).unwrap();
        assert!(r1.holds && r1.n_chi == 1);
        let r4 = euler_factorization_check(&trivial(&f, 4)).unwrap();
        assert!(r4.holds && r4.chi_an == 0 && r4.n_chi == 0);
    }

    #[test]
    fn iterated_rhom_small() {
        let f = FieldSpec::rationals();
        let m = OperatorModule::trivial(&f, 2);
        let r = iterated_rhom_check(&m, &[0], &[1]).unwrap();
        assert!(r.agree);
        assert_eq!(r.one_shot, vec![1, 2, 1]);
        let e = iterated_rhom_check(&m, &[0, 1], &[]).unwrap();
        assert_eq!(e.identical, Some(true));
        assert!(iterated_rhom_check(&m, &[0], &[]).is_err());
    }

    #[test]
    fn base_change_trivial_and_identity() {
        let f = FieldSpec::prime(2).unwrap();
        let m = OperatorModule::trivial(&f, 3);
        let r = base_change_descent(&m, 2, 1).unwrap();
        assert!(r.holds);
        let r1 = base_change_descent(&m, 1, 1).unwrap();
        assert!(r1.holds && !r1.frobenius_nontrivial);
    }

    #[test]
    fn spectral_trivial_d2() {
        let f = FieldSpec::rationals();
        let r = spectral_comparison(&trivial(&f, 2), 2).unwrap();
        assert_eq!(r.l, 1);
        assert!(r.holds);
        assert_eq!(r.total_dims, vec![1, 3, 3, 1]);
        assert_eq!(r.column_collapse_page, Some(1));
    }
}
