//! JSON instance records and seeded generation.
//!
//! Scalars are exact text: `"a/b"` over Q, residues over GF(p) and
//! `"c0+c1*t+..."` over extensions.

use anyhow::{bail, ensure, Context, Result};
use herr_core::dolbeault::{grassmann_model, truncated_counterexample, DolbeaultModel, DolbeaultPair, TwoIntervalModule};
use herr_core::field::FieldRecord;
use herr_core::koszul::OperatorModule;
use herr_core::random::{random_commuting_family, random_matrix, random_scalar};
use herr_core::{FieldSpec, Mat, Scalar};
use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleRecord {
    pub field: FieldRecord,
    pub dim: usize,
    pub labels: Vec<String>,
    pub operators: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analytic_from: Option<usize>,
}

impl ModuleRecord {
    pub fn from_module(m: &OperatorModule, analytic_from: Option<usize>) -> Self {
        ModuleRecord {
            field: m.field().into(),
            dim: m.dim(),
            labels: m.labels().to_vec(),
            operators: m.ops().iter().map(Mat::to_strings).collect(),
            analytic_from,
        }
    }

    pub fn field(&self) -> Result<FieldSpec> {
        Ok(FieldSpec::try_from(&self.field)?)
    }

    /// Rebuilds the module, checking commutativity and the analytic flag.
    pub fn to_module(&self) -> Result<OperatorModule> {
        let f = self.field()?;
        ensure!(self.labels.len() == self.operators.len(), "{} labels for {} operators", self.labels.len(), self.operators.len());
        let ops = self
            .operators
            .iter()
            .map(|o| Mat::from_strings(&f, self.dim, self.dim, o))
            .collect::<herr_core::Result<Vec<_>>>()?;
        let m = OperatorModule::new(&f, self.dim, ops, self.labels.clone())?;
        if let Some(k) = self.analytic_from {
            ensure!(m.op_count() >= 1, "analytic flag on an empty family");
            herr_core::koszul::AnalyticFlags::new(m.op_count() - 1, k).validate(&m)?;
        }
        Ok(m)
    }
}

/// Grassmann carrier with `f - 1 = 1 ⊗ F`, `∇_1 = 1 ⊗ A + Σ c_i ∂_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrassmannRecord {
    pub field: FieldRecord,
    pub d: usize,
    pub w: usize,
    pub f: Vec<String>,
    pub a: Vec<String>,
    pub shifts: Vec<String>,
}

impl GrassmannRecord {
    pub fn to_model(&self) -> Result<DolbeaultModel> {
        let field = FieldSpec::try_from(&self.field)?;
        let base = grassmann_model(self.d, self.w, &field)?;
        let f = Mat::from_strings(&field, self.w, self.w, &self.f)?;
        let a = Mat::from_strings(&field, self.w, self.w, &self.a)?;
        let shifts = self.shifts.iter().map(|s| field.parse_scalar(s)).collect::<herr_core::Result<Vec<_>>>()?;
        Ok(base.with_operators(&f, &a, &shifts)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoIntervalRecord {
    pub m_i: ModuleRecord,
    pub m_j: ModuleRecord,
    /// `dim M_J x dim M_I`, row-major.
    pub phi: Vec<String>,
    pub restriction: Vec<String>,
}

impl TwoIntervalRecord {
    pub fn to_module(&self) -> Result<TwoIntervalModule> {
        let (mi, mj) = (self.m_i.to_module()?, self.m_j.to_module()?);
        let f = mi.field().clone();
        let phi = Mat::from_strings(&f, mj.dim(), mi.dim(), &self.phi)?;
        let rho = Mat::from_strings(&f, mj.dim(), mi.dim(), &self.restriction)?;
        Ok(TwoIntervalModule::new(mi, mj, phi, Some(rho))?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRecord {
    pub i: GrassmannRecord,
    pub j: GrassmannRecord,
    pub phi: Vec<String>,
    pub restriction: Vec<String>,
}

impl PairRecord {
    pub fn to_pair(&self) -> Result<DolbeaultPair> {
        let (mi, mj) = (self.i.to_model()?, self.j.to_model()?);
        let f = mi.field().clone();
        let (ni, nj) = (mi.module().dim(), mj.module().dim());
        let phi = Mat::from_strings(&f, nj, ni, &self.phi)?;
        let rho = Mat::from_strings(&f, nj, ni, &self.restriction)?;
        Ok(DolbeaultPair::new(mi, mj, phi, rho)?)
    }
}

/// Everything a suite consumes, tagged by `type`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Instance {
    Parameter { n: usize },
    Module(ModuleRecord),
    Partition { module: ModuleRecord, i_part: Vec<usize>, j_part: Vec<usize> },
    BaseChange { module: ModuleRecord, n: usize, seed: u64 },
    TwoInterval(TwoIntervalRecord),
    Cup { module: ModuleRecord, xi: Vec<String>, degree: usize, v: Vec<String> },
    Grassmann(GrassmannRecord),
    Counterexample { field: FieldRecord },
    Pair(PairRecord),
}

impl Instance {
    /// SHA-256 of the canonical JSON encoding.
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("instances serialize");
        hex::encode(Sha256::digest(bytes))
    }

    pub fn to_dolbeault_model(&self) -> Result<DolbeaultModel> {
        match self {
            Instance::Grassmann(g) => g.to_model(),
            Instance::Counterexample { field } => Ok(truncated_counterexample(&FieldSpec::try_from(field)?)),
            _ => bail!("not a dolbeault model"),
        }
    }
}

pub fn scalars(f: &FieldSpec, v: &[Scalar]) -> Vec<String> {
    v.iter().map(|s| f.format_scalar(s)).collect()
}

pub fn parse_scalars(f: &FieldSpec, v: &[String]) -> Result<Vec<Scalar>> {
    v.iter().map(|s| f.parse_scalar(s).with_context(|| format!("scalar {s:?}"))).collect()
}

/// `d + 1` commuting operators on a space of dimension `1..=dim_max`, zero from index 2.
pub fn analytic_module(f: &FieldSpec, d: usize, dim_max: usize, rng: &mut impl Rng) -> OperatorModule {
    let dim = rng.gen_range(1..=dim_max);
    random_commuting_family(f, dim, d + 1, 2.min(d + 1), rng)
}

pub fn general_module(f: &FieldSpec, d: usize, dim_max: usize, rng: &mut impl Rng) -> OperatorModule {
    let dim = rng.gen_range(1..=dim_max);
    let zero_from = rng.gen_range(1..=d + 1);
    random_commuting_family(f, dim, d + 1, zero_from, rng)
}

/// Two sides with zero operators and arbitrary `φ, ρ`, dimensions drawn independently.
pub fn two_interval(f: &FieldSpec, d: usize, dim_max: usize, rng: &mut impl Rng) -> TwoIntervalRecord {
    let di = rng.gen_range(1..=dim_max);
    let dj = rng.gen_range(1..=dim_max);
    let side = |n: usize| ModuleRecord::from_module(&OperatorModule::with_default_labels(f, n, vec![Mat::zeros(f, n, n); d]).unwrap(), None);
    TwoIntervalRecord {
        m_i: side(di),
        m_j: side(dj),
        phi: random_matrix(f, dj, di, rng).to_strings(),
        restriction: random_matrix(f, dj, di, rng).to_strings(),
    }
}

/// Random `F` and `A` commuting with each other, random shifts.
pub fn grassmann(f: &FieldSpec, d: usize, w: usize, rng: &mut impl Rng) -> GrassmannRecord {
    let fam = random_commuting_family(f, w, 2, 2, rng);
    GrassmannRecord {
        field: f.into(),
        d,
        w,
        f: fam.op(0).to_strings(),
        a: fam.op(1).to_strings(),
        shifts: (0..d - 1).map(|_| f.format_scalar(&random_scalar(f, rng))).collect(),
    }
}

/// Either one model with `φ = 1 + (f - 1)`, `ρ = 1` or two models with scalar
/// `A = c`, `F = 0` and arbitrary `Φ ⊗ 1`, `ρ ⊗ 1`.
pub fn pair(f: &FieldSpec, d: usize, w_max: usize, rng: &mut impl Rng) -> PairRecord {
    let ib = Mat::identity(f, 1 << (d - 1));
    if rng.gen_bool(0.5) {
        let g = grassmann(f, d, rng.gen_range(1..=w_max), rng);
        let m = g.to_model().unwrap();
        let p = DolbeaultPair::from_model(&m).unwrap();
        return PairRecord { i: g.clone(), j: g, phi: p.phi.to_strings(), restriction: p.restriction.to_strings() };
    }
    let c = f.format_scalar(&random_scalar(f, rng));
    let shifts: Vec<String> = (0..d - 1).map(|_| f.format_scalar(&random_scalar(f, rng))).collect();
    let side = |w: usize| GrassmannRecord {
        field: f.into(),
        d,
        w,
        f: Mat::zeros(f, w, w).to_strings(),
        a: Mat::scalar_identity(f, w, &f.parse_scalar(&c).unwrap()).to_strings(),
        shifts: shifts.clone(),
    };
    let (wi, wj) = (rng.gen_range(1..=w_max), rng.gen_range(1..=w_max));
    PairRecord {
        i: side(wi),
        j: side(wj),
        phi: ib.kron(&random_matrix(f, wj, wi, rng)).unwrap().to_strings(),
        restriction: ib.kron(&random_matrix(f, wj, wi, rng)).unwrap().to_strings(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use herr_core::random::instance_rng;

    #[test]
    fn module_round_trip() {
        for f in ["q", "gf:5", "gf:2^2"] {
            let f = FieldSpec::parse(f).unwrap();
            let m = analytic_module(&f, 3, 3, &mut instance_rng(1, 0));
            let r = ModuleRecord::from_module(&m, Some(2));
            let text = serde_json::to_string(&r).unwrap();
            let back: ModuleRecord = serde_json::from_str(&text).unwrap();
            assert_eq!(back.to_module().unwrap(), m);
        }
    }

    #[test]
    fn flagged_but_nonzero_is_rejected() {
        let f = FieldSpec::rationals();
        let m = OperatorModule::with_default_labels(&f, 1, vec![Mat::identity(&f, 1); 2]).unwrap();
        assert!(ModuleRecord::from_module(&m, Some(1)).to_module().is_err());
    }

    #[test]
    fn pair_records_build() {
        let f = FieldSpec::prime(3).unwrap();
        for i in 0..10 {
            let p = pair(&f, 3, 2, &mut instance_rng(4, i));
            assert!(p.to_pair().is_ok());
        }
    }
}
