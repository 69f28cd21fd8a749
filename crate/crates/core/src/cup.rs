//! Cup products on Koszul cochains, extensions from 1-cocycles and the
//! connecting map of the resulting short exact sequence.
//!
//! The product is the exterior one: `(α ∪ β)_S = Σ sign(S1, S2) α_{S1} ⊗ β_{S2}`
//! over splittings `S = S1 ⊔ S2`, where `e_{S1} ∧ e_{S2} = sign · e_S`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::complexes::{cohomology, cone_les_check, ChainMap, Cohomology, Cplx};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::herr::HerrInstance;
use crate::koszul::{koszul_cochain, subsets, OperatorModule};
use crate::linalg::rank;
use crate::matrix::Mat;

/// Global sign in `ξ ∪ v = SIGN · δ(v)`; see [`empirical_cup_delta_sign`].
pub const CUP_DELTA_SIGN: i64 = 1;

/// A Koszul complex together with its cohomology basis.
#[derive(Debug)]
pub struct KoszulHost {
    module: OperatorModule,
    subset: Vec<usize>,
    complex: Cplx,
    cohomology: Cohomology,
}

impl KoszulHost {
    pub fn new(module: &OperatorModule, subset: &[usize]) -> Result<Arc<KoszulHost>> {
        let complex = koszul_cochain(module, subset)?;
        let cohomology = cohomology(&complex);
        Ok(Arc::new(KoszulHost { module: module.clone(), subset: subset.to_vec(), complex, cohomology }))
    }

    pub fn module(&self) -> &OperatorModule {
        &self.module
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn complex(&self) -> &Cplx {
        &self.complex
    }

    pub fn cohomology(&self) -> &Cohomology {
        &self.cohomology
    }

    pub fn l(&self) -> usize {
        self.subset.len()
    }

    pub fn h(&self, q: usize) -> usize {
        self.cohomology.dim(q as i32)
    }

    pub fn field(&self) -> &FieldSpec {
        self.module.field()
    }
}

/// Build a class from a cocycle.
pub fn class(host: &Arc<KoszulHost>, degree: usize, representative: Vec<Scalar>) -> Result<CohClass> {
    let q = degree as i32;
    if representative.len() != host.complex.dim(q) {
        return Err(Error::Shape(format!(
            "cochain of length {} in degree {degree} of dimension {}",
            representative.len(),
            host.complex.dim(q)
        )));
    }
    let dv = host.complex.d(q).apply(&representative)?;
    if dv.iter().any(|s| !host.field().is_zero(s)) {
        return Err(Error::CocycleViolation(format!("d of the degree-{degree} representative is nonzero")));
    }
    let coordinates = host.cohomology.coordinates(q, &representative)?;
    Ok(CohClass { host: host.clone(), degree, representative, coordinates })
}

/// The `j`-th basis class in degree `degree`.
pub fn basis_class(host: &Arc<KoszulHost>, degree: usize, j: usize) -> Result<CohClass> {
    let reps = host.cohomology.representatives(degree as i32, host.complex.dim(degree as i32));
    if j >= reps.cols() {
        return Err(Error::Precondition(format!("H^{degree} has dimension {}", reps.cols())));
    }
    class(host, degree, reps.column(j))
}

#[derive(Clone, Debug)]
pub struct CohClass {
    pub host: Arc<KoszulHost>,
    pub degree: usize,
    pub representative: Vec<Scalar>,
    /// Coordinates in the host's cohomology basis.
    pub coordinates: Vec<Scalar>,
}

impl CohClass {
    pub fn is_zero(&self) -> bool {
        self.coordinates.iter().all(|s| self.host.field().is_zero(s))
    }
}

/// `M ⊗ N` with operators `x ⊗ 1 + 1 ⊗ y`.
pub fn tensor_module(m: &OperatorModule, n: &OperatorModule) -> Result<OperatorModule> {
    if m.op_count() != n.op_count() {
        return Err(Error::IncompatibleHosts("operator counts differ".into()));
    }
    let f = m.field();
    let im = Mat::identity(f, m.dim());
    let inn = Mat::identity(f, n.dim());
    let ops = m
        .ops()
        .iter()
        .zip(n.ops())
        .map(|(x, y)| x.kron(&inn)?.add(&im.kron(y)?))
        .collect::<Result<Vec<_>>>()?;
    OperatorModule::new(f, m.dim() * n.dim(), ops, m.labels().to_vec())
}

/// `(-1)^{#{(a, b) : a in s1, b in s2, a > b}}`, `true` for minus.
fn shuffle_sign(s1: u32, s2: u32) -> bool {
    let mut count = 0;
    let mut t = s2;
    while t != 0 {
        let b = t.trailing_zeros();
        count += (s1 >> (b + 1)).count_ones();
        t &= t - 1;
    }
    count % 2 == 1
}

/// Cochain-level product on `l` operators; components of `alpha` live in a
/// `dm`-space and those of `beta` in a `dn`-space, the result in `dm * dn`.
#[allow(clippy::too_many_arguments)]
pub fn cup_cochains(
    field: &FieldSpec,
    l: usize,
    dm: usize,
    dn: usize,
    alpha: &[Scalar],
    p: usize,
    beta: &[Scalar],
    q: usize,
) -> Result<Vec<Scalar>> {
    if p + q > l {
        return Ok(Vec::new());
    }
    let sp = subsets(l, p);
    let sq = subsets(l, q);
    let spq = subsets(l, p + q);
    if alpha.len() != sp.len() * dm || beta.len() != sq.len() * dn {
        return Err(Error::Shape("cochain lengths do not match their degrees".into()));
    }
    let dmn = dm * dn;
    let mut out = vec![field.zero(); spq.len() * dmn];
    for (ia, &s1) in sp.iter().enumerate() {
        for (ib, &s2) in sq.iter().enumerate() {
            if s1 & s2 != 0 {
                continue;
            }
            let pos = spq.binary_search(&(s1 | s2)).unwrap();
            let neg = shuffle_sign(s1, s2);
            for a in 0..dm {
                let x = &alpha[ia * dm + a];
                if field.is_zero(x) {
                    continue;
                }
                for b in 0..dn {
                    let y = &beta[ib * dn + b];
                    let mut t = field.mul(x, y);
                    if neg {
                        t = field.neg(&t);
                    }
                    let k = pos * dmn + a * dn + b;
                    out[k] = field.add(&out[k], &t);
                }
            }
        }
    }
    Ok(out)
}

/// `α ∪ β` for `α` on `K(ops, M)` and `β` on `K(ops, N)`, landing on `K(ops, M ⊗ N)`.
pub fn cup_product(alpha: &CohClass, beta: &CohClass) -> Result<CohClass> {
    let (ha, hb) = (&alpha.host, &beta.host);
    if ha.subset != hb.subset || ha.field() != hb.field() || ha.module.op_count() != hb.module.op_count() {
        return Err(Error::IncompatibleHosts("cup product needs a common operator subset".into()));
    }
    let prod = tensor_module(&ha.module, &hb.module)?;
    let host = if hb.module.dim() == 1 && hb.module.ops().iter().all(Mat::is_zero) {
        // M ⊗ trivial is M itself
        if ha.module == prod {
            ha.clone()
        } else {
            KoszulHost::new(&prod, &ha.subset)?
        }
    } else {
        KoszulHost::new(&prod, &ha.subset)?
    };
    let rep = cup_cochains(
        ha.field(),
        ha.l(),
        ha.module.dim(),
        hb.module.dim(),
        &alpha.representative,
        alpha.degree,
        &beta.representative,
        beta.degree,
    )?;
    class(&host, alpha.degree + beta.degree, rep)
}

/// `0 -> M -> E -> K -> 0`: `E = M ⊕ K` with `x_i` acting by `[[x_i, ξ_i], [0, 0]]`.
#[derive(Clone, Debug)]
pub struct Extension {
    pub sub: OperatorModule,
    pub module: OperatorModule,
    /// `ξ_i` for every operator.
    pub xi: Vec<Vec<Scalar>>,
}

/// Takes raw components `ξ_i` (one `dim M` vector per operator) and checks
/// `x_i ξ_j = x_j ξ_i`.
pub fn extension_from_components(m: &OperatorModule, xi: &[Vec<Scalar>]) -> Result<Extension> {
    let f = m.field();
    if xi.len() != m.op_count() || xi.iter().any(|v| v.len() != m.dim()) {
        return Err(Error::Shape("one component of length dim M per operator".into()));
    }
    for i in 0..xi.len() {
        for j in i + 1..xi.len() {
            if m.op(i).apply(&xi[j])? != m.op(j).apply(&xi[i])? {
                return Err(Error::CocycleViolation(format!(
                    "{} ξ_{} != {} ξ_{}",
                    m.labels()[i],
                    j,
                    m.labels()[j],
                    i
                )));
            }
        }
    }
    let n = m.dim();
    let ops = m
        .ops()
        .iter()
        .zip(xi)
        .map(|(x, v)| {
            let mut e = Mat::zeros(f, n + 1, n + 1);
            e.set_block(0, 0, x);
            e.set_block(0, n, &Mat::column_vector(f, v));
            e
        })
        .collect();
    let module = OperatorModule::new(f, n + 1, ops, m.labels().to_vec())?;
    Ok(Extension { sub: m.clone(), module, xi: xi.to_vec() })
}

/// The extension classified by a degree-1 class on `K(all operators, M)`.
pub fn extension_from_cocycle(m: &OperatorModule, xi: &CohClass) -> Result<Extension> {
    if xi.degree != 1 {
        return Err(Error::Precondition("extension class must have degree 1".into()));
    }
    if xi.host.module != *m || xi.host.subset != m.all_indices() {
        return Err(Error::IncompatibleHosts("class must live on K(all operators, M)".into()));
    }
    let n = m.dim();
    let comps: Vec<Vec<Scalar>> = (0..m.op_count())
        .map(|i| xi.representative[i * n..(i + 1) * n].to_vec())
        .collect();
    extension_from_components(m, &comps)
}

/// Lifts `v` to `E` with the given `M`-part (zero by default), applies `d`
/// and reads off the class in `K(M)`.
pub fn connecting_map_with_lift(
    ext: &Extension,
    sub_host: &Arc<KoszulHost>,
    v: &CohClass,
    m_part: Option<&[Scalar]>,
) -> Result<CohClass> {
    let f = ext.sub.field().clone();
    let n = ext.sub.dim();
    let l = ext.sub.op_count();
    if v.host.module.dim() != 1 || v.host.subset != ext.sub.all_indices() {
        return Err(Error::IncompatibleHosts("v must live on K(all operators, trivial)".into()));
    }
    if sub_host.module != ext.sub || sub_host.subset != ext.sub.all_indices() {
        return Err(Error::IncompatibleHosts("sub host must be K(all operators, M)".into()));
    }
    let q = v.degree;
    let count = subsets(l, q).len();
    let mut lift = vec![f.zero(); count * (n + 1)];
    for s in 0..count {
        if let Some(mp) = m_part {
            lift[s * (n + 1)..s * (n + 1) + n].clone_from_slice(&mp[s * n..(s + 1) * n]);
        }
        lift[s * (n + 1) + n] = v.representative[s].clone();
    }
    let ke = koszul_cochain(&ext.module, &ext.module.all_indices())?;
    let image = ke.d(q as i32).apply(&lift)?;
    let next = subsets(l, q + 1).len();
    let mut out = Vec::with_capacity(next * n);
    for s in 0..next {
        if !f.is_zero(&image[s * (n + 1) + n]) {
            return Err(Error::Precondition("lift image leaves the subcomplex".into()));
        }
        out.extend_from_slice(&image[s * (n + 1)..s * (n + 1) + n]);
    }
    class(sub_host, q + 1, out)
}

pub fn connecting_map(ext: &Extension, sub_host: &Arc<KoszulHost>, v: &CohClass) -> Result<CohClass> {
    connecting_map_with_lift(ext, sub_host, v, None)
}

/// Sign relating `ξ ∪ 1` and `δ(1)` on a one-operator line with `ξ = e_0^*`.
pub fn empirical_cup_delta_sign(field: &FieldSpec) -> Result<i64> {
    let m = OperatorModule::trivial(field, 1);
    let host = KoszulHost::new(&m, &[0])?;
    let xi = class(&host, 1, vec![field.one()])?;
    let triv_host = KoszulHost::new(&OperatorModule::trivial(field, 1), &[0])?;
    let one = class(&triv_host, 0, vec![field.one()])?;
    let ext = extension_from_cocycle(&m, &xi)?;
    let delta = connecting_map(&ext, &host, &one)?;
    let cup = cup_product(&xi, &one)?;
    if delta.coordinates == cup.coordinates {
        Ok(1)
    } else if delta.coordinates.iter().map(|s| field.neg(s)).collect::<Vec<_>>() == cup.coordinates {
        Ok(-1)
    } else {
        Err(Error::Precondition("cup and connecting map disagree beyond sign".into()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CupDeltaReport {
    pub degree: usize,
    pub cup: Vec<String>,
    pub delta: Vec<String>,
    pub equal: bool,
}

/// `ξ ∪ v = CUP_DELTA_SIGN · δ(v)` in cohomology coordinates.
pub fn cup_equals_delta_check(m: &OperatorModule, xi: &CohClass, v: &CohClass) -> Result<CupDeltaReport> {
    let f = m.field();
    let ext = extension_from_cocycle(m, xi)?;
    let delta = connecting_map(&ext, &xi.host, v)?;
    let cup = cup_product(xi, v)?;
    let scaled: Vec<Scalar> = delta.coordinates.iter().map(|s| f.mul(&f.from_i64(CUP_DELTA_SIGN), s)).collect();
    Ok(CupDeltaReport {
        degree: cup.degree,
        equal: scaled == cup.coordinates,
        cup: cup.coordinates.iter().map(|s| f.format_scalar(s)).collect(),
        delta: delta.coordinates.iter().map(|s| f.format_scalar(s)).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XiPairing {
    /// Index of ξ in the basis of `H^1_an(M)`.
    pub xi: usize,
    /// Matrix of `δ_ξ: H^1_cts(triv) -> H^2_cts(M)`, row-major text.
    pub delta_matrix: Vec<Vec<String>>,
    pub kernel_dim: usize,
    /// Image of `H^1_cts(E) -> H^1_cts(triv)` is killed and equals the kernel.
    pub les_mechanism: bool,
    /// `δ_ξ(H^1_an(triv)) ⊆ ι(H^2_an(M))`.
    pub factorization: bool,
    /// `H^1_an(triv) ⊆ ker δ_ξ` on the nose.
    pub analytic_in_kernel: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingReport {
    pub d: usize,
    pub h1_an: usize,
    pub h2_an: usize,
    pub h1_cts_triv: usize,
    pub h2_cts: usize,
    pub per_xi: Vec<XiPairing>,
    /// Columns `(ξ, i)` for `i >= 2`, giving `δ_ξ(e_i^*)` in `H^2_cts(M)`.
    pub pairing_rank: usize,
    pub pairing_matrix: Vec<Vec<String>>,
    pub inclusion_is_chain_map: bool,
    pub les_exact: bool,
    pub note: String,
}

impl PairingReport {
    pub fn ingredients_hold(&self) -> bool {
        self.inclusion_is_chain_map
            && self.les_exact
            && self.per_xi.iter().all(|x| x.les_mechanism && x.factorization)
    }
}

fn mat_text(m: &Mat) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|s| m.field().format_scalar(s)).collect()).collect()
}

/// The inclusion `K(x_0, x_1; M) -> K(x_0..x_d; M)` on subsets of `{0, 1}`.
pub fn analytic_inclusion(h: &HerrInstance) -> Result<ChainMap> {
    let m = h.module();
    let f = m.field().clone();
    let n = m.dim();
    let l = m.op_count();
    let an = koszul_cochain(m, &[0, 1])?;
    let cts = koszul_cochain(m, &m.all_indices())?;
    ChainMap::from_fn(an.clone(), cts.clone(), |q| {
        let mut out = Mat::zeros(&f, cts.dim(q), an.dim(q));
        if !(0..=2).contains(&q) {
            return Ok(out);
        }
        let big = subsets(l, q as usize);
        for (c, &s) in subsets(2, q as usize).iter().enumerate() {
            let r = big.binary_search(&s).unwrap();
            out.set_block(r * n, c * n, &Mat::identity(&f, n));
        }
        Ok(out)
    })
}

pub fn pairing_report(h: &HerrInstance) -> Result<PairingReport> {
    if !h.is_analytic() {
        return Err(Error::Precondition("pairing report needs an analytic instance".into()));
    }
    let m = h.module();
    let f = m.field().clone();
    let d = h.d();
    let all = m.all_indices();
    let an_host = KoszulHost::new(m, &[0, 1])?;
    let cts_host = KoszulHost::new(m, &all)?;
    let triv = OperatorModule::trivial(&f, d + 1);
    let triv_host = KoszulHost::new(&triv, &all)?;
    let incl = analytic_inclusion(h);
    let inclusion_is_chain_map = incl.is_ok();
    let incl = incl?;
    let h1_an = an_host.h(1);
    let h2_an = an_host.h(2);
    let h2_cts = cts_host.h(2);
    let h1_triv = triv_host.h(1);

    // ι_* on H^2
    let an_reps2 = an_host.cohomology().representatives(2, an_host.complex().dim(2));
    let iota2 = cts_host.cohomology().coordinates_matrix(2, &incl.map(2).mul(&an_reps2)?)?;
    let iota_rank = rank(&iota2);

    let mut per_xi = Vec::new();
    let mut les_exact = true;
    let mut pairing_cols: Vec<Vec<Scalar>> = Vec::new();
    let an_reps1 = an_host.cohomology().representatives(1, an_host.complex().dim(1));
    for j in 0..h1_an {
        let xi = class(&cts_host, 1, incl.map(1).apply(&an_reps1.column(j))?)?;
        let ext = extension_from_cocycle(m, &xi)?;
        let mut cols = Vec::new();
        for i in 0..h1_triv {
            let v = basis_class(&triv_host, 1, i)?;
            cols.push(connecting_map(&ext, &cts_host, &v)?.coordinates);
        }
        let dm = Mat::from_columns(&f, h2_cts, &cols);
        let kernel_dim = h1_triv - rank(&dm);

        // H^1(E) -> H^1(triv) via the last coordinate of each component
        let e_host = KoszulHost::new(&ext.module, &all)?;
        let n1 = m.dim() + 1;
        let e_reps = e_host.cohomology().representatives(1, e_host.complex().dim(1));
        let proj_cols: Vec<Vec<Scalar>> = (0..e_reps.cols())
            .map(|c| {
                let rep = e_reps.column(c);
                let v: Vec<Scalar> = (0..all.len()).map(|s| rep[s * n1 + n1 - 1].clone()).collect();
                triv_host.cohomology().coordinates(1, &v)
            })
            .collect::<Result<Vec<_>>>()?;
        let proj = Mat::from_columns(&f, h1_triv, &proj_cols);
        let killed = dm.mul(&proj)?.is_zero();
        let les_mechanism = killed && rank(&proj) == kernel_dim;

        // inclusion K(M) -> K(E) and its long exact sequence
        let ke = e_host.complex().clone();
        let km = cts_host.complex().clone();
        let n = m.dim();
        let inc = ChainMap::from_fn(km.clone(), ke.clone(), |q| {
            let blocks = km.dim(q) / n.max(1);
            let mut e = Mat::zeros(&f, n1, n);
            e.set_block(0, 0, &Mat::identity(&f, n));
            Mat::identity(&f, blocks).kron(&e)
        })?;
        les_exact &= cone_les_check(&inc)?.exact;

        let an_cols = dm.select_cols(&[0, 1]);
        let factorization = rank(&Mat::hstack(&f, h2_cts, &[&iota2, &an_cols])?) == iota_rank;
        let analytic_in_kernel = an_cols.is_zero();
        for i in 2..h1_triv {
            pairing_cols.push(dm.column(i));
        }
        per_xi.push(XiPairing {
            xi: j,
            delta_matrix: mat_text(&dm),
            kernel_dim,
            les_mechanism,
            factorization,
            analytic_in_kernel,
        });
    }
    let pm = Mat::from_columns(&f, h2_cts, &pairing_cols);
    Ok(PairingReport {
        d,
        h1_an,
        h2_an,
        h1_cts_triv: h1_triv,
        h2_cts,
        pairing_rank: rank(&pm),
        pairing_matrix: mat_text(&pm),
        per_xi,
        inclusion_is_chain_map,
        les_exact,
        note: "nondegeneracy and surjectivity need H^0 = H^2_an = 0 with H^1_an != 0, impossible in finite dimension (chi = 0)".into(),
    })
}
