//! Global quantum discord of multipartite states and the monogamy checks
//! built on it.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::measures::{
    classical_basis, discord_one_sided, entropy, local_dephase, shannon_bits, Diagnostics,
    MeasureResult, OptBudget, ZERO_FLOOR,
};
use crate::optimize::{multistart, stream_rng, UnitaryChart};
use crate::partition::{labels, Partition};
use crate::qcore::{
    eig_hermitian, marginal, permute_factors, unitarity_residual, ComplexMatrix, DensityMatrix,
};
use crate::states::random_unitary;

/// Largest group dimension the GQD basis search accepts by default.
pub const GQD_GROUP_DIM_CAP: usize = 6;

/// Allowed shortfall of the monogamy slack, covering optimizer imprecision.
pub const MONOGAMY_TOL: f64 = 1e-4;

/// One orthonormal basis (columns of a unitary) per partition group.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBases {
    bases: Vec<ComplexMatrix>,
}

impl MeasurementBases {
    pub fn new(bases: Vec<ComplexMatrix>) -> Result<Self> {
        for (i, b) in bases.iter().enumerate() {
            let r = unitarity_residual(b);
            if r > 1e-10 {
                return Err(invalid(format!("basis {i} is not unitary (residual {r:e})")));
            }
        }
        Ok(Self { bases })
    }

    pub fn computational(dims: &[usize]) -> Self {
        Self { bases: dims.iter().map(|&d| ComplexMatrix::identity(d, d)).collect() }
    }

    pub fn bases(&self) -> &[ComplexMatrix] {
        &self.bases
    }
}

fn group_dims(state: &DensityMatrix, parts: &Partition) -> Result<Vec<usize>> {
    parts.groups().iter().map(|g| state.layout().group_dim(g)).collect()
}

/// `Σ_j Π^j ρ Π^j` for the product projectors of the per-group bases.
pub fn multilocal_dephase(
    state: &DensityMatrix,
    parts: &Partition,
    bases: &MeasurementBases,
) -> Result<DensityMatrix> {
    parts.check_covers(state.layout())?;
    if bases.bases.len() != parts.len() {
        return Err(invalid("need one basis per group"));
    }
    let mut out = state.clone();
    for (g, b) in parts.groups().iter().zip(&bases.bases) {
        out = local_dephase(&out, g, b)?;
    }
    Ok(out)
}

/// State with factors reordered group by group, plus the group dimensions.
fn grouped(state: &DensityMatrix, parts: &Partition) -> Result<(DensityMatrix, Vec<usize>)> {
    let mut order = Vec::new();
    for g in parts.groups() {
        order.extend(state.layout().positions(g)?);
    }
    Ok((permute_factors(state, &order)?, group_dims(state, parts)?))
}

/// Generalized mutual information of the outcome distribution of a product
/// measurement: `Σ_g H(p_g) - H(p)`.
fn measured_information(rho: &ComplexMatrix, dims: &[usize], bases: &[ComplexMatrix]) -> f64 {
    let mut w = bases[0].clone();
    for b in &bases[1..] {
        w = w.kronecker(b);
    }
    let m = rho * &w;
    let d = rho.nrows();
    let p: Vec<f64> = (0..d)
        .map(|k| (0..d).map(|r| (w[(r, k)].conj() * m[(r, k)]).re).sum::<f64>().max(0.0))
        .collect();
    let mut marginal_h = 0.0;
    let mut stride = d;
    for &dg in dims {
        let inner = stride / dg;
        let mut pg = vec![0.0; dg];
        for (k, &pk) in p.iter().enumerate() {
            pg[(k / inner) % dg] += pk;
        }
        marginal_h += shannon_bits(pg);
        stride = inner;
    }
    marginal_h - shannon_bits(p)
}

/// Global quantum discord `min_Φ [I(a_1|…|a_N) - I(Φ(ρ))]` over product
/// rank-one projective measurements.
pub fn gqd(state: &DensityMatrix, parts: &Partition, budget: &OptBudget) -> Result<MeasureResult> {
    parts.check_covers(state.layout())?;
    if parts.len() < 2 {
        return Err(invalid("GQD needs at least two parties"));
    }
    let cap = budget.dim_cap.unwrap_or(GQD_GROUP_DIM_CAP);
    let (perm, dims) = grouped(state, parts)?;
    if let Some((g, d)) = dims.iter().enumerate().find(|(_, &d)| d > cap) {
        return Err(Error::Unsupported(format!(
            "group {} has dimension {d}, above the cap {cap}",
            parts.group(g).join(",")
        )));
    }

    let mut info = -entropy(state)?;
    let mut eigen = Vec::with_capacity(parts.len());
    let mut blockdiag = Vec::with_capacity(parts.len());
    for g in parts.groups() {
        let m = marginal(state, g)?;
        info += entropy(&m)?;
        eigen.push(eig_hermitian(m.matrix())?.vectors);
        blockdiag.push(classical_basis(state, g)?.basis);
    }

    let mut start_bases: Vec<Vec<ComplexMatrix>> = vec![
        dims.iter().map(|&d| ComplexMatrix::identity(d, d)).collect(),
        eigen,
        blockdiag,
    ];
    let canonical = start_bases.len();
    for r in 0..budget.restarts {
        let mut rng = stream_rng(budget.seed, r as u64);
        start_bases.push(
            dims.iter()
                .map(|&d| random_unitary(d, &mut rng))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let charts: Vec<Vec<UnitaryChart>> = start_bases
        .into_iter()
        .map(|bs| bs.into_iter().map(UnitaryChart::new).collect())
        .collect();
    let n_params: usize = dims.iter().map(|d| d * d).sum();
    let starts = vec![vec![0.0; n_params]; charts.len()];
    let rho = perm.matrix().clone();
    let objective = |i: usize, x: &[f64]| {
        let mut offset = 0;
        let bases: Vec<ComplexMatrix> = charts[i]
            .iter()
            .map(|c| {
                let k = c.n_params();
                let u = c.unitary(&x[offset..offset + k]);
                offset += k;
                u
            })
            .collect();
        info - measured_information(&rho, &dims, &bases)
    };
    let res = multistart(objective, &starts, &budget.local, Some(ZERO_FLOOR));
    Ok(MeasureResult {
        measure: "gqd".into(),
        value: res.best.value.max(0.0),
        diagnostics: Some(Diagnostics::from_multistart(&res, canonical)),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MonogamyTerm {
    /// Two-party grouping such as `a,abar|b,bbar`.
    pub partition: String,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonogamyReport {
    pub partition: String,
    pub lhs: f64,
    pub rhs_terms: Vec<MonogamyTerm>,
    /// `lhs - Σ rhs`.
    pub slack: f64,
    pub tolerance: f64,
    pub holds: bool,
}

/// `δ_g(a_1|…|a_N) ≥ Σ_{k=1}^{N-1} δ_g(a_1…a_k | a_{k+1})`, each right-hand
/// term being a two-party GQD on the marginal of the groups involved.
pub fn monogamy_check(state: &DensityMatrix, parts: &Partition, budget: &OptBudget) -> Result<MonogamyReport> {
    if parts.len() < 3 {
        return Err(invalid("monogamy check needs at least three parties"));
    }
    let lhs = gqd(state, parts, budget)?.value;
    let mut rhs_terms = Vec::with_capacity(parts.len() - 1);
    for k in 1..parts.len() {
        let head: Vec<String> = parts.groups()[..k].iter().flatten().cloned().collect();
        let next = parts.group(k).to_vec();
        let mut keep = head.clone();
        keep.extend(next.iter().cloned());
        let reduced = marginal(state, &keep)?;
        let cut = Partition::from_groups(vec![head, next])?;
        let value = gqd(&reduced, &cut, budget)?.value;
        rhs_terms.push(MonogamyTerm { partition: cut.to_string(), value });
    }
    let slack = lhs - rhs_terms.iter().map(|t| t.value).sum::<f64>();
    Ok(MonogamyReport {
        partition: parts.to_string(),
        lhs,
        rhs_terms,
        slack,
        tolerance: MONOGAMY_TOL,
        holds: slack >= -MONOGAMY_TOL,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PolygamyReport {
    /// Discord of the `ab|aux` cut, measured on the ancillas.
    pub delta_ab_aux: f64,
    /// Discord of `Tr_b σ`, measured on `a`.
    pub delta_a_aux: f64,
    /// Discord of `Tr_a σ`, measured on `b`.
    pub delta_b_aux: f64,
    /// Symmetric two-party GQD of `ab|aux`, when both groups fit the GQD cap.
    pub gqd_ab_aux: Option<f64>,
    /// `delta_a_aux > delta_ab_aux + 1e-6`.
    pub polygamous: bool,
}

/// Discord before and after discarding `b` (or `a`) from a four-factor
/// extension `[a, ā, b, b̄]`.
pub fn polygamy_witness(extension: &DensityMatrix, budget: &OptBudget) -> Result<PolygamyReport> {
    use labels::*;
    let layout = extension.layout();
    for l in [A, ABAR, B, BBAR] {
        layout.index_of(l)?;
    }
    let aux = [ABAR, BBAR];
    let aux_dim = layout.group_dim(&aux)?;
    let aux_budget = OptBudget { dim_cap: Some(aux_dim.max(budget.dim_cap.unwrap_or(0))), ..*budget };
    let delta_ab_aux = discord_one_sided(extension, &aux, &aux_budget)?.value;
    let delta_a_aux = discord_one_sided(&marginal(extension, &[A, ABAR, BBAR])?, &[A], budget)?.value;
    let delta_b_aux = discord_one_sided(&marginal(extension, &[ABAR, B, BBAR])?, &[B], budget)?.value;
    let ab_dim = layout.group_dim(&[A, B])?;
    let gqd_ab_aux = if ab_dim.max(aux_dim) <= GQD_GROUP_DIM_CAP {
        let cut = Partition::cut(&[A, B], &aux)?;
        Some(gqd(extension, &cut, budget)?.value)
    } else {
        None
    };
    Ok(PolygamyReport {
        delta_ab_aux,
        delta_a_aux,
        delta_b_aux,
        gqd_ab_aux,
        polygamous: delta_a_aux > delta_ab_aux + 1e-6,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::entropy;
    use crate::qcore::{kron_compose, max_abs_diff, SubsystemLayout, C1};
    use crate::states::{build_rsp_extension, RspVariant};
    use num_complex::Complex64;

    fn bell() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let z = Complex64::default();
        DensityMatrix::pure(SubsystemLayout::new([("a", 2), ("b", 2)]).unwrap(), &[C1 * s, z, z, C1 * s]).unwrap()
    }

    #[test]
    fn bell_dephasing_and_gqd() {
        let b = bell();
        let parts = Partition::cut(&["a"], &["b"]).unwrap();
        let d = multilocal_dephase(&b, &parts, &MeasurementBases::computational(&[2, 2])).unwrap();
        let mut expect = ComplexMatrix::zeros(4, 4);
        expect[(0, 0)] = Complex64::new(0.5, 0.0);
        expect[(3, 3)] = Complex64::new(0.5, 0.0);
        assert!(max_abs_diff(d.matrix(), &expect) < 1e-15);
        let twice = multilocal_dephase(&d, &parts, &MeasurementBases::computational(&[2, 2])).unwrap();
        assert!(max_abs_diff(twice.matrix(), d.matrix()) < 1e-15);
        assert!(entropy(&d).unwrap() >= entropy(&b).unwrap());
        let r = gqd(&b, &parts, &OptBudget::default().with_restarts(4)).unwrap();
        assert!((r.value - 1.0).abs() < 1e-4, "{}", r.value);
    }

    #[test]
    fn product_of_three_qubits_is_monogamous_with_zeros() {
        let q = |l: &str, p: f64| {
            let m = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
                Complex64::new(p, 0.0),
                Complex64::new(1.0 - p, 0.0),
            ]));
            DensityMatrix::new(SubsystemLayout::single(l, 2).unwrap(), m).unwrap()
        };
        let st = kron_compose(&[&q("x", 0.2), &q("y", 0.6), &q("z", 0.9)]).unwrap();
        let parts = Partition::new(&[&["x"], &["y"], &["z"]]).unwrap();
        let r = monogamy_check(&st, &parts, &OptBudget::default().with_restarts(2)).unwrap();
        assert!(r.lhs.abs() < 1e-12 && r.rhs_terms.iter().all(|t| t.value.abs() < 1e-12));
        assert!(r.holds);
        assert_eq!(r.rhs_terms[1].partition, "x,y|z");
    }

    #[test]
    fn group_cap_and_party_count() {
        let st = build_rsp_extension(RspVariant::Eight).state;
        let cut = Partition::cut(&[labels::A, labels::ABAR], &[labels::B, labels::BBAR]).unwrap();
        assert!(matches!(gqd(&st, &cut, &OptBudget::default()), Err(Error::Unsupported(_))));
        let r = gqd(&st, &cut, &OptBudget::default().with_dim_cap(8)).unwrap();
        assert!(r.value < 1e-12);
        assert!(gqd(&bell(), &Partition::new(&[&["a", "b"]]).unwrap(), &OptBudget::default()).is_err());
    }

    #[test]
    fn bases_must_be_unitary() {
        assert!(MeasurementBases::new(vec![ComplexMatrix::zeros(2, 2)]).is_err());
    }
}
