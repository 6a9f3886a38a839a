use crate::error::{Error, Result};
use crate::optimize::{multistart, stream_rng, UnitaryChart};
use crate::qcore::{eig_hermitian, eigvals_unchecked, marginal, ComplexMatrix, DensityMatrix};
use crate::states::random_unitary;

use super::classicality::{classical_basis, group_first};
use super::entropy::{entropy, shannon_bits};
use super::result::{Diagnostics, MeasureResult, OptBudget};

/// Largest measured-party dimension the basis search accepts by default.
pub const DISCORD_DIM_CAP: usize = 4;

/// Objective values at or below this are treated as an exact zero.
pub(crate) const ZERO_FLOOR: f64 = 1e-12;

/// Post-measurement conditional entropy `Σ_j p_j S(rest | j)` for a
/// measurement of the leading `dm`-dimensional factor in `basis`.
pub(crate) fn conditional_entropy(rho: &ComplexMatrix, dm: usize, basis: &ComplexMatrix) -> f64 {
    let dr = rho.nrows() / dm;
    let k = basis.kronecker(&ComplexMatrix::identity(dr, dr));
    let x = k.adjoint() * rho * &k;
    let mut total = 0.0;
    for j in 0..dm {
        let block = x.view((j * dr, j * dr), (dr, dr)).into_owned();
        let p: f64 = block.diagonal().iter().map(|z| z.re).sum();
        if p <= 1e-15 {
            continue;
        }
        let ev = eigvals_unchecked(&crate::qcore::hermitian_part(&block.unscale(p)));
        total += p * shannon_bits(ev);
    }
    total
}

/// One-sided discord with rank-one projective measurements on `measured`:
/// `I(M:R) - max_Π [S(R) - Σ_j p_j S(R|j)]`, minimized over bases of `M`
/// by multistart Nelder-Mead. The computational basis, the eigenbasis of
/// `ρ_M` and the block-diagonalizing basis are always included as starts.
pub fn discord_one_sided<S: AsRef<str>>(
    state: &DensityMatrix,
    measured: &[S],
    budget: &OptBudget,
) -> Result<MeasureResult> {
    let layout = state.layout();
    let dm = layout.group_dim(measured)?;
    let cap = budget.dim_cap.unwrap_or(DISCORD_DIM_CAP);
    if dm > cap {
        return Err(Error::Unsupported(format!(
            "measured party has dimension {dm}, above the cap {cap}"
        )));
    }
    if layout.positions(measured)?.len() == layout.len() {
        return Err(crate::error::invalid("measured party must leave a nonempty rest"));
    }
    let (perm, _) = group_first(state, measured)?;
    let rho_m = marginal(state, measured)?;
    let base = entropy(&rho_m)? - entropy(state)?;

    let mut bases = vec![
        ComplexMatrix::identity(dm, dm),
        eig_hermitian(rho_m.matrix())?.vectors,
        classical_basis(state, measured)?.basis,
    ];
    let canonical = bases.len();
    for r in 0..budget.restarts {
        bases.push(random_unitary(dm, &mut stream_rng(budget.seed, r as u64))?);
    }
    let charts: Vec<UnitaryChart> = bases.into_iter().map(UnitaryChart::new).collect();
    let starts = vec![vec![0.0; dm * dm]; charts.len()];
    let rho = perm.matrix().clone();
    let objective = |i: usize, x: &[f64]| base + conditional_entropy(&rho, dm, &charts[i].unitary(x));
    let res = multistart(objective, &starts, &budget.local, Some(ZERO_FLOOR));
    let value = res.best.value.max(0.0);
    Ok(MeasureResult {
        measure: "discord".into(),
        value,
        diagnostics: Some(Diagnostics::from_multistart(&res, canonical)),
    })
}
