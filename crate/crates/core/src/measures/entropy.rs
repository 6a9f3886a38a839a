use crate::error::{invalid, Result};
use crate::partition::Partition;
use crate::qcore::{eig_hermitian, eigvals_hermitian, marginal, DensityMatrix};

/// `-Σ λ log2 λ` over a spectrum, with `0 log 0 = 0`.
pub fn shannon_bits(values: impl IntoIterator<Item = f64>) -> f64 {
    values
        .into_iter()
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum()
}

/// Von Neumann entropy in bits.
pub fn entropy(state: &DensityMatrix) -> Result<f64> {
    Ok(shannon_bits(eigvals_hermitian(state.matrix())?))
}

/// `S(left) + S(right) - S(state)` for a two-group cut covering the layout.
pub fn mutual_information(state: &DensityMatrix, cut: &Partition) -> Result<f64> {
    if cut.len() != 2 {
        return Err(invalid("mutual information needs a two-group cut"));
    }
    cut.check_covers(state.layout())?;
    let left = marginal(state, cut.group(0))?;
    let right = marginal(state, cut.group(1))?;
    Ok(entropy(&left)? + entropy(&right)? - entropy(state)?)
}

/// Relative entropy `S(ρ‖σ) = tr ρ (log2 ρ - log2 σ)` in bits, from the
/// eigendecompositions of both arguments. Infinite when the support of `ρ`
/// is not contained in that of `σ`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.layout() != sigma.layout() {
        return Err(invalid("relative entropy needs identical layouts"));
    }
    let er = eig_hermitian(rho.matrix())?;
    let es = eig_hermitian(sigma.matrix())?;
    let overlaps = er.vectors.adjoint() * &es.vectors;
    let mut cross = 0.0;
    for (i, &li) in er.values.iter().enumerate() {
        if li <= 0.0 {
            continue;
        }
        for (j, &mj) in es.values.iter().enumerate() {
            let w = overlaps[(i, j)].norm_sqr();
            if w < 1e-30 {
                continue;
            }
            if mj <= 0.0 {
                return Ok(f64::INFINITY);
            }
            cross += li * w * mj.log2();
        }
    }
    Ok(-shannon_bits(er.values.iter().copied()) - cross)
}
