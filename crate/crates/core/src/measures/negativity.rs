use crate::error::{invalid, Result};
use crate::partition::Partition;
use crate::qcore::{eigvals_hermitian, partial_transpose, DensityMatrix};

/// Sum of the magnitudes of the negative eigenvalues of the partial
/// transpose on the cut's first group.
pub fn negativity(state: &DensityMatrix, cut: &Partition) -> Result<f64> {
    let spectrum = pt_spectrum(state, cut)?;
    Ok(spectrum.iter().filter(|&&l| l < 0.0).map(|l| -l).sum())
}

/// `(‖ρ^Γ‖₁ - 1) / 2`, the trace-norm route to the same quantity.
pub fn negativity_trace_norm(state: &DensityMatrix, cut: &Partition) -> Result<f64> {
    let spectrum = pt_spectrum(state, cut)?;
    let norm: f64 = spectrum.iter().map(|l| l.abs()).sum();
    Ok(0.5 * (norm - 1.0))
}

fn pt_spectrum(state: &DensityMatrix, cut: &Partition) -> Result<Vec<f64>> {
    if cut.len() != 2 {
        return Err(invalid("negativity needs a two-group cut"));
    }
    cut.check_covers(state.layout())?;
    let pt = partial_transpose(state, cut.group(0))?;
    eigvals_hermitian(&pt)
}
