use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::optimize::stream_rng;
use crate::partition::Partition;
use crate::qcore::{
    eig_hermitian_unchecked, max_abs_diff, permute_factors, unitarity_residual, ComplexMatrix,
    DensityMatrix,
};

/// Dephasing must reproduce the state within this (max-abs) to count as classical.
pub const CLASSICAL_TOL: f64 = 1e-10;

const COMBINATION_SEED: u64 = 0x5eed_c1a5;

/// Move the factors named in `group` to the front, keeping relative order.
/// Returns the permuted state and the permutation used.
pub(crate) fn group_first<S: AsRef<str>>(
    state: &DensityMatrix,
    group: &[S],
) -> Result<(DensityMatrix, Vec<usize>)> {
    let layout = state.layout();
    let front = layout.positions(group)?;
    if front.is_empty() {
        return Err(invalid("empty group"));
    }
    let mut order = front.clone();
    order.extend((0..layout.len()).filter(|i| !front.contains(i)));
    Ok((permute_factors(state, &order)?, order))
}

pub(crate) fn inverse(order: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        inv[old] = new;
    }
    inv
}

/// Candidate local basis on `group` obtained by diagonalizing a fixed
/// generic Hermitian combination of the conditional blocks
/// `(I ⊗ <l|) ρ (I ⊗ |m>)` over the rest of the system. When the state is
/// classical on `group` every block is diagonal in the same basis, and so is
/// the combination.
#[derive(Debug, Clone)]
pub struct BasisCandidate {
    pub basis: ComplexMatrix,
    /// Smallest gap between adjacent eigenvalues of the combination,
    /// relative to its spectral spread; near zero means the basis is ambiguous.
    pub min_relative_gap: f64,
}

pub fn classical_basis<S: AsRef<str>>(state: &DensityMatrix, group: &[S]) -> Result<BasisCandidate> {
    let (perm, _) = group_first(state, group)?;
    let dg = perm.layout().group_dim(group)?;
    let dr = perm.dim() / dg;
    let rho = perm.matrix();
    let mut rng = stream_rng(COMBINATION_SEED, (dg * 1000 + dr) as u64);
    let mut h = ComplexMatrix::zeros(dg, dg);
    for l in 0..dr {
        for m in 0..dr {
            let w = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            for i in 0..dg {
                for j in 0..dg {
                    let b = rho[(i * dr + l, j * dr + m)];
                    h[(i, j)] += w * b;
                    h[(j, i)] += (w * b).conj();
                }
            }
        }
    }
    let e = eig_hermitian_unchecked(&h);
    let spread = (e.values.last().unwrap() - e.values[0]).abs().max(f64::MIN_POSITIVE);
    let min_gap = e
        .values
        .windows(2)
        .map(|w| (w[1] - w[0]) / spread)
        .fold(f64::INFINITY, f64::min);
    Ok(BasisCandidate { basis: e.vectors, min_relative_gap: min_gap })
}

/// Dephase `group` in `basis` (columns), identity on everything else.
pub fn local_dephase<S: AsRef<str>>(
    state: &DensityMatrix,
    group: &[S],
    basis: &ComplexMatrix,
) -> Result<DensityMatrix> {
    let (perm, order) = group_first(state, group)?;
    let dg = perm.layout().group_dim(group)?;
    if basis.nrows() != dg || basis.ncols() != dg {
        return Err(invalid(format!("basis must be {dg}x{dg} for group {:?}", names(group))));
    }
    let dr = perm.dim() / dg;
    let w = basis.kronecker(&ComplexMatrix::identity(dr, dr));
    let mut x = w.adjoint() * perm.matrix() * &w;
    for r in 0..x.nrows() {
        for c in 0..x.ncols() {
            if r / dr != c / dr {
                x[(r, c)] = Complex64::new(0.0, 0.0);
            }
        }
    }
    let back = &w * x * w.adjoint();
    let out = DensityMatrix::new(perm.layout().clone(), back)?;
    permute_factors(&out, &inverse(&order))
}

fn names<S: AsRef<str>>(group: &[S]) -> Vec<&str> {
    group.iter().map(|s| s.as_ref()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Classical,
    NotClassical,
    /// Not classical in any basis tried, but the candidate bases were
    /// ambiguous (degenerate), so a classical basis could have been missed.
    UndecidedNegative,
}

#[derive(Debug, Clone)]
pub struct ClassicalityReport {
    pub classical: bool,
    pub verdict: Verdict,
    /// Max-abs change of the state under the best joint dephasing tried.
    pub residual: f64,
    pub basis_left: ComplexMatrix,
    pub basis_right: ComplexMatrix,
}

fn joint_dephasing_residual(
    state: &DensityMatrix,
    cut: &Partition,
    left: &ComplexMatrix,
    right: &ComplexMatrix,
) -> Result<f64> {
    let once = local_dephase(state, cut.group(0), left)?;
    let twice = local_dephase(&once, cut.group(1), right)?;
    Ok(max_abs_diff(twice.matrix(), state.matrix()))
}

/// Whether some product basis leaves `state` invariant under joint dephasing
/// across `cut`. Tries the block-diagonalizing bases of both sides first,
/// then the `hint` bases when supplied.
pub fn is_classical(
    state: &DensityMatrix,
    cut: &Partition,
    hint: Option<(&ComplexMatrix, &ComplexMatrix)>,
) -> Result<ClassicalityReport> {
    if cut.len() != 2 {
        return Err(invalid("classicality test needs a two-group cut"));
    }
    cut.check_covers(state.layout())?;
    let left = classical_basis(state, cut.group(0))?;
    let right = classical_basis(state, cut.group(1))?;
    let residual = joint_dephasing_residual(state, cut, &left.basis, &right.basis)?;
    if residual <= CLASSICAL_TOL {
        return Ok(ClassicalityReport {
            classical: true,
            verdict: Verdict::Classical,
            residual,
            basis_left: left.basis,
            basis_right: right.basis,
        });
    }
    let mut best = (residual, left.basis.clone(), right.basis.clone());
    if let Some((hl, hr)) = hint {
        if unitarity_residual(hl) > 1e-10 || unitarity_residual(hr) > 1e-10 {
            return Err(invalid("hint bases must be unitary"));
        }
        let r = joint_dephasing_residual(state, cut, hl, hr)?;
        if r < best.0 {
            best = (r, hl.clone(), hr.clone());
        }
    }
    let classical = best.0 <= CLASSICAL_TOL;
    let ambiguous = left.min_relative_gap < 1e-9 || right.min_relative_gap < 1e-9;
    let verdict = match (classical, ambiguous) {
        (true, _) => Verdict::Classical,
        (false, true) => Verdict::UndecidedNegative,
        (false, false) => Verdict::NotClassical,
    };
    Ok(ClassicalityReport { classical, verdict, residual: best.0, basis_left: best.1, basis_right: best.2 })
}
