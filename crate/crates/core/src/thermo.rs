//! Extractable work, local demons, and the search for the smallest classical
//! extension of a separable two-party state.
//!
//! Work is measured in bits with `k_B T = 1`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::measures::{entropy, is_classical, local_dephase, mutual_information, relative_entropy};
use crate::optimize::{multistart, stream_rng, NelderMeadOptions};
use crate::partition::{labels, Partition};
use crate::qcore::{
    eig_hermitian, expm_i_hermitian, marginal, partial_trace, ComplexMatrix, DensityMatrix,
    SubsystemLayout, C0,
};
use crate::states::{random_unitary, ClassicalWitness};

/// `log₂ d - S(ρ)`.
pub fn extractable_work(state: &DensityMatrix) -> Result<f64> {
    Ok((state.dim() as f64).log2() - entropy(state)?)
}

/// `S(ρ || I/d)`, equal to [`extractable_work`] up to rounding.
pub fn extractable_work_relative(state: &DensityMatrix) -> Result<f64> {
    let mixed = DensityMatrix::maximally_mixed(state.layout().clone());
    relative_entropy(state, &mixed)
}

/// Work left after a demon on the first group of `cut` measures in `basis_a`.
pub fn classical_work(state: &DensityMatrix, basis_a: &ComplexMatrix, cut: &Partition) -> Result<f64> {
    if cut.len() != 2 {
        return Err(invalid("classical work needs a two-group cut"));
    }
    cut.check_covers(state.layout())?;
    let dephased = local_dephase(state, cut.group(0), basis_a)?;
    extractable_work(&dephased)
}

#[derive(Debug, Clone, Serialize)]
pub struct WorkLedger {
    pub w_total: f64,
    pub w_reduced: f64,
    pub w_aux: f64,
    /// `I(ab|aux)`.
    pub mi: f64,
    /// `|w_total - w_reduced - w_aux - mi|`.
    pub identity_residual: f64,
    /// Demon work on `A = a ā` in the basis found by the classicality test.
    pub w_classical: f64,
    pub classical_across_ab: bool,
    /// `w_classical - w_reduced - w_aux`.
    pub inequality_slack: f64,
}

impl WorkLedger {
    pub fn identity_holds(&self) -> bool {
        self.identity_residual <= 1e-10
    }

    pub fn inequality_holds(&self) -> bool {
        self.inequality_slack >= -1e-10
    }
}

/// Work bookkeeping for an extension on `[a, ā, b, b̄]`.
pub fn work_ledger(extension: &DensityMatrix) -> Result<WorkLedger> {
    use labels::*;
    let layout = extension.layout();
    if layout.len() != 4 {
        return Err(invalid("work ledger needs a four-factor layout"));
    }
    for l in [A, ABAR, B, BBAR] {
        layout.index_of(l)?;
    }
    let w_total = extractable_work(extension)?;
    let w_reduced = extractable_work(&partial_trace(extension, &[ABAR, BBAR])?)?;
    let w_aux = extractable_work(&partial_trace(extension, &[A, B])?)?;
    let mi = mutual_information(extension, &Partition::cut(&[A, B], &[ABAR, BBAR])?)?;
    let cut = Partition::cut(&[A, ABAR], &[B, BBAR])?;
    let report = is_classical(extension, &cut, None)?;
    let w_classical = classical_work(extension, &report.basis_left, &cut)?;
    Ok(WorkLedger {
        w_total,
        w_reduced,
        w_aux,
        mi,
        identity_residual: (w_total - w_reduced - w_aux - mi).abs(),
        w_classical,
        classical_across_ab: report.classical,
        inequality_slack: w_classical - w_reduced - w_aux,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtensionBudget {
    /// Random starts per candidate dimension, on top of the canonical ones.
    pub restarts: usize,
    pub seed: u64,
    pub local: NelderMeadOptions,
    /// A candidate succeeds when the reduction is this close (HS norm).
    pub tolerance: f64,
}

impl Default for ExtensionBudget {
    fn default() -> Self {
        Self {
            restarts: 200,
            seed: 0,
            local: NelderMeadOptions {
                initial_step: 0.6,
                max_evals: 8000,
                f_tol: 1e-14,
                min_improvement: 1e-9,
                max_restarts: 4,
            },
            tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DimensionAttempt {
    pub d_a: usize,
    pub d_b: usize,
    /// Hilbert-Schmidt distance of the best reduction to the target.
    pub best_distance: f64,
    pub best_start: usize,
    /// Canonical plus seeded starts precede the random ones.
    pub fixed_starts: usize,
    pub starts: usize,
    pub success: bool,
}

#[derive(Debug, Clone)]
pub struct ExtensionSearchReport {
    pub attempts: Vec<DimensionAttempt>,
    /// Least `(d_A, d_B)` of the ladder that reached the tolerance.
    pub least: Option<(usize, usize)>,
    /// Best classical state found at `least`, on `[a, ā, b, b̄]`.
    pub witness: Option<DensityMatrix>,
    pub work: Option<f64>,
}

/// Real coordinates of a Hermitian matrix with `|v|₂ = |X|_HS`.
fn hermitian_coords(m: &ComplexMatrix, out: &mut [f64]) {
    let n = m.nrows();
    let s = std::f64::consts::SQRT_2;
    let mut k = 0;
    for i in 0..n {
        out[k] = m[(i, i)].re;
        k += 1;
        for j in i + 1..n {
            out[k] = s * m[(i, j)].re;
            out[k + 1] = s * m[(i, j)].im;
            k += 2;
        }
    }
}

/// Hermitian matrix with zero diagonal from `n(n-1)` reals. Diagonal
/// generators only rephase basis vectors, which leaves projectors unchanged.
fn offdiag_hermitian(params: &[f64], n: usize) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            let z = num_complex::Complex64::new(params[k], params[k + 1]);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            k += 2;
        }
    }
    h
}

/// `Tr_ancilla |u><u|` for every column `u` of `basis`, the system factor
/// (dimension `d`) being the most significant.
fn reduced_projectors(basis: &ComplexMatrix, d: usize) -> Vec<ComplexMatrix> {
    let k = basis.nrows() / d;
    (0..basis.ncols())
        .map(|c| {
            let m = ComplexMatrix::from_fn(d, k, |r, s| basis[(r * k + s, c)]);
            &m * m.adjoint()
        })
        .collect()
}

/// Non-negative least squares (Lawson-Hanson active set).
pub(crate) fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let n = a.ncols();
    let mut x = DVector::zeros(n);
    let mut passive = vec![false; n];
    let tol = 1e-13 * (1.0 + a.norm() * b.norm());
    let solve = |passive: &[bool]| -> DVector<f64> {
        let cols: Vec<usize> = (0..n).filter(|&j| passive[j]).collect();
        let sub = DMatrix::from_fn(a.nrows(), cols.len(), |r, c| a[(r, cols[c])]);
        let zs = sub.svd(true, true).solve(b, 1e-14).expect("svd has both factors");
        let mut z = DVector::zeros(n);
        for (c, &j) in cols.iter().enumerate() {
            z[j] = zs[c];
        }
        z
    };
    for _ in 0..3 * n {
        let w = a.transpose() * (b - a * &x);
        let Some(j) = (0..n).filter(|&j| !passive[j] && w[j] > tol).max_by(|&p, &q| w[p].total_cmp(&w[q]))
        else {
            break;
        };
        passive[j] = true;
        loop {
            let z = solve(&passive);
            let blocked: Vec<usize> = (0..n).filter(|&i| passive[i] && z[i] <= 0.0).collect();
            if blocked.is_empty() {
                x = z;
                break;
            }
            let alpha = blocked
                .iter()
                .map(|&i| x[i] / (x[i] - z[i]))
                .fold(f64::INFINITY, f64::min);
            x += (z - &x) * alpha;
            for i in 0..n {
                if passive[i] && x[i] <= 1e-15 {
                    passive[i] = false;
                    x[i] = 0.0;
                }
            }
        }
    }
    x
}

/// Fits the best joint distribution for fixed local bases.
struct ReductionFit {
    target: ComplexMatrix,
    target_coords: Vec<f64>,
    d_a: usize,
    d_b: usize,
}

impl ReductionFit {
    fn new(target: &DensityMatrix) -> Result<Self> {
        let dims = target.layout().dims();
        if dims.len() != 2 {
            return Err(invalid("target must have two factors"));
        }
        let n = target.dim();
        let mut target_coords = vec![0.0; n * n];
        hermitian_coords(target.matrix(), &mut target_coords);
        Ok(Self { target: target.matrix().clone(), target_coords, d_a: dims[0], d_b: dims[1] })
    }

    /// Optimal weights `q[(i,j)]` and the squared HS distance they leave.
    fn fit(&self, ua: &ComplexMatrix, ub: &ComplexMatrix) -> (DMatrix<f64>, f64) {
        let ra = reduced_projectors(ua, self.d_a);
        let rb = reduced_projectors(ub, self.d_b);
        let n = self.d_a * self.d_b;
        let rows = n * n;
        // Extra heavily weighted row pins Σ q = 1.
        let penalty = 1e3;
        let mut a = DMatrix::zeros(rows + 1, ra.len() * rb.len());
        let mut col = vec![0.0; rows];
        for (i, x) in ra.iter().enumerate() {
            for (j, y) in rb.iter().enumerate() {
                let k = i * rb.len() + j;
                hermitian_coords(&x.kronecker(y), &mut col);
                a.view_mut((0, k), (rows, 1)).copy_from_slice(&col);
                a[(rows, k)] = penalty;
            }
        }
        let mut b = DVector::zeros(rows + 1);
        b.rows_mut(0, rows).copy_from_slice(&self.target_coords);
        b[rows] = penalty;
        let q = nnls(&a, &b);
        let total = q.sum();
        let q = if total > 0.0 { q / total } else { DVector::from_element(q.len(), 1.0 / q.len() as f64) };
        let mut fitted = ComplexMatrix::from_element(n, n, C0);
        for (i, x) in ra.iter().enumerate() {
            for (j, y) in rb.iter().enumerate() {
                let w = q[i * rb.len() + j];
                if w != 0.0 {
                    fitted += x.kronecker(y).scale(w);
                }
            }
        }
        let dist2 = (fitted - &self.target).norm_squared();
        (DMatrix::from_fn(ra.len(), rb.len(), |i, j| q[i * rb.len() + j]), dist2)
    }
}

/// Search the ladder of `(d_A, d_B)` for the least dimension whose classical
/// states reduce to `target` on `[a, b]`.
///
/// Local bases are parameterized by unitary charts and refined by multistart
/// Nelder-Mead; for fixed bases the probabilities come from an exact
/// non-negative least-squares fit. Canonical starts are the computational
/// bases and the marginal eigenbases padded by the ancilla identity; `seeds`
/// whose dimensions match a ladder entry are added as further starts.
pub fn search_min_extension(
    target: &DensityMatrix,
    ladder: &[(usize, usize)],
    seeds: &[ClassicalWitness],
    budget: &ExtensionBudget,
) -> Result<ExtensionSearchReport> {
    let fit = ReductionFit::new(target)?;
    let (da, db) = (fit.d_a, fit.d_b);
    let target_labels: Vec<&str> = target.layout().labels().collect();
    let eig_a = eig_hermitian(marginal(target, &target_labels[..1])?.matrix())?.vectors;
    let eig_b = eig_hermitian(marginal(target, &target_labels[1..])?.matrix())?.vectors;
    let floor = budget.tolerance * budget.tolerance * 1e-8;

    let mut attempts = Vec::with_capacity(ladder.len());
    for (rung, &(dim_a, dim_b)) in ladder.iter().enumerate() {
        if dim_a % da != 0 || dim_b % db != 0 {
            return Err(invalid(format!("({dim_a},{dim_b}) is not a multiple of the target dims ({da},{db})")));
        }
        let (ka, kb) = (dim_a / da, dim_b / db);
        let mut bases: Vec<(ComplexMatrix, ComplexMatrix)> = vec![
            (ComplexMatrix::identity(dim_a, dim_a), ComplexMatrix::identity(dim_b, dim_b)),
            (eig_a.kronecker(&ComplexMatrix::identity(ka, ka)), eig_b.kronecker(&ComplexMatrix::identity(kb, kb))),
        ];
        for s in seeds {
            if s.basis_a.nrows() == dim_a && s.basis_b.nrows() == dim_b {
                bases.push((s.basis_a.clone(), s.basis_b.clone()));
            }
        }
        let fixed_starts = bases.len();
        for r in 0..budget.restarts {
            let mut rng = stream_rng(budget.seed, ((rung as u64) << 32) | r as u64);
            bases.push((random_unitary(dim_a, &mut rng)?, random_unitary(dim_b, &mut rng)?));
        }
        let (pa, pb) = (dim_a * (dim_a - 1), dim_b * (dim_b - 1));
        let unitaries = |i: usize, x: &[f64]| -> (ComplexMatrix, ComplexMatrix) {
            let (ba, bb) = &bases[i];
            let rotate = |base: &ComplexMatrix, p: &[f64], n: usize| {
                if p.iter().all(|&v| v == 0.0) {
                    base.clone()
                } else {
                    base * expm_i_hermitian(&offdiag_hermitian(p, n), 1.0)
                }
            };
            (rotate(ba, &x[..pa], dim_a), rotate(bb, &x[pa..], dim_b))
        };
        let objective = |i: usize, x: &[f64]| {
            let (ua, ub) = unitaries(i, x);
            fit.fit(&ua, &ub).1
        };
        let starts = vec![vec![0.0; pa + pb]; bases.len()];
        let res = multistart(objective, &starts, &budget.local, Some(floor));
        let best_distance = res.best.value.max(0.0).sqrt();
        let success = best_distance < budget.tolerance;
        attempts.push(DimensionAttempt {
            d_a: dim_a,
            d_b: dim_b,
            best_distance,
            best_start: res.best_start,
            fixed_starts,
            starts: res.starts,
            success,
        });
        if success {
            let (ua, ub) = unitaries(res.best_start, &res.best.x);
            let (weights, _) = fit.fit(&ua, &ub);
            let layout = SubsystemLayout::new([
                (labels::A, da),
                (labels::ABAR, ka),
                (labels::B, db),
                (labels::BBAR, kb),
            ])?;
            let witness = ClassicalWitness { basis_a: ua, basis_b: ub, weights }.build(layout)?;
            let work = extractable_work(&witness)?;
            return Ok(ExtensionSearchReport {
                attempts,
                least: Some((dim_a, dim_b)),
                witness: Some(witness),
                work: Some(work),
            });
        }
    }
    Ok(ExtensionSearchReport { attempts, least: None, witness: None, work: None })
}
