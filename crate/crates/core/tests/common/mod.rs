#![allow(dead_code)]

use dimres::optimize::{nelder_mead, stream_rng, NelderMeadOptions};
use dimres::qcore::{ComplexMatrix, DensityMatrix, SubsystemLayout, C1};
use dimres::states::{random_separable, SeparableDecomposition};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    stream_rng(seed, 0)
}

pub fn layout(factors: &[(&str, usize)]) -> SubsystemLayout {
    SubsystemLayout::new(factors.iter().map(|&(l, d)| (l, d))).unwrap()
}

pub fn bell() -> DensityMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex64::default();
    DensityMatrix::pure(layout(&[("a", 2), ("b", 2)]), &[C1 * s, z, z, C1 * s]).unwrap()
}

/// `p |Φ+><Φ+| + (1-p) I/4`.
pub fn werner(p: f64) -> DensityMatrix {
    let b = bell();
    let m = b.matrix().scale(p) + ComplexMatrix::identity(4, 4).scale((1.0 - p) / 4.0);
    DensityMatrix::new(b.layout().clone(), m).unwrap()
}

/// Decomposition with factor dimensions in `2..=max_dim` and `1..=max_terms` terms.
pub fn random_decomposition(r: &mut impl Rng, max_dim: usize, max_terms: usize) -> SeparableDecomposition {
    let da = r.random_range(2..=max_dim);
    let db = r.random_range(2..=max_dim);
    let n = r.random_range(1..=max_terms);
    random_separable(&layout(&[("a", da), ("b", db)]), n, r).unwrap()
}

/// Qubit density matrix from an unconstrained 3-vector (Bloch radius `tanh|v|`).
fn qubit_from(v: &[f64]) -> ComplexMatrix {
    let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let s = if norm > 0.0 { norm.tanh() / norm } else { 1.0 };
    let (x, y, z) = (v[0] * s, v[1] * s, v[2] * s);
    ComplexMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(0.5 * (1.0 + z), 0.0),
            Complex64::new(0.5 * x, -0.5 * y),
            Complex64::new(0.5 * x, 0.5 * y),
            Complex64::new(0.5 * (1.0 - z), 0.0),
        ],
    )
}

/// Squared HS distance from `rho` to an explicitly parameterized state that is
/// classical on `a`: `p |n><n| ⊗ τ0 + (1-p) |-n><-n| ⊗ τ1`.
fn cq_distance(rho: &ComplexMatrix, x: &[f64]) -> f64 {
    let (theta, phi) = (x[0], x[1]);
    let p = 1.0 / (1.0 + (-x[2]).exp());
    let n = [
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    ];
    let up = ComplexMatrix::from_fn(2, 2, |i, j| n[i] * n[j].conj());
    let down = ComplexMatrix::identity(2, 2) - &up;
    let sigma = up.kronecker(&qubit_from(&x[3..6])).scale(p) + down.kronecker(&qubit_from(&x[6..9])).scale(1.0 - p);
    (rho - sigma).norm_squared()
}

/// Numerical geometric discord: minimize the distance to the classical-quantum
/// set over a grid of starting directions.
pub fn geometric_discord_numeric(state: &DensityMatrix) -> f64 {
    let rho = state.matrix().clone();
    let opts = NelderMeadOptions { initial_step: 0.5, max_evals: 20_000, f_tol: 1e-15, min_improvement: 1e-12, max_restarts: 10 };
    let mut best = f64::INFINITY;
    for &theta in &[0.3, 1.2, 1.9, 2.8] {
        for &phi in &[0.0, 1.6, 3.1, 4.7] {
            let x0 = [theta, phi, 0.0, 0.1, 0.1, 0.1, -0.1, -0.1, -0.1];
            let m = nelder_mead(|x: &[f64]| cq_distance(&rho, x), &x0, &opts);
            best = best.min(m.value);
        }
    }
    best
}
