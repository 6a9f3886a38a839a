//! Pauli-basis data of two-qubit states: Bloch vectors, correlation matrix,
//! geometric discord and the remote-state-preparation payoff.

use nalgebra::{Matrix3, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::qcore::{trace, ComplexMatrix, DensityMatrix};

pub fn pauli(i: usize) -> ComplexMatrix {
    let (z, o, im) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0));
    match i {
        0 => ComplexMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        1 => ComplexMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        2 => ComplexMatrix::from_row_slice(2, 2, &[z, -im, im, z]),
        3 => ComplexMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
        _ => panic!("pauli index {i} out of range"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationData {
    /// Bloch vector of party a.
    pub x: [f64; 3],
    /// Bloch vector of party b.
    pub y: [f64; 3],
    /// `t[i][j] = tr[ρ σ_i ⊗ σ_j]`.
    pub t: [[f64; 3]; 3],
}

impl CorrelationData {
    pub fn t_matrix(&self) -> Matrix3<f64> {
        Matrix3::from_fn(|i, j| self.t[i][j])
    }

    /// `(1/4)[I⊗I + x·σ⊗I + I⊗y·σ + Σ T_ij σ_i⊗σ_j]`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut m = pauli(0).kronecker(&pauli(0));
        for i in 0..3 {
            m += pauli(i + 1).kronecker(&pauli(0)).scale(self.x[i]);
            m += pauli(0).kronecker(&pauli(i + 1)).scale(self.y[i]);
            for j in 0..3 {
                m += pauli(i + 1).kronecker(&pauli(j + 1)).scale(self.t[i][j]);
            }
        }
        m.scale(0.25)
    }
}

fn check_two_qubit(state: &DensityMatrix) -> Result<()> {
    if state.layout().dims() != [2, 2] {
        return Err(invalid("expected a two-qubit layout"));
    }
    Ok(())
}

pub fn correlation_data(state: &DensityMatrix) -> Result<CorrelationData> {
    check_two_qubit(state)?;
    let rho = state.matrix();
    let expect = |i: usize, j: usize| trace(&(rho * pauli(i).kronecker(&pauli(j)))).re;
    let mut x = [0.0; 3];
    let mut y = [0.0; 3];
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        x[i] = expect(i + 1, 0);
        y[i] = expect(0, i + 1);
        for j in 0..3 {
            t[i][j] = expect(i + 1, j + 1);
        }
    }
    Ok(CorrelationData { x, y, t })
}

/// Sum of the two smallest eigenvalues of a symmetric 3×3 matrix.
fn lower_pair(k: Matrix3<f64>) -> f64 {
    let mut ev: Vec<f64> = SymmetricEigen::new(k).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev[0] + ev[1]
}

/// Squared Hilbert-Schmidt distance to the nearest state that is classical
/// on party a: `(1/4)(‖x‖² + ‖T‖² - k_max)` with `k_max` the top eigenvalue
/// of `x xᵀ + T Tᵀ`. Evaluated as a quarter of the two lower eigenvalues.
pub fn geometric_discord(state: &DensityMatrix) -> Result<f64> {
    let c = correlation_data(state)?;
    let x = nalgebra::Vector3::from(c.x);
    let t = c.t_matrix();
    let k = x * x.transpose() + t * t.transpose();
    Ok((0.25 * lower_pair(k)).max(0.0))
}

/// `(1/4)(μ₂ + μ₃)` for the eigenvalues `μ₁ ≥ μ₂ ≥ μ₃` of `T Tᵀ`.
pub fn rsp_payoff(state: &DensityMatrix) -> Result<f64> {
    let c = correlation_data(state)?;
    let t = c.t_matrix();
    Ok((0.25 * lower_pair(t * t.transpose())).max(0.0))
}
