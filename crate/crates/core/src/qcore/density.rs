use std::fmt;

use serde::Serialize;

use super::layout::SubsystemLayout;
use super::linalg::{eigvals_unchecked, hermitian_part, hermiticity_residual, trace, ComplexMatrix};
use crate::error::{invalid, Result};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
/// Smallest eigenvalue allowed is `-PSD_TOL`.
pub const PSD_TOL: f64 = 1e-10;

/// A square complex matrix tagged with the tensor structure of its space.
///
/// Construction only checks shape; use [`DensityMatrix::validate`] (or
/// [`DensityMatrix::validated`]) to check the physical invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    layout: SubsystemLayout,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(layout: SubsystemLayout, matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(invalid(format!(
                "matrix is not square ({}x{})",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.nrows() != layout.total_dim() {
            return Err(invalid(format!(
                "matrix side {} does not match layout dimension {}",
                matrix.nrows(),
                layout.total_dim()
            )));
        }
        Ok(Self { layout, matrix })
    }

    pub fn validated(layout: SubsystemLayout, matrix: ComplexMatrix) -> Result<Self> {
        let rho = Self::new(layout, matrix)?;
        let report = rho.validate();
        if !report.passed() {
            return Err(invalid(format!("not a density matrix: {report}")));
        }
        Ok(rho)
    }

    /// `I/d` on the given layout.
    pub fn maximally_mixed(layout: SubsystemLayout) -> Self {
        let d = layout.total_dim();
        let matrix = ComplexMatrix::identity(d, d).scale(1.0 / d as f64);
        Self { layout, matrix }
    }

    /// Projector onto the normalized `psi`.
    pub fn pure(layout: SubsystemLayout, psi: &[num_complex::Complex64]) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(psi);
        let norm = v.norm();
        if norm == 0.0 {
            return Err(invalid("zero state vector"));
        }
        let v = v.unscale(norm);
        Self::new(layout, &v * v.adjoint())
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn with_layout(self, layout: SubsystemLayout) -> Result<Self> {
        Self::new(layout, self.matrix)
    }

    pub fn validate(&self) -> ValidationReport {
        validate_matrix(&self.matrix)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ValidationFailure {
    Hermiticity,
    Trace,
    Psd,
}

impl fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Hermiticity => "hermiticity",
            Self::Trace => "trace",
            Self::Psd => "psd",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub hermiticity_residual: f64,
    pub trace_re: f64,
    pub trace_im: f64,
    pub min_eigenvalue: f64,
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "pass");
        }
        let names: Vec<String> = self.failures.iter().map(|x| x.to_string()).collect();
        write!(
            f,
            "fail({}): hermiticity residual {:e}, trace {}{:+}i, min eigenvalue {:e}",
            names.join(","),
            self.hermiticity_residual,
            self.trace_re,
            self.trace_im,
            self.min_eigenvalue
        )
    }
}

pub fn validate_matrix(m: &ComplexMatrix) -> ValidationReport {
    let hermiticity_residual = hermiticity_residual(m);
    let tr = trace(m);
    let min_eigenvalue = eigvals_unchecked(&hermitian_part(m))
        .first()
        .copied()
        .unwrap_or(f64::NAN);
    let mut failures = Vec::new();
    if hermiticity_residual > HERMITIAN_TOL {
        failures.push(ValidationFailure::Hermiticity);
    }
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        failures.push(ValidationFailure::Trace);
    }
    if min_eigenvalue.is_nan() || min_eigenvalue < -PSD_TOL {
        failures.push(ValidationFailure::Psd);
    }
    ValidationReport {
        hermiticity_residual,
        trace_re: tr.re,
        trace_im: tr.im,
        min_eigenvalue,
        failures,
    }
}
