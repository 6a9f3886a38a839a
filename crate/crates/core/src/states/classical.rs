use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::qcore::{orthonormality_residual, ComplexMatrix, DensityMatrix, SubsystemLayout};

pub const ORTHONORMAL_TOL: f64 = 1e-10;

/// `Σ_k p_k |u_k><u_k| ⊗ |v_k><v_k|` with orthonormal `{u_k}` and `{v_k}`.
///
/// Bases are stored column-wise: `basis_a` is `dim_A × n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalStateSpec {
    probs: Vec<f64>,
    basis_a: ComplexMatrix,
    basis_b: ComplexMatrix,
    layout_a: SubsystemLayout,
    layout_b: SubsystemLayout,
}

impl ClassicalStateSpec {
    /// Single-factor layouts `A` and `B`.
    pub fn new(probs: Vec<f64>, basis_a: ComplexMatrix, basis_b: ComplexMatrix) -> Result<Self> {
        let la = SubsystemLayout::single("A", basis_a.nrows())?;
        let lb = SubsystemLayout::single("B", basis_b.nrows())?;
        Self::with_layouts(probs, basis_a, basis_b, la, lb)
    }

    pub fn with_layouts(
        probs: Vec<f64>,
        basis_a: ComplexMatrix,
        basis_b: ComplexMatrix,
        layout_a: SubsystemLayout,
        layout_b: SubsystemLayout,
    ) -> Result<Self> {
        let n = probs.len();
        if n == 0 {
            return Err(invalid("classical state needs at least one term"));
        }
        if probs.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
            return Err(invalid("probabilities must be nonnegative"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(invalid(format!("probabilities sum to {total}, not 1")));
        }
        for (name, basis, layout) in [("A", &basis_a, &layout_a), ("B", &basis_b, &layout_b)] {
            if basis.ncols() != n {
                return Err(invalid(format!("basis {name} has {} vectors, expected {n}", basis.ncols())));
            }
            if basis.nrows() != layout.total_dim() {
                return Err(invalid(format!("basis {name} vectors do not match the layout dimension")));
            }
            let r = orthonormality_residual(basis);
            if r > ORTHONORMAL_TOL {
                return Err(invalid(format!("basis {name} is not orthonormal (residual {r:e})")));
            }
        }
        Ok(Self { probs, basis_a, basis_b, layout_a, layout_b })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn basis_a(&self) -> &ComplexMatrix {
        &self.basis_a
    }

    pub fn basis_b(&self) -> &ComplexMatrix {
        &self.basis_b
    }

    pub fn layout(&self) -> Result<SubsystemLayout> {
        self.layout_a.concat(&self.layout_b)
    }
}

pub fn build_classical(spec: &ClassicalStateSpec) -> Result<DensityMatrix> {
    let (da, db) = (spec.basis_a.nrows(), spec.basis_b.nrows());
    let mut m = ComplexMatrix::zeros(da * db, da * db);
    for (k, &p) in spec.probs.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let v = spec.basis_a.column(k).kronecker(&spec.basis_b.column(k));
        m += (&v * v.adjoint()).scale(p);
    }
    DensityMatrix::new(spec.layout()?, m)
}

/// Full local bases plus the joint distribution that make a state classical:
/// `σ = Σ_ij weights[(i,j)] |u_i><u_i| ⊗ |v_j><v_j|` with `u_i = basis_a[:, i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalWitness {
    pub basis_a: ComplexMatrix,
    pub basis_b: ComplexMatrix,
    pub weights: DMatrix<f64>,
}

impl ClassicalWitness {
    pub fn build(&self, layout: SubsystemLayout) -> Result<DensityMatrix> {
        let (da, db) = (self.basis_a.nrows(), self.basis_b.nrows());
        let mut m = ComplexMatrix::zeros(da * db, da * db);
        for i in 0..da {
            for j in 0..db {
                let w = self.weights[(i, j)];
                if w == 0.0 {
                    continue;
                }
                let v = self.basis_a.column(i).kronecker(&self.basis_b.column(j));
                m += (&v * v.adjoint()).scale(w);
            }
        }
        DensityMatrix::new(layout, m)
    }
}

/// Orthonormalize `vectors` (columns) and complete them to a basis of the
/// whole space with computational basis vectors. Input order is preserved.
pub fn complete_basis(vectors: &[DVector<Complex64>], dim: usize) -> Result<ComplexMatrix> {
    let mut out: Vec<DVector<Complex64>> = Vec::with_capacity(dim);
    let push = |out: &mut Vec<DVector<Complex64>>, v: &DVector<Complex64>, strict: bool| -> Result<()> {
        let mut w = v.clone();
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for u in out.iter() {
                let c = u.dotc(&w);
                w -= u * c;
            }
        }
        let n = w.norm();
        if n < 1e-8 {
            if strict {
                return Err(invalid("supplied vectors are linearly dependent"));
            }
            return Ok(());
        }
        out.push(w.unscale(n));
        Ok(())
    };
    for v in vectors {
        if v.len() != dim {
            return Err(invalid("vector length does not match the dimension"));
        }
        if out.len() == dim {
            return Err(invalid("more vectors than the dimension"));
        }
        push(&mut out, v, true)?;
    }
    for e in 0..dim {
        if out.len() == dim {
            break;
        }
        let mut v = DVector::zeros(dim);
        v[e] = Complex64::new(1.0, 0.0);
        push(&mut out, &v, false)?;
    }
    Ok(ComplexMatrix::from_columns(&out))
}
