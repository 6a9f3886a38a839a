use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::partition::labels;
use crate::qcore::{
    matrix_from_json, matrix_to_json, trace, ComplexMatrix, DensityMatrix, SubsystemLayout,
};

/// Weight tolerance: weights must sum to one within this.
pub const WEIGHT_TOL: f64 = 1e-12;

/// Point on the Bloch sphere, `cos(θ/2)|0> + e^{iφ} sin(θ/2)|1>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochAngles {
    pub theta: f64,
    pub phi: f64,
}

impl BlochAngles {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(invalid(format!("theta {theta} outside [0, pi]")));
        }
        if !(0.0..2.0 * PI).contains(&phi) {
            return Err(invalid(format!("phi {phi} outside [0, 2pi)")));
        }
        Ok(Self { theta, phi })
    }

    pub fn ket(&self) -> [Complex64; 2] {
        let (s, c) = (self.theta / 2.0).sin_cos();
        [Complex64::new(c, 0.0), Complex64::from_polar(s, self.phi)]
    }
}

/// Pure qubit state for the given Bloch angles.
pub fn bloch_qubit(angles: BlochAngles, label: &str) -> Result<DensityMatrix> {
    DensityMatrix::pure(SubsystemLayout::single(label, 2)?, &angles.ket())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparableTerm {
    pub weight: f64,
    pub left: DensityMatrix,
    pub right: DensityMatrix,
}

/// `Σ_k p_k ρ^a_k ⊗ ρ^b_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableDecomposition {
    terms: Vec<SeparableTerm>,
}

impl SeparableDecomposition {
    pub fn new(terms: Vec<SeparableTerm>) -> Result<Self> {
        let first = terms.first().ok_or_else(|| invalid("decomposition has no terms"))?;
        let (ll, rl) = (first.left.layout().clone(), first.right.layout().clone());
        let mut total = 0.0;
        for (k, t) in terms.iter().enumerate() {
            if !(t.weight > 0.0) || !t.weight.is_finite() {
                return Err(invalid(format!("term {k} has non-positive weight {}", t.weight)));
            }
            total += t.weight;
            if t.left.layout() != &ll || t.right.layout() != &rl {
                return Err(invalid(format!("term {k} has mismatched factor layouts")));
            }
            for (side, f) in [("left", &t.left), ("right", &t.right)] {
                let r = f.validate();
                if !r.passed() {
                    return Err(invalid(format!("term {k} {side} factor: {r}")));
                }
            }
        }
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(invalid(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { terms })
    }

    /// Terms built from `(weight, left, right)` triples.
    pub fn from_triples(triples: Vec<(f64, DensityMatrix, DensityMatrix)>) -> Result<Self> {
        Self::new(
            triples
                .into_iter()
                .map(|(weight, left, right)| SeparableTerm { weight, left, right })
                .collect(),
        )
    }

    pub fn terms(&self) -> &[SeparableTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn left_dim(&self) -> usize {
        self.terms[0].left.dim()
    }

    pub fn right_dim(&self) -> usize {
        self.terms[0].right.dim()
    }
}

/// The separable state on layout `[a, b]`.
pub fn assemble_separable(decomp: &SeparableDecomposition) -> Result<DensityMatrix> {
    let (da, db) = (decomp.left_dim(), decomp.right_dim());
    let layout = SubsystemLayout::new([(labels::A, da), (labels::B, db)])?;
    let mut m = ComplexMatrix::zeros(da * db, da * db);
    for t in decomp.terms() {
        m += t.left.matrix().kronecker(t.right.matrix()).scale(t.weight);
    }
    DensityMatrix::new(layout, m)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermFile {
    pub p: f64,
    pub a: Vec<Vec<[f64; 2]>>,
    pub b: Vec<Vec<[f64; 2]>>,
}

/// `{"terms":[{"p":..., "a":matrix, "b":matrix}]}` with matrices in the
/// nested `[re, im]` format of the state files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub terms: Vec<TermFile>,
}

impl DecompositionFile {
    pub fn from_decomposition(d: &SeparableDecomposition) -> Self {
        Self {
            terms: d
                .terms()
                .iter()
                .map(|t| TermFile {
                    p: t.weight,
                    a: matrix_to_json(t.left.matrix()),
                    b: matrix_to_json(t.right.matrix()),
                })
                .collect(),
        }
    }

    pub fn to_decomposition(&self) -> Result<SeparableDecomposition> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let a = matrix_from_json(&t.a)?;
                let b = matrix_from_json(&t.b)?;
                let left = DensityMatrix::new(SubsystemLayout::single(labels::A, a.nrows())?, a)?;
                let right = DensityMatrix::new(SubsystemLayout::single(labels::B, b.nrows())?, b)?;
                Ok(SeparableTerm { weight: t.p, left, right })
            })
            .collect::<Result<Vec<_>>>()?;
        SeparableDecomposition::new(terms)
    }
}

/// `tr(xy)` for Hermitian `x`, `y`; zero iff PSD operators have orthogonal supports.
pub(crate) fn overlap(x: &DensityMatrix, y: &DensityMatrix) -> f64 {
    trace(&(x.matrix() * y.matrix())).re
}
