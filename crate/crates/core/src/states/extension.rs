use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::classical::{complete_basis, ClassicalWitness};
use super::separable::{overlap, SeparableDecomposition};
use crate::error::{invalid, Error, Result};
use crate::partition::labels;
use crate::qcore::{eig_hermitian, ComplexMatrix, DensityMatrix, SubsystemLayout};

/// `tr(ρ_k ρ_l)` at or below this counts as orthogonal supports.
pub const FLAG_ORTHOGONALITY_TOL: f64 = 1e-10;
/// Eigenvalues at or below this are dropped when reading off a witness basis.
const SUPPORT_TOL: f64 = 1e-12;

/// How flag (ancilla) states are assigned to the terms of a decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlagSplit {
    /// Term `k` gets flag `|k>` on both sides; ancillas have dimension `n`.
    BothSides,
    /// Explicit flag indices per term. Terms sharing a flag on one side must
    /// have mutually orthogonal factors on that side.
    Factored {
        flag_dim_a: usize,
        flag_dim_b: usize,
        flags_a: Vec<usize>,
        flags_b: Vec<usize>,
    },
}

/// An extension together with the local bases that diagonalize it.
#[derive(Debug, Clone)]
pub struct ClassicalExtension {
    pub state: DensityMatrix,
    pub witness: ClassicalWitness,
}

/// Classical state on `[a, ā, b, b̄]` whose reduction over `ā b̄` is the
/// assembled decomposition.
pub fn li_luo_extend(decomp: &SeparableDecomposition, split: &FlagSplit) -> Result<DensityMatrix> {
    Ok(li_luo_extend_with_witness(decomp, split)?.state)
}

pub fn li_luo_extend_with_witness(
    decomp: &SeparableDecomposition,
    split: &FlagSplit,
) -> Result<ClassicalExtension> {
    let n = decomp.len();
    let (flag_dim_a, flag_dim_b, flags_a, flags_b) = match split {
        FlagSplit::BothSides => (n, n, (0..n).collect(), (0..n).collect()),
        FlagSplit::Factored { flag_dim_a, flag_dim_b, flags_a, flags_b } => {
            if flags_a.len() != n || flags_b.len() != n {
                return Err(invalid(format!("need one flag per term ({n}) on each side")));
            }
            if flags_a.iter().any(|&f| f >= *flag_dim_a) || flags_b.iter().any(|&f| f >= *flag_dim_b) {
                return Err(invalid("flag index exceeds the flag dimension"));
            }
            (*flag_dim_a, *flag_dim_b, flags_a.clone(), flags_b.clone())
        }
    };
    let terms = decomp.terms();
    for k in 0..n {
        for l in (k + 1)..n {
            if flags_a[k] == flags_a[l] {
                let o = overlap(&terms[k].left, &terms[l].left);
                if o > FLAG_ORTHOGONALITY_TOL {
                    return Err(Error::ConstructionInfeasible(format!(
                        "terms {k} and {l} share flag {} on side a but tr(ρ_k ρ_l) = {o:e}",
                        flags_a[k]
                    )));
                }
            }
            if flags_b[k] == flags_b[l] {
                let o = overlap(&terms[k].right, &terms[l].right);
                if o > FLAG_ORTHOGONALITY_TOL {
                    return Err(Error::ConstructionInfeasible(format!(
                        "terms {k} and {l} share flag {} on side b but tr(ρ_k ρ_l) = {o:e}",
                        flags_b[k]
                    )));
                }
            }
        }
    }

    let (da, db) = (decomp.left_dim(), decomp.right_dim());
    let layout = SubsystemLayout::new([
        (labels::A, da),
        (labels::ABAR, flag_dim_a),
        (labels::B, db),
        (labels::BBAR, flag_dim_b),
    ])?;
    let flag = |dim: usize, f: usize| {
        let mut m = ComplexMatrix::zeros(dim, dim);
        m[(f, f)] = Complex64::new(1.0, 0.0);
        m
    };
    let big_a = da * flag_dim_a;
    let big_b = db * flag_dim_b;
    let mut sigma = ComplexMatrix::zeros(big_a * big_b, big_a * big_b);
    // Witness: eigenvectors of each flagged factor, with the joint weights.
    let mut vecs_a: Vec<DVector<Complex64>> = Vec::new();
    let mut vecs_b: Vec<DVector<Complex64>> = Vec::new();
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    for (k, t) in terms.iter().enumerate() {
        let pa = t.left.matrix().kronecker(&flag(flag_dim_a, flags_a[k]));
        let pb = t.right.matrix().kronecker(&flag(flag_dim_b, flags_b[k]));
        sigma += pa.kronecker(&pb).scale(t.weight);

        let ea = support_vectors(&pa)?;
        let eb = support_vectors(&pb)?;
        let ia = index_vectors(&mut vecs_a, ea.iter().map(|(_, v)| v.clone()));
        let ib = index_vectors(&mut vecs_b, eb.iter().map(|(_, v)| v.clone()));
        for (x, (la, _)) in ia.iter().zip(&ea) {
            for (y, (lb, _)) in ib.iter().zip(&eb) {
                entries.push((*x, *y, t.weight * la * lb));
            }
        }
    }
    let basis_a = complete_basis(&vecs_a, big_a)?;
    let basis_b = complete_basis(&vecs_b, big_b)?;
    let mut weights = DMatrix::<f64>::zeros(big_a, big_b);
    for (i, j, w) in entries {
        weights[(i, j)] += w;
    }
    let state = DensityMatrix::new(layout, sigma)?;
    Ok(ClassicalExtension { state, witness: ClassicalWitness { basis_a, basis_b, weights } })
}

fn support_vectors(m: &ComplexMatrix) -> Result<Vec<(f64, DVector<Complex64>)>> {
    let e = eig_hermitian(m)?;
    Ok(e.values
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > SUPPORT_TOL)
        .map(|(k, &l)| (l, e.vectors.column(k).into_owned()))
        .collect())
}

/// Position of each vector in `pool`, appending those not yet present
/// (identical up to phase).
fn index_vectors(
    pool: &mut Vec<DVector<Complex64>>,
    vs: impl Iterator<Item = DVector<Complex64>>,
) -> Vec<usize> {
    vs.map(|v| {
        if let Some(i) = pool.iter().position(|u| (u.dotc(&v).norm() - 1.0).abs() < 1e-9) {
            i
        } else {
            pool.push(v);
            pool.len() - 1
        }
    })
    .collect()
}
