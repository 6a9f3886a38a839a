use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use super::separable::{SeparableDecomposition, SeparableTerm};
use crate::error::{invalid, Result};
use crate::qcore::{ComplexMatrix, DensityMatrix, SubsystemLayout};

pub fn complex_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * s, im * s)
    })
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the
/// diagonal phases of `R` moved into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<ComplexMatrix> {
    if dim == 0 {
        return Err(invalid("unitary dimension must be positive"));
    }
    let z = complex_gaussian(dim, dim, rng);
    let qr = z.qr();
    let (mut q, r) = qr.unpack();
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        q.column_mut(k).iter_mut().for_each(|z| *z *= phase);
    }
    Ok(q)
}

/// Uniform sample from the probability simplex (normalized exponentials).
pub fn random_simplex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = w.iter().sum();
    for x in &mut w {
        *x /= total;
    }
    w
}

/// `U diag(p) U†` with Haar `U` and uniform-simplex `p`.
pub fn random_mixed_state<R: Rng + ?Sized>(layout: SubsystemLayout, rng: &mut R) -> Result<DensityMatrix> {
    let d = layout.total_dim();
    let p = random_simplex(d, rng);
    let u = random_unitary(d, rng)?;
    let diag = ComplexMatrix::from_diagonal(&DVector::from_iterator(
        d,
        p.iter().map(|&x| Complex64::new(x, 0.0)),
    ));
    let m = &u * diag * u.adjoint();
    DensityMatrix::new(layout, crate::qcore::hermitian_part(&m))
}

/// Haar-random pure state.
pub fn random_pure_state<R: Rng + ?Sized>(layout: SubsystemLayout, rng: &mut R) -> Result<DensityMatrix> {
    let d = layout.total_dim();
    let v = complex_gaussian(d, 1, rng);
    DensityMatrix::pure(layout, v.as_slice())
}

/// Random `n_terms`-term decomposition over a two-factor layout.
pub fn random_separable<R: Rng + ?Sized>(
    layout: &SubsystemLayout,
    n_terms: usize,
    rng: &mut R,
) -> Result<SeparableDecomposition> {
    if layout.len() != 2 {
        return Err(invalid("random_separable needs a two-factor layout"));
    }
    if n_terms == 0 {
        return Err(invalid("need at least one term"));
    }
    let f = layout.factors();
    let la = SubsystemLayout::single(f[0].label.clone(), f[0].dim)?;
    let lb = SubsystemLayout::single(f[1].label.clone(), f[1].dim)?;
    let weights = random_simplex(n_terms, rng);
    let mut terms = Vec::with_capacity(n_terms);
    for w in weights {
        let left = random_mixed_state(la.clone(), rng)?;
        let right = random_mixed_state(lb.clone(), rng)?;
        terms.push(SeparableTerm { weight: w, left, right });
    }
    // Re-normalize against rounding in the simplex sample.
    let total: f64 = terms.iter().map(|t| t.weight).sum();
    for t in &mut terms {
        t.weight /= total;
    }
    SeparableDecomposition::new(terms)
}
