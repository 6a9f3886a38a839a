use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{invalid, Result};

pub type ComplexMatrix = DMatrix<Complex64>;

pub const C0: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const C1: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Tolerance on `max |m_ij - conj(m_ji)|` accepted by [`eig_hermitian`].
pub const EIG_HERMITIAN_TOL: f64 = 1e-10;

/// Spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (k, &v) in self.values.iter().enumerate() {
            scaled.column_mut(k).scale_mut(v);
        }
        let out = &scaled * self.vectors.adjoint();
        debug_assert_eq!(out.nrows(), n);
        out
    }
}

pub fn hermiticity_residual(m: &ComplexMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(invalid(format!(
            "eig_hermitian needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let res = hermiticity_residual(m);
    if res > EIG_HERMITIAN_TOL {
        return Err(invalid(format!("matrix is not Hermitian (residual {res:e})")));
    }
    Ok(eig_hermitian_unchecked(&hermitian_part(m)))
}

pub(crate) fn eig_hermitian_unchecked(m: &ComplexMatrix) -> HermitianEigen {
    let n = m.nrows();
    if n == 1 {
        return HermitianEigen {
            values: vec![m[(0, 0)].re],
            vectors: ComplexMatrix::identity(1, 1),
        };
    }
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    HermitianEigen { values, vectors }
}

/// Eigenvalues only, ascending.
pub fn eigvals_hermitian(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let res = hermiticity_residual(m);
    if res > EIG_HERMITIAN_TOL {
        return Err(invalid(format!("matrix is not Hermitian (residual {res:e})")));
    }
    Ok(eigvals_unchecked(&hermitian_part(m)))
}

pub(crate) fn eigvals_unchecked(m: &ComplexMatrix) -> Vec<f64> {
    if m.nrows() == 1 {
        return vec![m[(0, 0)].re];
    }
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// `exp(i * t * H)` for Hermitian `H`.
pub fn expm_i_hermitian(h: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let eig = eig_hermitian_unchecked(&hermitian_part(h));
    let phases = DVector::from_iterator(
        eig.values.len(),
        eig.values.iter().map(|&l| Complex64::from_polar(1.0, t * l)),
    );
    let mut scaled = eig.vectors.clone();
    for (k, p) in phases.iter().enumerate() {
        scaled.column_mut(k).iter_mut().for_each(|z| *z *= *p);
    }
    scaled * eig.vectors.adjoint()
}

/// Hermitian matrix from `n*n` real parameters: `n` diagonal entries, then
/// (re, im) pairs of the strict upper triangle in row order.
pub fn hermitian_from_params(params: &[f64], n: usize) -> ComplexMatrix {
    assert_eq!(params.len(), n * n, "need n^2 parameters");
    let mut h = ComplexMatrix::zeros(n, n);
    let mut it = params.iter().copied();
    for i in 0..n {
        h[(i, i)] = Complex64::new(it.next().unwrap(), 0.0);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let z = Complex64::new(it.next().unwrap(), it.next().unwrap());
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    h
}

/// `max |U U^† - I|`.
pub fn unitarity_residual(u: &ComplexMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let n = u.nrows();
    let g = u * u.adjoint();
    max_abs_diff(&g, &ComplexMatrix::identity(n, n))
}

/// Gram matrix `V^† V` compared to the identity, for a set of column vectors.
pub fn orthonormality_residual(vectors: &ComplexMatrix) -> f64 {
    let g = vectors.adjoint() * vectors;
    max_abs_diff(&g, &ComplexMatrix::identity(g.nrows(), g.ncols()))
}

pub fn max_abs_diff(x: &ComplexMatrix, y: &ComplexMatrix) -> f64 {
    if x.shape() != y.shape() {
        return f64::INFINITY;
    }
    x.iter().zip(y.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

pub fn trace(m: &ComplexMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Projector `|v><v|` onto the (unnormalized) vector `v`.
pub fn projector(v: &DVector<Complex64>) -> ComplexMatrix {
    v * v.adjoint()
}

/// Schatten-1 norm of a Hermitian matrix.
pub fn trace_norm_hermitian(m: &ComplexMatrix) -> Result<f64> {
    Ok(eigvals_hermitian(m)?.iter().map(|l| l.abs()).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
        let a = ComplexMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        hermitian_part(&a)
    }

    #[test]
    fn identity_spectrum() {
        let e = eig_hermitian(&ComplexMatrix::identity(4, 4)).unwrap();
        for v in e.values {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn diagonal_spectrum_is_sorted() {
        let m = ComplexMatrix::from_diagonal(&DVector::from_vec(vec![
            Complex64::new(0.9, 0.0),
            Complex64::new(0.1, 0.0),
        ]));
        let e = eig_hermitian(&m).unwrap();
        assert!((e.values[0] - 0.1).abs() < 1e-15);
        assert!((e.values[1] - 0.9).abs() < 1e-15);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let m = random_hermitian(12, &mut rng);
            let e = eig_hermitian(&m).unwrap();
            assert!(max_abs_diff(&e.reconstruct(), &m) < 1e-10);
            assert!(unitarity_residual(&e.vectors) < 1e-10);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let mut m = ComplexMatrix::identity(2, 2);
        m[(0, 1)] = Complex64::new(0.5, 0.0);
        assert!(eig_hermitian(&m).is_err());
        assert!(eig_hermitian(&ComplexMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn exponential_of_hermitian_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let params: Vec<f64> = (0..25).map(|_| rng.random_range(-2.0..2.0)).collect();
        let h = hermitian_from_params(&params, 5);
        assert!(hermiticity_residual(&h) == 0.0);
        let u = expm_i_hermitian(&h, 0.7);
        assert!(unitarity_residual(&u) < 1e-12);
        let zero = expm_i_hermitian(&h, 0.0);
        assert!(max_abs_diff(&zero, &ComplexMatrix::identity(5, 5)) < 1e-12);
    }
}
