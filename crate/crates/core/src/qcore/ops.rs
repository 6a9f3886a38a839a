use super::density::DensityMatrix;
use super::layout::{digits, flatten, SubsystemLayout};
use super::linalg::{eigvals_hermitian, ComplexMatrix};
use crate::error::{invalid, Result};

/// Kronecker product in factor order, with concatenated layouts.
pub fn kron_compose(factors: &[&DensityMatrix]) -> Result<DensityMatrix> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| invalid("kron_compose needs at least one factor"))?;
    let mut layout = first.layout().clone();
    let mut matrix = first.matrix().clone();
    for f in rest {
        layout = layout.concat(f.layout())?;
        matrix = matrix.kronecker(f.matrix());
    }
    let layout = SubsystemLayout::with_cap(
        layout.factors().iter().map(|f| (f.label.clone(), f.dim)),
        super::layout::DEFAULT_MAX_DIM,
    )?;
    DensityMatrix::new(layout, matrix)
}

/// Trace out the factors at `discard` positions of a matrix with tensor
/// shape `dims`.
pub fn partial_trace_matrix(m: &ComplexMatrix, dims: &[usize], discard: &[usize]) -> ComplexMatrix {
    let n = dims.len();
    let keep: Vec<usize> = (0..n).filter(|i| !discard.contains(i)).collect();
    let keep_dims: Vec<usize> = keep.iter().map(|&i| dims[i]).collect();
    let disc_dims: Vec<usize> = discard.iter().map(|&i| dims[i]).collect();
    let kept_total: usize = keep_dims.iter().product();
    let disc_total: usize = disc_dims.iter().product();

    // For each discarded multi-index, the (full index, kept index) pairs.
    let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::with_capacity(kept_total); disc_total];
    let mut dg = vec![0usize; n];
    let mut kd = vec![0usize; keep.len()];
    let mut dd = vec![0usize; discard.len()];
    for full in 0..m.nrows() {
        digits(full, dims, &mut dg);
        for (slot, &i) in kd.iter_mut().zip(&keep) {
            *slot = dg[i];
        }
        for (slot, &i) in dd.iter_mut().zip(discard) {
            *slot = dg[i];
        }
        groups[flatten(&dd, &disc_dims)].push((full, flatten(&kd, &keep_dims)));
    }
    let mut out = ComplexMatrix::zeros(kept_total, kept_total);
    for g in &groups {
        for &(ri, rk) in g {
            for &(ci, ck) in g {
                out[(rk, ck)] += m[(ri, ci)];
            }
        }
    }
    out
}

/// Trace out the named factors.
pub fn partial_trace<S: AsRef<str>>(state: &DensityMatrix, discard: &[S]) -> Result<DensityMatrix> {
    let layout = state.layout();
    let pos = layout.positions(discard)?;
    if pos.len() == layout.len() {
        return Err(invalid("cannot trace out every factor"));
    }
    if pos.is_empty() {
        return Ok(state.clone());
    }
    let keep: Vec<usize> = (0..layout.len()).filter(|i| !pos.contains(i)).collect();
    let m = partial_trace_matrix(state.matrix(), &layout.dims(), &pos);
    DensityMatrix::new(layout.select(&keep), m)
}

/// Keep only the named factors (trace out the rest).
pub fn marginal<S: AsRef<str>>(state: &DensityMatrix, keep: &[S]) -> Result<DensityMatrix> {
    let layout = state.layout();
    let keep_pos = layout.positions(keep)?;
    if keep_pos.is_empty() {
        return Err(invalid("marginal needs at least one label"));
    }
    let discard: Vec<&str> = layout
        .factors()
        .iter()
        .enumerate()
        .filter(|(i, _)| !keep_pos.contains(i))
        .map(|(_, f)| f.label.as_str())
        .collect();
    partial_trace(state, &discard)
}

/// Transpose the factors at `subset` positions.
pub fn partial_transpose_matrix(m: &ComplexMatrix, dims: &[usize], subset: &[usize]) -> ComplexMatrix {
    let n = m.nrows();
    let mut out = ComplexMatrix::zeros(n, n);
    let mut rd = vec![0usize; dims.len()];
    let mut cd = vec![0usize; dims.len()];
    for r in 0..n {
        digits(r, dims, &mut rd);
        for c in 0..n {
            digits(c, dims, &mut cd);
            for &s in subset {
                std::mem::swap(&mut rd[s], &mut cd[s]);
            }
            out[(flatten(&rd, dims), flatten(&cd, dims))] = m[(r, c)];
            for &s in subset {
                std::mem::swap(&mut rd[s], &mut cd[s]);
            }
        }
    }
    out
}

/// Partial transpose on the named factors. The result is generally not
/// positive, so a bare matrix is returned.
pub fn partial_transpose<S: AsRef<str>>(state: &DensityMatrix, subset: &[S]) -> Result<ComplexMatrix> {
    let layout = state.layout();
    let pos = layout.positions(subset)?;
    if pos.is_empty() || pos.len() == layout.len() {
        return Err(invalid("partial transpose needs a proper, nonempty subset of factors"));
    }
    Ok(partial_transpose_matrix(state.matrix(), &layout.dims(), &pos))
}

/// Reorder factors: `order[k]` is the old position of new factor `k`.
pub fn permute_factors(state: &DensityMatrix, order: &[usize]) -> Result<DensityMatrix> {
    let layout = state.layout();
    let n = layout.len();
    let mut seen = vec![false; n];
    if order.len() != n || order.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
        return Err(invalid("permutation must list every factor exactly once"));
    }
    let dims = layout.dims();
    let new_dims: Vec<usize> = order.iter().map(|&i| dims[i]).collect();
    let total = layout.total_dim();
    // new flattened index -> old flattened index
    let mut map = vec![0usize; total];
    let mut nd = vec![0usize; n];
    let mut od = vec![0usize; n];
    for (new, slot) in map.iter_mut().enumerate() {
        digits(new, &new_dims, &mut nd);
        for (k, &old) in order.iter().enumerate() {
            od[old] = nd[k];
        }
        *slot = flatten(&od, &dims);
    }
    let m = state.matrix();
    let out = ComplexMatrix::from_fn(total, total, |r, c| m[(map[r], map[c])]);
    let new_layout = SubsystemLayout::with_cap(
        order.iter().map(|&i| (layout.factors()[i].label.clone(), dims[i])),
        usize::MAX,
    )?;
    DensityMatrix::new(new_layout, out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    HilbertSchmidt,
    Trace,
}

pub fn distance(x: &DensityMatrix, y: &DensityMatrix, metric: Metric) -> Result<f64> {
    if x.layout() != y.layout() {
        return Err(invalid("distance needs identical layouts"));
    }
    let diff = x.matrix() - y.matrix();
    Ok(match metric {
        Metric::HilbertSchmidt => diff.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
        Metric::Trace => 0.5 * eigvals_hermitian(&super::linalg::hermitian_part(&diff))?
            .iter()
            .map(|l| l.abs())
            .sum::<f64>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{max_abs_diff, C1};
    use num_complex::Complex64;

    fn diag_state(labels: &[(&str, usize)], p: &[f64]) -> DensityMatrix {
        let layout = SubsystemLayout::new(labels.iter().map(|&(l, d)| (l, d))).unwrap();
        let m = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            p.len(),
            p.iter().map(|&x| Complex64::new(x, 0.0)),
        ));
        DensityMatrix::new(layout, m).unwrap()
    }

    #[test]
    fn trace_of_product_recovers_factors() {
        let x = diag_state(&[("a", 2)], &[0.3, 0.7]);
        let y = diag_state(&[("b", 3)], &[0.2, 0.5, 0.3]);
        let xy = kron_compose(&[&x, &y]).unwrap();
        let rx = partial_trace(&xy, &["b"]).unwrap();
        let ry = marginal(&xy, &["b"]).unwrap();
        assert!(max_abs_diff(rx.matrix(), x.matrix()) < 1e-15);
        assert!(max_abs_diff(ry.matrix(), y.matrix()) < 1e-15);
        assert!(partial_trace(&xy, &["a", "b"]).is_err());
    }

    #[test]
    fn bell_partial_transpose_has_negative_half() {
        let layout = SubsystemLayout::new([("a", 2), ("b", 2)]).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = DensityMatrix::pure(layout, &[C1 * s, Complex64::default(), Complex64::default(), C1 * s]).unwrap();
        let pt = partial_transpose(&bell, &["a"]).unwrap();
        let ev = eigvals_hermitian(&pt).unwrap();
        assert!((ev[0] + 0.5).abs() < 1e-12);
        assert!(partial_transpose(&bell, &["a", "b"]).is_err());
        let twice = partial_transpose_matrix(&pt, &[2, 2], &[0]);
        assert!(max_abs_diff(&twice, bell.matrix()) < 1e-15);
    }

    #[test]
    fn permutation_swaps_kron_order() {
        let x = diag_state(&[("a", 2)], &[0.3, 0.7]);
        let y = diag_state(&[("b", 3)], &[0.2, 0.5, 0.3]);
        let xy = kron_compose(&[&x, &y]).unwrap();
        let yx = kron_compose(&[&y, &x]).unwrap();
        let p = permute_factors(&xy, &[1, 0]).unwrap();
        assert_eq!(p.layout(), yx.layout());
        assert!(max_abs_diff(p.matrix(), yx.matrix()) < 1e-15);
        assert!(permute_factors(&xy, &[0, 0]).is_err());
    }

    #[test]
    fn distances_of_orthogonal_pure_states() {
        let x = diag_state(&[("a", 2)], &[1.0, 0.0]);
        let y = diag_state(&[("a", 2)], &[0.0, 1.0]);
        assert!((distance(&x, &y, Metric::Trace).unwrap() - 1.0).abs() < 1e-12);
        assert!((distance(&x, &y, Metric::HilbertSchmidt).unwrap() - 2f64.sqrt()).abs() < 1e-12);
    }
}
