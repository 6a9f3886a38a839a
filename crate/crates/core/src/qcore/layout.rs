use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Upper bound on the total Hilbert-space dimension of any layout built
/// through [`SubsystemLayout::new`]. Everything here is dense.
pub const DEFAULT_MAX_DIM: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub label: String,
    pub dim: usize,
}

/// Ordered tensor factors of a state space.
///
/// Index convention: the leftmost factor is the most significant digit of
/// the flattened (row-major) index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemLayout {
    factors: Vec<Factor>,
}

impl SubsystemLayout {
    pub fn new<S: Into<String>>(factors: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        Self::with_cap(factors, DEFAULT_MAX_DIM)
    }

    pub fn with_cap<S: Into<String>>(
        factors: impl IntoIterator<Item = (S, usize)>,
        max_dim: usize,
    ) -> Result<Self> {
        let factors: Vec<Factor> = factors
            .into_iter()
            .map(|(label, dim)| Factor { label: label.into(), dim })
            .collect();
        if factors.is_empty() {
            return Err(invalid("layout needs at least one factor"));
        }
        let mut total: usize = 1;
        for (i, f) in factors.iter().enumerate() {
            if f.dim == 0 {
                return Err(invalid(format!("factor '{}' has dimension 0", f.label)));
            }
            if f.label.is_empty() {
                return Err(invalid("empty factor label"));
            }
            if factors[..i].iter().any(|g| g.label == f.label) {
                return Err(invalid(format!("duplicate factor label '{}'", f.label)));
            }
            total = total.saturating_mul(f.dim);
        }
        if total > max_dim {
            return Err(invalid(format!(
                "total dimension {total} exceeds the configured cap {max_dim}"
            )));
        }
        Ok(Self { factors })
    }

    /// Single-factor layout.
    pub fn single(label: impl Into<String>, dim: usize) -> Result<Self> {
        Self::new([(label.into(), dim)])
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.factors.iter().map(|f| f.label.as_str())
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.dim).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim).product()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.factors.iter().any(|f| f.label == label)
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.factors
            .iter()
            .position(|f| f.label == label)
            .ok_or_else(|| invalid(format!("unknown label '{label}'")))
    }

    /// Factor positions for `labels`, sorted ascending and deduplicated.
    pub fn positions<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        let mut pos = labels
            .iter()
            .map(|l| self.index_of(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        pos.sort_unstable();
        pos.dedup();
        Ok(pos)
    }

    /// Product of the dimensions of the named factors.
    pub fn group_dim<S: AsRef<str>>(&self, labels: &[S]) -> Result<usize> {
        Ok(self.positions(labels)?.iter().map(|&i| self.factors[i].dim).product())
    }

    /// Sub-layout keeping the factors at `positions` (in layout order).
    pub(crate) fn select(&self, positions: &[usize]) -> Self {
        let mut keep = positions.to_vec();
        keep.sort_unstable();
        Self {
            factors: keep.iter().map(|&i| self.factors[i].clone()).collect(),
        }
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        Self::with_cap(
            self.factors
                .iter()
                .chain(other.factors.iter())
                .map(|f| (f.label.clone(), f.dim)),
            usize::MAX,
        )
    }

    /// Same dimensions, new labels.
    pub fn relabel<S: Into<String>>(&self, labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != self.factors.len() {
            return Err(invalid("relabel: label count does not match factor count"));
        }
        Self::with_cap(
            labels.into_iter().zip(self.factors.iter().map(|f| f.dim)),
            usize::MAX,
        )
    }
}

/// Mixed-radix digits of a flattened index, most significant first.
pub(crate) fn digits(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for (slot, &d) in out.iter_mut().zip(dims.iter()).rev() {
        *slot = index % d;
        index /= d;
    }
}

pub(crate) fn flatten(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}
