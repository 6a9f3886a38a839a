use serde::Serialize;

use crate::optimize::{MultistartResult, NelderMeadOptions};

/// Controls for multistart minimizations over measurement bases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptBudget {
    /// Random starts on top of the canonical ones.
    pub restarts: usize,
    pub seed: u64,
    pub local: NelderMeadOptions,
    /// Overrides the per-measure dimension cap when set.
    pub dim_cap: Option<usize>,
}

impl Default for OptBudget {
    fn default() -> Self {
        Self {
            restarts: 32,
            seed: 0,
            local: NelderMeadOptions {
                initial_step: 0.4,
                max_evals: 6_000,
                f_tol: 1e-12,
                min_improvement: 1e-9,
                max_restarts: 6,
            },
            dim_cap: None,
        }
    }
}

impl OptBudget {
    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_dim_cap(mut self, cap: usize) -> Self {
        self.dim_cap = Some(cap);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub starts: usize,
    pub canonical_starts: usize,
    pub best_start: usize,
    pub evaluations: usize,
    pub converged: bool,
    /// A canonical start already reached zero, so no refinement ran.
    pub short_circuit: bool,
    /// Objective value before clamping at zero.
    pub raw_value: f64,
}

impl Diagnostics {
    pub(crate) fn from_multistart(r: &MultistartResult, canonical: usize) -> Self {
        Self {
            starts: r.starts,
            canonical_starts: canonical,
            best_start: r.best_start,
            evaluations: r.best.evals,
            converged: r.best.converged,
            short_circuit: r.short_circuit,
            raw_value: r.best.value,
        }
    }
}

/// `{"measure": name, "value": float, "diagnostics": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureResult {
    pub measure: String,
    pub value: f64,
    pub diagnostics: Option<Diagnostics>,
}

impl MeasureResult {
    pub fn exact(measure: &str, value: f64) -> Self {
        Self { measure: measure.to_string(), value, diagnostics: None }
    }
}
