//! Derivative-free minimization shared by the discord, GQD and extension
//! searches: adaptive Nelder-Mead with simplex restarts, and a seeded
//! multistart driver whose reduction does not depend on evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::qcore::{expm_i_hermitian, hermitian_from_params, ComplexMatrix};

/// Independent RNG stream `stream` derived from `master`.
pub fn stream_rng(master: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NelderMeadOptions {
    /// Edge length of the initial (and every restarted) simplex.
    pub initial_step: f64,
    /// Evaluation budget across all restarts.
    pub max_evals: usize,
    /// A run stops once the simplex value spread drops below this.
    pub f_tol: f64,
    /// Restart from the best vertex until a whole run improves less than this.
    pub min_improvement: f64,
    pub max_restarts: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.5,
            max_evals: 20_000,
            f_tol: 1e-12,
            min_improvement: 1e-9,
            max_restarts: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub restarts: usize,
    pub converged: bool,
}

struct Simplex {
    points: Vec<Vec<f64>>,
    values: Vec<f64>,
}

impl Simplex {
    fn sort(&mut self) {
        let mut idx: Vec<usize> = (0..self.values.len()).collect();
        idx.sort_by(|&a, &b| self.values[a].total_cmp(&self.values[b]));
        self.points = idx.iter().map(|&i| self.points[i].clone()).collect();
        self.values = idx.iter().map(|&i| self.values[i]).collect();
    }
}

/// Minimize `f` from `x0`.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], opts: &NelderMeadOptions) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    if n == 0 {
        let value = eval(x0, &mut evals);
        return Minimum { x: vec![], value, evals, restarts: 0, converged: true };
    }

    // Adaptive coefficients (Gao & Han) keep the method usable in tens of dimensions.
    let nf = n as f64;
    let (alpha, beta, gamma, delta) = (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);

    let mut best_x = x0.to_vec();
    let mut best_v = eval(x0, &mut evals);
    let mut restarts = 0usize;
    let converged;

    loop {
        let run_start = best_v;
        let mut s = Simplex { points: vec![best_x.clone()], values: vec![best_v] };
        for i in 0..n {
            let mut p = best_x.clone();
            p[i] += opts.initial_step;
            let v = eval(&p, &mut evals);
            s.points.push(p);
            s.values.push(v);
        }
        s.sort();

        let mut run_converged = false;
        while evals < opts.max_evals {
            if s.values[n] - s.values[0] <= opts.f_tol {
                run_converged = true;
                break;
            }
            let mut centroid = vec![0.0; n];
            for p in &s.points[..n] {
                for (c, x) in centroid.iter_mut().zip(p) {
                    *c += x / nf;
                }
            }
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&s.points[n])
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };
            let xr = along(alpha);
            let fr = eval(&xr, &mut evals);
            if fr < s.values[0] {
                let xe = along(alpha * beta);
                let fe = eval(&xe, &mut evals);
                if fe < fr {
                    s.points[n] = xe;
                    s.values[n] = fe;
                } else {
                    s.points[n] = xr;
                    s.values[n] = fr;
                }
            } else if fr < s.values[n - 1] {
                s.points[n] = xr;
                s.values[n] = fr;
            } else {
                let (xc, fc) = if fr < s.values[n] {
                    let xc = along(alpha * gamma);
                    let fc = eval(&xc, &mut evals);
                    (xc, fc)
                } else {
                    let xc = along(-gamma);
                    let fc = eval(&xc, &mut evals);
                    (xc, fc)
                };
                if fc < fr.min(s.values[n]) {
                    s.points[n] = xc;
                    s.values[n] = fc;
                } else {
                    let x_best = s.points[0].clone();
                    for i in 1..=n {
                        let p: Vec<f64> = x_best
                            .iter()
                            .zip(&s.points[i])
                            .map(|(b, x)| b + delta * (x - b))
                            .collect();
                        s.values[i] = eval(&p, &mut evals);
                        s.points[i] = p;
                    }
                }
            }
            s.sort();
        }

        if s.values[0] < best_v {
            best_v = s.values[0];
            best_x = s.points[0].clone();
        }
        let improvement = run_start - best_v;
        if evals >= opts.max_evals {
            converged = run_converged && improvement < opts.min_improvement;
            break;
        }
        if improvement < opts.min_improvement || restarts >= opts.max_restarts {
            converged = improvement < opts.min_improvement;
            break;
        }
        restarts += 1;
    }

    Minimum { x: best_x, value: best_v, evals, restarts, converged }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultistartResult {
    pub best: Minimum,
    pub best_start: usize,
    pub starts: usize,
    /// True when a start already sat at or below the floor and refinement was skipped.
    pub short_circuit: bool,
}

/// Refine every start and keep the lowest value (ties go to the lower start
/// index, so parallel evaluation gives the same answer as serial).
///
/// The objective receives the start index, so each start may carry its own
/// parameterization (for example a different chart base point).
///
/// If `floor` is set and some start evaluates at or below it, no refinement
/// happens; used when the objective is bounded below by `floor`.
pub fn multistart<F>(
    f: F,
    starts: &[Vec<f64>],
    opts: &NelderMeadOptions,
    floor: Option<f64>,
) -> MultistartResult
where
    F: Fn(usize, &[f64]) -> f64 + Sync,
{
    assert!(!starts.is_empty(), "multistart needs at least one start");
    if let Some(floor) = floor {
        let initial: Vec<f64> = starts.par_iter().enumerate().map(|(i, x)| f(i, x)).collect();
        if let Some((i, &v)) = initial
            .iter()
            .enumerate()
            .filter(|(_, v)| **v <= floor)
            .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)))
        {
            return MultistartResult {
                best: Minimum { x: starts[i].clone(), value: v, evals: starts.len(), restarts: 0, converged: true },
                best_start: i,
                starts: starts.len(),
                short_circuit: true,
            };
        }
    }
    let results: Vec<Minimum> = starts
        .par_iter()
        .enumerate()
        .map(|(i, x)| nelder_mead(|p: &[f64]| f(i, p), x, opts))
        .collect();
    let (best_start, best) = results
        .into_iter()
        .enumerate()
        .min_by(|a, b| a.1.value.total_cmp(&b.1.value).then(a.0.cmp(&b.0)))
        .expect("nonempty");
    MultistartResult { best, best_start, starts: starts.len(), short_circuit: false }
}

/// Local chart on the unitary group: `params -> base * exp(i H(params))`.
#[derive(Debug, Clone)]
pub struct UnitaryChart {
    pub base: ComplexMatrix,
}

impl UnitaryChart {
    pub fn new(base: ComplexMatrix) -> Self {
        Self { base }
    }

    pub fn dim(&self) -> usize {
        self.base.nrows()
    }

    pub fn n_params(&self) -> usize {
        self.dim() * self.dim()
    }

    pub fn unitary(&self, params: &[f64]) -> ComplexMatrix {
        let n = self.dim();
        if params.iter().all(|&p| p == 0.0) {
            return self.base.clone();
        }
        &self.base * expm_i_hermitian(&hermitian_from_params(params, n), 1.0)
    }
}
