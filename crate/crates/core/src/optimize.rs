//! Multi-start Nelder–Mead minimization.
//!
//! The objectives here (conditional entropies, Frobenius shifts) are smooth
//! but non-convex functions of a handful of angles, so a derivative-free
//! simplex search from several starting points is enough. Every local run is
//! polished by restarting the simplex at its own optimum until the value stops
//! moving, which removes the occasional premature collapse of the simplex.

use rand::{Rng, RngCore};
use rayon::prelude::*;

use crate::states::stream_rng;

/// Settings shared by every optimized measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    /// Number of random starting points, in addition to any structured start.
    pub restarts: usize,
    /// Convergence tolerance on the objective value.
    pub tol: f64,
    /// Master seed; restart `k` uses stream `k` of this seed.
    pub seed: u64,
    /// Evaluation budget per local run.
    pub max_evals: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 16,
            tol: 1e-9,
            seed: 0,
            max_evals: 4000,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    /// Configuration for grid point `index` of a scan: the seed is replaced by
    /// the first draw of stream `index`, so points are independent of the
    /// order they are evaluated in.
    pub fn for_point(&self, index: u64) -> Self {
        self.with_seed(stream_rng(self.seed, index).next_u64())
    }
}

#[derive(Debug, Clone)]
pub struct LocalResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    /// Spread of objective values over the final simplex.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct MultiStartResult {
    pub best: LocalResult,
    /// Final value of every local run, in start order.
    pub values: Vec<f64>,
    pub evals: usize,
}

impl MultiStartResult {
    /// `max − min` over the local optima.
    pub fn dispersion(&self) -> f64 {
        let lo = self.values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self
            .values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        if self.values.is_empty() {
            0.0
        } else {
            hi - lo
        }
    }
}

const XTOL: f64 = 1e-10;

/// Plain Nelder–Mead from `x0` with initial simplex edge `step`.
pub fn nelder_mead<F>(f: &F, x0: &[f64], step: f64, ftol: f64, max_evals: usize) -> LocalResult
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    let n = x0.len();
    if n == 0 {
        return LocalResult {
            x: Vec::new(),
            value: f(&[]),
            evals: 1,
            residual: 0.0,
        };
    }
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    let mut evals = n + 1;

    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    loop {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = values[n] - values[0];
        let size = simplex[1..]
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if (spread <= ftol && size <= XTOL.max(ftol.sqrt() * 1e-2)) || evals >= max_evals {
            return LocalResult {
                x: simplex[0].clone(),
                value: values[0],
                evals,
                residual: spread,
            };
        }

        let mut centroid = vec![0.0; n];
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = along(alpha);
        let fr = f(&xr);
        evals += 1;
        if fr < values[0] {
            let xe = along(gamma);
            let fe = f(&xe);
            evals += 1;
            if fe < fr {
                simplex[n] = xe;
                values[n] = fe;
            } else {
                simplex[n] = xr;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n] = xr;
            values[n] = fr;
            continue;
        }
        let (xc, fc) = if fr < values[n] {
            let xc = along(alpha * rho);
            let fc = f(&xc);
            (xc, fc)
        } else {
            let xc = along(-rho);
            let fc = f(&xc);
            (xc, fc)
        };
        evals += 1;
        if fc < values[n].min(fr) {
            simplex[n] = xc;
            values[n] = fc;
            continue;
        }
        let best = simplex[0].clone();
        for i in 1..=n {
            for (x, b) in simplex[i].iter_mut().zip(&best) {
                *x = b + sigma * (*x - b);
            }
            values[i] = f(&simplex[i]);
        }
        evals += n;
    }
}

/// Nelder–Mead followed by simplex restarts at the incumbent until the value
/// improves by less than `ftol`.
pub fn polished_minimize<F>(
    f: &F,
    x0: &[f64],
    step: f64,
    ftol: f64,
    max_evals: usize,
) -> LocalResult
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    let mut res = nelder_mead(f, x0, step, ftol, max_evals);
    let mut evals = res.evals;
    for round in 0..6 {
        let restart_step = if round == 0 { 0.05 } else { 1e-3 };
        let next = nelder_mead(f, &res.x, restart_step, ftol, max_evals);
        evals += next.evals;
        let improved = res.value - next.value;
        if next.value <= res.value {
            res = next;
        }
        if improved <= ftol {
            break;
        }
    }
    res.evals = evals;
    res
}

/// Minimizes `f` from the given structured starts plus `config.restarts`
/// random starts drawn uniformly from `[-π, π]^dim`. Runs in parallel; the
/// winner is the smallest value, ties broken by start index.
pub fn multistart_minimize<F>(
    f: &F,
    dim: usize,
    structured: &[Vec<f64>],
    config: &OptimizerConfig,
) -> MultiStartResult
where
    F: Fn(&[f64]) -> f64 + Sync + ?Sized,
{
    let mut starts: Vec<Vec<f64>> = structured.to_vec();
    for k in 0..config.restarts {
        let mut rng = stream_rng(config.seed, k as u64);
        starts.push(
            (0..dim)
                .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
                .collect(),
        );
    }
    if starts.is_empty() {
        starts.push(vec![0.0; dim]);
    }
    let runs: Vec<LocalResult> = starts
        .par_iter()
        .map(|x0| polished_minimize(f, x0, 0.5, config.tol, config.max_evals))
        .collect();
    let values: Vec<f64> = runs.iter().map(|r| r.value).collect();
    let evals = runs.iter().map(|r| r.evals).sum();
    let best_idx = (0..runs.len())
        .min_by(|&i, &j| runs[i].value.total_cmp(&runs[j].value).then(i.cmp(&j)))
        .expect("at least one start");
    MultiStartResult {
        best: runs[best_idx].clone(),
        values,
        evals,
    }
}
