//! Derivative-free local search (Nelder–Mead with adaptive coefficients) and a
//! seeded multi-start driver.
//!
//! The objectives minimized in this crate are continuous but only piecewise
//! smooth (maxima of eigenphase magnitudes), so every local run is followed by
//! restarts from its best vertex until a restart stops improving.

use rand::Rng;
use rayon::prelude::*;

use crate::matcore::seeded_rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub max_iter: usize,
    /// Simplex size (max-norm distance from the best vertex) at convergence.
    pub xtol: f64,
    /// Objective spread across the simplex at convergence.
    pub ftol: f64,
    /// Initial simplex edge length.
    pub step: f64,
    /// Restarts from the best vertex after the first run.
    pub max_restarts: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            max_iter: 2000,
            xtol: 1e-9,
            ftol: 1e-10,
            step: 0.5,
            max_restarts: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalMinimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

/// One Nelder–Mead run from `x0`.
pub fn nelder_mead<F>(f: &F, x0: &[f64], opts: &SearchOptions) -> LocalMinimum
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    let n = x0.len();
    if n == 0 {
        return LocalMinimum {
            x: Vec::new(),
            value: f(x0),
            iterations: 0,
            evaluations: 1,
            converged: true,
        };
    }
    let nf = n as f64;
    let (alpha, gamma, beta, delta) = if n >= 2 {
        (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf)
    } else {
        (1.0, 2.0, 0.5, 0.5)
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += opts.step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    let mut evaluations = n + 1;
    let mut order: Vec<usize> = (0..=n).collect();
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_iter {
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let best = order[0];
        let worst = order[n];
        let second_worst = order[n - 1];

        let spread = values[worst] - values[best];
        let size = simplex
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[best]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread <= opts.ftol && size <= opts.xtol {
            converged = true;
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for &k in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&simplex[k]) {
                *c += x / nf;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[worst])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let reflected = along(alpha);
        let f_r = f(&reflected);
        evaluations += 1;
        if f_r < values[best] {
            let expanded = along(gamma);
            let f_e = f(&expanded);
            evaluations += 1;
            if f_e < f_r {
                simplex[worst] = expanded;
                values[worst] = f_e;
            } else {
                simplex[worst] = reflected;
                values[worst] = f_r;
            }
            continue;
        }
        if f_r < values[second_worst] {
            simplex[worst] = reflected;
            values[worst] = f_r;
            continue;
        }
        let (contracted, f_c) = if f_r < values[worst] {
            let c = along(alpha * beta);
            let fc = f(&c);
            (c, fc)
        } else {
            let c = along(-beta);
            let fc = f(&c);
            (c, fc)
        };
        evaluations += 1;
        if f_c < values[worst].min(f_r) {
            simplex[worst] = contracted;
            values[worst] = f_c;
            continue;
        }
        let anchor = simplex[best].clone();
        for &k in &order[1..] {
            for (x, a) in simplex[k].iter_mut().zip(&anchor) {
                *x = a + delta * (*x - a);
            }
            values[k] = f(&simplex[k]);
            evaluations += 1;
        }
    }

    let best = (0..=n)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .expect("non-empty simplex");
    LocalMinimum {
        x: simplex[best].clone(),
        value: values[best],
        iterations,
        evaluations,
        converged,
    }
}

/// Nelder–Mead followed by restarts from the incumbent until a restart fails
/// to improve it by more than `ftol`.
pub fn polished_search<F>(f: &F, x0: &[f64], opts: &SearchOptions) -> LocalMinimum
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    let mut best = nelder_mead(f, x0, opts);
    let mut step = opts.step;
    for _ in 0..opts.max_restarts {
        step = (step * 0.5).max(1e-4);
        let again = nelder_mead(f, &best.x, &SearchOptions { step, ..*opts });
        let improved = again.value < best.value - opts.ftol;
        let total_iter = best.iterations + again.iterations;
        let total_eval = best.evaluations + again.evaluations;
        if again.value <= best.value {
            best = LocalMinimum {
                iterations: total_iter,
                evaluations: total_eval,
                ..again
            };
        } else {
            best.iterations = total_iter;
            best.evaluations = total_eval;
        }
        if !improved {
            break;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiStartResult {
    pub best: LocalMinimum,
    /// Final objective of every start, in start order.
    pub per_start: Vec<f64>,
    pub evaluations: usize,
}

/// Runs [`polished_search`] from `fixed_starts` followed by random starts drawn
/// uniformly from `[−range, range]^dim` until `starts` runs have been made.
/// Start `k` draws from a generator seeded with `seed + k`, and the starts are
/// reduced in index order, so results do not depend on scheduling.
pub fn multi_start<F>(
    f: &F,
    dim: usize,
    starts: usize,
    fixed_starts: &[Vec<f64>],
    range: f64,
    seed: u64,
    opts: &SearchOptions,
) -> MultiStartResult
where
    F: Fn(&[f64]) -> f64 + Sync + ?Sized,
{
    let starts = starts.max(1);
    let runs: Vec<LocalMinimum> = (0..starts)
        .into_par_iter()
        .map(|k| {
            let x0 = match fixed_starts.get(k) {
                Some(x) => x.clone(),
                None => {
                    let mut rng = seeded_rng(seed.wrapping_add(k as u64));
                    (0..dim).map(|_| rng.random_range(-range..=range)).collect()
                }
            };
            polished_search(f, &x0, opts)
        })
        .collect();
    let per_start = runs.iter().map(|r| r.value).collect();
    let evaluations = runs.iter().map(|r| r.evaluations).sum();
    let best = runs
        .into_iter()
        .reduce(|a, b| if b.value < a.value { b } else { a })
        .expect("at least one start");
    MultiStartResult {
        best,
        per_start,
        evaluations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_quadratic() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + 10.0 * (x[1] + 2.0).powi(2);
        let r = nelder_mead(&f, &[0.0, 0.0], &SearchOptions::default());
        assert!(r.converged);
        assert!((r.x[0] - 1.0).abs() < 1e-8 && (r.x[1] + 2.0).abs() < 1e-8);
    }

    #[test]
    fn minimizes_rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let r = polished_search(&f, &[-1.2, 1.0], &SearchOptions::default());
        assert!(r.value < 1e-12, "value {}", r.value);
    }

    #[test]
    fn minimizes_nonsmooth_maximum() {
        // max of |affine| pieces; minimum 0 at (0.3, −0.7)
        let f = |x: &[f64]| {
            let a = (x[0] - 0.3).abs();
            let b = (x[1] + 0.7).abs();
            let c = (x[0] + x[1] + 0.4).abs();
            a.max(b).max(c)
        };
        let r = polished_search(&f, &[2.0, 2.0], &SearchOptions::default());
        assert!(r.value < 1e-8, "value {}", r.value);
    }

    #[test]
    fn zero_dimensional_problem_evaluates_once() {
        let r = nelder_mead(&|_: &[f64]| 4.0, &[], &SearchOptions::default());
        assert_eq!(r.value, 4.0);
        assert!(r.converged);
    }

    #[test]
    fn multi_start_is_deterministic_and_finds_global_minimum() {
        // two basins; the deeper one at x = 2
        let f = |x: &[f64]| ((x[0] + 1.0).powi(2)).min((x[0] - 2.0).powi(2) - 0.5);
        let a = multi_start(&f, 1, 8, &[vec![-1.0]], 3.0, 5, &SearchOptions::default());
        let b = multi_start(&f, 1, 8, &[vec![-1.0]], 3.0, 5, &SearchOptions::default());
        assert_eq!(a, b);
        assert!((a.best.value + 0.5).abs() < 1e-9);
        assert!((a.per_start[0] - 0.0).abs() < 1e-9);
    }
}
