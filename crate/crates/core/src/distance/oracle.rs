//! Sampling oracle for the charging distance, independent of the simplex
//! search. Every candidate is a feasible connector, so the result is an upper
//! bound on `D` that tightens as the sample count grows.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{BlockObjective, Diagnostics, DistanceResult, Method};
use crate::error::Result;
use crate::matcore::{
    haar_unitary_with, propagator, seeded_rng, ComplexMatrix, Hermitian, SeededRng,
};
use crate::states::{isospectral, DensityMatrix};
use crate::tolerance::Tolerances;

const LOCAL_RADIUS_START: f64 = 0.5;
const LOCAL_RADIUS_END: f64 = 1e-5;

/// Upper bound on `D(ρ, σ)` from `samples` feasible connectors.
pub fn brute_force_distance(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    Ok(brute_force_search(rho, sigma, samples, seed)?.value)
}

/// Half of the budget explores globally (Haar-random blocks, or a uniform
/// phase grid when every eigenspace is one-dimensional); the other half makes
/// random perturbations of shrinking radius around the incumbent.
pub fn brute_force_search(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    samples: usize,
    seed: u64,
) -> Result<DistanceResult> {
    let matched = isospectral(rho, sigma, Tolerances::current().group)?;
    let objective = BlockObjective::new(&matched);
    let d = objective.dim();
    let mut rng = seeded_rng(seed);

    let mut best_g = ComplexMatrix::identity(d, d);
    let mut best = objective.value_of_blocks(&best_g);
    let consider = |g: ComplexMatrix, best: &mut f64, best_g: &mut ComplexMatrix| {
        let v = objective.value_of_blocks(&g);
        if v < *best {
            *best = v;
            *best_g = g;
        }
    };

    let global = samples / 2;
    let phases_only = objective.sizes().iter().all(|&n| n == 1);
    if phases_only && d >= 2 {
        let axes = d - 1;
        let per_axis = ((global.max(1) as f64).powf(1.0 / axes as f64).floor() as usize).max(1);
        let total = per_axis.pow(axes as u32);
        for idx in 0..total {
            let mut rest = idx;
            let mut diag = vec![Complex64::new(1.0, 0.0)];
            for _ in 0..axes {
                let k = rest % per_axis;
                rest /= per_axis;
                let phi = -PI + 2.0 * PI * (k as f64) / per_axis as f64;
                diag.push(Complex64::from_polar(1.0, phi));
            }
            let g = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag));
            consider(g, &mut best, &mut best_g);
        }
    } else {
        for _ in 0..global {
            let g = random_blocks(&mut rng, objective.sizes());
            consider(g, &mut best, &mut best_g);
        }
    }

    let local = samples - global;
    for k in 0..local {
        let t = k as f64 / local.max(1) as f64;
        let radius = LOCAL_RADIUS_START * (LOCAL_RADIUS_END / LOCAL_RADIUS_START).powf(t);
        let kick = random_block_kick(&mut rng, objective.sizes(), radius);
        let g = &best_g * kick;
        consider(g, &mut best, &mut best_g);
    }

    let diagnostics = Diagnostics {
        starts: samples,
        best_per_start: vec![best],
        converged: true,
    };
    Ok(DistanceResult::from_unitary(
        &objective.connector(&best_g),
        Method::BruteForce,
        diagnostics,
    ))
}

fn random_blocks(rng: &mut SeededRng, sizes: &[usize]) -> ComplexMatrix {
    let d = sizes.iter().sum();
    let mut g = ComplexMatrix::zeros(d, d);
    let mut offset = 0;
    for &n in sizes {
        let u = haar_unitary_with(rng, n);
        g.view_mut((offset, offset), (n, n)).copy_from(u.matrix());
        offset += n;
    }
    g
}

/// `⊕ exp(−i ε H_i)` with `H_i` from the Gaussian unitary ensemble scaled to unit norm.
fn random_block_kick(rng: &mut SeededRng, sizes: &[usize], radius: f64) -> ComplexMatrix {
    let d = sizes.iter().sum();
    let mut g = ComplexMatrix::zeros(d, d);
    let mut offset = 0;
    for &n in sizes {
        let a = ComplexMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let h = Hermitian::symmetrized(a).expect("finite");
        let norm = h.operator_norm().max(1e-300);
        let u = propagator(&h, radius * rng.random::<f64>() / norm);
        g.view_mut((offset, offset), (n, n)).copy_from(u.matrix());
        offset += n;
    }
    g
}
