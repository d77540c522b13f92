//! Reproducible experiment runners: random three-level couples checked against
//! their bound interval, and the two-qubit charging race.

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::Instant;

use rayon::prelude::*;

use crate::applications::{
    classical_two_qubit_protocols, entanglement_entropy, evolve, DriveProtocol,
};
use crate::distance::{distance_nondegenerate, pure_distance, DistanceOptions};
use crate::error::{Error, Result};
use crate::metrics::{bound_interval, fidelity};
use crate::states::{qubit_basis_state, random_isospectral_couple, DensityMatrix, Spectrum};

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub index: usize,
    pub seed: u64,
    pub dim: usize,
    pub distance: f64,
    pub lower_bures: f64,
    pub lower_tight: f64,
    pub upper: f64,
    pub converged: bool,
    pub wall_time_ms: f64,
}

impl ExperimentRow {
    pub fn within_bounds(&self, slack: f64) -> bool {
        self.distance >= self.lower_tight - slack
            && self.distance >= self.lower_bures - slack
            && self.distance <= self.upper + slack
    }
}

fn couple_row(
    index: usize,
    seed: u64,
    dim: usize,
    opts: &DistanceOptions,
) -> Result<ExperimentRow> {
    let start = Instant::now();
    let (rho, sigma) = random_isospectral_couple(dim, &Spectrum::Random, seed)?;
    let d = distance_nondegenerate(&rho, &sigma, &DistanceOptions { seed, ..*opts })?;
    let b = bound_interval(&rho, &sigma)?;
    Ok(ExperimentRow {
        index,
        seed,
        dim,
        distance: d.value,
        lower_bures: b.lower_bures,
        lower_tight: b.lower_tight,
        upper: b.upper,
        converged: d.diagnostics.converged,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// `n` random non-degenerate couples with row `k` seeded by `seed + k`.
/// Rows that fail are kept with `converged = false` and NaN values.
pub fn random_couples(
    n: usize,
    dim: usize,
    seed: u64,
    opts: &DistanceOptions,
) -> Vec<ExperimentRow> {
    (0..n)
        .into_par_iter()
        .map(|index| {
            let row_seed = seed.wrapping_add(index as u64);
            couple_row(index, row_seed, dim, opts).unwrap_or(ExperimentRow {
                index,
                seed: row_seed,
                dim,
                distance: f64::NAN,
                lower_bures: f64::NAN,
                lower_tight: f64::NAN,
                upper: f64::NAN,
                converged: false,
                wall_time_ms: 0.0,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RaceProtocol {
    Quantum,
    ClassicalParallel,
    ClassicalSequential,
}

impl RaceProtocol {
    pub fn as_str(self) -> &'static str {
        match self {
            RaceProtocol::Quantum => "quantum",
            RaceProtocol::ClassicalParallel => "classical-parallel",
            RaceProtocol::ClassicalSequential => "classical-sequential",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RaceSample {
    pub protocol: RaceProtocol,
    pub time: f64,
    pub fidelity: f64,
    pub entanglement: f64,
}

/// Fidelity to `|1…1⟩` and bipartite entanglement entropy along the optimal
/// drive (`T = π/2`) and the two local protocols (`T = π`), sampled at
/// `steps + 1` evenly spaced times per protocol.
pub fn charging_race(n_qubits: usize, steps: usize) -> Result<Vec<RaceSample>> {
    if n_qubits != 2 {
        return Err(Error::Unsupported(format!(
            "charging race is defined for 2 qubits, got {n_qubits}"
        )));
    }
    let steps = steps.max(1);
    let start = qubit_basis_state(&[0, 0]);
    let end = qubit_basis_state(&[1, 1]);
    let optimal = pure_distance(&start, &end)?;
    let quantum = DriveProtocol::single(
        optimal.optimal_hamiltonian.expect("distinct states"),
        optimal.value,
    )?;
    let (parallel, sequential) = classical_two_qubit_protocols();
    let rho = DensityMatrix::pure(&start)?;
    let target = DensityMatrix::pure(&end)?;

    let mut out = Vec::with_capacity(3 * (steps + 1));
    for (kind, protocol, total) in [
        (RaceProtocol::Quantum, &quantum, FRAC_PI_2),
        (RaceProtocol::ClassicalParallel, &parallel, PI),
        (RaceProtocol::ClassicalSequential, &sequential, PI),
    ] {
        for k in 0..=steps {
            let t = total * k as f64 / steps as f64;
            let state = evolve(&protocol.truncated(t), &rho)?;
            out.push(RaceSample {
                protocol: kind,
                time: t,
                fidelity: fidelity(&state, &target)?,
                entanglement: entanglement_entropy(&state, 2, 2)?,
            });
        }
    }
    Ok(out)
}
