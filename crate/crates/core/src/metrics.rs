//! Fidelity, Bures angle, trace distance, and the bounds
//! `max_i θ_B(ρ_i, σ_i) ≤ D(ρ, σ) ≤ π(1 − 1/d)` and `θ_B(ρ, σ) ≤ D(ρ, σ)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::matcore::{matrix_sqrt_psd, trace_norm};
use crate::states::{check_matched, isospectral, DensityMatrix, SpectralForm};
use crate::tolerance::Tolerances;

fn check_dims(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::InvalidDimension(format!(
            "states have dimensions {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    Ok(())
}

fn clamped_acos(x: f64) -> f64 {
    x.clamp(-1.0, 1.0).acos()
}

/// `F = tr √(√ρ σ √ρ) = ‖√ρ √σ‖₁`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho, sigma)?;
    let a = matrix_sqrt_psd(rho.operator())?;
    let b = matrix_sqrt_psd(sigma.operator())?;
    let f = trace_norm(&(a.matrix() * b.matrix()))?;
    Ok(f.clamp(0.0, 1.0))
}

/// `θ_B = arccos F`.
pub fn bures_angle(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok(clamped_acos(fidelity(rho, sigma)?))
}

/// `½ ‖ρ − σ‖₁`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho, sigma)?;
    Ok((0.5 * trace_norm(&(rho.matrix() - sigma.matrix()))?).clamp(0.0, 1.0))
}

/// `π(1 − 1/d)`.
pub fn upper_bound(dim: usize) -> Result<f64> {
    if dim == 0 {
        return Err(Error::InvalidDimension("dimension must be positive".into()));
    }
    Ok(PI * (1.0 - 1.0 / dim as f64))
}

/// `max_i θ_B(P_i^ρ/n_i, P_i^σ/n_i)` over matched eigenspaces.
///
/// For normalized projectors `√(P/n) = P/√n`, so the fidelity reduces to
/// `‖A†B‖₁ / n` with `A`, `B` orthonormal bases of the two eigenspaces.
pub fn lower_bound_tight(sf_rho: &SpectralForm, sf_sigma: &SpectralForm) -> Result<f64> {
    check_matched(sf_rho, sf_sigma)?;
    let mut best: f64 = 0.0;
    for (a, b) in sf_rho.groups.iter().zip(&sf_sigma.groups) {
        let n = a.multiplicity() as f64;
        let overlap = a.basis.adjoint() * &b.basis;
        let f = overlap.singular_values().sum() / n;
        best = best.max(clamped_acos(f));
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInterval {
    pub lower_bures: f64,
    pub lower_tight: f64,
    pub upper: f64,
}

impl BoundInterval {
    /// Largest of the two lower bounds.
    pub fn lower(&self) -> f64 {
        self.lower_bures.max(self.lower_tight)
    }

    pub fn contains(&self, value: f64, slack: f64) -> bool {
        value >= self.lower() - slack && value <= self.upper + slack
    }
}

pub fn bound_interval(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<BoundInterval> {
    let matched = isospectral(rho, sigma, Tolerances::current().group)?;
    Ok(BoundInterval {
        lower_bures: bures_angle(rho, sigma)?,
        lower_tight: lower_bound_tight(&matched.rho, &matched.sigma)?,
        upper: upper_bound(rho.dim())?,
    })
}
