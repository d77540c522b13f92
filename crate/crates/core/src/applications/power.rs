use crate::distance::{distance, DistanceResult};
use crate::error::{Error, Result};
use crate::matcore::Hermitian;
use crate::metrics::trace_distance;
use crate::states::DensityMatrix;

/// Mean-power bounds for charging `ρ → σ` against the battery Hamiltonian `H`
/// with a unit-norm drive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerReport {
    /// `|tr Hρ − tr Hσ|`.
    pub energy_gap: f64,
    pub distance: f64,
    pub trace_dist: f64,
    /// `2‖H‖ D_Tr / D`.
    pub bound_new: f64,
    /// `2‖H‖`.
    pub bound_old: f64,
    /// `D_Tr / D`.
    pub ratio: f64,
}

impl PowerReport {
    /// Mean power of the fastest protocol, `energy_gap / D`.
    pub fn optimal_power(&self) -> f64 {
        self.energy_gap / self.distance
    }
}

pub fn power_report(
    h: &Hermitian,
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
) -> Result<PowerReport> {
    if h.dim() != rho.dim() {
        return Err(Error::InvalidDimension(format!(
            "Hamiltonian has dimension {}, states have {}",
            h.dim(),
            rho.dim()
        )));
    }
    let d = distance(rho, sigma)?;
    power_report_with(h, rho, sigma, &d)
}

/// As [`power_report`] with a precomputed distance.
pub fn power_report_with(
    h: &Hermitian,
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    d: &DistanceResult,
) -> Result<PowerReport> {
    if h.dim() != rho.dim() || h.dim() != sigma.dim() {
        return Err(Error::InvalidDimension(format!(
            "Hamiltonian has dimension {}, states have {} and {}",
            h.dim(),
            rho.dim(),
            sigma.dim()
        )));
    }
    if d.value <= 0.0 {
        return Err(Error::DegeneratePower);
    }
    let trace_dist = trace_distance(rho, sigma)?;
    let h_norm = h.operator_norm();
    let ratio = trace_dist / d.value;
    Ok(PowerReport {
        energy_gap: (h.expectation(rho.operator()) - h.expectation(sigma.operator())).abs(),
        distance: d.value,
        trace_dist,
        bound_new: 2.0 * h_norm * ratio,
        bound_old: 2.0 * h_norm,
        ratio,
    })
}
