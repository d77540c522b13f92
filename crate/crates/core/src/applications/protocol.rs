use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::distance::DistanceResult;
use crate::error::{Error, Result};
use crate::matcore::{kron, propagator, ComplexMatrix, Hermitian, Unitary};
use crate::states::DensityMatrix;
use crate::tolerance::Tolerances;

/// A constant drive `V` applied for `duration`.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub hamiltonian: Hermitian,
    pub duration: f64,
}

impl Segment {
    pub fn new(hamiltonian: Hermitian, duration: f64) -> Result<Self> {
        if !(duration.is_finite() && duration > 0.0) {
            return Err(Error::InvalidProtocol(format!(
                "segment duration must be positive and finite, got {duration}"
            )));
        }
        Ok(Self {
            hamiltonian,
            duration,
        })
    }

    /// `exp(−i V τ)`.
    pub fn propagator(&self) -> Unitary {
        propagator(&self.hamiltonian, self.duration)
    }
}

/// Piecewise-constant drive; segments act in order, first segment first.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DriveProtocol {
    segments: Vec<Segment>,
}

impl DriveProtocol {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if let Some(first) = segments.first() {
            let d = first.hamiltonian.dim();
            if let Some(bad) = segments.iter().find(|s| s.hamiltonian.dim() != d) {
                return Err(Error::InvalidDimension(format!(
                    "segment dimensions {} and {} differ",
                    d,
                    bad.hamiltonian.dim()
                )));
            }
        }
        Ok(Self { segments })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn single(hamiltonian: Hermitian, duration: f64) -> Result<Self> {
        Self::new(vec![Segment::new(hamiltonian, duration)?])
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// `None` for the empty protocol.
    pub fn dim(&self) -> Option<usize> {
        self.segments.first().map(|s| s.hamiltonian.dim())
    }

    pub fn total_time(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    /// The protocol cut off at time `t` (clamped to `[0, T]`).
    pub fn truncated(&self, t: f64) -> DriveProtocol {
        let mut left = t.max(0.0);
        let mut segments = Vec::new();
        for s in &self.segments {
            if left <= 0.0 {
                break;
            }
            let take = s.duration.min(left);
            segments.push(Segment {
                hamiltonian: s.hamiltonian.clone(),
                duration: take,
            });
            left -= take;
        }
        DriveProtocol { segments }
    }

    /// `U_n ⋯ U_2 U_1` for a protocol of dimension `dim`.
    pub fn unitary(&self, dim: usize) -> Unitary {
        self.segments.iter().fold(Unitary::identity(dim), |acc, s| {
            s.propagator().compose(&acc)
        })
    }
}

/// `ρ ↦ U ρ U†` with `U` the time-ordered product of the segment propagators.
pub fn evolve(protocol: &DriveProtocol, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if let Some(d) = protocol.dim() {
        if d != rho.dim() {
            return Err(Error::InvalidDimension(format!(
                "protocol acts on dimension {d}, state has dimension {}",
                rho.dim()
            )));
        }
    }
    Ok(protocol
        .segments
        .iter()
        .fold(rho.clone(), |state, s| state.conjugate(&s.propagator())))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AchievabilityReport {
    /// `‖exp(−iVD) ρ exp(iVD) − σ‖_F`.
    pub deviation: f64,
    pub pass: bool,
}

/// Replays the optimal drive of `result` for time `result.value` on `rho`.
pub fn verify_achievability(
    result: &DistanceResult,
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
) -> AchievabilityReport {
    let evolved = match &result.optimal_hamiltonian {
        Some(v) if v.dim() == rho.dim() => rho.conjugate(&propagator(v, result.value)),
        _ => rho.clone(),
    };
    let deviation = if evolved.dim() == sigma.dim() {
        evolved.frobenius_distance(sigma)
    } else {
        f64::INFINITY
    };
    AchievabilityReport {
        deviation,
        pass: deviation <= Tolerances::current().achievability,
    }
}

/// `i(|0⟩⟨1| − |1⟩⟨0|)`: the unit-norm single-qubit drive rotating `|0⟩` to `|1⟩` in time π/2.
fn single_qubit_drive() -> ComplexMatrix {
    let i = Complex64::i();
    let z = Complex64::new(0.0, 0.0);
    ComplexMatrix::from_row_slice(2, 2, &[z, i, -i, z])
}

/// Local two-qubit protocols taking `|00⟩` to `|11⟩` without entangling:
/// both qubits driven at half power for time π, or one after the other at
/// full power for π/2 each.
pub fn classical_two_qubit_protocols() -> (DriveProtocol, DriveProtocol) {
    let a = single_qubit_drive();
    let id = ComplexMatrix::identity(2, 2);
    let on_first = kron(&a, &id);
    let on_second = kron(&id, &a);
    let parallel = Hermitian::symmetrized((&on_first + &on_second).scale(0.5)).expect("finite");
    let first = Hermitian::symmetrized(on_first).expect("finite");
    let second = Hermitian::symmetrized(on_second).expect("finite");
    let parallel = DriveProtocol::single(parallel, PI).expect("valid");
    let sequential = DriveProtocol::new(vec![
        Segment::new(first, FRAC_PI_2).expect("valid"),
        Segment::new(second, FRAC_PI_2).expect("valid"),
    ])
    .expect("valid");
    (parallel, sequential)
}
