//! Speed-limit times `t_CD = D/v_CD` and `t_mCD = D/v_mCD` for a given drive.
//!
//! `v_mCD` strips from each drive the part that only rotates the state within
//! its own eigenspaces. Inside a constant segment the state moves as
//! `ρ_t = e^{−iVt} ρ e^{iVt}`, so the commutant of `ρ_t` is the commutant of
//! `ρ` conjugated by `e^{−iVt}`, and `min ‖V + D_t‖` is the same at every
//! instant. Evaluating it at the segment start is therefore exact.

use crate::distance::{block_generator, distance};
use crate::error::{Error, Result};
use crate::matcore::{ComplexMatrix, Hermitian};
use crate::optimize::{polished_search, SearchOptions};
use crate::states::{spectral_form, DensityMatrix};
use crate::tolerance::Tolerances;

use super::protocol::{evolve, DriveProtocol};

/// Speeds below this count as a state that never moves.
const MIN_SPEED: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QslEstimate {
    /// The speed-limit time `D / v`.
    pub time: f64,
    pub speed: f64,
    /// `D(ρ, σ)` with `σ` the final state of the protocol.
    pub distance: f64,
    pub total_time: f64,
    pub converged: bool,
}

fn check_protocol(protocol: &DriveProtocol, rho: &DensityMatrix) -> Result<f64> {
    if protocol.is_empty() {
        return Err(Error::InvalidProtocol("protocol has no segments".into()));
    }
    let weighted: f64 = protocol
        .segments()
        .iter()
        .map(|s| s.hamiltonian.operator_norm() * s.duration)
        .sum();
    if weighted <= 0.0 {
        return Err(Error::InvalidProtocol(
            "every segment has a zero drive".into(),
        ));
    }
    if protocol.dim() != Some(rho.dim()) {
        return Err(Error::InvalidDimension(format!(
            "protocol acts on dimension {:?}, state has dimension {}",
            protocol.dim(),
            rho.dim()
        )));
    }
    Ok(weighted / protocol.total_time())
}

/// `t_CD` with `v_CD = (1/T) Σ ‖V_k‖ τ_k`.
pub fn qsl_t_cd(protocol: &DriveProtocol, rho: &DensityMatrix) -> Result<QslEstimate> {
    let speed = check_protocol(protocol, rho)?;
    let sigma = evolve(protocol, rho)?;
    let d = distance(rho, &sigma)?;
    Ok(QslEstimate {
        time: d.value / speed,
        speed,
        distance: d.value,
        total_time: protocol.total_time(),
        converged: d.diagnostics.converged,
    })
}

/// `t_mCD` with `v_mCD = (1/T) Σ_k τ_k min_{[D, ρ_k] = 0} ‖V_k + D‖`, where
/// `ρ_k` is the state at the start of segment `k`.
pub fn qsl_t_mcd(protocol: &DriveProtocol, rho: &DensityMatrix) -> Result<QslEstimate> {
    check_protocol(protocol, rho)?;
    let group_tol = Tolerances::current().group;
    let mut state = rho.clone();
    let mut weighted = 0.0;
    let mut converged = true;
    for segment in protocol.segments() {
        let (norm, ok) = commutant_min_norm(&segment.hamiltonian, &state, group_tol)?;
        weighted += norm * segment.duration;
        converged &= ok;
        state = state.conjugate(&segment.propagator());
    }
    let speed = weighted / protocol.total_time();
    if speed <= MIN_SPEED {
        return Err(Error::DegenerateSpeed);
    }
    let d = distance(rho, &state)?;
    Ok(QslEstimate {
        time: d.value / speed,
        speed,
        distance: d.value,
        total_time: protocol.total_time(),
        converged: converged && d.diagnostics.converged,
    })
}

/// `min ‖V + D‖` over Hermitian `D` that are block diagonal in the
/// eigenspaces of `rho`, with a convergence flag.
pub(crate) fn commutant_min_norm(
    v: &Hermitian,
    rho: &DensityMatrix,
    group_tol: f64,
) -> Result<(f64, bool)> {
    let sf = spectral_form(rho, group_tol)?;
    let bases: Vec<&ComplexMatrix> = sf.groups.iter().map(|g| &g.basis).collect();
    let sizes: Vec<usize> = bases.iter().map(|b| b.ncols()).collect();
    let build = |x: &[f64]| -> ComplexMatrix {
        let mut m = v.matrix().clone();
        let mut cursor = 0;
        for (b, &n) in bases.iter().zip(&sizes) {
            let h = block_generator(n, &x[cursor..cursor + n * n], false);
            m += *b * h.matrix() * b.adjoint();
            cursor += n * n;
        }
        m
    };
    let f = |x: &[f64]| -> f64 {
        Hermitian::symmetrized(build(x))
            .map(|h| h.operator_norm())
            .unwrap_or(f64::INFINITY)
    };

    let pinched: Vec<f64> = bases
        .iter()
        .flat_map(|b| block_coordinates(&(b.adjoint() * v.matrix() * *b).scale(-1.0)))
        .collect();
    let zeros = vec![0.0; pinched.len()];
    let opts = SearchOptions {
        step: 0.25 * v.operator_norm().max(1e-3),
        ..SearchOptions::default()
    };
    let best = [zeros, pinched]
        .iter()
        .map(|seed| polished_search(&f, seed, &opts))
        .reduce(|a, b| if b.value < a.value { b } else { a })
        .expect("two seeds");
    Ok((best.value, best.converged))
}

/// Inverse of [`block_generator`] without the trace constraint.
fn block_coordinates(h: &ComplexMatrix) -> Vec<f64> {
    let n = h.nrows();
    let mut p: Vec<f64> = (0..n).map(|k| h[(k, k)].re).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            p.push(h[(i, j)].re);
            p.push(h[(i, j)].im);
        }
    }
    p
}
