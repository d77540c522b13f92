use num_complex::Complex64;

use super::{Diagnostics, DistanceResult, Method};
use crate::error::{Error, Result};
use crate::matcore::{ComplexMatrix, Hermitian, StateVector, Unitary};
use crate::states::{isospectral, DensityMatrix, MatchedSpectra};
use crate::tolerance::Tolerances;

/// Overlaps below this take the orthogonal branch of the phase prescription.
const ORTHOGONAL_TOL: f64 = 1e-12;
const UNIT_NORM_TOL: f64 = 1e-9;

/// The plane spanned by two non-parallel unit vectors, with
/// `ψ⊥ ∝ φ − ⟨ψ|φ⟩ψ` and `φ⊥ ∝ ψ − ⟨φ|ψ⟩φ`.
struct PurePlane {
    psi: StateVector,
    phi: StateVector,
    psi_perp: StateVector,
    phi_perp: StateVector,
    /// `⟨ψ|φ⟩`.
    overlap: Complex64,
    angle: f64,
}

enum PureGeometry {
    Parallel,
    Plane(PurePlane),
}

fn check_unit(v: &StateVector, name: &str) -> Result<()> {
    let norm = v.norm();
    if !norm.is_finite() || (norm - 1.0).abs() > UNIT_NORM_TOL {
        return Err(Error::InvalidState(format!(
            "{name} has norm {norm}, expected 1"
        )));
    }
    Ok(())
}

fn pure_geometry(psi: &StateVector, phi: &StateVector) -> Result<PureGeometry> {
    if psi.len() != phi.len() {
        return Err(Error::InvalidDimension(format!(
            "state vectors have dimensions {} and {}",
            psi.len(),
            phi.len()
        )));
    }
    if psi.len() < 2 {
        return Err(Error::InvalidDimension(
            "pure-state distance needs dim >= 2".into(),
        ));
    }
    check_unit(psi, "psi")?;
    check_unit(phi, "phi")?;
    let psi = psi.unscale(psi.norm());
    let phi = phi.unscale(phi.norm());
    let overlap = psi.dotc(&phi);
    let residual = &phi - &psi * overlap;
    let s = residual.norm();
    if s <= Tolerances::current().zero_distance {
        return Ok(PureGeometry::Parallel);
    }
    let psi_perp = residual.unscale(s);
    let back = &psi - &phi * overlap.conj();
    let phi_perp = back.unscale(back.norm());
    Ok(PureGeometry::Plane(PurePlane {
        angle: s.atan2(overlap.norm()),
        psi,
        phi,
        psi_perp,
        phi_perp,
        overlap,
    }))
}

impl PurePlane {
    fn orthogonal(&self) -> bool {
        self.overlap.norm() <= ORTHOGONAL_TOL
    }

    /// `(e^{iφ₁}, e^{iφ₂})`.
    fn phases(&self) -> (Complex64, Complex64) {
        if self.orthogonal() {
            let e1 = -self.phi_perp.dotc(&self.psi);
            let e2 = self.phi.dotc(&self.psi_perp);
            (e1 / e1.norm(), e2 / e2.norm())
        } else {
            let e1 = self.phi.dotc(&self.psi);
            let e2 = self.phi_perp.dotc(&self.psi_perp);
            (e1 / e1.norm(), e2 / e2.norm())
        }
    }

    /// `e^{iφ₁}|φ⟩⟨ψ| + e^{iφ₂}|φ⊥⟩⟨ψ⊥| + (identity off the plane)`.
    fn unitary(&self) -> Unitary {
        let d = self.psi.len();
        let (e1, e2) = self.phases();
        let plane = &self.psi * self.psi.adjoint() + &self.psi_perp * self.psi_perp.adjoint();
        let u = ComplexMatrix::identity(d, d) - plane
            + (&self.phi * self.psi.adjoint()) * e1
            + (&self.phi_perp * self.psi_perp.adjoint()) * e2;
        Unitary::from_trusted(u)
    }

    /// `i ω |ψ⊥⟩⟨ψ| − i ω̄ |ψ⟩⟨ψ⊥|` with `ω = ⟨φ|ψ⟩/|⟨φ|ψ⟩|`, or `ω = −1` for
    /// orthogonal states; `exp(−i V angle)` equals [`PurePlane::unitary`].
    fn hamiltonian(&self) -> Hermitian {
        let omega = if self.orthogonal() {
            Complex64::new(-1.0, 0.0)
        } else {
            let c = self.overlap.conj();
            c / c.norm()
        };
        let i = Complex64::i();
        let m = (&self.psi_perp * self.psi.adjoint()) * (i * omega)
            - (&self.psi * self.psi_perp.adjoint()) * (i * omega.conj());
        Hermitian::symmetrized(m).expect("finite")
    }
}

/// `D = arccos|⟨ψ|φ⟩|` with the optimal unitary and drive in closed form.
pub fn pure_distance(psi: &StateVector, phi: &StateVector) -> Result<DistanceResult> {
    let d = psi.len();
    match pure_geometry(psi, phi)? {
        PureGeometry::Parallel => Ok(DistanceResult::zero(d, Method::PureClosedForm)),
        PureGeometry::Plane(plane) => Ok(DistanceResult {
            value: plane.angle,
            optimal_unitary: plane.unitary(),
            optimal_hamiltonian: Some(plane.hamiltonian()),
            method: Method::PureClosedForm,
            diagnostics: Diagnostics::closed_form(),
        }),
    }
}

/// The norm-one drive taking `ψ` to `φ` (up to phase) in time `arccos|⟨ψ|φ⟩|`.
pub fn pure_optimal_hamiltonian(psi: &StateVector, phi: &StateVector) -> Result<Hermitian> {
    match pure_geometry(psi, phi)? {
        PureGeometry::Parallel => Err(Error::NoEvolutionNeeded),
        PureGeometry::Plane(plane) => Ok(plane.hamiltonian()),
    }
}

/// `D = ½ arccos(n·m)` for isospectral qubit states with Bloch length `r > 0`,
/// and zero for `r = 0`.
pub fn qubit_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<DistanceResult> {
    if a.dim() != 2 || b.dim() != 2 {
        return Err(Error::InvalidDimension(format!(
            "qubit distance needs 2x2 states, got {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    let matched = isospectral(a, b, Tolerances::current().group)?;
    qubit_from_matched(&matched)
}

/// Applies the pure-state construction to the dominant eigenvectors.
pub(crate) fn qubit_from_matched(matched: &MatchedSpectra) -> Result<DistanceResult> {
    if matched.group_count() == 1 {
        return Ok(DistanceResult::zero(2, Method::QubitClosedForm));
    }
    let r1 = matched.rho.groups[0].basis.column(0).into_owned();
    let s1 = matched.sigma.groups[0].basis.column(0).into_owned();
    let mut result = pure_distance(&r1, &s1)?;
    result.method = Method::QubitClosedForm;
    Ok(result)
}
