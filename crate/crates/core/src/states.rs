//! Density matrices, degeneracy-grouped spectral forms, isospectral matching,
//! Bloch vectors, and seeded random state generation.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::matcore::{
    haar_unitary_with, pauli, random_unit_vector, seeded_rng, ComplexMatrix, Hermitian,
    StateVector, Unitary,
};
use crate::tolerance::Tolerances;

/// Hermitian, positive semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(Hermitian);

impl DensityMatrix {
    pub fn new(op: Hermitian) -> Result<Self> {
        let tol = Tolerances::current();
        let trace = op.trace();
        if (trace - 1.0).abs() > tol.trace {
            return Err(Error::InvalidState(format!(
                "trace {trace} deviates from 1 by more than {:.1e}",
                tol.trace
            )));
        }
        let min = *op.eig().values.last().expect("non-empty");
        if min < -tol.psd_clamp {
            return Err(Error::InvalidState(format!(
                "eigenvalue {min:.3e} below -{:.1e}",
                tol.psd_clamp
            )));
        }
        Ok(Self(op))
    }

    pub fn from_matrix(m: ComplexMatrix) -> Result<Self> {
        Self::new(Hermitian::new(m)?)
    }

    /// `|ψ⟩⟨ψ|` for the normalized `psi`.
    pub fn pure(psi: &StateVector) -> Result<Self> {
        let norm = psi.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidState(
                "zero or non-finite state vector".into(),
            ));
        }
        Ok(Self(Hermitian::projector(&psi.unscale(norm))))
    }

    /// `Σ_k p_k |b_k⟩⟨b_k|` with `b_k` the columns of `basis`.
    pub fn from_spectrum(spectrum: &[f64], basis: &Unitary) -> Result<Self> {
        validate_spectrum(spectrum, basis.dim())?;
        let op = Hermitian::diagonal(spectrum).conjugate(basis);
        Self::new(op)
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension("dimension must be positive".into()));
        }
        Ok(Self(Hermitian::identity(dim).scale(1.0 / dim as f64)))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn operator(&self) -> &Hermitian {
        &self.0
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.0.matrix()
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, u: &Unitary) -> DensityMatrix {
        DensityMatrix(self.0.conjugate(u))
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.matrix().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        self.purity() >= 1.0 - tol
    }

    /// Eigenvector of the largest eigenvalue; the state vector of a pure state.
    pub fn dominant_vector(&self) -> StateVector {
        self.0.eig().vectors.column(0).into_owned()
    }

    pub fn frobenius_distance(&self, other: &DensityMatrix) -> f64 {
        (self.matrix() - other.matrix()).norm()
    }
}

pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

/// Default tolerance of [`is_pure`].
pub const PURITY_TOL: f64 = 1e-9;

pub fn is_pure(rho: &DensityMatrix, tol: f64) -> bool {
    rho.is_pure(tol)
}

/// One eigenvalue with its eigenspace.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenGroup {
    pub value: f64,
    /// Orthonormal basis of the eigenspace, `dim × multiplicity`.
    pub basis: ComplexMatrix,
}

impl EigenGroup {
    pub fn multiplicity(&self) -> usize {
        self.basis.ncols()
    }

    /// Orthogonal projector onto the eigenspace.
    pub fn projector(&self) -> Hermitian {
        Hermitian::symmetrized(&self.basis * self.basis.adjoint()).expect("finite")
    }
}

/// Eigenvalues grouped into degeneracy classes, strictly decreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralForm {
    pub dim: usize,
    pub groups: Vec<EigenGroup>,
}

impl SpectralForm {
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.groups
            .iter()
            .fold(ComplexMatrix::zeros(self.dim, self.dim), |acc, g| {
                acc + g.projector().into_matrix().scale(g.value)
            })
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.groups.iter().map(EigenGroup::multiplicity).collect()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.groups.iter().all(|g| g.multiplicity() == 1)
    }

    /// All eigenspace bases side by side, in group order (a unitary).
    pub fn basis_matrix(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        let mut col = 0;
        for g in &self.groups {
            out.columns_mut(col, g.multiplicity()).copy_from(&g.basis);
            col += g.multiplicity();
        }
        out
    }
}

/// Clusters the spectrum of `rho`. Consecutive eigenvalues closer than
/// `group_tol` share a group; a chain of such steps whose total spread reaches
/// `group_tol` cannot be grouped consistently and is reported as ambiguous.
pub fn spectral_form(rho: &DensityMatrix, group_tol: f64) -> Result<SpectralForm> {
    if group_tol.is_nan() || group_tol <= 0.0 {
        return Err(Error::InvalidConfig(
            "group tolerance must be positive".into(),
        ));
    }
    let eig = rho.operator().eig();
    let d = rho.dim();
    let mut groups = Vec::new();
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && eig.values[end - 1] - eig.values[end] < group_tol {
            end += 1;
        }
        let spread = eig.values[start] - eig.values[end - 1];
        if spread >= group_tol {
            let gaps = eig.values[start..end]
                .windows(2)
                .map(|w| w[0] - w[1])
                .collect();
            return Err(Error::DegeneracyAmbiguous {
                gaps,
                tolerance: group_tol,
            });
        }
        let value = eig.values[start..end].iter().sum::<f64>() / (end - start) as f64;
        groups.push(EigenGroup {
            value,
            basis: eig.vectors.columns(start, end - start).into_owned(),
        });
        start = end;
    }
    Ok(SpectralForm { dim: d, groups })
}

/// Spectral forms of two states whose groups pair up one-to-one by order.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchedSpectra {
    pub rho: SpectralForm,
    pub sigma: SpectralForm,
}

impl MatchedSpectra {
    pub fn dim(&self) -> usize {
        self.rho.dim
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.rho.multiplicities()
    }

    pub fn group_count(&self) -> usize {
        self.rho.groups.len()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.rho.is_nondegenerate()
    }
}

/// Pairs the degeneracy groups of `rho` and `sigma` in descending order and
/// checks that values agree within `tol` and multiplicities agree exactly.
pub fn isospectral(rho: &DensityMatrix, sigma: &DensityMatrix, tol: f64) -> Result<MatchedSpectra> {
    if rho.dim() != sigma.dim() {
        return Err(Error::InvalidDimension(format!(
            "states have dimensions {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let a = spectral_form(rho, tol)?;
    let b = spectral_form(sigma, tol)?;
    let n = a.groups.len().max(b.groups.len());
    for i in 0..n {
        let (ga, gb) = (a.groups.get(i), b.groups.get(i));
        let ok = match (ga, gb) {
            (Some(x), Some(y)) => {
                x.multiplicity() == y.multiplicity() && (x.value - y.value).abs() <= tol
            }
            _ => false,
        };
        if !ok {
            return Err(Error::SpectraMismatch {
                group: i,
                rho_value: ga.map_or(f64::NAN, |g| g.value),
                rho_multiplicity: ga.map_or(0, EigenGroup::multiplicity),
                sigma_value: gb.map_or(f64::NAN, |g| g.value),
                sigma_multiplicity: gb.map_or(0, EigenGroup::multiplicity),
            });
        }
    }
    Ok(MatchedSpectra { rho: a, sigma: b })
}

/// Checks that two spectral forms pair up group by group with equal multiplicities.
pub(crate) fn check_matched(a: &SpectralForm, b: &SpectralForm) -> Result<()> {
    if a.dim != b.dim {
        return Err(Error::InvalidDimension(format!(
            "spectral forms have dimensions {} and {}",
            a.dim, b.dim
        )));
    }
    let n = a.groups.len().max(b.groups.len());
    for i in 0..n {
        let (ga, gb) = (a.groups.get(i), b.groups.get(i));
        if ga.map(EigenGroup::multiplicity) != gb.map(EigenGroup::multiplicity) {
            return Err(Error::SpectraMismatch {
                group: i,
                rho_value: ga.map_or(f64::NAN, |g| g.value),
                rho_multiplicity: ga.map_or(0, EigenGroup::multiplicity),
                sigma_value: gb.map_or(f64::NAN, |g| g.value),
                sigma_multiplicity: gb.map_or(0, EigenGroup::multiplicity),
            });
        }
    }
    Ok(())
}

/// Qubit state `(I + r n·σ)/2` in Bloch form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub r: f64,
    pub n: [f64; 3],
}

impl BlochVector {
    /// Normalizes `n`; fails for `r` outside `[0, 1]` or a zero direction.
    pub fn new(r: f64, n: [f64; 3]) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::InvalidState(format!(
                "Bloch length {r} outside [0, 1]"
            )));
        }
        let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        if !(len.is_finite() && len > 0.0) {
            return Err(Error::InvalidState(
                "Bloch direction must be non-zero".into(),
            ));
        }
        Ok(Self {
            r,
            n: [n[0] / len, n[1] / len, n[2] / len],
        })
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.n.iter().zip(&other.n).map(|(a, b)| a * b).sum()
    }
}

pub fn from_bloch(b: &BlochVector) -> DensityMatrix {
    let [x, y, z] = pauli();
    let m = ComplexMatrix::identity(2, 2)
        + (x.scale(b.n[0]) + y.scale(b.n[1]) + z.scale(b.n[2])).scale(b.r);
    DensityMatrix(Hermitian::symmetrized(m.scale(0.5)).expect("finite"))
}

pub fn to_bloch(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::InvalidDimension(format!(
            "Bloch vectors need a qubit, got dimension {}",
            rho.dim()
        )));
    }
    let m = rho.matrix();
    let v = [
        2.0 * m[(0, 1)].re,
        -2.0 * m[(0, 1)].im,
        m[(0, 0)].re - m[(1, 1)].re,
    ];
    let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if r < 1e-15 {
        return Ok(BlochVector {
            r: 0.0,
            n: [0.0, 0.0, 1.0],
        });
    }
    Ok(BlochVector {
        r: r.min(1.0),
        n: [v[0] / r, v[1] / r, v[2] / r],
    })
}

/// Spectrum of a random couple: explicit, or drawn uniformly from the simplex.
#[derive(Debug, Clone, PartialEq)]
pub enum Spectrum {
    Given(Vec<f64>),
    Random,
}

pub(crate) fn validate_spectrum(p: &[f64], dim: usize) -> Result<()> {
    if p.len() != dim {
        return Err(Error::InvalidSpectrum(format!(
            "expected {dim} eigenvalues, got {}",
            p.len()
        )));
    }
    if p.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::InvalidSpectrum(
            "eigenvalues must be finite and >= 0".into(),
        ));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidSpectrum(format!(
            "eigenvalues sum to {sum}, not 1"
        )));
    }
    Ok(())
}

/// Uniform draw from the probability simplex, sorted descending, redrawn
/// until all adjacent gaps exceed `min_gap`.
pub fn random_simplex_spectrum<R: Rng + ?Sized>(rng: &mut R, dim: usize, min_gap: f64) -> Vec<f64> {
    loop {
        let mut p: Vec<f64> = (0..dim)
            .map(|_| -(1.0 - rng.random::<f64>()).ln())
            .collect();
        let sum: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= sum);
        p.sort_by(|a, b| b.total_cmp(a));
        if p.windows(2).all(|w| w[0] - w[1] > min_gap) {
            return p;
        }
    }
}

/// Two states sharing `spectrum` with independent Haar eigenbases.
pub fn random_isospectral_couple(
    dim: usize,
    spectrum: &Spectrum,
    seed: u64,
) -> Result<(DensityMatrix, DensityMatrix)> {
    if dim == 0 {
        return Err(Error::InvalidDimension("dimension must be positive".into()));
    }
    let mut rng = seeded_rng(seed);
    let p = match spectrum {
        Spectrum::Given(p) => {
            validate_spectrum(p, dim)?;
            p.clone()
        }
        Spectrum::Random => random_simplex_spectrum(&mut rng, dim, Tolerances::current().group),
    };
    let u = haar_unitary_with(&mut rng, dim);
    let w = haar_unitary_with(&mut rng, dim);
    Ok((
        DensityMatrix::from_spectrum(&p, &u)?,
        DensityMatrix::from_spectrum(&p, &w)?,
    ))
}

pub fn random_pure_state(dim: usize, seed: u64) -> Result<DensityMatrix> {
    if dim == 0 {
        return Err(Error::InvalidDimension("dimension must be positive".into()));
    }
    DensityMatrix::pure(&random_unit_vector(&mut seeded_rng(seed), dim))
}

/// Product vector `|a⟩ ⊗ |b⟩ ⊗ …`.
pub fn product_state(factors: &[StateVector]) -> StateVector {
    factors
        .iter()
        .skip(1)
        .fold(factors[0].clone(), |acc, f| acc.kronecker(f))
}

/// Computational basis state of `n` qubits from a bit string, e.g. `[1, 1]` = |11⟩.
pub fn qubit_basis_state(bits: &[u8]) -> StateVector {
    let d = 1usize << bits.len();
    let index = bits
        .iter()
        .fold(0usize, |acc, &b| (acc << 1) | usize::from(b != 0));
    let mut v = DVector::from_element(d, Complex64::new(0.0, 0.0));
    v[index] = Complex64::new(1.0, 0.0);
    v
}
