//! The charging distance `D(ρ, σ) = min ‖i ln U‖` over unitaries with
//! `U ρ U† = σ`, its optimal unitary and its optimal time-independent drive.
//!
//! Every connecting unitary has the form `S · (⊕ U_i) · R†`, where the columns
//! of `R` and `S` are eigenbases of `ρ` and `σ` grouped by eigenvalue and
//! `U_i` acts inside the `i`-th eigenspace. The search runs over Hermitian
//! generators `U_i = exp(i H_i)` with the global phase folded out analytically
//! by [`phase_gap_norm`].

mod closed_form;
mod oracle;

pub use closed_form::{pure_distance, pure_optimal_hamiltonian, qubit_distance};
pub use oracle::{brute_force_distance, brute_force_search};

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{
    centering_shift, eig_unitary, eigenphases, phase_gap_norm, propagator, wrap_phase,
    ComplexMatrix, Hermitian, Unitary,
};
use crate::optimize::{multi_start, SearchOptions};
use crate::states::{
    check_matched, isospectral, spectral_form, DensityMatrix, MatchedSpectra, SpectralForm,
    PURITY_TOL,
};
use crate::tolerance::Tolerances;

/// Values below this are reported as exactly zero (no drive is needed).
const ZERO_VALUE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    PureClosedForm,
    QubitClosedForm,
    PhaseOptimized,
    BlockOptimized,
    BruteForce,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::PureClosedForm => "pure-closed-form",
            Method::QubitClosedForm => "qubit-closed-form",
            Method::PhaseOptimized => "phase-optimized",
            Method::BlockOptimized => "block-optimized",
            Method::BruteForce => "brute-force",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    /// Optimizer starts (or oracle samples); zero for closed forms.
    pub starts: usize,
    /// Final objective of each start, in start order.
    pub best_per_start: Vec<f64>,
    pub converged: bool,
}

impl Diagnostics {
    pub(crate) fn closed_form() -> Self {
        Self {
            starts: 0,
            best_per_start: Vec::new(),
            converged: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceResult {
    pub value: f64,
    /// Connecting unitary with `‖i ln U‖ = value` on the principal branch.
    pub optimal_unitary: Unitary,
    /// `V` with `‖V‖ = 1` and `exp(−i V value) = optimal_unitary`; `None` when `value = 0`.
    pub optimal_hamiltonian: Option<Hermitian>,
    pub method: Method,
    pub diagnostics: Diagnostics,
}

impl DistanceResult {
    /// Wraps a connecting unitary: moves its global phase to the optimum and
    /// derives the normalized drive `i ln U / D`.
    pub(crate) fn from_unitary(u: &Unitary, method: Method, diagnostics: Diagnostics) -> Self {
        let eig = eig_unitary(u);
        let shift = centering_shift(&eig.phases);
        let phases: Vec<f64> = eig.phases.iter().map(|p| wrap_phase(p + shift)).collect();
        let value = phases.iter().fold(0.0, |acc: f64, p| acc.max(p.abs()));
        let optimal_unitary = u.with_global_phase(shift);
        if value < ZERO_VALUE {
            return Self {
                value: 0.0,
                optimal_unitary,
                optimal_hamiltonian: None,
                method,
                diagnostics,
            };
        }
        let mut scaled = eig.vectors.clone();
        for (k, phi) in phases.iter().enumerate() {
            let w = -phi / value;
            scaled.column_mut(k).iter_mut().for_each(|z| *z *= w);
        }
        let v = Hermitian::symmetrized(scaled * eig.vectors.adjoint()).expect("finite");
        Self {
            value,
            optimal_unitary,
            optimal_hamiltonian: Some(v),
            method,
            diagnostics,
        }
    }

    pub(crate) fn zero(dim: usize, method: Method) -> Self {
        Self {
            value: 0.0,
            optimal_unitary: Unitary::identity(dim),
            optimal_hamiltonian: None,
            method,
            diagnostics: Diagnostics::closed_form(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceOptions {
    /// Eigenvalues closer than this form one degeneracy group.
    pub group_tol: f64,
    pub starts: usize,
    pub max_iter: usize,
    pub xtol: f64,
    pub ftol: f64,
    pub seed: u64,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        Self {
            group_tol: Tolerances::current().group,
            starts: 16,
            max_iter: 2000,
            xtol: 1e-9,
            ftol: 1e-10,
            seed: 0,
        }
    }
}

impl DistanceOptions {
    fn search(&self) -> SearchOptions {
        SearchOptions {
            max_iter: self.max_iter,
            xtol: self.xtol,
            ftol: self.ftol,
            ..SearchOptions::default()
        }
    }
}

/// `Σ_i Σ_k |s_i^k⟩⟨r_i^k|`, mapping each eigenspace of `ρ` onto the matching
/// eigenspace of `σ`.
pub fn base_connector(sf_rho: &SpectralForm, sf_sigma: &SpectralForm) -> Result<Unitary> {
    check_matched(sf_rho, sf_sigma)?;
    let r = sf_rho.basis_matrix();
    let s = sf_sigma.basis_matrix();
    Ok(Unitary::from_trusted(s * r.adjoint()))
}

/// `x ↦ min_φ ‖i ln(e^{iφ} G(x) W)‖` with `W = R†S` and `G(x) = ⊕ exp(i H_i(x))`.
/// The first block's generator is traceless, which removes the global phase.
pub(crate) struct BlockObjective {
    w: ComplexMatrix,
    sizes: Vec<usize>,
    r: ComplexMatrix,
    s: ComplexMatrix,
}

impl BlockObjective {
    pub(crate) fn new(matched: &MatchedSpectra) -> Self {
        let r = matched.rho.basis_matrix();
        let s = matched.sigma.basis_matrix();
        Self {
            w: r.adjoint() * &s,
            sizes: matched.multiplicities(),
            r,
            s,
        }
    }

    pub(crate) fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub(crate) fn dim(&self) -> usize {
        self.w.nrows()
    }

    pub(crate) fn param_count(&self) -> usize {
        self.sizes.iter().map(|n| n * n).sum::<usize>() - 1
    }

    /// Block-diagonal `G(x)`.
    pub(crate) fn block_unitary(&self, x: &[f64]) -> ComplexMatrix {
        let d = self.dim();
        let mut g = ComplexMatrix::zeros(d, d);
        let mut offset = 0;
        let mut cursor = 0;
        for (i, &n) in self.sizes.iter().enumerate() {
            let traceless = i == 0;
            let count = n * n - usize::from(traceless);
            let p = &x[cursor..cursor + count];
            if n == 1 {
                let phase = if traceless { 0.0 } else { p[0] };
                g[(offset, offset)] = Complex64::from_polar(1.0, phase);
            } else {
                let h = block_generator(n, p, traceless);
                let u = propagator(&h, -1.0);
                g.view_mut((offset, offset), (n, n)).copy_from(u.matrix());
            }
            offset += n;
            cursor += count;
        }
        g
    }

    /// Gap-folded norm for an explicit block-diagonal unitary `g`.
    pub(crate) fn value_of_blocks(&self, g: &ComplexMatrix) -> f64 {
        phase_gap_norm(&eigenphases(&(g * &self.w)))
    }

    pub(crate) fn value(&self, x: &[f64]) -> f64 {
        if self.sizes.iter().all(|&n| n == 1) {
            // diagonal G: scale the rows of W
            let mut m = self.w.clone();
            for (i, &phi) in std::iter::once(&0.0).chain(x.iter()).enumerate() {
                let z = Complex64::from_polar(1.0, phi);
                m.row_mut(i).iter_mut().for_each(|e| *e *= z);
            }
            return phase_gap_norm(&eigenphases(&m));
        }
        self.value_of_blocks(&self.block_unitary(x))
    }

    /// `S G R†`.
    pub(crate) fn connector(&self, g: &ComplexMatrix) -> Unitary {
        Unitary::from_trusted(&self.s * g * self.r.adjoint())
    }
}

/// Hermitian `n × n` generator from `n²` real coordinates (`n² − 1` when
/// traceless): diagonal entries first, then `(re, im)` of the upper triangle.
pub(crate) fn block_generator(n: usize, p: &[f64], traceless: bool) -> Hermitian {
    let mut h = ComplexMatrix::zeros(n, n);
    let free_diag = if traceless { n - 1 } else { n };
    let mut sum = 0.0;
    for k in 0..free_diag {
        h[(k, k)] = Complex64::new(p[k], 0.0);
        sum += p[k];
    }
    if traceless {
        h[(n - 1, n - 1)] = Complex64::new(-sum, 0.0);
    }
    let mut c = free_diag;
    for i in 0..n {
        for j in (i + 1)..n {
            let z = Complex64::new(p[c], p[c + 1]);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            c += 2;
        }
    }
    Hermitian::symmetrized(h).expect("finite generator")
}

fn optimize_blocks(
    matched: &MatchedSpectra,
    opts: &DistanceOptions,
    method: Method,
) -> DistanceResult {
    let objective = BlockObjective::new(matched);
    let n = objective.param_count();
    let f = |x: &[f64]| objective.value(x);
    let search = multi_start(
        &f,
        n,
        opts.starts,
        &[vec![0.0; n]],
        PI,
        opts.seed,
        &opts.search(),
    );
    let g = objective.block_unitary(&search.best.x);
    let diagnostics = Diagnostics {
        starts: search.per_start.len(),
        best_per_start: search.per_start,
        converged: search.best.converged,
    };
    DistanceResult::from_unitary(&objective.connector(&g), method, diagnostics)
}

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

fn is_zero_couple(rho: &DensityMatrix, sigma: &DensityMatrix) -> bool {
    rho.frobenius_distance(sigma) <= Tolerances::current().zero_distance
}

/// Phase search for couples with non-degenerate spectra: `d − 1` relative
/// phases, the first fixed to zero.
pub fn distance_nondegenerate(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    opts: &DistanceOptions,
) -> Result<DistanceResult> {
    check_dims(rho, sigma)?;
    let matched = isospectral(rho, sigma, opts.group_tol)?;
    if !matched.is_nondegenerate() {
        return Err(Error::WrongMethod(format!(
            "spectrum has multiplicities {:?}; use distance_general",
            matched.multiplicities()
        )));
    }
    if is_zero_couple(rho, sigma) {
        return Ok(DistanceResult::zero(rho.dim(), Method::PhaseOptimized));
    }
    Ok(optimize_blocks(&matched, opts, Method::PhaseOptimized))
}

/// Charging distance for any isospectral couple.
///
/// Dispatch: identical states, both pure, qubits, non-degenerate spectra,
/// then the general block search.
pub fn distance_general(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    opts: &DistanceOptions,
) -> Result<DistanceResult> {
    check_dims(rho, sigma)?;
    let d = rho.dim();
    let both_pure = rho.is_pure(PURITY_TOL) && sigma.is_pure(PURITY_TOL);
    if is_zero_couple(rho, sigma) {
        let method = if both_pure {
            Method::PureClosedForm
        } else if d == 2 {
            Method::QubitClosedForm
        } else {
            match spectral_form(rho, opts.group_tol) {
                Ok(sf) if sf.is_nondegenerate() => Method::PhaseOptimized,
                _ => Method::BlockOptimized,
            }
        };
        return Ok(DistanceResult::zero(d, method));
    }
    let matched = isospectral(rho, sigma, opts.group_tol)?;
    if both_pure && d >= 2 {
        return pure_distance(&rho.dominant_vector(), &sigma.dominant_vector());
    }
    if d == 2 {
        return closed_form::qubit_from_matched(&matched);
    }
    if matched.group_count() == 1 {
        return Ok(DistanceResult::zero(d, Method::BlockOptimized));
    }
    let method = if matched.is_nondegenerate() {
        Method::PhaseOptimized
    } else {
        Method::BlockOptimized
    };
    Ok(optimize_blocks(&matched, opts, method))
}

/// [`distance_general`] with default options.
pub fn distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<DistanceResult> {
    distance_general(rho, sigma, &DistanceOptions::default())
}
