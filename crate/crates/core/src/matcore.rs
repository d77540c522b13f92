//! Dense complex-matrix kernels: Hermitian and unitary eigendecompositions,
//! the principal logarithm of a unitary, PSD square roots, norms, and Haar
//! sampling.
//!
//! Two validated newtypes carry the invariants the rest of the crate relies on:
//! [`Hermitian`] and [`Unitary`]. Raw matrices are plain
//! [`nalgebra::DMatrix`] values of [`Complex64`].

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

pub type ComplexMatrix = DMatrix<Complex64>;
pub type StateVector = DVector<Complex64>;

/// Seeded generator used for every random draw in the crate.
pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub(crate) fn check_square_finite(m: &ComplexMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidMatrix(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() == 0 {
        return Err(Error::InvalidDimension(
            "matrix dimension must be positive".into(),
        ));
    }
    if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::InvalidMatrix("non-finite entry".into()));
    }
    Ok(())
}

/// Hermitian operator with `‖A − A†‖_F ≤ tol·‖A‖_F`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hermitian(ComplexMatrix);

impl Hermitian {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        check_square_finite(&m)?;
        let tol = Tolerances::current().hermiticity;
        let deviation = (&m - m.adjoint()).norm();
        let scale = m.norm();
        if deviation > tol * scale {
            return Err(Error::NotHermitian {
                deviation,
                tolerance: tol * scale,
            });
        }
        Ok(Self(m))
    }

    /// Projects a numerically computed matrix onto its Hermitian part.
    pub fn symmetrized(m: ComplexMatrix) -> Result<Self> {
        check_square_finite(&m)?;
        let h = (&m + m.adjoint()).scale(0.5);
        Ok(Self(h))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(ComplexMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim, dim))
    }

    /// Real diagonal operator.
    pub fn diagonal(values: &[f64]) -> Self {
        let d = values.len();
        Self(ComplexMatrix::from_fn(d, d, |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                C_ZERO
            }
        }))
    }

    /// `|v⟩⟨v|`.
    pub fn projector(v: &StateVector) -> Self {
        Self(v * v.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn scale(&self, factor: f64) -> Hermitian {
        Hermitian(self.0.scale(factor))
    }

    pub fn add(&self, other: &Hermitian) -> Hermitian {
        Hermitian(&self.0 + &other.0)
    }

    /// `tr(A·B)` taken as real; exact for two Hermitian operators.
    pub fn expectation(&self, rho: &Hermitian) -> f64 {
        (&self.0 * &rho.0).trace().re
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn eig(&self) -> HermitianEigen {
        let eig = self.0.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = ComplexMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            eig.eigenvectors[(i, order[j])]
        });
        HermitianEigen { values, vectors }
    }

    /// Largest absolute eigenvalue.
    pub fn operator_norm(&self) -> f64 {
        self.eig()
            .values
            .iter()
            .fold(0.0, |acc: f64, v| acc.max(v.abs()))
    }

    /// Conjugation `W A W†`.
    pub fn conjugate(&self, w: &Unitary) -> Hermitian {
        Hermitian::symmetrized(&w.0 * &self.0 * w.0.adjoint()).expect("finite by construction")
    }
}

/// Eigendecomposition of a Hermitian operator, eigenvalues sorted descending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `Σ f(λ_k) v_k v_k†`.
    pub fn apply<F: Fn(f64) -> Complex64>(&self, f: F) -> ComplexMatrix {
        let mut scaled = self.vectors.clone();
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            scaled.column_mut(k).iter_mut().for_each(|z| *z *= w);
        }
        scaled * self.vectors.adjoint()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply(|l| Complex64::new(l, 0.0))
    }
}

pub fn eig_hermitian(a: &Hermitian) -> Result<HermitianEigen> {
    check_square_finite(a.matrix())?;
    Ok(a.eig())
}

/// Unitary matrix with `‖U†U − I‖_F ≤ tol·dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary(ComplexMatrix);

impl Unitary {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        check_square_finite(&m)?;
        let d = m.nrows();
        let tol = Tolerances::current().unitarity * d as f64;
        let deviation = (m.adjoint() * &m - ComplexMatrix::identity(d, d)).norm();
        if deviation > tol {
            return Err(Error::NotUnitary {
                deviation,
                tolerance: tol,
            });
        }
        Ok(Self(m))
    }

    /// Wraps a matrix built from unitary factors without re-checking.
    pub(crate) fn from_trusted(m: ComplexMatrix) -> Self {
        debug_assert!(
            (m.adjoint() * &m - ComplexMatrix::identity(m.nrows(), m.nrows())).norm()
                < 1e-8 * m.nrows() as f64
        );
        Self(m)
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn adjoint(&self) -> Unitary {
        Unitary(self.0.adjoint())
    }

    pub fn compose(&self, rhs: &Unitary) -> Unitary {
        Unitary(&self.0 * &rhs.0)
    }

    /// `e^{iφ} U`.
    pub fn with_global_phase(&self, phi: f64) -> Unitary {
        Unitary(self.0.map(|z| z * Complex64::from_polar(1.0, phi)))
    }

    pub fn apply(&self, v: &StateVector) -> StateVector {
        &self.0 * v
    }
}

/// Maps the argument of `z` to the principal branch `(−π, π]`.
pub fn principal_phase(z: Complex64) -> f64 {
    wrap_phase(z.im.atan2(z.re))
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap_phase(phi: f64) -> f64 {
    let mut p = phi.rem_euclid(2.0 * PI);
    if p > PI {
        p -= 2.0 * PI;
    }
    if p <= -PI {
        p = PI;
    }
    p
}

/// Eigendecomposition of a unitary: `U = Σ e^{iφ_k} v_k v_k†`.
#[derive(Debug, Clone)]
pub struct UnitaryEigen {
    /// Principal-branch phases in `(−π, π]`.
    pub phases: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl UnitaryEigen {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut scaled = self.vectors.clone();
        for (k, &phi) in self.phases.iter().enumerate() {
            let w = Complex64::from_polar(1.0, phi);
            scaled.column_mut(k).iter_mut().for_each(|z| *z *= w);
        }
        scaled * self.vectors.adjoint()
    }
}

// Generic probe angle for the top-level Hermitian reduction; sub-blocks use a
// trace-aligned probe instead.
const TOP_PROBE: f64 = 0.412_310_562_561_766;
const MAX_SPLIT_DEPTH: usize = 8;

/// Diagonalizes a (numerically) unitary matrix by reducing to the Hermitian
/// part of `e^{−iθ}U`, then splitting any cluster of coincident probe
/// eigenvalues with a fresh probe aligned to the cluster.
fn eig_normal(u: &ComplexMatrix, depth: usize) -> (Vec<f64>, ComplexMatrix) {
    let n = u.nrows();
    if n == 1 {
        return (
            vec![principal_phase(u[(0, 0)])],
            ComplexMatrix::identity(1, 1),
        );
    }
    let theta = if depth == 0 {
        TOP_PROBE
    } else {
        principal_phase(u.trace()) + 0.5 * PI
    };
    let rot = Complex64::from_polar(1.0, -theta);
    let probe = (u.map(|z| z * rot) + u.adjoint().map(|z| z * rot.conj())).scale(0.5);
    let eig = Hermitian(probe).eig();
    let v = eig.vectors;
    let m = v.adjoint() * u * &v;

    let spread = eig.values[0] - eig.values[n - 1];
    let cluster_tol = (1e-5 * spread).max(1e-12);

    let mut phases = vec![0.0; n];
    let mut vectors = ComplexMatrix::zeros(n, n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eig.values[end - 1] - eig.values[end] <= cluster_tol {
            end += 1;
        }
        let size = end - start;
        if size == 1 {
            phases[start] = principal_phase(m[(start, start)]);
            vectors.set_column(start, &v.column(start));
        } else {
            let block = m.view((start, start), (size, size)).into_owned();
            let off_diag: f64 = (0..size)
                .flat_map(|i| (0..size).map(move |j| (i, j)))
                .filter(|(i, j)| i != j)
                .map(|(i, j)| block[(i, j)].norm_sqr())
                .sum::<f64>()
                .sqrt();
            let v_block = v.columns(start, size).into_owned();
            if off_diag <= 1e-13 * size as f64 || depth >= MAX_SPLIT_DEPTH {
                for k in 0..size {
                    phases[start + k] = principal_phase(block[(k, k)]);
                }
                vectors.columns_mut(start, size).copy_from(&v_block);
            } else {
                let (sub_phases, w) = eig_normal(&block, depth + 1);
                phases[start..end].copy_from_slice(&sub_phases);
                vectors.columns_mut(start, size).copy_from(&(v_block * w));
            }
        }
        start = end;
    }
    (phases, vectors)
}

pub fn eig_unitary(u: &Unitary) -> UnitaryEigen {
    let (phases, vectors) = eig_normal(&u.0, 0);
    UnitaryEigen { phases, vectors }
}

/// Principal-branch eigenphases of a unitary matrix given as raw entries.
pub fn eigenphases(u: &ComplexMatrix) -> Vec<f64> {
    eig_normal(u, 0).0
}

/// `‖i ln U‖` on the principal branch.
pub fn log_unitary_norm(u: &Unitary) -> f64 {
    eig_unitary(u)
        .phases
        .iter()
        .fold(0.0, |acc: f64, p| acc.max(p.abs()))
}

/// Largest circular gap between sorted phases, including the wraparound gap.
pub fn max_circular_gap(phases: &[f64]) -> (f64, f64) {
    if phases.is_empty() {
        return (2.0 * PI, 0.0);
    }
    let mut sorted = phases.to_vec();
    sorted.sort_by(f64::total_cmp);
    let last = sorted[sorted.len() - 1];
    // (gap, phase at the lower end of the gap)
    let mut best = (2.0 * PI - (last - sorted[0]), last);
    for w in sorted.windows(2) {
        let gap = w[1] - w[0];
        if gap > best.0 {
            best = (gap, w[0]);
        }
    }
    best
}

/// `min_φ ‖i ln(e^{iφ} U)‖ = π − Δφ_max/2` for a set of eigenphases.
pub fn phase_gap_norm(phases: &[f64]) -> f64 {
    let (gap, _) = max_circular_gap(phases);
    (PI - 0.5 * gap).max(0.0)
}

/// Global phase `s` such that the phases of `e^{is} U` attain [`phase_gap_norm`]:
/// the middle of the largest gap is moved onto the branch cut.
pub fn centering_shift(phases: &[f64]) -> f64 {
    let (gap, lower) = max_circular_gap(phases);
    wrap_phase(PI - (lower + 0.5 * gap))
}

pub fn min_global_phase_norm(u: &Unitary) -> f64 {
    phase_gap_norm(&eig_unitary(u).phases)
}

/// `i ln U` on the principal branch, i.e. `−Σ φ_k v_k v_k†`.
pub fn i_log_unitary(u: &Unitary) -> Hermitian {
    let e = eig_unitary(u);
    let mut scaled = e.vectors.clone();
    for (k, &phi) in e.phases.iter().enumerate() {
        scaled.column_mut(k).iter_mut().for_each(|z| *z *= -phi);
    }
    Hermitian::symmetrized(scaled * e.vectors.adjoint()).expect("finite by construction")
}

/// `exp(−i H t)`.
pub fn propagator(h: &Hermitian, t: f64) -> Unitary {
    let e = h.eig();
    Unitary(e.apply(|l| Complex64::from_polar(1.0, -l * t)))
}

pub fn operator_norm(a: &ComplexMatrix) -> Result<f64> {
    check_square_finite(a)?;
    Ok(a.clone().singular_values().max())
}

pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    check_square_finite(a)?;
    Ok(a.clone().singular_values().sum())
}

/// Principal square root of a positive semidefinite operator; eigenvalues
/// above `−psd_clamp` and below rounding level are set to zero first.
pub fn matrix_sqrt_psd(a: &Hermitian) -> Result<Hermitian> {
    let e = a.eig();
    let clamp = Tolerances::current().psd_clamp;
    let min = *e.values.last().expect("non-empty");
    if min < -clamp {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    // eigenvalues at rounding level are exact zeros; their square roots would not be
    let floor = 64.0 * f64::EPSILON * e.values[0].abs().max(1.0);
    Hermitian::symmetrized(e.apply(|l| {
        let l = if l <= floor { 0.0 } else { l };
        Complex64::new(l.sqrt(), 0.0)
    }))
}

/// Haar-distributed unitary from a complex Ginibre matrix, QR-orthonormalized
/// with the phases of `R`'s diagonal moved back into `Q`.
pub fn haar_unitary_with<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Unitary {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        q.column_mut(j).iter_mut().for_each(|z| *z *= phase);
    }
    Unitary(q)
}

pub fn haar_unitary(dim: usize, seed: u64) -> Result<Unitary> {
    if dim == 0 {
        return Err(Error::InvalidDimension(
            "Haar unitary needs dim >= 1".into(),
        ));
    }
    Ok(haar_unitary_with(&mut seeded_rng(seed), dim))
}

/// Haar-random unit vector (first column of a Haar unitary).
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> StateVector {
    haar_unitary_with(rng, dim).0.column(0).into_owned()
}

/// Pauli matrices σ_x, σ_y, σ_z.
pub fn pauli() -> [ComplexMatrix; 3] {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    [
        ComplexMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]),
        ComplexMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]),
        ComplexMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]),
    ]
}

/// Computational basis vector `|k⟩` in dimension `dim`.
pub fn basis_vector(dim: usize, k: usize) -> StateVector {
    let mut v = StateVector::zeros(dim);
    v[k] = Complex64::new(1.0, 0.0);
    v
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag_phases(phases: &[f64]) -> Unitary {
        let d = phases.len();
        Unitary::new(ComplexMatrix::from_fn(d, d, |i, j| {
            if i == j {
                Complex64::from_polar(1.0, phases[i])
            } else {
                C_ZERO
            }
        }))
        .unwrap()
    }

    #[test]
    fn eig_hermitian_identity_and_paulis() {
        let e = eig_hermitian(&Hermitian::identity(2)).unwrap();
        assert_abs_diff_eq!(e.values[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.values[1], 1.0, epsilon = 1e-14);

        let [x, _, z] = pauli();
        let e = eig_hermitian(&Hermitian::new(z).unwrap()).unwrap();
        assert_eq!(e.values, vec![1.0, -1.0]);
        assert_abs_diff_eq!(e.vectors[(0, 0)].norm(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.vectors[(1, 1)].norm(), 1.0, epsilon = 1e-14);

        let e = eig_hermitian(&Hermitian::new(x).unwrap()).unwrap();
        assert_abs_diff_eq!(e.values[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.values[1], -1.0, epsilon = 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // (1, 1)/√2 and (1, −1)/√2 up to phase
        let v0 = e.vectors.column(0);
        assert_abs_diff_eq!((v0[0] * v0[1].conj()).re, 0.5, epsilon = 1e-12);
        let v1 = e.vectors.column(1);
        assert_abs_diff_eq!((v1[0] * v1[1].conj()).re, -0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(v0[0].norm(), s, epsilon = 1e-12);
    }

    #[test]
    fn hermitian_rejects_bad_input() {
        let m = ComplexMatrix::from_row_slice(2, 2, &[c(1., 0.), c(1., 0.), c(0., 0.), c(1., 0.)]);
        assert!(matches!(Hermitian::new(m), Err(Error::NotHermitian { .. })));
        let m = ComplexMatrix::from_row_slice(1, 1, &[c(f64::NAN, 0.)]);
        assert!(matches!(Hermitian::new(m), Err(Error::InvalidMatrix(_))));
    }

    #[test]
    fn eig_unitary_examples() {
        let e = eig_unitary(&Unitary::identity(3));
        assert!(e.phases.iter().all(|p| p.abs() < 1e-14));

        let e = eig_unitary(&diag_phases(&[PI / 2.0, -PI / 2.0]));
        let mut p = e.phases.clone();
        p.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(p[0], -PI / 2.0, epsilon = 1e-13);
        assert_abs_diff_eq!(p[1], PI / 2.0, epsilon = 1e-13);

        let [x, _, _] = pauli();
        let e = eig_unitary(&Unitary::new(x).unwrap());
        let mut p = e.phases.clone();
        p.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(p[0], 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(p[1], PI, epsilon = 1e-13);
    }

    #[test]
    fn branch_cut_maps_minus_pi_to_pi() {
        assert_eq!(principal_phase(c(-1.0, -0.0)), PI);
        assert_eq!(principal_phase(c(-1.0, 0.0)), PI);
        assert_eq!(wrap_phase(-PI), PI);
        assert_abs_diff_eq!(wrap_phase(3.0 * PI / 2.0), -PI / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn log_norm_examples() {
        assert_eq!(log_unitary_norm(&Unitary::identity(2)), 0.0);
        let [x, _, _] = pauli();
        assert_abs_diff_eq!(
            log_unitary_norm(&Unitary::new(x).unwrap()),
            PI,
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(
            log_unitary_norm(&diag_phases(&[PI / 4.0, -PI / 3.0])),
            PI / 3.0,
            epsilon = 1e-13
        );
    }

    #[test]
    fn global_phase_norm_examples() {
        assert_abs_diff_eq!(
            min_global_phase_norm(&Unitary::identity(4)),
            0.0,
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(
            min_global_phase_norm(&diag_phases(&[0.0, PI])),
            PI / 2.0,
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(
            min_global_phase_norm(&diag_phases(&[0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0])),
            2.0 * PI / 3.0,
            epsilon = 1e-13
        );
    }

    #[test]
    fn centering_shift_attains_gap_norm() {
        for phases in [
            vec![0.1, 2.0, -2.5],
            vec![3.0, -3.0],
            vec![0.0, PI],
            vec![PI - 0.01, PI],
        ] {
            let s = centering_shift(&phases);
            let max = phases
                .iter()
                .map(|p| wrap_phase(p + s).abs())
                .fold(0.0, f64::max);
            assert_abs_diff_eq!(max, phase_gap_norm(&phases), epsilon = 1e-13);
        }
    }

    #[test]
    fn eig_unitary_resolves_probe_collisions() {
        // Phases symmetric about the top-level probe collide in its Hermitian part.
        let phases = [
            TOP_PROBE + 0.3,
            TOP_PROBE - 0.3,
            2.0,
            TOP_PROBE + 1e-7,
            TOP_PROBE,
        ];
        let w = haar_unitary(5, 11).unwrap();
        let u = Unitary::new(w.matrix() * diag_phases(&phases).matrix() * w.matrix().adjoint())
            .unwrap();
        let e = eig_unitary(&u);
        assert!((e.reconstruct() - u.matrix()).norm() < 1e-10);
        let mut got = e.phases.clone();
        got.sort_by(f64::total_cmp);
        let mut want = phases.to_vec();
        want.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(&want) {
            assert_abs_diff_eq!(g, w, epsilon = 1e-10);
        }
    }

    #[test]
    fn operator_and_trace_norm_examples() {
        assert_eq!(operator_norm(&ComplexMatrix::zeros(2, 2)).unwrap(), 0.0);
        let [x, _, z] = pauli();
        assert_abs_diff_eq!(operator_norm(&x).unwrap(), 1.0, epsilon = 1e-14);
        let d = Hermitian::diagonal(&[3.0, -5.0]);
        assert_abs_diff_eq!(operator_norm(d.matrix()).unwrap(), 5.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d.operator_norm(), 5.0, epsilon = 1e-14);

        assert_eq!(trace_norm(&ComplexMatrix::zeros(3, 3)).unwrap(), 0.0);
        assert_abs_diff_eq!(trace_norm(&z).unwrap(), 2.0, epsilon = 1e-14);
        let p0 = Hermitian::projector(&basis_vector(2, 0));
        let p1 = Hermitian::projector(&basis_vector(2, 1));
        assert_abs_diff_eq!(
            trace_norm(&(p0.matrix() - p1.matrix())).unwrap(),
            2.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn sqrt_examples() {
        let s = matrix_sqrt_psd(&Hermitian::identity(3)).unwrap();
        assert!((s.matrix() - ComplexMatrix::identity(3, 3)).norm() < 1e-14);
        let s = matrix_sqrt_psd(&Hermitian::diagonal(&[4.0, 9.0])).unwrap();
        assert!((s.matrix() - Hermitian::diagonal(&[2.0, 3.0]).matrix()).norm() < 1e-13);

        // ¼(I + X) = ½|+⟩⟨+|, whose root is (1/√2)|+⟩⟨+|
        let [x, _, _] = pauli();
        let a = Hermitian::new((ComplexMatrix::identity(2, 2) + x).scale(0.25)).unwrap();
        let root = matrix_sqrt_psd(&a).unwrap();
        let plus = (basis_vector(2, 0) + basis_vector(2, 1)).scale(std::f64::consts::FRAC_1_SQRT_2);
        let want = Hermitian::projector(&plus).scale(std::f64::consts::FRAC_1_SQRT_2);
        assert!((root.matrix() - want.matrix()).norm() < 1e-12);
        assert!((root.matrix() * root.matrix() - a.matrix()).norm() < 1e-12);

        assert!(matches!(
            matrix_sqrt_psd(&Hermitian::diagonal(&[1.0, -0.1])),
            Err(Error::NotPsd { .. })
        ));
        // tiny negative noise is clamped
        assert!(matrix_sqrt_psd(&Hermitian::diagonal(&[1.0, -1e-12])).is_ok());
    }

    #[test]
    fn haar_examples() {
        let u = haar_unitary(1, 5).unwrap();
        assert_abs_diff_eq!(u.matrix()[(0, 0)].norm(), 1.0, epsilon = 1e-14);
        assert_eq!(haar_unitary(3, 42).unwrap(), haar_unitary(3, 42).unwrap());
        assert_ne!(haar_unitary(3, 42).unwrap(), haar_unitary(3, 43).unwrap());
        let u = haar_unitary(4, 7).unwrap();
        for col in u.matrix().column_iter() {
            assert_abs_diff_eq!(col.norm(), 1.0, epsilon = 1e-12);
        }
        assert!(matches!(
            haar_unitary(0, 1),
            Err(Error::InvalidDimension(_))
        ));
    }

    #[test]
    fn unitary_rejects_non_unitary() {
        let m = ComplexMatrix::identity(2, 2).scale(1.1);
        assert!(matches!(Unitary::new(m), Err(Error::NotUnitary { .. })));
    }

    fn random_hermitian(dim: usize, seed: u64) -> Hermitian {
        let mut rng = seeded_rng(seed);
        let g = ComplexMatrix::from_fn(dim, dim, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        Hermitian::symmetrized(g).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn log_reconstructs_unitary(dim in 1usize..7, seed in any::<u64>()) {
            let u = haar_unitary(dim, seed).unwrap();
            let h = i_log_unitary(&u);
            // exp(−i · (i ln U)) = U
            let back = propagator(&h, 1.0);
            prop_assert!((back.matrix() - u.matrix()).norm() < 1e-9);
            prop_assert!((eig_unitary(&u).reconstruct() - u.matrix()).norm() < 1e-9);
        }

        #[test]
        fn global_phase_never_hurts(dim in 1usize..7, seed in any::<u64>(), phi in -PI..PI) {
            let u = haar_unitary(dim, seed).unwrap();
            let m = min_global_phase_norm(&u);
            prop_assert!(m <= log_unitary_norm(&u) + 1e-12);
            let m2 = min_global_phase_norm(&u.with_global_phase(phi));
            prop_assert!((m - m2).abs() < 1e-10);
        }

        #[test]
        fn hermitian_eig_reconstructs(dim in 1usize..7, seed in any::<u64>()) {
            let a = random_hermitian(dim, seed);
            let e = eig_hermitian(&a).unwrap();
            prop_assert!((e.reconstruct() - a.matrix()).norm() < 1e-10 * (1.0 + a.matrix().norm()));
            prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
            let gram = e.vectors.adjoint() * &e.vectors;
            prop_assert!((gram - ComplexMatrix::identity(dim, dim)).norm() < 1e-10);
            prop_assert!((a.operator_norm() - operator_norm(a.matrix()).unwrap()).abs() < 1e-10);
        }

        #[test]
        fn norms_are_homogeneous_and_subadditive(dim in 1usize..6, s1 in any::<u64>(), s2 in any::<u64>(), k in -3.0f64..3.0) {
            let a = random_hermitian(dim, s1).into_matrix();
            let b = haar_unitary(dim, s2).unwrap().into_matrix();
            for norm in [operator_norm, trace_norm] {
                let na = norm(&a).unwrap();
                let nb = norm(&b).unwrap();
                prop_assert!((norm(&a.scale(k)).unwrap() - k.abs() * na).abs() < 1e-10 * (1.0 + na));
                prop_assert!(norm(&(&a + &b)).unwrap() <= na + nb + 1e-10);
            }
        }
    }
}
