#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use qcharge::matcore::{
    haar_unitary_with, random_unit_vector, Hermitian, SeededRng, StateVector, Unitary,
};
use qcharge::states::{random_simplex_spectrum, BlochVector, DensityMatrix};
use rand::Rng;
use rand_distr::StandardNormal;

pub use qcharge::matcore::seeded_rng;

/// `|⟨ψ|φ⟩|` straight from the vector entries.
pub fn overlap(psi: &StateVector, phi: &StateVector) -> f64 {
    psi.iter()
        .zip(phi.iter())
        .map(|(a, b)| a.conj() * b)
        .sum::<Complex64>()
        .norm()
}

pub fn pure(psi: &StateVector) -> DensityMatrix {
    DensityMatrix::pure(psi).unwrap()
}

pub fn random_vector(rng: &mut SeededRng, dim: usize) -> StateVector {
    random_unit_vector(rng, dim)
}

pub fn haar(rng: &mut SeededRng, dim: usize) -> Unitary {
    haar_unitary_with(rng, dim)
}

/// A random composition of `dim` into group sizes.
pub fn random_pattern(rng: &mut SeededRng, dim: usize) -> Vec<usize> {
    let mut left = dim;
    let mut sizes = Vec::new();
    while left > 0 {
        let n = rng.random_range(1..=left);
        sizes.push(n);
        left -= n;
    }
    sizes
}

/// Descending eigenvalues with the given multiplicities, distinct values at
/// least 1e-3 apart, summing to 1.
pub fn spectrum_with_pattern(rng: &mut SeededRng, pattern: &[usize]) -> Vec<f64> {
    loop {
        let mut groups: Vec<(f64, usize)> = pattern
            .iter()
            .map(|&n| (rng.random_range(0.05..1.0), n))
            .collect();
        let total: f64 = groups.iter().map(|(v, n)| v * *n as f64).sum();
        groups.iter_mut().for_each(|g| g.0 /= total);
        groups.sort_by(|a, b| b.0.total_cmp(&a.0));
        if groups.windows(2).all(|w| w[0].0 - w[1].0 > 1e-3) {
            return groups
                .iter()
                .flat_map(|&(v, n)| std::iter::repeat_n(v, n))
                .collect();
        }
    }
}

pub fn nondegenerate_spectrum(rng: &mut SeededRng, dim: usize) -> Vec<f64> {
    random_simplex_spectrum(rng, dim, 1e-3)
}

pub fn couple_with_spectrum(
    rng: &mut SeededRng,
    spectrum: &[f64],
) -> (DensityMatrix, DensityMatrix) {
    let d = spectrum.len();
    let u = haar(rng, d);
    let w = haar(rng, d);
    (
        DensityMatrix::from_spectrum(spectrum, &u).unwrap(),
        DensityMatrix::from_spectrum(spectrum, &w).unwrap(),
    )
}

/// Random couple with a random degeneracy pattern (pure and maximally mixed included).
pub fn random_couple(rng: &mut SeededRng, dim: usize) -> (DensityMatrix, DensityMatrix) {
    let pattern = random_pattern(rng, dim);
    let spectrum = spectrum_with_pattern(rng, &pattern);
    couple_with_spectrum(rng, &spectrum)
}

/// GUE-type Hermitian matrix rescaled to operator norm `norm`.
pub fn random_hermitian(rng: &mut SeededRng, dim: usize, norm: f64) -> Hermitian {
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let h = Hermitian::symmetrized(&g + g.adjoint()).unwrap();
    let n = h.operator_norm();
    h.scale(norm / n)
}

pub fn random_direction(rng: &mut SeededRng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        if v.iter().map(|x| x * x).sum::<f64>() > 1e-6 {
            return v;
        }
    }
}

pub fn random_bloch(rng: &mut SeededRng, r: f64) -> BlochVector {
    BlochVector::new(r, random_direction(rng)).unwrap()
}

/// `diag(p)` and `diag(p)` with its entries cyclically shifted by one, in a common random basis.
pub fn cyclic_couple(rng: &mut SeededRng, p: &[f64]) -> (DensityMatrix, DensityMatrix) {
    let d = p.len();
    let shifted: Vec<f64> = (0..d).map(|k| p[(k + d - 1) % d]).collect();
    let w = haar(rng, d);
    let rho = DensityMatrix::from_spectrum(p, &Unitary::identity(d)).unwrap();
    let sigma = DensityMatrix::from_spectrum(&shifted, &Unitary::identity(d)).unwrap();
    (rho.conjugate(&w), sigma.conjugate(&w))
}
