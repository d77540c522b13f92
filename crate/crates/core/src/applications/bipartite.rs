use crate::error::{Error, Result};
use crate::matcore::{ComplexMatrix, Hermitian};
use crate::states::DensityMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Reduced state on `keep` of a state on `C^{dim_a} ⊗ C^{dim_b}`.
pub fn partial_trace(
    rho: &DensityMatrix,
    dim_a: usize,
    dim_b: usize,
    keep: Subsystem,
) -> Result<DensityMatrix> {
    if dim_a * dim_b != rho.dim() || dim_a == 0 || dim_b == 0 {
        return Err(Error::InvalidDimension(format!(
            "{dim_a} x {dim_b} does not factor dimension {}",
            rho.dim()
        )));
    }
    let m = rho.matrix();
    let reduced = match keep {
        Subsystem::A => ComplexMatrix::from_fn(dim_a, dim_a, |i, j| {
            (0..dim_b).map(|k| m[(i * dim_b + k, j * dim_b + k)]).sum()
        }),
        Subsystem::B => ComplexMatrix::from_fn(dim_b, dim_b, |i, j| {
            (0..dim_a).map(|k| m[(k * dim_b + i, k * dim_b + j)]).sum()
        }),
    };
    DensityMatrix::new(Hermitian::symmetrized(reduced)?)
}

/// `−tr ρ ln ρ` in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    rho.operator()
        .eig()
        .values
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum::<f64>()
        .max(0.0)
}

/// Entropy of the reduced state on the first factor; the entanglement entropy
/// when `rho` is pure.
pub fn entanglement_entropy(rho: &DensityMatrix, dim_a: usize, dim_b: usize) -> Result<f64> {
    Ok(von_neumann_entropy(&partial_trace(
        rho,
        dim_a,
        dim_b,
        Subsystem::A,
    )?))
}
