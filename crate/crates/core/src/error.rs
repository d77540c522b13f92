use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("matrix is not unitary (deviation {deviation:.3e} > {tolerance:.3e})")]
    NotUnitary { deviation: f64, tolerance: f64 },

    #[error("matrix is not Hermitian (deviation {deviation:.3e} > {tolerance:.3e})")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("ambiguous degeneracy grouping; consecutive gaps {gaps:?} chain across the tolerance {tolerance:.3e}")]
    DegeneracyAmbiguous { gaps: Vec<f64>, tolerance: f64 },

    #[error("spectra mismatch at group {group}: ({rho_value}, n={rho_multiplicity}) vs ({sigma_value}, n={sigma_multiplicity})")]
    SpectraMismatch {
        group: usize,
        rho_value: f64,
        rho_multiplicity: usize,
        sigma_value: f64,
        sigma_multiplicity: usize,
    },

    #[error("wrong method: {0}")]
    WrongMethod(String),

    #[error("states are identical; no evolution needed")]
    NoEvolutionNeeded,

    #[error("charging power ratio undefined for zero distance")]
    DegeneratePower,

    #[error("invalid protocol: {0}")]
    InvalidProtocol(String),

    #[error("evolution speed vanishes; the state never moves")]
    DegenerateSpeed,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}
