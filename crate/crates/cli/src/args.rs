use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

const TOLERANCE_HELP: &str = "\
Environment:
  QCHARGE_TOL  Comma-separated tolerance overrides, e.g. QCHARGE_TOL=group=1e-6,achievability=1e-6
               Keys and defaults: unitarity=1e-10 hermiticity=1e-12 psd_clamp=1e-10
               reconstruction=1e-9 trace=1e-10 group=1e-8 zero_distance=1e-10 achievability=1e-7

Exit codes: 0 success, 2 spectra mismatch, 3 parse error, 4 optimizer did not converge, 5 I/O error,
            1 any other failure";

/// Quantum charging distance: minimal evolution time between isospectral states
#[derive(Parser, Debug)]
#[command(name = "qcharge", version, about, after_help = TOLERANCE_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(clap::Args, Debug, Clone)]
pub struct OptimizerArgs {
    /// Degeneracy grouping tolerance for spectra [default: QCHARGE_TOL group, 1e-8]
    #[arg(long)]
    pub group_tol: Option<f64>,

    /// Optimizer starts (the first one is the base connector)
    #[arg(long, default_value_t = 16)]
    pub starts: usize,

    /// Iteration cap per local search
    #[arg(long, default_value_t = 2000)]
    pub max_iter: usize,

    /// Seed for the random optimizer starts
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Charging distance between two state files, with bounds and the optimal drive
    Distance {
        rho: PathBuf,
        sigma: PathBuf,
        #[command(flatten)]
        opt: OptimizerArgs,
        /// Also run the sampling oracle with this many samples (0 = off)
        #[arg(long, default_value_t = 0)]
        oracle_samples: usize,
        /// Emit the full result as JSON
        #[arg(long)]
        json: bool,
        /// Write the optimal drive as a one-segment protocol file (input for `qsl`)
        #[arg(long)]
        drive_out: Option<PathBuf>,
    },
    /// Random non-degenerate couples with their distance and bound interval (CSV)
    Fig3 {
        /// Number of couples
        #[arg(long, default_value_t = 20)]
        n: usize,
        /// Hilbert-space dimension
        #[arg(long, default_value_t = 3)]
        dim: usize,
        /// Base seed; row k uses seed + k
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Optimizer starts per couple
        #[arg(long, default_value_t = 16)]
        starts: usize,
        /// Record wall-clock time per row (otherwise 0, keeping output reproducible)
        #[arg(long)]
        timing: bool,
        /// Output CSV path [default: stdout]
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quantum vs classical two-qubit charging trajectories (CSV)
    Race {
        /// Number of qubits (only 2 is supported)
        #[arg(long, default_value_t = 2)]
        n_qubits: usize,
        /// Time samples per protocol
        #[arg(long, default_value_t = 64)]
        steps: usize,
        /// Output CSV path [default: stdout]
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write random state files, or a random unit-norm Hamiltonian
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        /// Hilbert-space dimension
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated eigenvalues for mixed states and couples [default: uniform on the simplex]
        #[arg(long, value_delimiter = ',')]
        spectrum: Option<Vec<f64>>,
        /// Output path (the first state of a couple) [default: stdout for single states]
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output path of the second state of a couple
        #[arg(long)]
        out_sigma: Option<PathBuf>,
    },
    /// Bures, eigenspace and dimension bounds on the distance
    Bounds {
        rho: PathBuf,
        sigma: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Charging-power bounds for a battery Hamiltonian file
    Power {
        hamiltonian: PathBuf,
        rho: PathBuf,
        sigma: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Speed-limit times t_CD and t_mCD for a protocol file applied to a state
    Qsl {
        protocol: PathBuf,
        rho: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    Pure,
    Mixed,
    Couple,
    Hamiltonian,
}
