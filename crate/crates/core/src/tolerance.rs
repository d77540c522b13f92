//! Central tolerance record.
//!
//! Every numerical check in the crate reads its threshold from the record
//! returned by [`Tolerances::current`]. Binaries may install an overridden
//! record once at startup, e.g. from the `QCHARGE_TOL` environment variable.

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const ENV_VAR: &str = "QCHARGE_TOL";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// `‖U†U − I‖_F ≤ unitarity · dim`.
    pub unitarity: f64,
    /// `‖A − A†‖_F ≤ hermiticity · ‖A‖_F`.
    pub hermiticity: f64,
    /// Eigenvalues above `−psd_clamp` are clamped to zero.
    pub psd_clamp: f64,
    /// Reconstruction checks (decompositions, square roots).
    pub reconstruction: f64,
    /// `|tr ρ − 1|` for density matrices.
    pub trace: f64,
    /// Degeneracy grouping tolerance for spectra.
    pub group: f64,
    /// `‖ρ − σ‖_F` below which the distance short-circuits to zero.
    pub zero_distance: f64,
    /// Residual allowed when replaying the optimal drive.
    pub achievability: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            unitarity: 1e-10,
            hermiticity: 1e-12,
            psd_clamp: 1e-10,
            reconstruction: 1e-9,
            trace: 1e-10,
            group: 1e-8,
            zero_distance: 1e-10,
            achievability: 1e-7,
        }
    }
}

static INSTALLED: OnceLock<Tolerances> = OnceLock::new();

impl Tolerances {
    /// The installed record, or the defaults if nothing was installed.
    pub fn current() -> Tolerances {
        INSTALLED.get().copied().unwrap_or_default()
    }

    /// Installs a process-wide record. Returns `false` if one was already installed.
    pub fn install(tol: Tolerances) -> bool {
        INSTALLED.set(tol).is_ok()
    }

    /// Parses overrides of the form `group=1e-6,unitarity=1e-9` on top of `self`.
    pub fn with_overrides(mut self, spec: &str) -> Result<Tolerances> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidConfig(format!("bad tolerance override '{item}'")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad tolerance value in '{item}'")))?;
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "tolerance '{key}' must be positive"
                )));
            }
            let slot = match key.trim() {
                "unitarity" => &mut self.unitarity,
                "hermiticity" => &mut self.hermiticity,
                "psd_clamp" => &mut self.psd_clamp,
                "reconstruction" => &mut self.reconstruction,
                "trace" => &mut self.trace,
                "group" => &mut self.group,
                "zero_distance" => &mut self.zero_distance,
                "achievability" => &mut self.achievability,
                other => return Err(Error::InvalidConfig(format!("unknown tolerance '{other}'"))),
            };
            *slot = value;
        }
        Ok(self)
    }

    /// Defaults with `QCHARGE_TOL` overrides applied, if the variable is set.
    pub fn from_env() -> Result<Tolerances> {
        match std::env::var(ENV_VAR) {
            Ok(spec) => Tolerances::default().with_overrides(&spec),
            Err(_) => Ok(Tolerances::default()),
        }
    }
}
