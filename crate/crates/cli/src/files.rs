//! Versioned JSON documents for states, operators and drive protocols.
//! Matrices are stored row-major as `[re, im]` pairs.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use qcharge::applications::{DriveProtocol, Segment};
use qcharge::matcore::{ComplexMatrix, Hermitian};
use qcharge::states::DensityMatrix;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const STATE_FORMAT: &str = "qcharge-state-v1";
pub const OPERATOR_FORMAT: &str = "qcharge-operator-v1";
pub const PROTOCOL_FORMAT: &str = "qcharge-protocol-v1";

pub type RawMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub format: String,
    pub dim: usize,
    pub matrix: RawMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SegmentEntry {
    pub matrix: RawMatrix,
    pub duration: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProtocolFile {
    pub format: String,
    pub dim: usize,
    pub segments: Vec<SegmentEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

pub fn to_raw(m: &ComplexMatrix) -> RawMatrix {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

pub fn from_raw(raw: &RawMatrix, dim: usize, what: &str) -> Result<ComplexMatrix, CliError> {
    if dim == 0 {
        return Err(CliError::Parse(format!("{what}: dim must be positive")));
    }
    if raw.len() != dim || raw.iter().any(|row| row.len() != dim) {
        return Err(CliError::Parse(format!(
            "{what}: matrix is not {dim}x{dim}"
        )));
    }
    Ok(ComplexMatrix::from_fn(dim, dim, |i, j| {
        Complex64::new(raw[i][j][0], raw[i][j][1])
    }))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn check_format(found: &str, expected: &str, path: &Path) -> Result<(), CliError> {
    if found != expected {
        return Err(CliError::Parse(format!(
            "{}: format tag '{found}', expected '{expected}'",
            path.display()
        )));
    }
    Ok(())
}

/// Loads a state file; trace and positivity failures count as parse errors.
pub fn load_state(path: &Path) -> Result<DensityMatrix, CliError> {
    let file: MatrixFile = parse_json(path)?;
    check_format(&file.format, STATE_FORMAT, path)?;
    let m = from_raw(&file.matrix, file.dim, &path.display().to_string())?;
    Hermitian::new(m)
        .and_then(DensityMatrix::new)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn load_operator(path: &Path) -> Result<Hermitian, CliError> {
    let file: MatrixFile = parse_json(path)?;
    check_format(&file.format, OPERATOR_FORMAT, path)?;
    let m = from_raw(&file.matrix, file.dim, &path.display().to_string())?;
    Hermitian::new(m).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn load_protocol(path: &Path) -> Result<DriveProtocol, CliError> {
    let file: ProtocolFile = parse_json(path)?;
    check_format(&file.format, PROTOCOL_FORMAT, path)?;
    let bad = |e: qcharge::Error| CliError::Parse(format!("{}: {e}", path.display()));
    let segments = file
        .segments
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let m = from_raw(
                &s.matrix,
                file.dim,
                &format!("{} segment {k}", path.display()),
            )?;
            let h = Hermitian::new(m).map_err(bad)?;
            Segment::new(h, s.duration).map_err(bad)
        })
        .collect::<Result<Vec<_>, _>>()?;
    DriveProtocol::new(segments).map_err(bad)
}

pub fn state_file(rho: &DensityMatrix, label: Option<String>) -> MatrixFile {
    MatrixFile {
        format: STATE_FORMAT.into(),
        dim: rho.dim(),
        matrix: to_raw(rho.matrix()),
        label,
    }
}

pub fn operator_file(h: &Hermitian, label: Option<String>) -> MatrixFile {
    MatrixFile {
        format: OPERATOR_FORMAT.into(),
        dim: h.dim(),
        matrix: to_raw(h.matrix()),
        label,
    }
}

pub fn protocol_file(p: &DriveProtocol, dim: usize, label: Option<String>) -> ProtocolFile {
    ProtocolFile {
        format: PROTOCOL_FORMAT.into(),
        dim: p.dim().unwrap_or(dim),
        segments: p
            .segments()
            .iter()
            .map(|s| SegmentEntry {
                matrix: to_raw(s.hamiltonian.matrix()),
                duration: s.duration,
            })
            .collect(),
        label,
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    fs::write(path, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
