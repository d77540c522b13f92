//! Physics built on the distance: piecewise-constant drives, charging-power
//! bounds, quantum-vs-classical two-qubit charging, and speed-limit times.

mod bipartite;
mod power;
mod protocol;
mod qsl;

pub use bipartite::{entanglement_entropy, partial_trace, von_neumann_entropy, Subsystem};
pub use power::{power_report, power_report_with, PowerReport};
pub use protocol::{
    classical_two_qubit_protocols, evolve, verify_achievability, AchievabilityReport,
    DriveProtocol, Segment,
};
pub use qsl::{qsl_t_cd, qsl_t_mcd, QslEstimate};
