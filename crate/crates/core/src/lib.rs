pub mod applications;
pub mod distance;
pub mod error;
pub mod experiment;
pub mod matcore;
pub mod metrics;
pub mod optimize;
pub mod states;
pub mod tolerance;

pub use error::{Error, Result};
pub use tolerance::Tolerances;
