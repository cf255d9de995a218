//! Open-system dynamics of atomic clock transitions.
//!
//! Lindblad generators and their exact and closed-form propagation, Ramsey
//! sequences in the rotating-wave approximation with an exact driven oracle,
//! and fringe analysis: shape metrics, fits, closure tests and resolution
//! bounds. Frequencies are angular (rad/s) with `ħ = 1` unless a name says
//! otherwise.

pub mod error;
pub mod fringe;
pub mod lindblad;
pub mod numerics;
pub mod ramsey;

pub use error::{Error, Result};

/// Version stamped into every serialized artifact.
pub const SCHEMA_VERSION: u32 = 1;
