//! The two-pulse Ramsey protocol: RWA pulses, dark-period Lindblad
//! evolution, the closed-form fringe, and an exact driven oracle.

pub mod config;
pub mod oracle;
pub mod picture;
pub mod sequence;

pub use config::{ClockTransition, FringeParams, RamseyConfig, RegimeReport};
pub use oracle::{exact_driven_oracle, ramsey_schedule, Drive, DriveSegment, OracleOutcome};
pub use picture::{from_interaction_picture, to_interaction_picture};
pub use sequence::{
    analytic_pe, apply_pulse, embed_pulse, free_evolution, pulse_unitary, ramsey_sequence,
    ramsey_sequence_params, FreeEvolution, RamseyTrace,
};
