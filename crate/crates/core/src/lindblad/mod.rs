//! Lindblad generators, numeric and closed-form propagation, and the
//! structural checks (entropy condition, stability, complete positivity).

pub mod analytic;
pub mod checks;
pub mod fixtures;
pub mod generator;
pub mod superop;

pub use analytic::{analytic_propagate, coherence_decay_matrix, CoherenceDecayMatrix};
pub use checks::{entropy_condition_check, stability_check, EntropyCondition, StabilityReport};
pub use generator::{LindbladGenerator, StableBasisModel};
pub use superop::{
    choi_psd_check, liouvillian_superoperator, propagate, propagate_rk4, ChoiReport,
};
