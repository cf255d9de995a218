//! Fringe scans, shape metrics, least-squares fits, the three-level closure
//! test and resolution bounds.

pub mod bounds;
pub mod closure;
pub mod fit;
pub mod io;
pub mod scan;
pub mod shape;

pub use bounds::{
    bounds_report, fractional_imprecision, gamma_bound_ev, gamma_bound_from_fractional,
    pointer_level_spacing, BoundsReport, PointerSpec,
};
pub use closure::{
    gamma_params_from_model, model_from_params, pair_shift, three_level_closure, ClosureReport,
};
pub use fit::{fit_fringe, fit_noisy_trials, FitInit, FitResult};
pub use io::{read_scan, read_scan_with_meta, write_scan};
pub use scan::{linear_grid, scan_fringe, FringeScan, FringeSource, NoiseSpec, ScanMeta};
pub use shape::{predicted_ratios, shape_metrics, ShapeMetrics};
