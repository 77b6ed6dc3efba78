//! Convergence, locality, depth and truncation studies built on the dense
//! simulator, with CSV reports.

pub mod convergence;
pub mod depth;
pub mod fit;
pub mod fixtures;
pub mod lightcone;
pub mod report;
pub mod truncation;

pub use convergence::{
    convergence_study, halving_sequence, single_step_order, ConvergenceReport, SingleStepReport,
};
pub use depth::{depth_search, DepthReport, StepErrorOracle, DEFAULT_STEP_CAP};
pub use fit::{fit_loglog, LogLogFit, ERROR_FLOOR};
pub use lightcone::{lightcone_study, LightconeReport, LIGHTCONE_THRESHOLD};
pub use truncation::{truncation_study, TruncationReport, TruncationRow};
