//! Error norms, observed orders, stability monitors and audits.

pub mod entropy;
pub mod holder;
pub mod interp;
pub mod monitors;
pub mod norms;
pub mod rates;
pub mod study;

pub use entropy::{check_cell_entropy, default_levels, EntropyAudit};
pub use holder::{holder_audit, HolderEstimate};
pub use interp::bilinear_interpolant;
pub use monitors::{stability_monitors, MonitorReport};
pub use norms::error_norms;
pub use rates::convergence_rate;
pub use study::{convergence_study, ConvergenceReport, ConvergenceRow, ReferenceMode, StudySetup};
