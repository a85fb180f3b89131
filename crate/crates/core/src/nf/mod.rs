//! Normal forms of interpolating Hamiltonians and the end-to-end pipelines.

mod cubic;
mod diag;
mod homological;
mod log;
mod pipeline;
mod potential;

pub use cubic::{diag_lead, normalize_cubic, normalize_cubic_reversing};
pub use diag::{diag_allowed, is_resonant, unique_nf_diag, DiagNormalForm};
pub use homological::{generic_homological_solve, Strategy};
pub use log::{GeneratorLog, LogStep};
pub use pipeline::{normalize, normalize_with, InvariantTables, NormalFormResult};
pub use potential::{detect_leading_power, potential_lead, to_potential_form, unique_nf_potential, PotentialNormalForm};
