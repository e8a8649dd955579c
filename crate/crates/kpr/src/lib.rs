//! KPR-like symplectic operator family: schedules (ε_i, b_i, ℓ-cutoffs),
//! the maps T₁, T₂, T and T̂, the regularized energy ω_r, norm bounds and
//! the convergence/divergence probe.

pub mod error;
pub mod operator;
pub mod probe;
pub mod schedule;

pub use error::{KprError, Result};
pub use operator::{KprOperator, TSelector, TruncationFlag};
pub use probe::{classify_increments, convergence_probe, ProbeReport, ProbeRow, Verdict};
pub use schedule::{
    BSpec, EllCutSpec, EpsilonSpec, KprSchedule, ParityFilter, ScheduleSpec, ValidationReport,
};
