//! The background-induced localization pipeline: cone profiles χ^C, the
//! special charge profile Φ, u^C = −FT[ΔΦ^C], approximating sequences,
//! intertwiner limits, variant dichotomies and the vacuum obstruction.

pub mod cone;
pub mod error;
pub mod experiments;
pub mod intertwiner;
pub mod profile;
pub mod u_c;

pub use cone::{build_chi, ChiDesign, ConeProfile};
pub use error::{LocalizationError, Result};
pub use experiments::{
    opposite_cone_experiment, run_variant, vacuum_obstruction, ObstructionReport,
    ObstructionVerdict, OppositeConeVariant, VariantVerdict, VerdictReport,
};
pub use intertwiner::{
    approx_linear_form, build_intertwiner, intertwiner_trace, verify_intertwining,
    ApproxErrorRow, ConjugationVariant, ConvergenceTrace, IntertwinerOutcome, ResidualRow,
    TraceRow,
};
pub use profile::RadialChargeProfile;
pub use u_c::{build_u_c, direct_u_c_sample, UcData};
