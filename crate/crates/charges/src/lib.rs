//! Charge labels γ ∈ V, linear forms l_γ, charge values q_γ, Coulomb
//! potentials, the scaling-limit coefficient κ_f, local implementers and
//! Weyl expectation functionals.

pub mod charge;
pub mod coulomb;
pub mod error;
pub mod fixtures;
pub mod implementer;
pub mod kappa;
pub mod linear_form;
pub mod profiles;
pub mod scaling;
pub mod weyl;

pub use charge::{Charge, Generators};
pub use coulomb::{PotentialValue, RadialCoulomb, SampledDensity};
pub use error::{ChargeError, Result};
pub use fixtures::{
    gaussian_mass_in_cone, radial_test_vector, shifted_gaussian_test_vector, Slot,
};
pub use implementer::{huygens_multiplier, local_implementer};
pub use kappa::{kappa_momentum, kappa_position};
pub use linear_form::{linear_form, linear_form_dilated, LinearFormOptions};
pub use profiles::{ChargeFixture, ProfileSpec};
pub use scaling::{scaling_sequence, ScalingReport, ScalingRow};
pub use weyl::{weyl_dilation_limit, weyl_expectation, QuasifreeStateLabel, WeylElement};
