//! Minkowski support calculus: region primitives and rasters, the breve
//! lift into one extra spacelike dimension, two-cone feasibility, the
//! support-reduction maps r_W / r̃_W with their fixed point, and the 1+1
//! numerical correspondence between cone-spectrum distributions and
//! symmetric wave fields.

pub mod breve;
pub mod error;
pub mod feasible;
pub mod geometry;
pub mod reduce;
pub mod region;
pub mod transform;

pub use breve::{breve_lift, lifted_grid};
pub use error::{JldError, Result};
pub use feasible::{
    two_cone_feasible_1p1, two_cone_feasible_region, two_cone_feasible_scan, ApexWindow, Witness,
};
pub use geometry::{mink, spatial_norm, MinkowskiGrid, WedgeFrame};
pub use reduce::{
    r_fixpoint, r_tilde_step, r_w_step, FixpointTrace, ReductionMode, ReductionOptions,
};
pub use region::{Primitive, Region, Scene, SetExpr};
pub use transform::{
    analyze_2d, double_cone_fixture, hyperboloid_chord_fixture, jld_transform_1p1, JldField,
    TransformGrid, TransformReport,
};
