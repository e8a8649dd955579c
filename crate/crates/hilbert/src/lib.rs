//! Discretized one-particle momentum space K = L²(ℝ³) in a radial-grid ×
//! spherical-harmonic basis: inner product, symplectic form, the involution
//! Γ, dilations, shell projections and radial Fourier transforms.

pub mod bessel;
pub mod dilate;
pub mod error;
pub mod fourier;
pub mod grid;
pub mod modes;
pub mod sph;
pub mod testvector;
pub mod wavefunction;

pub use dilate::{dilate, Dilated};
pub use error::{HilbertError, Result};
pub use fourier::{radial_fourier, radial_fourier_at, radial_fourier_inverse};
pub use grid::{GridKind, PositionGrid, RadialGrid};
pub use modes::{Mode, ModeSet};
pub use testvector::{LocalityTag, TestVector};
pub use wavefunction::WaveFunction;
