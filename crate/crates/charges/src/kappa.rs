//! The scaling-limit coefficient κ_f = 2π² ∫ d³x h(x)/|x| = ∫ d³k ĥ(k)/ω².

use lab_hilbert::TestVector;

use crate::error::Result;
use crate::profiles::ProfileSpec;

/// κ_f from the momentum-space arrays: only the ℓ=0 channel survives the
/// angular average, and the band below ω_min enters through the analytic
/// tail ω_min·ĥ₀₀(ω_min)·√4π.
pub fn kappa_momentum(f: &TestVector) -> Result<f64> {
    let grid = f.wf().grid();
    let modes = f.wf().modes();
    let idx00 = modes.index_of(0, 0)?;
    let root4pi = (4.0 * std::f64::consts::PI).sqrt();
    let mut acc = 0.0;
    for (j, (&w, &wt)) in grid.nodes().iter().zip(grid.weights()).enumerate() {
        acc += wt / (w * w) * f.h_part()[(idx00, j)].re;
    }
    acc += grid.min() * f.h_part()[(idx00, 0)].re;
    Ok(root4pi * acc)
}

/// κ_f from a position-space radial profile: 2π² · 4π ∫ r h(r) dr.
pub fn kappa_position(h: &ProfileSpec) -> f64 {
    8.0 * std::f64::consts::PI.powi(3) * h.moment_quadrature(1)
}
