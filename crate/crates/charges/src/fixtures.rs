//! Closed-form test-vector builders: rotation-invariant Gaussians, shifted
//! Gaussians (via the plane-wave expansion) and null-κ difference profiles.

use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;

use lab_hilbert::fourier::minus_i_pow;
use lab_hilbert::sph::eval_modes;
use lab_hilbert::{bessel::spherical_jn, LocalityTag, ModeSet, RadialGrid, TestVector};

use crate::error::Result;
use crate::profiles::ProfileSpec;

/// Which slot of f = ω^{−1/2}ĥ + iω^{+1/2}ĝ a profile populates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    H,
    G,
}

/// Rotation-invariant test vector from a radial position-space profile with
/// a closed-form ℓ=0 transform.
pub fn radial_test_vector(
    grid: Arc<RadialGrid>,
    modes: Arc<ModeSet>,
    profile: &ProfileSpec,
    slot: Slot,
) -> Result<TestVector> {
    let shape = [modes.len(), grid.len()];
    let mut h = Array2::<Complex64>::zeros(shape);
    let mut g = Array2::<Complex64>::zeros(shape);
    let y00 = 1.0 / (4.0 * std::f64::consts::PI).sqrt();
    let idx00 = modes.index_of(0, 0)?;
    {
        let target = match slot {
            Slot::H => &mut h,
            Slot::G => &mut g,
        };
        for (j, &w) in grid.nodes().iter().enumerate() {
            target[(idx00, j)] = Complex64::new(profile.fourier_ell0(w) / y00, 0.0);
        }
    }
    Ok(TestVector::new(grid, modes, h, g, None)?)
}

/// A Gaussian bump centered at `center` with width `s` (h-slot or g-slot):
/// the mode arrays come from the plane-wave expansion
///     ĥ_{ℓm}(ω) = A (πs²)^{3/2} e^{−ω²s²/4} · 4π(−i)^ℓ j_ℓ(ω r₀) conj(Y_{ℓm}(n̂₀)).
pub fn shifted_gaussian_test_vector(
    grid: Arc<RadialGrid>,
    modes: Arc<ModeSet>,
    center: [f64; 3],
    width: f64,
    amplitude: f64,
    slot: Slot,
    locality: Option<LocalityTag>,
) -> Result<TestVector> {
    let shape = [modes.len(), grid.len()];
    let mut h = Array2::<Complex64>::zeros(shape);
    let mut g = Array2::<Complex64>::zeros(shape);
    let r0 = (center[0] * center[0] + center[1] * center[1] + center[2] * center[2]).sqrt();
    let (cos_theta, phi) = if r0 > 0.0 {
        (center[2] / r0, center[1].atan2(center[0]))
    } else {
        (1.0, 0.0)
    };
    let y_at_center = eval_modes(&modes, cos_theta, phi);
    let fourpi = 4.0 * std::f64::consts::PI;
    let front = amplitude * std::f64::consts::PI.powf(1.5) * width.powi(3);
    {
        let target = match slot {
            Slot::H => &mut h,
            Slot::G => &mut g,
        };
        for (j, &w) in grid.nodes().iter().enumerate() {
            let radial = front * (-w * w * width * width / 4.0).exp();
            let j_ell = spherical_jn(modes.ell_max(), w * r0);
            for (idx, mode) in modes.modes().iter().enumerate() {
                target[(idx, j)] = radial
                    * fourpi
                    * minus_i_pow(mode.ell)
                    * j_ell[mode.ell as usize]
                    * y_at_center[idx].conj();
            }
        }
    }
    Ok(TestVector::new(grid, modes, h, g, locality)?)
}

/// Fraction of the 3D mass of a Gaussian bump lying inside the cone of
/// half-angle `half_angle` around `axis` (with apex at the origin), by
/// spherical quadrature; used for locality certificates.
pub fn gaussian_mass_in_cone(
    center: [f64; 3],
    width: f64,
    axis: [f64; 3],
    half_angle: f64,
) -> f64 {
    let quad = lab_hilbert::sph::AngularQuadrature::new(96, 192);
    let axis_norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let a = [axis[0] / axis_norm, axis[1] / axis_norm, axis[2] / axis_norm];
    let r0 = (center[0] * center[0] + center[1] * center[1] + center[2] * center[2]).sqrt();
    let r_max = r0 + 10.0 * width;
    let nr = 400;
    let dr = r_max / nr as f64;
    let cos_open = half_angle.cos();
    let mut inside = 0.0;
    let mut total = 0.0;
    for k in 0..nr {
        let r = (k as f64 + 0.5) * dr;
        for &(ct, phi, wq) in quad.points() {
            let st = (1.0 - ct * ct).sqrt();
            let x = [r * st * phi.cos(), r * st * phi.sin(), r * ct];
            let d2 = (x[0] - center[0]).powi(2)
                + (x[1] - center[1]).powi(2)
                + (x[2] - center[2]).powi(2);
            let val = (-d2 / (width * width)).exp() * r * r * dr * wq;
            total += val;
            let along = x[0] * a[0] + x[1] * a[1] + x[2] * a[2];
            if along > 0.0 && along >= cos_open * r {
                inside += val;
            }
        }
    }
    if total > 0.0 {
        inside / total
    } else {
        0.0
    }
}
