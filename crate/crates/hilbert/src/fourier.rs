//! Radial Fourier transforms per angular momentum sector.
//!
//! Convention: f̂(k) = ∫ d³x e^{−ik·x} f(x), with the inverse carrying
//! (2π)^{−3}.  In this convention ∫ d³k e^{ik·x}/|k|² = 2π²/|x| holds with no
//! extra 2π factors, which is the normalization anchor used throughout.
//! For a profile H(r)·Y_{ℓm}(x̂) the transform is
//!     Ĥ_ℓ(ω) = 4π (−i)^ℓ ∫ r² j_ℓ(ωr) H(r) dr
//! and the 3D transform is Ĥ_ℓ(ω)·Y_{ℓm}(k̂).

use num_complex::Complex64;

use crate::bessel::spherical_jn;
use crate::error::{HilbertError, Result};
use crate::grid::{PositionGrid, RadialGrid};

/// The phase (−i)^ℓ.
pub fn minus_i_pow(ell: u32) -> Complex64 {
    match ell % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// Forward transform of a real radial profile in the ℓ-sector, evaluated at
/// the nodes of `omega_grid`.
pub fn radial_fourier(
    h: &[f64],
    pos_grid: &PositionGrid,
    ell: u32,
    ell_max: u32,
    omega_grid: &RadialGrid,
) -> Result<Vec<Complex64>> {
    if ell > ell_max {
        return Err(HilbertError::Domain(format!(
            "ℓ = {ell} exceeds ell_max = {ell_max}"
        )));
    }
    if h.len() != pos_grid.len() {
        return Err(HilbertError::IncompatibleBasis(format!(
            "profile has {} samples, position grid {}",
            h.len(),
            pos_grid.len()
        )));
    }
    let phase = minus_i_pow(ell);
    Ok(omega_grid
        .nodes()
        .iter()
        .map(|&w| {
            let mut acc = 0.0;
            for ((&r, &wt), &hv) in pos_grid
                .nodes()
                .iter()
                .zip(pos_grid.weights())
                .zip(h.iter())
            {
                acc += wt * spherical_jn(ell, w * r)[ell as usize] * hv;
            }
            phase * 4.0 * std::f64::consts::PI * acc
        })
        .collect())
}

/// Transform at a single frequency (used for extrapolation probes).
pub fn radial_fourier_at(h: &[f64], pos_grid: &PositionGrid, ell: u32, omega: f64) -> Complex64 {
    let phase = minus_i_pow(ell);
    let mut acc = 0.0;
    for ((&r, &wt), &hv) in pos_grid
        .nodes()
        .iter()
        .zip(pos_grid.weights())
        .zip(h.iter())
    {
        acc += wt * spherical_jn(ell, omega * r)[ell as usize] * hv;
    }
    phase * 4.0 * std::f64::consts::PI * acc
}

/// Inverse transform of an ℓ-sector momentum profile back to position space:
///     H(r) = (i^ℓ / 2π²) ∫ ω² j_ℓ(ωr) Ĥ_ℓ(ω) dω.
pub fn radial_fourier_inverse(
    h_hat: &[Complex64],
    omega_grid: &RadialGrid,
    ell: u32,
    pos_grid: &PositionGrid,
) -> Result<Vec<Complex64>> {
    if h_hat.len() != omega_grid.len() {
        return Err(HilbertError::IncompatibleBasis(format!(
            "momentum profile has {} samples, grid {}",
            h_hat.len(),
            omega_grid.len()
        )));
    }
    let phase = minus_i_pow(ell).conj(); // i^ℓ
    let norm = 1.0 / (2.0 * std::f64::consts::PI * std::f64::consts::PI);
    Ok(pos_grid
        .nodes()
        .iter()
        .map(|&r| {
            let mut acc = Complex64::new(0.0, 0.0);
            for ((&w, &wt), &hv) in omega_grid
                .nodes()
                .iter()
                .zip(omega_grid.weights())
                .zip(h_hat.iter())
            {
                acc += wt * spherical_jn(ell, w * r)[ell as usize] * hv;
            }
            phase * norm * acc
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gaussian_ell0_closed_form() {
        // FT[e^{-a r²}] = (π/a)^{3/2} e^{-ω²/(4a)}
        let a = 1.3;
        let pos = PositionGrid::uniform(3000, 14.0).unwrap();
        let h: Vec<f64> = pos.nodes().iter().map(|&r| (-a * r * r).exp()).collect();
        let omega = RadialGrid::log(400, 1e-3, 8.0).unwrap();
        let got = radial_fourier(&h, &pos, 0, 2, &omega).unwrap();
        for (j, &w) in omega.nodes().iter().enumerate() {
            let expect = (std::f64::consts::PI / a).powf(1.5) * (-w * w / (4.0 * a)).exp();
            assert_relative_eq!(got[j].re, expect, max_relative = 1e-6, epsilon = 1e-8);
            assert!(got[j].im.abs() < 1e-12);
        }
    }

    #[test]
    fn coulomb_normalization_anchor() {
        // ∫ d³k ĥ(k)/ω² = 2π² ∫ d³x h(x)/|x| for Gaussian h: both equal
        // 2π² · 4π ∫ r e^{-r²} dr = 4π³ for h = e^{-r²}.
        let pos = PositionGrid::uniform(3000, 14.0).unwrap();
        let h: Vec<f64> = pos.nodes().iter().map(|&r| (-r * r).exp()).collect();
        let omega = RadialGrid::log(2048, 1e-4, 60.0).unwrap();
        let h_hat = radial_fourier(&h, &pos, 0, 0, &omega).unwrap();
        // ∫ d³k ĥ/ω² = 4π ∫ dω ĥ(ω): quadrature on the grid plus the
        // analytic tail below ω_min.
        let mut momentum_side = 0.0;
        for ((&w, &wt), hv) in omega
            .nodes()
            .iter()
            .zip(omega.weights())
            .zip(h_hat.iter())
        {
            momentum_side += wt / (w * w) * hv.re;
        }
        momentum_side += h_hat[0].re * omega.min();
        momentum_side *= 4.0 * std::f64::consts::PI;
        let expect = 4.0 * std::f64::consts::PI.powi(3);
        assert_relative_eq!(momentum_side, expect, max_relative = 1e-5);
    }

    #[test]
    fn round_trip_band_limited() {
        let pos = PositionGrid::uniform(2400, 12.0).unwrap();
        let ell = 2u32;
        let h: Vec<f64> = pos
            .nodes()
            .iter()
            .map(|&r| r * r * (-r * r).exp())
            .collect();
        let omega = RadialGrid::log(1600, 1e-4, 40.0).unwrap();
        let h_hat = radial_fourier(&h, &pos, ell, 4, &omega).unwrap();
        let back = radial_fourier_inverse(&h_hat, &omega, ell, &pos).unwrap();
        let scale = h.iter().map(|v| v.abs()).fold(0.0, f64::max);
        for (a, b) in h.iter().zip(back.iter()) {
            assert!(
                (a - b.re).abs() <= 1e-6 * scale && b.im.abs() <= 1e-9 * scale,
                "{a} vs {b}"
            );
        }
    }

    #[test]
    fn zero_profile() {
        let pos = PositionGrid::uniform(64, 5.0).unwrap();
        let omega = RadialGrid::log(64, 1e-2, 5.0).unwrap();
        let h = vec![0.0; pos.len()];
        let got = radial_fourier(&h, &pos, 1, 3, &omega).unwrap();
        assert!(got.iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn ell_out_of_range() {
        let pos = PositionGrid::uniform(64, 5.0).unwrap();
        let omega = RadialGrid::log(64, 1e-2, 5.0).unwrap();
        let h = vec![0.0; pos.len()];
        assert!(radial_fourier(&h, &pos, 5, 3, &omega).is_err());
    }
}
