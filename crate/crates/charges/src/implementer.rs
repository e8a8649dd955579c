//! Local implementer vectors v_γ^O = ((1−e^{iωT})/(iω))·iωγ with
//! T = margin + diam O; Huygens' principle makes −Im⟨v_γ^O, ·⟩ reproduce
//! l_γ on the subspace of vectors generated over the region.

use num_complex::Complex64;

use lab_hilbert::WaveFunction;

use crate::charge::Charge;
use crate::error::{ChargeError, Result};

/// The multiplier m(ω) = (1−e^{iωT})/(iω) = (−sin(ωT) − i(1−cos(ωT)))/ω,
/// bounded by |m| = 2|sin(ωT/2)|/ω ≤ T.
pub fn huygens_multiplier(omega: f64, t: f64) -> Complex64 {
    let theta = omega * t;
    Complex64::new(-theta.sin() / omega, -(1.0 - theta.cos()) / omega)
}

/// Build v_γ^O for a region of the given diameter.  The constant the
/// construction leaves abstract is exposed as `margin` (in grid length
/// units); it must majorize the charge-support radius plus the distance
/// between the region and the generators for the residual identity to hold.
pub fn local_implementer(gamma: &Charge, region_diameter: f64, margin: f64) -> Result<WaveFunction> {
    if !(region_diameter > 0.0 && margin > 0.0) {
        return Err(ChargeError::Domain(
            "region diameter and margin must be positive".into(),
        ));
    }
    let t = margin + region_diameter;
    let grid = gamma.grid();
    let modes = gamma.modes();
    let mut v = WaveFunction::zero(grid.clone(), modes.clone());
    for mode in 0..modes.len() {
        for (j, &w) in grid.nodes().iter().enumerate() {
            // iωγ = iω^{1/2}σ̂ − ω^{−1/2}ρ̂.
            let i_omega_gamma = Complex64::new(0.0, 1.0) * gamma.sigma_hat()[(mode, j)] * w.sqrt()
                - gamma.rho_hat()[(mode, j)] / w.sqrt();
            v.coeffs_mut()[(mode, j)] = huygens_multiplier(w, t) * i_omega_gamma;
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{radial_test_vector, shifted_gaussian_test_vector, Slot};
    use crate::linear_form::linear_form;
    use crate::profiles::{ChargeFixture, ProfileSpec};
    use lab_hilbert::{ModeSet, RadialGrid};
    use std::sync::Arc;

    #[test]
    fn multiplier_sup_norm_is_t() {
        let grid = RadialGrid::default_log();
        let t = 3.7;
        let mut sup: f64 = 0.0;
        for &w in grid.nodes() {
            let m = huygens_multiplier(w, t).norm();
            assert!(m <= t * (1.0 + 1e-12), "|m({w})| = {m} > {t}");
            sup = sup.max(m);
        }
        // Approached as ω → 0.
        assert!(sup > 0.999 * t, "sup = {sup}");
        assert!(huygens_multiplier(grid.min(), t).norm() > 0.999_999 * t);
    }

    #[test]
    fn zero_charge_gives_zero_vector() {
        let grid = Arc::new(RadialGrid::default_log());
        let modes = Arc::new(ModeSet::new(1));
        let gamma = Charge::zero(grid, modes);
        let v = local_implementer(&gamma, 1.0, 1.0).unwrap();
        assert_eq!(v.norm_sq(), 0.0);
    }

    #[test]
    fn probe_residual_small_inside_region() {
        // Charge generators near the origin (support ≲ 0.35·14 but decayed
        // by r ≈ 1); probes supported in a ball of radius ~1.5 around the
        // origin; T = margin + diameter with margin covering the charge
        // support.  The residual |l_γ(f) + Im⟨v, f⟩| must vanish to 1e-5.
        let grid = Arc::new(RadialGrid::log(4096, 1e-4, 1e2).unwrap());
        let modes = Arc::new(ModeSet::new(8));
        let gamma = Charge::from_fixture(
            &ChargeFixture::unit_gaussian(0.25),
            grid.clone(),
            modes.clone(),
        )
        .unwrap();
        let diameter = 3.0;
        let margin = 2.0;
        let v = local_implementer(&gamma, diameter, margin).unwrap();

        // Rotation-invariant probe h centered at 0, width 0.5.
        let f0 = radial_test_vector(
            grid.clone(),
            modes.clone(),
            &ProfileSpec::Gaussian {
                amplitude: 1.0,
                width: 0.5,
            },
            Slot::H,
        )
        .unwrap();
        // Off-center probe inside the ball.
        let f1 = shifted_gaussian_test_vector(
            grid.clone(),
            modes.clone(),
            [0.4, -0.2, 0.5],
            0.4,
            1.0,
            Slot::H,
            None,
        )
        .unwrap();
        for f in [&f0, &f1] {
            let l = linear_form(&gamma, f, Default::default()).unwrap();
            let im = v.inner_product(f.wf()).unwrap().im;
            let resid = (l + im).abs();
            assert!(
                resid <= 1e-5 * l.abs().max(1.0),
                "residual {resid:e} vs l = {l:e}"
            );
        }
    }

    #[test]
    fn rejects_degenerate_region() {
        let grid = Arc::new(RadialGrid::default_log());
        let modes = Arc::new(ModeSet::new(1));
        let gamma = Charge::zero(grid, modes);
        assert!(local_implementer(&gamma, 0.0, 1.0).is_err());
        assert!(local_implementer(&gamma, 1.0, -2.0).is_err());
    }
}
