//! The dilation scaling limit lim_{λ→∞} l_γ(f_λ) = q_γ·κ_f.

use serde::{Deserialize, Serialize};

use lab_hilbert::TestVector;

use crate::charge::Charge;
use crate::error::Result;
use crate::kappa::kappa_momentum;
use crate::linear_form::{linear_form_dilated, LinearFormOptions};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScalingRow {
    pub lambda: f64,
    pub l_value: f64,
    pub rho_term: f64,
    pub sigma_term: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScalingReport {
    pub rows: Vec<ScalingRow>,
    /// Cauchy increments |l(λ_{k+1}) − l(λ_k)|.
    pub increments: Vec<f64>,
    /// Limit candidate: the last value.
    pub limit_estimate: f64,
    /// q_γ·κ_f from the independent routes.
    pub expected_limit: f64,
    /// |limit_estimate − expected|/|expected| (absolute when expected = 0).
    pub deviation: f64,
    /// Fitted log-log slope of the σ-term against λ (≈ −1).
    pub sigma_slope: Option<f64>,
}

/// Evaluate l_γ(f_λ) over the λ list (ascending) with convergence
/// diagnostics attached.
pub fn scaling_sequence(
    gamma: &Charge,
    f: &TestVector,
    lambdas: &[f64],
    opts: LinearFormOptions,
) -> Result<ScalingReport> {
    let mut rows = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let (l_value, rho_term, sigma_term) = linear_form_dilated(gamma, f, lambda, opts)?;
        rows.push(ScalingRow {
            lambda,
            l_value,
            rho_term,
            sigma_term,
        });
    }
    let increments: Vec<f64> = rows
        .windows(2)
        .map(|p| (p[1].l_value - p[0].l_value).abs())
        .collect();
    let (q, _) = gamma.charge_of()?;
    let kappa = kappa_momentum(f)?;
    let expected_limit = q * kappa;
    let limit_estimate = rows.last().map(|r| r.l_value).unwrap_or(0.0);
    let deviation = if expected_limit.abs() > 0.0 {
        ((limit_estimate - expected_limit) / expected_limit).abs()
    } else {
        limit_estimate.abs()
    };
    // Slope of the σ-only contribution: ln|σ_term| against ln λ.
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.sigma_term.abs() > 1e-300)
        .map(|r| (r.lambda.ln(), r.sigma_term.abs().ln()))
        .collect();
    let sigma_slope = if pts.len() >= 2 {
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        Some((n * sxy - sx * sy) / (n * sxx - sx * sx))
    } else {
        None
    };
    Ok(ScalingReport {
        rows,
        increments,
        limit_estimate,
        expected_limit,
        deviation,
        sigma_slope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charge::Charge;
    use crate::fixtures::{radial_test_vector, Slot};
    use crate::profiles::{ChargeFixture, ProfileSpec};
    use lab_hilbert::{ModeSet, RadialGrid};
    use std::sync::Arc;

    fn basis() -> (Arc<RadialGrid>, Arc<ModeSet>) {
        (
            Arc::new(RadialGrid::default_log()),
            Arc::new(ModeSet::new(1)),
        )
    }

    #[test]
    fn unit_charge_gaussian_reaches_4pi_cubed() {
        let (grid, modes) = basis();
        let gamma =
            Charge::from_fixture(&ChargeFixture::unit_gaussian(0.8), grid.clone(), modes.clone())
                .unwrap();
        let f = radial_test_vector(
            grid,
            modes,
            &ProfileSpec::Gaussian {
                amplitude: 1.0,
                width: 1.0,
            },
            Slot::H,
        )
        .unwrap();
        let lambdas: Vec<f64> = (0..=6).map(|k| 10f64.powf(k as f64 / 2.0)).collect();
        let report = scaling_sequence(&gamma, &f, &lambdas, Default::default()).unwrap();
        assert!(report.deviation < 1e-3, "deviation {}", report.deviation);
    }

    #[test]
    fn zero_charge_limits_to_zero() {
        let (grid, modes) = basis();
        let gamma = Charge::from_fixture(
            &ChargeFixture {
                sigma: None,
                rho: Some(ProfileSpec::Difference {
                    amplitude: 1.0,
                    width1: 0.5,
                    width2: 1.0,
                    null_moment: 2,
                }),
                q: 0.0,
            },
            grid.clone(),
            modes.clone(),
        )
        .unwrap();
        let f = radial_test_vector(
            grid,
            modes,
            &ProfileSpec::Gaussian {
                amplitude: 1.0,
                width: 1.0,
            },
            Slot::H,
        )
        .unwrap();
        let report =
            scaling_sequence(&gamma, &f, &[1.0, 10.0, 100.0, 1000.0], Default::default()).unwrap();
        assert!(report.limit_estimate.abs() < 1e-4);
    }

    #[test]
    fn sigma_term_scales_as_one_over_lambda() {
        let (grid, modes) = basis();
        // σ-only charge: q = 0 automatically (no ρ).
        let gamma = Charge::from_fixture(
            &ChargeFixture {
                sigma: Some(ProfileSpec::Gaussian {
                    amplitude: 1.0,
                    width: 0.9,
                }),
                rho: None,
                q: 0.0,
            },
            grid.clone(),
            modes.clone(),
        )
        .unwrap();
        let f = radial_test_vector(
            grid,
            modes,
            &ProfileSpec::Gaussian {
                amplitude: 1.0,
                width: 1.2,
            },
            Slot::G,
        )
        .unwrap();
        let lambdas = [8.0, 16.0, 32.0, 64.0, 128.0];
        let report = scaling_sequence(&gamma, &f, &lambdas, Default::default()).unwrap();
        let slope = report.sigma_slope.expect("σ-term present");
        assert!((slope + 1.0).abs() <= 0.05, "slope {slope}");
    }
}
