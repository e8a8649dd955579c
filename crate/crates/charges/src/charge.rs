//! Charge labels γ = ω^{−1/2}σ̂ + iω^{−3/2}ρ̂ and the charge value q_γ = ρ̂(0).

use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;

use lab_hilbert::{ModeSet, RadialGrid, WaveFunction};

use crate::error::{ChargeError, Result};
use crate::profiles::{ChargeFixture, ProfileSpec};

/// Position-space generators retained alongside the momentum arrays; the
/// rotation-invariant profile class is the source of truth when present.
#[derive(Debug, Clone)]
pub struct Generators {
    pub sigma: Option<ProfileSpec>,
    pub rho: Option<ProfileSpec>,
}

#[derive(Debug, Clone)]
pub struct Charge {
    grid: Arc<RadialGrid>,
    modes: Arc<ModeSet>,
    sigma_hat: Array2<Complex64>,
    rho_hat: Array2<Complex64>,
    q: f64,
    pub generators: Option<Generators>,
}

/// Quadratic-in-ω² Richardson extrapolation to ω = 0 through three samples.
fn richardson_to_zero(points: &[(f64, f64); 3]) -> f64 {
    // Lagrange at x = 0 in the variable x = ω².
    let x: Vec<f64> = points.iter().map(|p| p.0 * p.0).collect();
    let y: Vec<f64> = points.iter().map(|p| p.1).collect();
    let mut acc = 0.0;
    for i in 0..3 {
        let mut term = y[i];
        for j in 0..3 {
            if j != i {
                term *= x[j] / (x[j] - x[i]);
            }
        }
        acc += term;
    }
    acc
}

impl Charge {
    /// Build from a serialized fixture on the given basis.
    pub fn from_fixture(
        fixture: &ChargeFixture,
        grid: Arc<RadialGrid>,
        modes: Arc<ModeSet>,
    ) -> Result<Self> {
        if let Some(s) = &fixture.sigma {
            s.validate()?;
        }
        if let Some(r) = &fixture.rho {
            r.validate()?;
        }
        let shape = [modes.len(), grid.len()];
        let mut sigma_hat = Array2::zeros(shape);
        let mut rho_hat = Array2::zeros(shape);
        let y00 = 1.0 / (4.0 * std::f64::consts::PI).sqrt();
        let idx00 = modes.index_of(0, 0)?;
        for (j, &w) in grid.nodes().iter().enumerate() {
            if let Some(s) = &fixture.sigma {
                sigma_hat[(idx00, j)] = Complex64::new(s.fourier_ell0(w) / y00, 0.0);
            }
            if let Some(r) = &fixture.rho {
                rho_hat[(idx00, j)] = Complex64::new(r.fourier_ell0(w) / y00, 0.0);
            }
        }
        let charge = Self {
            grid,
            modes,
            sigma_hat,
            rho_hat,
            q: fixture.q,
            generators: Some(Generators {
                sigma: fixture.sigma.clone(),
                rho: fixture.rho.clone(),
            }),
        };
        // Consistency of the stored q with ρ̂(0).
        let (q_ext, _) = charge.charge_of()?;
        let scale = fixture.q.abs().max(1.0);
        if (q_ext - fixture.q).abs() > 1e-4 * scale {
            return Err(ChargeError::Domain(format!(
                "stored q = {} inconsistent with extrapolated ρ̂(0) = {q_ext}",
                fixture.q
            )));
        }
        Ok(charge)
    }

    /// Assemble directly from mode arrays (general, not rotation-invariant).
    pub fn from_mode_arrays(
        grid: Arc<RadialGrid>,
        modes: Arc<ModeSet>,
        sigma_hat: Array2<Complex64>,
        rho_hat: Array2<Complex64>,
        q: f64,
    ) -> Result<Self> {
        if sigma_hat.shape() != [modes.len(), grid.len()]
            || rho_hat.shape() != [modes.len(), grid.len()]
        {
            return Err(ChargeError::IncompatibleBasis(
                "mode arrays do not match the basis".into(),
            ));
        }
        Ok(Self {
            grid,
            modes,
            sigma_hat,
            rho_hat,
            q,
            generators: None,
        })
    }

    pub fn zero(grid: Arc<RadialGrid>, modes: Arc<ModeSet>) -> Self {
        let shape = [modes.len(), grid.len()];
        Self {
            grid,
            modes,
            sigma_hat: Array2::zeros(shape),
            rho_hat: Array2::zeros(shape),
            q: 0.0,
            generators: None,
        }
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn modes(&self) -> &Arc<ModeSet> {
        &self.modes
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn sigma_hat(&self) -> &Array2<Complex64> {
        &self.sigma_hat
    }

    pub fn rho_hat(&self) -> &Array2<Complex64> {
        &self.rho_hat
    }

    /// γ₁ + γ₂ (same basis); charges add.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.grid.len() != other.grid.len() || self.modes.len() != other.modes.len() {
            return Err(ChargeError::IncompatibleBasis(
                "charges on different bases".into(),
            ));
        }
        Ok(Self {
            grid: self.grid.clone(),
            modes: self.modes.clone(),
            sigma_hat: &self.sigma_hat + &other.sigma_hat,
            rho_hat: &self.rho_hat + &other.rho_hat,
            q: self.q + other.q,
            generators: None,
        })
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            modes: self.modes.clone(),
            sigma_hat: &self.sigma_hat * Complex64::new(s, 0.0),
            rho_hat: &self.rho_hat * Complex64::new(s, 0.0),
            q: s * self.q,
            generators: None,
        }
    }

    /// σ̂(ω/λ), ρ̂(ω/λ) in the ℓ=0 sector, from the position-space
    /// generators (needed by the dilated linear form, where ω/λ leaves the
    /// grid band).
    pub fn rho_hat_radial_at(&self, omega: f64) -> Result<f64> {
        let gens = self.generators.as_ref().ok_or_else(|| {
            ChargeError::Domain("charge has no position-space generators".into())
        })?;
        Ok(gens.rho.as_ref().map(|p| p.fourier_ell0(omega)).unwrap_or(0.0))
    }

    pub fn sigma_hat_radial_at(&self, omega: f64) -> Result<f64> {
        let gens = self.generators.as_ref().ok_or_else(|| {
            ChargeError::Domain("charge has no position-space generators".into())
        })?;
        Ok(gens
            .sigma
            .as_ref()
            .map(|p| p.fourier_ell0(omega))
            .unwrap_or(0.0))
    }

    /// q_γ = ρ̂(0): Richardson extrapolation of the ℓ=0 component on the
    /// three lowest grid nodes, scaled by the Y₀₀ normalization.  Returns
    /// (value, uncertainty); errors when the low-ω band resolves ρ̂ so
    /// poorly that the 2- and 3-point extrapolations disagree badly.
    pub fn charge_of(&self) -> Result<(f64, f64)> {
        let idx00 = self.modes.index_of(0, 0)?;
        let nodes = self.grid.nodes();
        let y00 = 1.0 / (4.0 * std::f64::consts::PI).sqrt();
        let pts = [
            (nodes[0], self.rho_hat[(idx00, 0)].re),
            (nodes[1], self.rho_hat[(idx00, 1)].re),
            (nodes[2], self.rho_hat[(idx00, 2)].re),
        ];
        let three = richardson_to_zero(&pts) * y00;
        // Two-point (linear in ω²) extrapolation for the uncertainty estimate.
        let (x0, x1) = (pts[0].0 * pts[0].0, pts[1].0 * pts[1].0);
        let two = (pts[0].1 * x1 - pts[1].1 * x0) / (x1 - x0) * y00;
        let uncertainty = (three - two).abs();
        let tolerance = 1e-4 * three.abs().max(1.0);
        if uncertainty > tolerance {
            return Err(ChargeError::ExtrapolationUncertain {
                uncertainty,
                tolerance,
                context: format!(
                    "ρ̂(0) extrapolation from nodes [{:.3e}, {:.3e}, {:.3e}]",
                    pts[0].0, pts[1].0, pts[2].0
                ),
            });
        }
        Ok((three, uncertainty))
    }

    /// The momentum function γ(k) = ω^{−1/2}σ̂ + iω^{−3/2}ρ̂ sampled on the
    /// grid (finite there since the grid excludes ω = 0).
    pub fn gamma_on_grid(&self) -> WaveFunction {
        let mut wf = WaveFunction::zero(self.grid.clone(), self.modes.clone());
        for mode in 0..self.modes.len() {
            for (j, &w) in self.grid.nodes().iter().enumerate() {
                wf.coeffs_mut()[(mode, j)] = self.sigma_hat[(mode, j)] / w.sqrt()
                    + Complex64::new(0.0, 1.0) * self.rho_hat[(mode, j)] * w.powf(-1.5);
            }
        }
        wf
    }

    /// ‖P_ε γ‖² on the grid: diverges logarithmically as ε → 0 iff q ≠ 0.
    pub fn partial_norm_sq(&self, eps: f64) -> f64 {
        self.gamma_on_grid().shell_project(eps).norm_sq()
    }

    /// Time translation e^{iωt}γ in standard form: the new generators are
    /// σ̂' = cos(ωt)σ̂ − ω^{−1}sin(ωt)ρ̂, ρ̂' = ω sin(ωt)σ̂ + cos(ωt)ρ̂;
    /// ρ̂'(0) = ρ̂(0), so the charge is untouched.
    pub fn time_translate(&self, t: f64) -> Self {
        let shape = [self.modes.len(), self.grid.len()];
        let mut sigma_hat = Array2::zeros(shape);
        let mut rho_hat = Array2::zeros(shape);
        for mode in 0..self.modes.len() {
            for (j, &w) in self.grid.nodes().iter().enumerate() {
                let (s, c) = (w * t).sin_cos();
                sigma_hat[(mode, j)] =
                    c * self.sigma_hat[(mode, j)] - s / w * self.rho_hat[(mode, j)];
                rho_hat[(mode, j)] = w * s * self.sigma_hat[(mode, j)] + c * self.rho_hat[(mode, j)];
            }
        }
        Self {
            grid: self.grid.clone(),
            modes: self.modes.clone(),
            sigma_hat,
            rho_hat,
            q: self.q,
            generators: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn basis() -> (Arc<RadialGrid>, Arc<ModeSet>) {
        (
            Arc::new(RadialGrid::default_log()),
            Arc::new(ModeSet::new(2)),
        )
    }

    #[test]
    fn unit_gaussian_charge() {
        let (grid, modes) = basis();
        let fx = ChargeFixture::unit_gaussian(0.8);
        let c = Charge::from_fixture(&fx, grid, modes).unwrap();
        let (q, unc) = c.charge_of().unwrap();
        assert_relative_eq!(q, 1.0, max_relative = 1e-6);
        assert!(unc < 1e-6);
    }

    #[test]
    fn null_moment_rho_has_zero_charge() {
        let (grid, modes) = basis();
        let fx = ChargeFixture {
            sigma: None,
            rho: Some(ProfileSpec::Difference {
                amplitude: 1.0,
                width1: 0.5,
                width2: 1.0,
                null_moment: 2,
            }),
            q: 0.0,
        };
        let c = Charge::from_fixture(&fx, grid, modes).unwrap();
        let (q, _) = c.charge_of().unwrap();
        assert!(q.abs() < 1e-8, "q = {q}");
    }

    #[test]
    fn inconsistent_q_rejected() {
        let (grid, modes) = basis();
        let mut fx = ChargeFixture::unit_gaussian(0.8);
        fx.q = 2.0;
        assert!(Charge::from_fixture(&fx, grid, modes).is_err());
    }

    #[test]
    fn charge_invariant_under_time_translation() {
        let (grid, modes) = basis();
        let fx = ChargeFixture::unit_gaussian(1.1);
        let c = Charge::from_fixture(&fx, grid, modes).unwrap();
        for &t in &[0.5, 3.0, 20.0] {
            let ct = c.time_translate(t);
            let (q, _) = ct.charge_of().unwrap();
            assert_relative_eq!(q, 1.0, max_relative = 1e-8);
        }
    }

    #[test]
    fn partial_norms_diverge_iff_charged() {
        let (grid, modes) = basis();
        let charged = Charge::from_fixture(&ChargeFixture::unit_gaussian(0.8), grid.clone(), modes.clone()).unwrap();
        let neutral = Charge::from_fixture(
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
            grid,
            modes,
        )
        .unwrap();
        // Charged: ‖P_ε γ‖² grows like 4π q² ln(1/ε); fit the slope.
        let epsilons = [1e-1, 1e-2, 1e-3];
        let norms: Vec<f64> = epsilons.iter().map(|&e| charged.partial_norm_sq(e)).collect();
        let slope1 = (norms[1] - norms[0]) / std::f64::consts::LN_10;
        let slope2 = (norms[2] - norms[1]) / std::f64::consts::LN_10;
        let expected = 4.0 * std::f64::consts::PI;
        assert_relative_eq!(slope1, expected, max_relative = 0.05);
        assert_relative_eq!(slope2, expected, max_relative = 0.05);
        // Neutral: the partial norms stabilize.
        let n1 = neutral.partial_norm_sq(1e-2);
        let n2 = neutral.partial_norm_sq(1e-4);
        assert!(n2.is_finite());
        assert_relative_eq!(n1, n2, max_relative = 1e-2);
    }

    #[test]
    fn additivity_of_charge() {
        let (grid, modes) = basis();
        let a = Charge::from_fixture(&ChargeFixture::unit_gaussian(0.8), grid.clone(), modes.clone()).unwrap();
        let b = Charge::from_fixture(&ChargeFixture::unit_gaussian(1.3), grid, modes).unwrap();
        let sum = a.add(&b).unwrap();
        let (q, _) = sum.charge_of().unwrap();
        assert_relative_eq!(q, 2.0, max_relative = 1e-6);
    }
}
