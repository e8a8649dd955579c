//! The linear form l_γ(f) = −Im ∫ d³k conj(γ(k)) f(k) and its dilated
//! variant.
//!
//! In mode arrays, l_γ(f) = ∫ dω Σ_{ℓm} Re[conj(ρ̂)ĥ] − ∫ ω²dω Σ_{ℓm}
//! Re[conj(σ̂)ĝ].  The grid covers [ω_min, ω_max]; the ρ̂ĥ integrand tends
//! to a finite constant at ω → 0, so the band below ω_min contributes
//! ≈ ω_min · (integrand at the first node), which is added as an analytic
//! tail correction (without it the truncation error ~1e-4 would swamp the
//! localization residuals).

use lab_hilbert::TestVector;

use crate::charge::Charge;
use crate::error::{ChargeError, Result};

/// Options for the quadrature; the tail correction is on by default.
#[derive(Debug, Clone, Copy)]
pub struct LinearFormOptions {
    pub low_omega_tail: bool,
}

impl Default for LinearFormOptions {
    fn default() -> Self {
        Self {
            low_omega_tail: true,
        }
    }
}

/// l_γ(f) for f in test-vector form.
pub fn linear_form(gamma: &Charge, f: &TestVector, opts: LinearFormOptions) -> Result<f64> {
    let grid = gamma.grid();
    let modes = gamma.modes();
    if f.wf().grid().len() != grid.len() || f.wf().modes().len() != modes.len() {
        return Err(ChargeError::IncompatibleBasis(
            "test vector does not match the charge basis".into(),
        ));
    }
    let w = grid.weights();
    let nodes = grid.nodes();
    let mut rho_term = 0.0;
    let mut sigma_term = 0.0;
    for mode in 0..modes.len() {
        for j in 0..grid.len() {
            let rho = gamma.rho_hat()[(mode, j)];
            let sig = gamma.sigma_hat()[(mode, j)];
            let h = f.h_part()[(mode, j)];
            let g = f.g_part()[(mode, j)];
            rho_term += w[j] / (nodes[j] * nodes[j]) * (rho.conj() * h).re;
            sigma_term += w[j] * (sig.conj() * g).re;
        }
    }
    let mut val = rho_term - sigma_term;
    if opts.low_omega_tail {
        let mut density = 0.0;
        for mode in 0..modes.len() {
            density += (gamma.rho_hat()[(mode, 0)].conj() * f.h_part()[(mode, 0)]).re;
        }
        val += grid.min() * density;
    }
    Ok(val)
}

/// l_γ(f_λ) via the change of variables that moves the dilation onto the
/// generators:
///     l_γ(f_λ) = ∫ d³k ω^{−2} conj(ρ̂(k/λ)) ĥ(k) − (1/λ) ∫ d³k conj(σ̂(k/λ)) ĝ(k).
/// Evaluating ρ̂, σ̂ at ω/λ keeps everything resolvable on the grid for
/// arbitrarily large λ (the directly dilated f_λ would leave the band).
/// Requires a rotation-invariant charge with position-space generators.
/// Returns (total, rho_term, sigma_term).
pub fn linear_form_dilated(
    gamma: &Charge,
    f: &TestVector,
    lambda: f64,
    opts: LinearFormOptions,
) -> Result<(f64, f64, f64)> {
    if !(lambda > 0.0) {
        return Err(ChargeError::Domain(format!(
            "dilation parameter must be positive, got {lambda}"
        )));
    }
    let grid = gamma.grid();
    let modes = gamma.modes();
    if f.wf().grid().len() != grid.len() || f.wf().modes().len() != modes.len() {
        return Err(ChargeError::IncompatibleBasis(
            "test vector does not match the charge basis".into(),
        ));
    }
    let idx00 = modes.index_of(0, 0)?;
    let y00 = 1.0 / (4.0 * std::f64::consts::PI).sqrt();
    let w = grid.weights();
    let nodes = grid.nodes();
    let mut rho_term = 0.0;
    let mut sigma_term = 0.0;
    for j in 0..grid.len() {
        let rho_scaled = gamma.rho_hat_radial_at(nodes[j] / lambda)? / y00;
        let sig_scaled = gamma.sigma_hat_radial_at(nodes[j] / lambda)? / y00;
        let h = f.h_part()[(idx00, j)];
        let g = f.g_part()[(idx00, j)];
        rho_term += w[j] / (nodes[j] * nodes[j]) * rho_scaled * h.re;
        sigma_term += w[j] / lambda * sig_scaled * g.re;
    }
    if opts.low_omega_tail {
        let density = gamma.rho_hat_radial_at(nodes[0] / lambda)? / y00 * f.h_part()[(idx00, 0)].re;
        rho_term += grid.min() * density;
    }
    Ok((rho_term - sigma_term, rho_term, sigma_term))
}
