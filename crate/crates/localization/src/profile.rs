//! The special radial charge profile: Φ smooth, 0 inside r₁, Coulombic
//! q/(4πr) outside r₂, with ρ = −ΔΦ supported in the shell [r₁, r₂].

use lab_hilbert::PositionGrid;

use crate::error::{LocalizationError, Result};

/// Smoothstep built from the C^∞ bump b(t) = exp(−1/(t(1−t))):
/// S(t) = ∫₀^t b / ∫₀^1 b, flat to all orders at both ends.
fn bump(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        0.0
    } else {
        (-1.0 / (t * (1.0 - t))).exp()
    }
}

fn bump_derivative(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        0.0
    } else {
        let d = t * (1.0 - t);
        bump(t) * (1.0 - 2.0 * t) / (d * d)
    }
}

/// ∫₀¹ b(t) dt (dense Simpson, computed once per profile).
fn bump_mass() -> f64 {
    let n = 20_001;
    let h = 1.0 / (n - 1) as f64;
    let mut acc = 0.0;
    for k in 0..n {
        let coef = if k == 0 || k == n - 1 {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += coef * h / 3.0 * bump(k as f64 * h);
    }
    acc
}

#[derive(Debug, Clone)]
pub struct RadialChargeProfile {
    pub q: f64,
    pub r1: f64,
    pub r2: f64,
    bump_norm: f64,
    /// Cumulative S(t) values on a dense uniform t-grid for interpolation.
    s_table: Vec<f64>,
}

impl RadialChargeProfile {
    pub fn new(q: f64, r1: f64, r2: f64) -> Result<Self> {
        if !(0.0 < r1 && r1 < r2) {
            return Err(LocalizationError::Construction(format!(
                "need 0 < r1 < r2, got ({r1}, {r2})"
            )));
        }
        let bump_norm = bump_mass();
        // Dense cumulative table for S.
        let n = 8193;
        let h = 1.0 / (n - 1) as f64;
        let mut s_table = vec![0.0; n];
        let mut acc = 0.0;
        for k in 1..n {
            // Trapezoid on the fine grid is plenty for interpolation use.
            acc += 0.5 * (bump((k - 1) as f64 * h) + bump(k as f64 * h)) * h;
            s_table[k] = acc;
        }
        let total = s_table[n - 1];
        for v in s_table.iter_mut() {
            *v /= total;
        }
        Ok(Self {
            q,
            r1,
            r2,
            bump_norm,
            s_table,
        })
    }

    fn t_of(&self, r: f64) -> f64 {
        (r - self.r1) / (self.r2 - self.r1)
    }

    /// The smoothstep S(t) (0 for t ≤ 0, 1 for t ≥ 1).
    pub fn smoothstep(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= 1.0 {
            return 1.0;
        }
        let pos = t * (self.s_table.len() - 1) as f64;
        let i = (pos.floor() as usize).min(self.s_table.len() - 2);
        let frac = pos - i as f64;
        (1.0 - frac) * self.s_table[i] + frac * self.s_table[i + 1]
    }

    /// Φ(r) = (q/4πr)·S((r−r₁)/(r₂−r₁)).
    pub fn phi(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        self.q / (4.0 * std::f64::consts::PI * r) * self.smoothstep(self.t_of(r))
    }

    /// The interior remainder Φ(r) − q/(4πr) = (q/4πr)(S − 1); identically
    /// 0 beyond r₂ and −q/(4πr) below r₁.
    pub fn phi_minus_coulomb(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        self.q / (4.0 * std::f64::consts::PI * r) * (self.smoothstep(self.t_of(r)) - 1.0)
    }

    /// ρ(r) = −ΔΦ = −(1/r)(rΦ)'' = −q·S''(t)/(4π r (r₂−r₁)²), supported in
    /// the shell (r₁, r₂).
    pub fn rho(&self, r: f64) -> f64 {
        let t = self.t_of(r);
        if t <= 0.0 || t >= 1.0 || r <= 0.0 {
            return 0.0;
        }
        let s2 = bump_derivative(t) / self.bump_norm;
        -self.q * s2 / (4.0 * std::f64::consts::PI * r * (self.r2 - self.r1).powi(2))
    }

    /// ∫ ρ d³x by quadrature (equals q analytically).
    pub fn rho_volume_integral(&self, n: usize) -> f64 {
        let h = (self.r2 - self.r1) / n as f64;
        let mut acc = 0.0;
        for k in 0..n {
            let r = self.r1 + (k as f64 + 0.5) * h;
            acc += 4.0 * std::f64::consts::PI * r * r * self.rho(r) * h;
        }
        acc
    }

    /// Far-field flux oracle 4πR²·(−Φ'(R)) = q for R ≥ r₂ (Φ = q/4πR there,
    /// so the flux is exactly 4πR·Φ(R)).
    pub fn flux_charge(&self, r_eval: f64) -> Result<f64> {
        if r_eval < self.r2 {
            return Err(LocalizationError::Domain(format!(
                "flux radius {r_eval} inside the transition shell (r2 = {})",
                self.r2
            )));
        }
        Ok(4.0 * std::f64::consts::PI * r_eval * self.phi(r_eval))
    }

    /// ρ sampled on a position grid.
    pub fn rho_samples(&self, grid: &PositionGrid) -> Vec<f64> {
        grid.nodes().iter().map(|&r| self.rho(r)).collect()
    }
}
