//! Complex spherical harmonics and exact angular quadrature on S².
//!
//! Conventions: Condon–Shortley phase, orthonormal on the unit sphere,
//! conj(Y_{ℓm}) = (−1)^m Y_{ℓ,−m}, Y_{ℓm}(−n̂) = (−1)^ℓ Y_{ℓm}(n̂).

use num_complex::Complex64;

use crate::modes::ModeSet;

/// Normalized associated Legendre values P̄_{ℓm}(x) for all 0 ≤ m ≤ ℓ ≤ ell_max,
/// where Y_{ℓm}(θ,φ) = P̄_{ℓm}(cos θ) e^{imφ}.  Stable forward recurrence in ℓ.
pub fn normalized_assoc_legendre(ell_max: u32, x: f64) -> Vec<Vec<f64>> {
    let lmax = ell_max as usize;
    let mut p = vec![vec![0.0; lmax + 1]; lmax + 1]; // p[ℓ][m]
    let somx2 = (1.0 - x * x).max(0.0).sqrt();
    // P̄_00 = sqrt(1/4π)
    p[0][0] = (1.0 / (4.0 * std::f64::consts::PI)).sqrt();
    // Diagonal: P̄_{m,m} = −sqrt((2m+1)/(2m)) · somx2 · P̄_{m−1,m−1}
    for m in 1..=lmax {
        p[m][m] = -((2.0 * m as f64 + 1.0) / (2.0 * m as f64)).sqrt() * somx2 * p[m - 1][m - 1];
    }
    // First off-diagonal: P̄_{m+1,m} = sqrt(2m+3) · x · P̄_{m,m}
    for m in 0..lmax {
        p[m + 1][m] = (2.0 * m as f64 + 3.0).sqrt() * x * p[m][m];
    }
    // General recurrence in ℓ.
    for m in 0..=lmax {
        for ell in (m + 2)..=lmax {
            let l = ell as f64;
            let mm = m as f64;
            let a = ((2.0 * l + 1.0) * (2.0 * l - 1.0) / ((l - mm) * (l + mm))).sqrt();
            let b = ((2.0 * l + 1.0) * (l - mm - 1.0) * (l + mm - 1.0)
                / ((2.0 * l - 3.0) * (l - mm) * (l + mm)))
                .sqrt();
            p[ell][m] = a * x * p[ell - 1][m] - b * p[ell - 2][m];
        }
    }
    p
}

/// Y_{ℓm}(n̂) for every mode in `modes`, at polar angle cos θ = `cos_theta`
/// and azimuth `phi`.
pub fn eval_modes(modes: &ModeSet, cos_theta: f64, phi: f64) -> Vec<Complex64> {
    let p = normalized_assoc_legendre(modes.ell_max(), cos_theta);
    modes
        .modes()
        .iter()
        .map(|mode| {
            let m_abs = mode.m.unsigned_abs() as usize;
            let base = p[mode.ell as usize][m_abs];
            let phase = Complex64::from_polar(1.0, mode.m as f64 * phi);
            if mode.m >= 0 {
                base * phase
            } else {
                // Y_{ℓ,−m} = (−1)^m conj(Y_{ℓm}) ⇒ magnitude P̄_{ℓ|m|}, sign flip for odd m.
                let sign = if m_abs % 2 == 0 { 1.0 } else { -1.0 };
                sign * base * phase
            }
        })
        .collect()
}

/// Gauss–Legendre nodes and weights on [−1, 1], by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Initial guess (Abramowitz–Stegun 22.16.6).
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            // Evaluate P_n(x) and P'_n(x) by recurrence.
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (mut p0, mut p1) = (1.0, x);
        for k in 2..=n {
            let kf = k as f64;
            let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Product quadrature on S²: Gauss–Legendre in cos θ times the uniform
/// trapezoid in azimuth.  With `n_theta` ≥ ell_max+1 and `n_phi` ≥ 2·ell_max+1
/// it integrates products of harmonics up to total degree 2·ell_max exactly.
#[derive(Debug, Clone)]
pub struct AngularQuadrature {
    /// (cos θ_i, φ_k, weight_ik) flattened, weight includes the full S² measure.
    points: Vec<(f64, f64, f64)>,
    n_theta: usize,
    n_phi: usize,
}

impl AngularQuadrature {
    pub fn new(n_theta: usize, n_phi: usize) -> Self {
        let (ct, wt) = gauss_legendre(n_theta);
        let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;
        let mut points = Vec::with_capacity(n_theta * n_phi);
        for i in 0..n_theta {
            for k in 0..n_phi {
                points.push((ct[i], k as f64 * dphi, wt[i] * dphi));
            }
        }
        Self {
            points,
            n_theta,
            n_phi,
        }
    }

    /// Quadrature sized for exact Y-products up to 2·ell_max.
    pub fn for_ell_max(ell_max: u32) -> Self {
        Self::new(ell_max as usize + 1, 2 * ell_max as usize + 1)
    }

    pub fn points(&self) -> &[(f64, f64, f64)] {
        &self.points
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    /// ∫_{S²} f dΩ for a function given at the quadrature points.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.points
            .iter()
            .zip(values)
            .map(|((_, _, w), v)| w * v)
            .sum()
    }

    /// Project a real function on S² (sampled at the quadrature points)
    /// onto the modes: c_{ℓm} = ⟨Y_{ℓm}, f⟩.
    pub fn project(&self, modes: &ModeSet, values: &[f64]) -> Vec<Complex64> {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); modes.len()];
        for ((ct, phi, w), &v) in self.points.iter().zip(values) {
            let y = eval_modes(modes, *ct, *phi);
            for (c, yv) in coeffs.iter_mut().zip(y) {
                *c += yv.conj() * v * *w;
            }
        }
        coeffs
    }

    /// Evaluate a mode expansion at every quadrature point.
    pub fn synthesize(&self, modes: &ModeSet, coeffs: &[Complex64]) -> Vec<Complex64> {
        self.points
            .iter()
            .map(|(ct, phi, _)| {
                let y = eval_modes(modes, *ct, *phi);
                y.iter().zip(coeffs).map(|(yv, c)| yv * c).sum()
            })
            .collect()
    }
}
