//! Coulomb potentials Φ_ρ(x) = (1/4π) ∫ d³y ρ(y)/|x−y| and the far-field
//! flux oracle for the Gauss law.

use ndarray::Array3;

use crate::error::{ChargeError, Result};
use crate::profiles::ProfileSpec;

/// A density sampled on a uniform 3D box.
#[derive(Debug, Clone)]
pub struct SampledDensity {
    /// Coordinates of the cell (0,0,0) center.
    pub origin: [f64; 3],
    pub spacing: f64,
    pub data: Array3<f64>,
}

/// Result of a potential evaluation; `regularized` marks that x fell into a
/// singular cell and the uniform-ball kernel was substituted there.
#[derive(Debug, Clone, Copy)]
pub struct PotentialValue {
    pub value: f64,
    pub regularized: bool,
}

impl SampledDensity {
    pub fn from_fn(
        origin: [f64; 3],
        spacing: f64,
        shape: [usize; 3],
        f: impl Fn(f64, f64, f64) -> f64,
    ) -> Self {
        let mut data = Array3::zeros(shape);
        for i in 0..shape[0] {
            for j in 0..shape[1] {
                for k in 0..shape[2] {
                    let x = origin[0] + i as f64 * spacing;
                    let y = origin[1] + j as f64 * spacing;
                    let z = origin[2] + k as f64 * spacing;
                    data[(i, j, k)] = f(x, y, z);
                }
            }
        }
        Self {
            origin,
            spacing,
            data,
        }
    }

    pub fn total_charge(&self) -> f64 {
        self.data.sum() * self.spacing.powi(3)
    }

    /// Φ_ρ(x) by direct summation over cells.  Cells closer than half a
    /// spacing use the interior potential of a uniformly charged ball of
    /// the same volume, and the result is flagged.
    pub fn potential_at(&self, x: [f64; 3]) -> PotentialValue {
        let vol = self.spacing.powi(3);
        // Radius of the equal-volume ball.
        let a = self.spacing * (3.0 / (4.0 * std::f64::consts::PI)).cbrt();
        let mut acc = 0.0;
        let mut regularized = false;
        let shape = self.data.dim();
        for i in 0..shape.0 {
            for j in 0..shape.1 {
                for k in 0..shape.2 {
                    let rho = self.data[(i, j, k)];
                    if rho == 0.0 {
                        continue;
                    }
                    let dx = x[0] - (self.origin[0] + i as f64 * self.spacing);
                    let dy = x[1] - (self.origin[1] + j as f64 * self.spacing);
                    let dz = x[2] - (self.origin[2] + k as f64 * self.spacing);
                    let d = (dx * dx + dy * dy + dz * dz).sqrt();
                    if d >= a {
                        acc += rho * vol / d;
                    } else {
                        // Interior of the equal-volume ball: (3 − (d/a)²)/(2a).
                        acc += rho * vol * (3.0 - (d / a) * (d / a)) / (2.0 * a);
                        regularized = true;
                    }
                }
            }
        }
        PotentialValue {
            value: acc / (4.0 * std::f64::consts::PI),
            regularized,
        }
    }
}

/// Radial Coulomb solver: Φ(r) = (1/r)∫_0^r s²ρ(s)ds + ∫_r^∞ sρ(s)ds for a
/// rotation-invariant ρ given as a closed-form profile.  Dense midpoint
/// quadrature; `n` controls the resolution.
#[derive(Debug, Clone)]
pub struct RadialCoulomb {
    rs: Vec<f64>,
    phi: Vec<f64>,
    r_max: f64,
    /// ∫_0^∞ s²ρ ds (the enclosed charge over 4π).
    total_moment: f64,
}

impl RadialCoulomb {
    pub fn new(rho: &ProfileSpec, n: usize) -> Result<Self> {
        rho.validate()?;
        let r_max = rho.support_radius();
        let h = r_max / n as f64;
        let rs: Vec<f64> = (0..n).map(|k| (k as f64 + 0.5) * h).collect();
        let vals: Vec<f64> = rs.iter().map(|&r| rho.eval(r)).collect();
        Self::from_samples(rs, vals)
    }

    /// Build from density samples on a uniform midpoint grid; beyond the
    /// last sample the density is treated as zero (the monopole regime).
    pub fn from_samples(rs: Vec<f64>, vals: Vec<f64>) -> Result<Self> {
        if rs.len() < 2 || rs.len() != vals.len() {
            return Err(ChargeError::Domain(
                "need matching sample arrays with at least two entries".into(),
            ));
        }
        let n = rs.len();
        let h = rs[1] - rs[0];
        let r_max = rs[n - 1] + 0.5 * h;
        // Half-cell splitting at s = r keeps each cell on exactly one side.
        let mut inner = vec![0.0; n]; // ∫_0^{r_k} s²ρ ds
        let mut acc = 0.0;
        for k in 0..n {
            inner[k] = acc + 0.5 * rs[k] * rs[k] * vals[k] * h;
            acc += rs[k] * rs[k] * vals[k] * h;
        }
        let total_moment = acc;
        let mut outer = vec![0.0; n]; // ∫_{r_k}^∞ sρ ds
        acc = 0.0;
        for k in (0..n).rev() {
            outer[k] = acc + 0.5 * rs[k] * vals[k] * h;
            acc += rs[k] * vals[k] * h;
        }
        let phi: Vec<f64> = (0..n)
            .map(|k| inner[k] / rs[k] + outer[k])
            .collect();
        Ok(Self {
            rs,
            phi,
            r_max,
            total_moment,
        })
    }

    /// Φ(r); beyond the sampled support the exact monopole form q/(4πr).
    pub fn phi(&self, r: f64) -> f64 {
        if r >= self.r_max {
            return self.total_moment / r;
        }
        // Linear interpolation on the midpoint grid.
        let h = self.rs[1] - self.rs[0];
        let pos = (r - self.rs[0]) / h;
        if pos <= 0.0 {
            return self.phi[0];
        }
        let i = (pos.floor() as usize).min(self.rs.len() - 2);
        let t = pos - i as f64;
        (1.0 - t) * self.phi[i] + t * self.phi[i + 1]
    }

    /// Far-field flux oracle: for r beyond the support Φ = C/r exactly, so
    /// the outward flux of −∇Φ through the sphere of radius R is 4π·R·Φ(R).
    pub fn flux_charge(&self, r_eval: f64) -> Result<f64> {
        if r_eval < self.r_max {
            return Err(ChargeError::Domain(format!(
                "flux radius {r_eval} inside the sampled support {}",
                self.r_max
            )));
        }
        Ok(4.0 * std::f64::consts::PI * r_eval * self.phi(r_eval))
    }
}
