//! Named parametric radial profile families and the charge fixture format.
//!
//! All families are Schwartz-class; "difference" solves the 1D moment
//! equation ∫ r^m f(r) dr = 0 in closed form so null-charge and null-κ
//! fixtures are reproducible.

use serde::{Deserialize, Serialize};

use crate::error::{ChargeError, Result};

/// A radial profile family with closed-form values, moments and ℓ=0
/// Fourier transforms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum ProfileSpec {
    /// amplitude · e^{−(r/width)²}
    Gaussian { amplitude: f64, width: f64 },
    /// amplitude · e^{−((r−radius)/width)²}
    Shell {
        amplitude: f64,
        radius: f64,
        width: f64,
    },
    /// amplitude·(e^{−(r/width1)²} − c·e^{−(r/width2)²}) with c chosen so
    /// that ∫ r^{null_moment} f dr = 0.
    Difference {
        amplitude: f64,
        width1: f64,
        width2: f64,
        null_moment: u32,
    },
}

/// Γ(m/2 + 1/2)-free helper: ∫_0^∞ r^m e^{−(r/s)²} dr = s^{m+1}·I_m with
/// I_m = Γ((m+1)/2)/2; only the s-dependence matters for the null weights.
fn gaussian_moment(s: f64, m: u32) -> f64 {
    // Γ((m+1)/2)/2 for integer m ≥ 0.
    let half_gamma = match m {
        0 => 0.5 * std::f64::consts::PI.sqrt(),
        1 => 0.5,
        2 => 0.25 * std::f64::consts::PI.sqrt(),
        3 => 0.5,
        4 => 0.75 * 0.5 * std::f64::consts::PI.sqrt(),
        _ => {
            // Γ(x+1) = xΓ(x) recurrence from the m−2 case.
            return gaussian_moment(s, m - 2) * s * s * (m as f64 - 1.0) / 2.0;
        }
    };
    s.powi(m as i32 + 1) * half_gamma
}

impl ProfileSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            ProfileSpec::Gaussian { width, .. } => *width > 0.0,
            ProfileSpec::Shell { radius, width, .. } => *width > 0.0 && *radius >= 0.0,
            ProfileSpec::Difference { width1, width2, .. } => {
                *width1 > 0.0 && *width2 > 0.0 && width1 != width2
            }
        };
        if ok {
            Ok(())
        } else {
            Err(ChargeError::Domain(format!("invalid profile {self:?}")))
        }
    }

    /// The second Gaussian's weight in the difference family.
    pub fn difference_weight(&self) -> Option<f64> {
        match self {
            ProfileSpec::Difference {
                width1,
                width2,
                null_moment,
                ..
            } => Some(gaussian_moment(*width1, *null_moment) / gaussian_moment(*width2, *null_moment)),
            _ => None,
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        match self {
            ProfileSpec::Gaussian { amplitude, width } => {
                amplitude * (-(r / width) * (r / width)).exp()
            }
            ProfileSpec::Shell {
                amplitude,
                radius,
                width,
            } => {
                let t = (r - radius) / width;
                amplitude * (-t * t).exp()
            }
            ProfileSpec::Difference {
                amplitude,
                width1,
                width2,
                ..
            } => {
                let c = self.difference_weight().unwrap();
                amplitude
                    * ((-(r / width1) * (r / width1)).exp()
                        - c * (-(r / width2) * (r / width2)).exp())
            }
        }
    }

    /// ∫ f(x) d³x = 4π ∫ r² f(r) dr, in closed form where available.
    pub fn volume_integral(&self) -> f64 {
        let fourpi = 4.0 * std::f64::consts::PI;
        match self {
            ProfileSpec::Gaussian { amplitude, width } => {
                amplitude * std::f64::consts::PI.powf(1.5) * width.powi(3)
            }
            ProfileSpec::Shell { .. } => fourpi * self.moment_quadrature(2),
            ProfileSpec::Difference {
                amplitude,
                width1,
                width2,
                null_moment,
            } => {
                if *null_moment == 2 {
                    0.0
                } else {
                    let c = self.difference_weight().unwrap();
                    amplitude
                        * (std::f64::consts::PI.powf(1.5) * width1.powi(3)
                            - c * std::f64::consts::PI.powf(1.5) * width2.powi(3))
                }
            }
        }
    }

    /// ∫_0^∞ r^m f(r) dr by dense Simpson quadrature (oracle-grade).
    pub fn moment_quadrature(&self, m: u32) -> f64 {
        let r_max = self.support_radius();
        let n = 20_001;
        let h = r_max / (n - 1) as f64;
        let mut acc = 0.0;
        for k in 0..n {
            let r = k as f64 * h;
            let coef = if k == 0 || k == n - 1 {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += coef * h / 3.0 * r.powi(m as i32) * self.eval(r);
        }
        acc
    }

    /// Radius beyond which the profile is negligible (< 1e-300 of peak).
    pub fn support_radius(&self) -> f64 {
        match self {
            ProfileSpec::Gaussian { width, .. } => 14.0 * width,
            ProfileSpec::Shell { radius, width, .. } => radius + 14.0 * width,
            ProfileSpec::Difference { width1, width2, .. } => 14.0 * width1.max(*width2),
        }
    }

    /// ℓ=0 radial Fourier transform 4π ∫ r² j₀(ωr) f(r) dr; closed form for
    /// Gaussian-built families, quadrature for shells.
    pub fn fourier_ell0(&self, omega: f64) -> f64 {
        match self {
            ProfileSpec::Gaussian { amplitude, width } => {
                amplitude
                    * std::f64::consts::PI.powf(1.5)
                    * width.powi(3)
                    * (-omega * omega * width * width / 4.0).exp()
            }
            ProfileSpec::Difference {
                amplitude,
                width1,
                width2,
                ..
            } => {
                let c = self.difference_weight().unwrap();
                let g = |w: f64| {
                    std::f64::consts::PI.powf(1.5)
                        * w.powi(3)
                        * (-omega * omega * w * w / 4.0).exp()
                };
                amplitude * (g(*width1) - c * g(*width2))
            }
            ProfileSpec::Shell { .. } => {
                // 4π/ω ∫ r sin(ωr) f(r) dr, dense Simpson.
                let r_max = self.support_radius();
                let n = 8001;
                let h = r_max / (n - 1) as f64;
                let mut acc = 0.0;
                for k in 0..n {
                    let r = k as f64 * h;
                    let coef = if k == 0 || k == n - 1 {
                        1.0
                    } else if k % 2 == 1 {
                        4.0
                    } else {
                        2.0
                    };
                    let kernel = if omega * r < 1e-8 {
                        r * r * (1.0 - (omega * r) * (omega * r) / 6.0)
                    } else {
                        r * (omega * r).sin() / omega
                    };
                    acc += coef * h / 3.0 * kernel * self.eval(r);
                }
                4.0 * std::f64::consts::PI * acc
            }
        }
    }
}

/// The serialized charge fixture: generators (σ, ρ) as profile specs plus
/// the nominal charge q.  Bit-exact JSON round-trips are part of the
/// contract.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChargeFixture {
    pub sigma: Option<ProfileSpec>,
    pub rho: Option<ProfileSpec>,
    pub q: f64,
}

impl ChargeFixture {
    /// A unit-charge fixture: normalized Gaussian ρ, no σ.
    pub fn unit_gaussian(width: f64) -> Self {
        let amplitude = 1.0 / (std::f64::consts::PI.powf(1.5) * width.powi(3));
        ChargeFixture {
            sigma: None,
            rho: Some(ProfileSpec::Gaussian { amplitude, width }),
            q: 1.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gaussian_volume() {
        let p = ProfileSpec::Gaussian {
            amplitude: 2.0,
            width: 1.5,
        };
        assert_relative_eq!(
            p.volume_integral(),
            4.0 * std::f64::consts::PI * p.moment_quadrature(2),
            max_relative = 1e-10
        );
    }

    #[test]
    fn difference_nulls_requested_moment() {
        for m in [1u32, 2, 3] {
            let p = ProfileSpec::Difference {
                amplitude: 1.0,
                width1: 0.8,
                width2: 1.7,
                null_moment: m,
            };
            let val = p.moment_quadrature(m);
            assert!(val.abs() < 1e-12, "moment {m} = {val}");
        }
    }

    #[test]
    fn fourier_matches_quadrature() {
        let specs = [
            ProfileSpec::Gaussian {
                amplitude: 1.3,
                width: 0.9,
            },
            ProfileSpec::Shell {
                amplitude: 0.7,
                radius: 2.0,
                width: 0.25,
            },
            ProfileSpec::Difference {
                amplitude: 1.0,
                width1: 0.6,
                width2: 1.1,
                null_moment: 2,
            },
        ];
        for spec in &specs {
            for &omega in &[0.0, 0.3, 1.7] {
                // Independent oracle: direct Simpson of 4π r² j₀(ωr) f.
                let r_max = spec.support_radius();
                let n = 40_001;
                let h = r_max / (n - 1) as f64;
                let mut acc = 0.0;
                for k in 0..n {
                    let r = k as f64 * h;
                    let coef = if k == 0 || k == n - 1 {
                        1.0
                    } else if k % 2 == 1 {
                        4.0
                    } else {
                        2.0
                    };
                    let j0 = if omega * r < 1e-10 {
                        1.0
                    } else {
                        (omega * r).sin() / (omega * r)
                    };
                    acc += coef * h / 3.0 * r * r * j0 * spec.eval(r);
                }
                let oracle = 4.0 * std::f64::consts::PI * acc;
                assert_relative_eq!(
                    spec.fourier_ell0(omega),
                    oracle,
                    max_relative = 1e-8,
                    epsilon = 1e-10
                );
            }
        }
    }

    #[test]
    fn fourier_at_zero_is_volume() {
        let p = ProfileSpec::Gaussian {
            amplitude: 0.4,
            width: 2.0,
        };
        assert_relative_eq!(p.fourier_ell0(0.0), p.volume_integral(), max_relative = 1e-12);
    }

    #[test]
    fn fixture_bit_exact_round_trip() {
        let fx = ChargeFixture {
            sigma: Some(ProfileSpec::Shell {
                amplitude: 0.1 + 0.2, // deliberately non-representable sum
                radius: 1.0 / 3.0,
                width: f64::MIN_POSITIVE * 1e10,
            }),
            rho: Some(ProfileSpec::Difference {
                amplitude: std::f64::consts::E,
                width1: 0.123_456_789_012_345_67,
                width2: 2.0,
                null_moment: 2,
            }),
            q: -0.987_654_321_098_765_4,
        };
        let json = serde_json::to_string(&fx).unwrap();
        let back: ChargeFixture = serde_json::from_str(&json).unwrap();
        assert_eq!(fx, back);
        // And a second round trip is byte-identical.
        assert_eq!(json, serde_json::to_string(&back).unwrap());
    }

    #[test]
    fn degenerate_profiles_rejected() {
        assert!(ProfileSpec::Gaussian {
            amplitude: 1.0,
            width: 0.0
        }
        .validate()
        .is_err());
        assert!(ProfileSpec::Difference {
            amplitude: 1.0,
            width1: 1.0,
            width2: 1.0,
            null_moment: 1
        }
        .validate()
        .is_err());
    }
}
