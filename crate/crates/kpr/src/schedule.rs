//! Shell schedules (ε_i, b_i, ℓ-cutoffs) and their admissibility checks.
//!
//! Epsilons are stored as natural logarithms: geometric schedules with
//! thousands of shells underflow f64 in raw form, while all the quantities
//! that matter (shell boundaries on the grid, the norms ln(ε_i/ε_{i+1}))
//! come straight from the logs.

use serde::{Deserialize, Serialize};

use crate::error::{KprError, Result};

/// Which angular momenta enter the projections Q̃_i (ℓ = 0 is always
/// excluded).  The parity-restricted variants drive the opposite-cone
/// localization experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityFilter {
    #[default]
    All,
    /// Keep even ℓ ≥ 2 only.
    EvenOnly,
    /// Keep odd ℓ only.
    OddOnly,
}

impl ParityFilter {
    pub fn keeps(&self, ell: u32) -> bool {
        match self {
            ParityFilter::All => ell > 0,
            ParityFilter::EvenOnly => ell > 0 && ell % 2 == 0,
            ParityFilter::OddOnly => ell % 2 == 1,
        }
    }
}

/// The data (ε_i, b_i, ell_cut(i)) truncated at N shells.  Shell i ∈ 1..=N
/// occupies the frequency band [ε_{i+1}, ε_i); `log_epsilons` stores
/// ln ε_1 > … > ln ε_{N+1}.
#[derive(Debug, Clone, PartialEq)]
pub struct KprSchedule {
    log_epsilons: Vec<f64>,
    bs: Vec<f64>,
    ell_cut: Vec<u32>,
    parity: ParityFilter,
}

/// JSON schema for schedules.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScheduleSpec {
    pub epsilon: EpsilonSpec,
    pub b: BSpec,
    pub ell_cut: EllCutSpec,
    pub shells: usize,
    #[serde(default)]
    pub parity: ParityFilter,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EpsilonSpec {
    /// ε_i = ratio^i (ratio ∈ (0,1)).
    Geometric { ratio: f64 },
    Explicit { values: Vec<f64> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BSpec {
    /// b_i = scale · i^{−exponent}.
    Power {
        exponent: f64,
        #[serde(default = "default_b_scale")]
        scale: f64,
    },
    Explicit { values: Vec<f64> },
}

fn default_b_scale() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EllCutSpec {
    /// ell_cut(i) = i.
    Linear,
    Explicit { values: Vec<u32> },
}

/// Verdicts and diagnostics from `validate`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<String>,
    /// rkQ_i per shell.
    pub ranks: Vec<u64>,
    /// Energy partial sums S_n = Σ_{i≤n} (ε_i/b_i²)·rkQ_i.
    pub energy_partial_sums: Vec<f64>,
    /// Per-shell energy increments ε_i/b_i²·rkQ_i.
    pub energy_increments: Vec<f64>,
    /// Partial sums of b_i² ln(ε_i/ε_{i+1}).
    pub kpr_partial_sums: Vec<f64>,
    /// Fitted polynomial degree bounding ln(ε_i/ε_{i+1}) in i.
    pub log_ratio_poly_degree: f64,
}

impl KprSchedule {
    pub fn new(
        epsilons: Vec<f64>,
        bs: Vec<f64>,
        ell_cut: Vec<u32>,
        parity: ParityFilter,
    ) -> Result<Self> {
        if !epsilons.iter().all(|&e| e > 0.0 && e.is_finite()) {
            return Err(KprError::InvalidSchedule(
                "epsilons must be positive and finite".into(),
            ));
        }
        Self::from_logs(epsilons.iter().map(|e| e.ln()).collect(), bs, ell_cut, parity)
    }

    pub fn from_logs(
        log_epsilons: Vec<f64>,
        bs: Vec<f64>,
        ell_cut: Vec<u32>,
        parity: ParityFilter,
    ) -> Result<Self> {
        let s = Self {
            log_epsilons,
            bs,
            ell_cut,
            parity,
        };
        let report = s.validate();
        if !report.ok {
            return Err(KprError::InvalidSchedule(report.violations.join("; ")));
        }
        Ok(s)
    }

    pub fn from_spec(spec: &ScheduleSpec) -> Result<Self> {
        let n = spec.shells;
        if n == 0 {
            return Err(KprError::InvalidSchedule("shells must be ≥ 1".into()));
        }
        let log_epsilons = match &spec.epsilon {
            EpsilonSpec::Geometric { ratio } => {
                if !(*ratio > 0.0 && *ratio < 1.0) {
                    return Err(KprError::InvalidSchedule(format!(
                        "geometric ratio must be in (0,1), got {ratio}"
                    )));
                }
                (1..=n + 1).map(|i| i as f64 * ratio.ln()).collect()
            }
            EpsilonSpec::Explicit { values } => {
                if !values.iter().all(|&e| e > 0.0 && e.is_finite()) {
                    return Err(KprError::InvalidSchedule(
                        "explicit epsilons must be positive".into(),
                    ));
                }
                values.iter().map(|e| e.ln()).collect()
            }
        };
        let bs = match &spec.b {
            BSpec::Power { exponent, scale } => (1..=n)
                .map(|i| scale * (i as f64).powf(-exponent))
                .collect(),
            BSpec::Explicit { values } => values.clone(),
        };
        let ell_cut = match &spec.ell_cut {
            EllCutSpec::Linear => (1..=n as u32).collect(),
            EllCutSpec::Explicit { values } => values.clone(),
        };
        Self::from_logs(log_epsilons, bs, ell_cut, spec.parity)
    }

    /// The laboratory default: ε_i = 2^{−i}, b_i = 1/(i+1), ell_cut(i) = i,
    /// N = 40 shells.  (b_i = 1/i would start at b_1 = 1, outside the open
    /// interval (0,1) the admissibility conditions require.)
    pub fn default_fixture() -> Self {
        Self::from_spec(&ScheduleSpec {
            epsilon: EpsilonSpec::Geometric { ratio: 0.5 },
            b: BSpec::Explicit {
                values: (1..=40).map(|i| 1.0 / (i as f64 + 1.0)).collect(),
            },
            ell_cut: EllCutSpec::Linear,
            shells: 40,
            parity: ParityFilter::All,
        })
        .expect("default schedule is admissible")
    }

    pub fn shells(&self) -> usize {
        self.bs.len()
    }

    pub fn parity(&self) -> ParityFilter {
        self.parity
    }

    /// Same schedule with a different angular parity filter.
    pub fn with_parity(&self, parity: ParityFilter) -> Self {
        Self {
            parity,
            ..self.clone()
        }
    }

    /// ε_i for i ∈ 1..=N+1 (may underflow to 0 for very deep shells).
    pub fn epsilon(&self, i: usize) -> f64 {
        self.log_epsilons[i - 1].exp()
    }

    pub fn log_epsilon(&self, i: usize) -> f64 {
        self.log_epsilons[i - 1]
    }

    /// b_i for i ∈ 1..=N.
    pub fn b(&self, i: usize) -> f64 {
        self.bs[i - 1]
    }

    /// ell_cut(i) for i ∈ 1..=N.
    pub fn ell_cut(&self, i: usize) -> u32 {
        self.ell_cut[i - 1]
    }

    /// Angular momenta retained by Q̃_i.
    pub fn kept_ells(&self, i: usize) -> impl Iterator<Item = u32> + '_ {
        let cut = self.ell_cut(i);
        let parity = self.parity;
        (1..=cut).filter(move |&l| parity.keeps(l))
    }

    /// rkQ_i = Σ_{kept ℓ} (2ℓ+1); equals (ell_cut+1)² − 1 for the unfiltered case.
    pub fn rank(&self, i: usize) -> u64 {
        self.kept_ells(i).map(|l| 2 * u64::from(l) + 1).sum()
    }

    /// ln(ε_i/ε_{i+1}), the closed-form ‖ξ_i‖².
    pub fn xi_norm_sq(&self, i: usize) -> f64 {
        self.log_epsilons[i - 1] - self.log_epsilons[i]
    }

    /// Structural and admissibility diagnostics.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let n = self.bs.len();
        if self.log_epsilons.len() != n + 1 {
            violations.push(format!(
                "need {} epsilons for {} shells, got {}",
                n + 1,
                n,
                self.log_epsilons.len()
            ));
        }
        if self.ell_cut.len() != n {
            violations.push(format!(
                "need {} ell_cut entries, got {}",
                n,
                self.ell_cut.len()
            ));
        }
        if violations.is_empty() {
            if !self
                .log_epsilons
                .windows(2)
                .all(|p| p[0] > p[1] && p[1].is_finite())
            {
                violations.push("epsilons must be strictly decreasing and positive".into());
            }
            for (i, &b) in self.bs.iter().enumerate() {
                if !(b > 0.0 && b < 1.0) {
                    violations.push(format!("b_{} = {b} outside (0,1)", i + 1));
                }
            }
            // Decay trend: mean of the last quartile below mean of the first.
            if n >= 4 {
                let q = n / 4;
                let first: f64 = self.bs[..q].iter().sum::<f64>() / q as f64;
                let last: f64 = self.bs[n - q..].iter().sum::<f64>() / q as f64;
                if last >= first {
                    violations.push(format!(
                        "b sequence does not trend to zero (first-quartile mean {first:.3e}, last {last:.3e})"
                    ));
                }
            }
        }

        let ok_structure = violations.is_empty();
        let mut ranks = Vec::new();
        let mut energy_partial_sums = Vec::new();
        let mut energy_increments = Vec::new();
        let mut kpr_partial_sums = Vec::new();
        let mut log_ratio_poly_degree = 0.0;
        if ok_structure {
            let mut acc = 0.0;
            let mut kpr_acc = 0.0;
            for i in 1..=n {
                let rk = self.rank(i);
                ranks.push(rk);
                let inc = self.epsilon(i) / (self.b(i) * self.b(i)) * rk as f64;
                acc += inc;
                energy_partial_sums.push(acc);
                energy_increments.push(inc);
                kpr_acc += self.b(i) * self.b(i) * self.xi_norm_sq(i);
                kpr_partial_sums.push(kpr_acc);
            }
            // ln(ε_i/ε_{i+1}) must be polynomially bounded in i: report the
            // smallest degree d with ln-ratio ≤ i^d over the shells.
            let mut worst = 0.0_f64;
            for i in 1..=n {
                let d = (self.xi_norm_sq(i).max(1e-300)).ln() / (i as f64).max(2.0).ln();
                worst = worst.max(d);
            }
            log_ratio_poly_degree = worst.max(0.0);
            // Cauchy check on the KPR sums: the tail must stay below the head.
            if n >= 8 {
                let tail = kpr_partial_sums[n - 1] - kpr_partial_sums[3 * n / 4 - 1];
                let head = kpr_partial_sums[n / 4 - 1];
                if tail > head.max(1e-12) {
                    violations
                        .push(format!("KPR sums not Cauchy: tail {tail:.3e} vs head {head:.3e}"));
                }
            }
        }
        ValidationReport {
            ok: violations.is_empty(),
            violations,
            ranks,
            energy_partial_sums,
            energy_increments,
            kpr_partial_sums,
            log_ratio_poly_degree,
        }
    }
}
