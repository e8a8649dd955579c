//! Convergence/divergence probe for the sequences T₁ω^{−3/2}P_{ε_n}(c⊗η).
//!
//! Everything here is closed form: per shell the increment is
//!     ‖T₁ω^{−3/2}P_i u‖² = ln(ε_i/ε_{i+1})·(‖(1−Q̃_i)η‖² + b_i²‖Q̃_iη‖²),
//! so no radial grid enters and the dichotomy of the ⟨Y₀₀,η⟩ ≠ 0 branch is
//! exact.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use lab_hilbert::ModeSet;

use crate::error::{KprError, Result};
use crate::schedule::KprSchedule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Cauchy,
    Divergent,
    Indeterminate,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeRow {
    /// Shell index n.
    pub n: usize,
    /// ‖T₁ω^{−3/2}(P_{ε_{n+1}} − P_{ε_{n_lo}})u‖ accumulated from the range start.
    pub partial_norm: f64,
    /// ‖T₁ω^{−3/2}P_n u‖, the increment contributed by shell n.
    pub increment: f64,
    /// Fitted envelope sqrt(ln(ε_n/ε_{n+1})·(c/n^N + b_n²)·‖η‖²).
    pub bound: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeReport {
    pub rows: Vec<ProbeRow>,
    pub verdict: Verdict,
    /// |⟨Y₀₀, η⟩|².
    pub y00_mass: f64,
    /// Fitted decay exponent of the increments (log-log slope).
    pub increment_slope: f64,
    /// (c, N) of the fitted envelope for the unresolved angular mass.
    pub envelope: (f64, f64),
}

impl ProbeReport {
    /// CSV with the fixed column order n, partial_norm, increment, bound.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,partial_norm,increment,bound\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.n, r.partial_norm, r.increment, r.bound
            ));
        }
        out
    }
}

/// Least-squares slope of ln(y) against ln(x) over the points with y > floor.
fn log_log_slope(points: &[(f64, f64)], floor: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, y)| *y > floor)
        .map(|&(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-30 {
        return None;
    }
    Some((n * sxy - sx * sy) / denom)
}

/// Classify a sequence of (shell index, increment) pairs: Cauchy when the
/// increments decay fast enough to be square-summable (fitted log-log slope
/// < −1/2), divergent when they do not decay.  Returns (verdict, slope).
pub fn classify_increments(pts: &[(f64, f64)]) -> (Verdict, f64) {
    let max_d = pts.iter().map(|p| p.1).fold(0.0, f64::max);
    if max_d <= 1e-300 {
        return (Verdict::Cauchy, f64::NEG_INFINITY);
    }
    match log_log_slope(pts, max_d * 1e-14) {
        Some(s) => {
            let verdict = if s <= -0.55 {
                Verdict::Cauchy
            } else if s >= -0.5 {
                Verdict::Divergent
            } else {
                Verdict::Indeterminate
            };
            (verdict, s)
        }
        None => (Verdict::Indeterminate, 0.0),
    }
}

/// Run the probe for shells n_lo..=n_hi; `eta` holds Y_{ℓm} coefficients of
/// the angular profile over `modes`.
pub fn convergence_probe(
    schedule: &KprSchedule,
    modes: &ModeSet,
    eta: &[Complex64],
    n_lo: usize,
    n_hi: usize,
) -> Result<ProbeReport> {
    if eta.len() != modes.len() {
        return Err(KprError::Domain(format!(
            "η has {} coefficients, mode set {}",
            eta.len(),
            modes.len()
        )));
    }
    if !(1 <= n_lo && n_lo < n_hi && n_hi <= schedule.shells()) {
        return Err(KprError::Domain(format!(
            "shell range {n_lo}..{n_hi} exceeds the truncation N = {}",
            schedule.shells()
        )));
    }
    let total_mass: f64 = eta.iter().map(|c| c.norm_sqr()).sum();
    let y00_mass = eta[0].norm_sqr();

    // Per-shell kept/unresolved angular masses.
    let mut increments = Vec::new();
    let mut unresolved = Vec::new();
    for i in n_lo..=n_hi {
        let mut kept = 0.0;
        for (idx, mode) in modes.modes().iter().enumerate() {
            if mode.ell <= schedule.ell_cut(i) && schedule.parity().keeps(mode.ell) {
                kept += eta[idx].norm_sqr();
            }
        }
        let rest = (total_mass - kept).max(0.0);
        let b = schedule.b(i);
        let d2 = schedule.xi_norm_sq(i) * (rest + b * b * kept);
        increments.push((i, d2.sqrt()));
        unresolved.push((i as f64, rest));
    }

    // Envelope fit: unresolved mass ≤ c/i^N over the decaying entries.
    let floor = y00_mass + 1e-300;
    let slope_unres = log_log_slope(&unresolved, floor * (1.0 + 1e-12));
    let envelope_n = slope_unres.map(|s| (-s).max(0.0)).unwrap_or(0.0);
    let mut envelope_c: f64 = 0.0;
    for &(i, rest) in &unresolved {
        let model = i.powf(-envelope_n);
        if model > 0.0 {
            envelope_c = envelope_c.max((rest - y00_mass).max(0.0) / model);
        }
    }

    let mut rows = Vec::new();
    let mut acc = 0.0;
    for &(i, d) in &increments {
        acc += d * d;
        let b = schedule.b(i);
        let bound_sq = schedule.xi_norm_sq(i)
            * (y00_mass + envelope_c * (i as f64).powf(-envelope_n) + b * b * total_mass);
        rows.push(ProbeRow {
            n: i,
            partial_norm: acc.sqrt(),
            increment: d,
            bound: bound_sq.sqrt(),
        });
    }

    // Verdict by increment decay: square-summable needs slope < −1/2.
    let pts: Vec<(f64, f64)> = increments.iter().map(|&(i, d)| (i as f64, d)).collect();
    let (verdict, increment_slope) = classify_increments(&pts);

    Ok(ProbeReport {
        rows,
        verdict,
        y00_mass,
        increment_slope,
        envelope: (envelope_c, envelope_n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::{BSpec, EllCutSpec, EpsilonSpec, ParityFilter, ScheduleSpec};
    use approx::assert_relative_eq;

    fn sharp_schedule() -> KprSchedule {
        KprSchedule::from_spec(&ScheduleSpec {
            epsilon: EpsilonSpec::Geometric { ratio: 0.5 },
            b: BSpec::Power {
                exponent: 4.0,
                scale: 0.9,
            },
            ell_cut: EllCutSpec::Linear,
            shells: 40,
            parity: ParityFilter::All,
        })
        .unwrap()
    }

    fn unit_eta(modes: &ModeSet, ell: u32, m: i32) -> Vec<Complex64> {
        let mut eta = vec![Complex64::new(0.0, 0.0); modes.len()];
        eta[modes.index_of(ell, m).unwrap()] = Complex64::new(1.0, 0.0);
        eta
    }

    #[test]
    fn y10_is_cauchy_with_sharp_ratio() {
        let s = sharp_schedule();
        let modes = ModeSet::new(4);
        let eta = unit_eta(&modes, 1, 0);
        let r = convergence_probe(&s, &modes, &eta, 5, 35).unwrap();
        assert_eq!(r.verdict, Verdict::Cauchy);
        let first = r.rows.first().unwrap().increment;
        let last = r.rows.last().unwrap().increment;
        assert!(last < 1e-3 * first, "ratio {}", last / first);
        // d_i = sqrt(ln 2)·b_i exactly.
        for row in &r.rows {
            let expect = std::f64::consts::LN_2.sqrt() * s.b(row.n);
            assert_relative_eq!(row.increment, expect, max_relative = 1e-12);
            assert!(row.increment <= row.bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn y00_divergent_with_exact_partial_norms() {
        let s = KprSchedule::default_fixture();
        let modes = ModeSet::new(2);
        let eta = unit_eta(&modes, 0, 0);
        let (m, n) = (5, 35);
        let r = convergence_probe(&s, &modes, &eta, m, n).unwrap();
        assert_eq!(r.verdict, Verdict::Divergent);
        // Partial norms² = (shells so far)·ln2 on the Y₀₀ branch.
        for (k, row) in r.rows.iter().enumerate() {
            let expect = ((k + 1) as f64) * std::f64::consts::LN_2;
            assert_relative_eq!(
                row.partial_norm * row.partial_norm,
                expect,
                max_relative = 1e-14
            );
        }
        // Growth matches sqrt(Σ ln(ε_i/ε_{i+1})) exactly here.
        let total: f64 = (m..=n).map(|i| s.xi_norm_sq(i)).sum();
        assert_relative_eq!(
            r.rows.last().unwrap().partial_norm,
            total.sqrt(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn smooth_eta_bounded_by_envelope() {
        // Mixed smooth profile: coefficients decaying superalgebraically.
        let s = KprSchedule::default_fixture();
        let modes = ModeSet::new(12);
        let mut eta = vec![Complex64::new(0.0, 0.0); modes.len()];
        for (idx, mode) in modes.modes().iter().enumerate() {
            if mode.ell > 0 && mode.m == 0 {
                eta[idx] = Complex64::new((-(mode.ell as f64)).exp(), 0.0);
            }
        }
        let r = convergence_probe(&s, &modes, &eta, 2, 30).unwrap();
        assert_eq!(r.verdict, Verdict::Cauchy);
        for row in &r.rows {
            assert!(
                row.increment <= row.bound * (1.0 + 1e-9),
                "n={}: {} > {}",
                row.n,
                row.increment,
                row.bound
            );
        }
    }

    #[test]
    fn zero_eta_trivial() {
        let s = KprSchedule::default_fixture();
        let modes = ModeSet::new(2);
        let eta = vec![Complex64::new(0.0, 0.0); modes.len()];
        let r = convergence_probe(&s, &modes, &eta, 1, 10).unwrap();
        assert_eq!(r.verdict, Verdict::Cauchy);
        assert!(r.rows.iter().all(|row| row.increment == 0.0));
    }

    #[test]
    fn range_beyond_truncation_rejected() {
        let s = KprSchedule::default_fixture();
        let modes = ModeSet::new(2);
        let eta = unit_eta(&modes, 1, 0);
        assert!(convergence_probe(&s, &modes, &eta, 5, 41).is_err());
        assert!(convergence_probe(&s, &modes, &eta, 0, 10).is_err());
    }

    #[test]
    fn csv_columns() {
        let s = KprSchedule::default_fixture();
        let modes = ModeSet::new(2);
        let eta = unit_eta(&modes, 1, 0);
        let r = convergence_probe(&s, &modes, &eta, 1, 5).unwrap();
        let csv = r.to_csv();
        assert!(csv.starts_with("n,partial_norm,increment,bound\n"));
        assert_eq!(csv.lines().count(), 6);
    }
}
