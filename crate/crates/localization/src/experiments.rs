//! Variant dichotomies (opposite cones, Γ̂ backgrounds) and the vacuum
//! obstruction experiment.

use serde::{Deserialize, Serialize};

use lab_charges::{kappa_momentum, scaling_sequence, Charge, LinearFormOptions, ScalingReport};
use lab_hilbert::TestVector;
use lab_kpr::{KprOperator, KprSchedule, ParityFilter, TSelector, Verdict};

use crate::error::Result;
use crate::intertwiner::{intertwiner_trace, ConjugationVariant, ConvergenceTrace};
use crate::u_c::UcData;

/// The variant selectors of the opposite-cone experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OppositeConeVariant {
    /// Γ̂ background with the full cone profile χ^C: the odd-ℓ part of
    /// v_n^C is acted on by the unbounded T₂ branch.
    GammaHatWithFullChi,
    /// Γ̂ background with the even part χ^{±C}: everything stays on T₁.
    GammaHatWithEvenChi,
    /// Γ background whose schedule restricts Q̃_i to a single parity class,
    /// paired with χ^{±C}: the projections retain exactly the even ℓ ≥ 2
    /// harmonics the profile carries, so the T₁ branch converges and the
    /// sector localizes in opposite cones.
    GammaWithOddEllSchedule,
    /// Negative control: Q̃_i keeping odd ℓ only cannot capture the even
    /// harmonic content of χ^{±C}; the partial norms grow like (n−m)·ln 2.
    GammaWithOddOnlyControl,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VariantVerdict {
    pub variant: OppositeConeVariant,
    pub verdict: Verdict,
    pub slope: f64,
    pub first_increment: f64,
    pub last_increment: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerdictReport {
    pub verdicts: Vec<VariantVerdict>,
}

/// Run one variant: pick the conjugation, the schedule parity and the cone
/// profile (full or even part), and classify the closed-form trace.
pub fn run_variant(
    schedule: &KprSchedule,
    uc_full: &UcData,
    uc_even: &UcData,
    variant: OppositeConeVariant,
    n_lo: usize,
    n_hi: usize,
) -> Result<(VariantVerdict, ConvergenceTrace)> {
    let (conj, sched, uc) = match variant {
        OppositeConeVariant::GammaHatWithFullChi => {
            (ConjugationVariant::GammaHat, schedule.clone(), uc_full)
        }
        OppositeConeVariant::GammaHatWithEvenChi => {
            (ConjugationVariant::GammaHat, schedule.clone(), uc_even)
        }
        OppositeConeVariant::GammaWithOddEllSchedule => (
            ConjugationVariant::Gamma,
            schedule.with_parity(ParityFilter::EvenOnly),
            uc_even,
        ),
        OppositeConeVariant::GammaWithOddOnlyControl => (
            ConjugationVariant::Gamma,
            schedule.with_parity(ParityFilter::OddOnly),
            uc_even,
        ),
    };
    let trace = intertwiner_trace(&sched, uc, conj, n_lo, n_hi)?;
    let verdict = VariantVerdict {
        variant,
        verdict: trace.verdict,
        slope: trace.slope,
        first_increment: trace.rows.first().map(|r| r.increment).unwrap_or(0.0),
        last_increment: trace.rows.last().map(|r| r.increment).unwrap_or(0.0),
    };
    Ok((verdict, trace))
}

/// The full opposite-cone experiment over all variants.
pub fn opposite_cone_experiment(
    schedule: &KprSchedule,
    uc_full: &UcData,
    uc_even: &UcData,
    n_lo: usize,
    n_hi: usize,
) -> Result<VerdictReport> {
    let mut verdicts = Vec::new();
    for variant in [
        OppositeConeVariant::GammaHatWithFullChi,
        OppositeConeVariant::GammaHatWithEvenChi,
        OppositeConeVariant::GammaWithOddEllSchedule,
        OppositeConeVariant::GammaWithOddOnlyControl,
    ] {
        let (v, _) = run_variant(schedule, uc_full, uc_even, variant, n_lo, n_hi)?;
        verdicts.push(v);
    }
    Ok(VerdictReport { verdicts })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum ObstructionVerdict {
    Obstructed,
    NotObstructed,
    SectorDistinguished,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ObstructionReport {
    /// (λ, ‖f_λ‖, l_γ(f_λ)) rows; the norm is λ-independent by unitarity.
    pub rows: Vec<(f64, f64, f64)>,
    pub verdict: ObstructionVerdict,
    pub expected_limit: f64,
    pub deviation: f64,
    pub scaling: ScalingReport,
}

/// The numerical content of the weak-limit separation: l_γ(f_λ) → q_γκ_f,
/// while ‖f_λ‖ stays constant.  With a KPR background supplied and a
/// rotation-invariant probe, Tf_λ = f_λ exactly and the same obstruction
/// persists against the infravacuum — the sectors stay distinguished.
pub fn vacuum_obstruction(
    gamma: &Charge,
    f: &TestVector,
    lambdas: &[f64],
    against: Option<&KprOperator>,
) -> Result<ObstructionReport> {
    let scaling = scaling_sequence(gamma, f, lambdas, LinearFormOptions::default())?;
    let norm = f.wf().norm();
    let rows: Vec<(f64, f64, f64)> = scaling
        .rows
        .iter()
        .map(|r| (r.lambda, norm, r.l_value))
        .collect();
    let kappa = kappa_momentum(f)?;
    let (q, _) = gamma.charge_of()?;
    let expected = q * kappa;
    let deviation = scaling.deviation;

    let verdict = if expected.abs() <= 1e-6 * kappa.abs().max(1.0) {
        ObstructionVerdict::NotObstructed
    } else if let Some(op) = against {
        // Transparency of the background on ℓ=0 probes: Tf = f bit-level.
        let (tf, _) = op.apply(TSelector::T, f.wf())?;
        let diff = tf.lin_comb(1.0, f.wf(), -1.0).norm();
        if diff == 0.0 {
            ObstructionVerdict::SectorDistinguished
        } else {
            ObstructionVerdict::Obstructed
        }
    } else {
        ObstructionVerdict::Obstructed
    };
    Ok(ObstructionReport {
        rows,
        verdict,
        expected_limit: expected,
        deviation,
        scaling,
    })
}
