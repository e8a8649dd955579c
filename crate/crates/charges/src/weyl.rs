//! Expectation functionals of Weyl elements in the vacuum, charged and
//! quasifree states: ω_T(W(f)) = e^{−¼‖Tf‖²}, with e^{il_γ(f)} phases for
//! charged sectors and the dilation-limit functional e^{iq_γκ_f}e^{−¼‖f‖²}.

use std::sync::Arc;

use num_complex::Complex64;

use lab_hilbert::{TestVector, WaveFunction};
use lab_kpr::{KprOperator, TSelector};

use crate::charge::Charge;
use crate::error::{ChargeError, Result};
use crate::kappa::kappa_momentum;
use crate::linear_form::{linear_form, LinearFormOptions};

/// Which quasifree state the expectation is taken in.
#[derive(Clone)]
pub enum QuasifreeStateLabel {
    Vacuum,
    Kpr(Arc<KprOperator>),
}

impl std::fmt::Debug for QuasifreeStateLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QuasifreeStateLabel::Vacuum => write!(f, "Vacuum"),
            QuasifreeStateLabel::Kpr(op) => {
                write!(f, "Kpr(N={})", op.schedule().shells())
            }
        }
    }
}

/// A Weyl element label W(f) with an attached phase of unit modulus.
#[derive(Debug, Clone)]
pub struct WeylElement {
    pub vector: WaveFunction,
    pub phase: Complex64,
}

impl WeylElement {
    pub fn new(vector: WaveFunction, phase: Complex64) -> Result<Self> {
        if (phase.norm() - 1.0).abs() > 1e-12 {
            return Err(ChargeError::Domain(format!(
                "Weyl phase must have unit modulus, got |z| = {}",
                phase.norm()
            )));
        }
        Ok(Self { vector, phase })
    }

    /// Composition phase of W(u)W(v) = e^{−(i/2)Im⟨u,v⟩}W(u+v).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let im = self.vector.inner_product(&other.vector)?.im;
        let phase =
            self.phase * other.phase * Complex64::from_polar(1.0, -0.5 * im);
        Ok(Self {
            vector: self.vector.lin_comb(1.0, &other.vector, 1.0),
            phase,
        })
    }
}

/// ⟨state| γ(W(f)) |state⟩: e^{−¼‖f‖²} (vacuum) or e^{−¼‖Tf‖²} (KPR), times
/// e^{il_γ(f)} when a charge automorphism acts.
pub fn weyl_expectation(
    state: &QuasifreeStateLabel,
    f: &TestVector,
    gamma: Option<&Charge>,
) -> Result<Complex64> {
    let norm_sq = match state {
        QuasifreeStateLabel::Vacuum => f.wf().norm_sq(),
        QuasifreeStateLabel::Kpr(op) => {
            let (tf, _) = op.apply(TSelector::T, f.wf())?;
            tf.norm_sq()
        }
    };
    let modulus = (-0.25 * norm_sq).exp();
    let phase = match gamma {
        Some(g) => {
            let l = linear_form(g, f, LinearFormOptions::default())?;
            Complex64::from_polar(1.0, l)
        }
        None => Complex64::new(1.0, 0.0),
    };
    Ok(modulus * phase)
}

/// The λ→∞ weak-limit functional e^{iq_γκ_f}·e^{−¼‖f‖²}.
pub fn weyl_dilation_limit(gamma: &Charge, f: &TestVector) -> Result<Complex64> {
    let (q, _) = gamma.charge_of()?;
    let kappa = kappa_momentum(f)?;
    Ok(Complex64::from_polar(1.0, q * kappa) * (-0.25 * f.wf().norm_sq()).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{radial_test_vector, Slot};
    use crate::profiles::ProfileSpec;
    use approx::assert_relative_eq;
    use lab_hilbert::{ModeSet, RadialGrid};
    use lab_kpr::KprSchedule;
    use ndarray::Array2;

    fn basis() -> (Arc<RadialGrid>, Arc<ModeSet>) {
        (
            Arc::new(RadialGrid::default_log()),
            Arc::new(ModeSet::new(2)),
        )
    }

    fn kpr_state(grid: &Arc<RadialGrid>, modes: &Arc<ModeSet>) -> QuasifreeStateLabel {
        QuasifreeStateLabel::Kpr(Arc::new(
            KprOperator::new(KprSchedule::default_fixture(), grid.clone(), modes.clone()).unwrap(),
        ))
    }

    #[test]
    fn zero_vector_expectation_is_one() {
        let (grid, modes) = basis();
        let f = TestVectorZero::build(&grid, &modes);
        for state in [QuasifreeStateLabel::Vacuum, kpr_state(&grid, &modes)] {
            let val = weyl_expectation(&state, &f, None).unwrap();
            assert_eq!(val, Complex64::new(1.0, 0.0));
        }
    }

    struct TestVectorZero;
    impl TestVectorZero {
        fn build(grid: &Arc<RadialGrid>, modes: &Arc<ModeSet>) -> TestVector {
            let shape = [modes.len(), grid.len()];
            TestVector::new(
                grid.clone(),
                modes.clone(),
                Array2::zeros(shape),
                Array2::zeros(shape),
                None,
            )
            .unwrap()
        }
    }

    #[test]
    fn vacuum_plugin_value() {
        // ‖f‖² = 4 ⇒ e^{−1}: scale a Gaussian test vector to norm 2.
        let (grid, modes) = basis();
        let f = radial_test_vector(
            grid.clone(),
            modes.clone(),
            &ProfileSpec::Gaussian {
                amplitude: 1.0,
                width: 1.0,
            },
            Slot::H,
        )
        .unwrap();
        let scale = 2.0 / f.wf().norm();
        let h = f.h_part() * Complex64::new(scale, 0.0);
        let g = f.g_part().clone();
        let f2 = TestVector::new(grid, modes, h, g, None).unwrap();
        let val = weyl_expectation(&QuasifreeStateLabel::Vacuum, &f2, None).unwrap();
        assert_relative_eq!(val.re, (-1.0f64).exp(), max_relative = 1e-10);
        assert_eq!(val.im, 0.0);
    }

    #[test]
    fn kpr_equals_vacuum_on_rotation_invariant_vectors() {
        let (grid, modes) = basis();
        let f = radial_test_vector(
            grid.clone(),
            modes.clone(),
            &ProfileSpec::Gaussian {
                amplitude: 0.7,
                width: 1.3,
            },
            Slot::H,
        )
        .unwrap();
        let vac = weyl_expectation(&QuasifreeStateLabel::Vacuum, &f, None).unwrap();
        let kpr = weyl_expectation(&kpr_state(&grid, &modes), &f, None).unwrap();
        assert_eq!(vac, kpr); // Tf = f bit-level on ℓ=0 vectors
    }

    #[test]
    fn moduli_in_unit_interval() {
        let (grid, modes) = basis();
        let state = kpr_state(&grid, &modes);
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
        let val = weyl_expectation(&state, &f, None).unwrap();
        assert!(val.norm() > 0.0 && val.norm() < 1.0);
    }

    #[test]
    fn weyl_composition_phase() {
        let (grid, modes) = basis();
        let f = radial_test_vector(
            grid.clone(),
            modes.clone(),
            &ProfileSpec::Gaussian {
                amplitude: 1.0,
                width: 1.0,
            },
            Slot::H,
        )
        .unwrap();
        let g = radial_test_vector(
            grid,
            modes,
            &ProfileSpec::Gaussian {
                amplitude: 0.5,
                width: 0.7,
            },
            Slot::G,
        )
        .unwrap();
        let wu = WeylElement::new(f.wf().clone(), Complex64::new(1.0, 0.0)).unwrap();
        let wv = WeylElement::new(g.wf().clone(), Complex64::new(1.0, 0.0)).unwrap();
        let prod = wu.compose(&wv).unwrap();
        let expected_phase =
            Complex64::from_polar(1.0, -0.5 * f.wf().inner_product(g.wf()).unwrap().im);
        assert!((prod.phase - expected_phase).norm() < 1e-12);
        assert!(WeylElement::new(f.wf().clone(), Complex64::new(0.5, 0.0)).is_err());
    }
}
