//! Test vectors f = ω^{−1/2} ĥ + i ω^{+1/2} ĝ certifying membership in the
//! symplectic space of smeared field/momentum configurations.

use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{HilbertError, Result};
use crate::grid::RadialGrid;
use crate::modes::ModeSet;
use crate::wavefunction::WaveFunction;

/// Optional locality metadata: where the generating functions h, g live in
/// position space, with the certified mass fraction outside that region.
#[derive(Debug, Clone)]
pub struct LocalityTag {
    pub description: String,
    /// Fraction of |h|, |g| mass inside the excluded region (certified small).
    pub leaked_mass: f64,
}

/// A wave function together with real mode arrays ĥ, ĝ realizing the
/// decomposition f = ω^{−1/2} ĥ + i ω^{+1/2} ĝ.  "Real" means Γ-real:
/// ĥ_{ℓm}(ω) = (−1)^{ℓ+m} conj(ĥ_{ℓ,−m}(ω)), the transform of a real
/// position-space function.
#[derive(Debug, Clone)]
pub struct TestVector {
    wf: WaveFunction,
    h_part: Array2<Complex64>,
    g_part: Array2<Complex64>,
    pub locality: Option<LocalityTag>,
}

/// Worst-case violation of Γ-reality over a mode array.
fn gamma_reality_defect(modes: &ModeSet, arr: &Array2<Complex64>) -> f64 {
    let mut worst = 0.0_f64;
    for (idx, mode) in modes.modes().iter().enumerate() {
        let conj_idx = modes.conjugate_index(idx);
        let sign = if (mode.ell as i64 + i64::from(mode.m)).rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        };
        for j in 0..arr.shape()[1] {
            let expect = sign * arr[(conj_idx, j)].conj();
            worst = worst.max((arr[(idx, j)] - expect).norm());
        }
    }
    worst
}

impl TestVector {
    /// Assemble from mode arrays for ĥ and ĝ (either may be zero).
    pub fn new(
        grid: Arc<RadialGrid>,
        modes: Arc<ModeSet>,
        h_part: Array2<Complex64>,
        g_part: Array2<Complex64>,
        locality: Option<LocalityTag>,
    ) -> Result<Self> {
        let shape = [modes.len(), grid.len()];
        if h_part.shape() != shape || g_part.shape() != shape {
            return Err(HilbertError::IncompatibleBasis(
                "h/g mode arrays do not match the basis".into(),
            ));
        }
        let scale = h_part
            .iter()
            .chain(g_part.iter())
            .map(|c| c.norm())
            .fold(0.0, f64::max)
            .max(1e-300);
        let defect =
            gamma_reality_defect(&modes, &h_part).max(gamma_reality_defect(&modes, &g_part));
        if defect > 1e-10 * scale {
            return Err(HilbertError::Domain(format!(
                "h/g arrays violate Γ-reality by {defect:.3e} (relative to {scale:.3e})"
            )));
        }
        let mut coeffs = Array2::zeros(shape);
        for mode in 0..modes.len() {
            for (j, &w) in grid.nodes().iter().enumerate() {
                coeffs[(mode, j)] = h_part[(mode, j)] / w.sqrt()
                    + Complex64::new(0.0, 1.0) * g_part[(mode, j)] * w.sqrt();
            }
        }
        let wf = WaveFunction::from_coeffs(grid, modes, coeffs)?;
        Ok(Self {
            wf,
            h_part,
            g_part,
            locality,
        })
    }

    pub fn wf(&self) -> &WaveFunction {
        &self.wf
    }

    pub fn h_part(&self) -> &Array2<Complex64> {
        &self.h_part
    }

    pub fn g_part(&self) -> &Array2<Complex64> {
        &self.g_part
    }

    /// Largest deviation between the stored wave function and the one
    /// rebuilt from (ĥ, ĝ); zero by construction, re-checked for loaded data.
    pub fn reconstruction_defect(&self) -> f64 {
        let grid = self.wf.grid();
        let mut worst = 0.0_f64;
        let mut scale = 0.0_f64;
        for mode in 0..self.wf.modes().len() {
            for (j, &w) in grid.nodes().iter().enumerate() {
                let rebuilt = self.h_part[(mode, j)] / w.sqrt()
                    + Complex64::new(0.0, 1.0) * self.g_part[(mode, j)] * w.sqrt();
                worst = worst.max((rebuilt - self.wf.coeffs()[(mode, j)]).norm());
                scale = scale.max(rebuilt.norm());
            }
        }
        if scale > 0.0 {
            worst / scale
        } else {
            0.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_and_reconstruct() {
        let grid = Arc::new(RadialGrid::log(128, 1e-2, 10.0).unwrap());
        let modes = Arc::new(ModeSet::new(1));
        let shape = [modes.len(), grid.len()];
        let mut h = Array2::<Complex64>::zeros(shape);
        // Populate mode (0,0) with a real profile: Γ-reality is automatic.
        let idx = modes.index_of(0, 0).unwrap();
        for (j, &w) in grid.nodes().iter().enumerate() {
            h[(idx, j)] = Complex64::new((-w).exp(), 0.0);
        }
        let g = Array2::<Complex64>::zeros(shape);
        let tv = TestVector::new(grid, modes, h, g, None).unwrap();
        assert!(tv.reconstruction_defect() <= 1e-12);
    }

    #[test]
    fn gamma_reality_enforced() {
        let grid = Arc::new(RadialGrid::log(64, 1e-2, 10.0).unwrap());
        let modes = Arc::new(ModeSet::new(1));
        let shape = [modes.len(), grid.len()];
        let mut h = Array2::<Complex64>::zeros(shape);
        // An (ℓ=1, m=1) entry without its conjugate partner violates Γ-reality.
        let idx = modes.index_of(1, 1).unwrap();
        h[(idx, 0)] = Complex64::new(1.0, 0.5);
        let g = Array2::<Complex64>::zeros(shape);
        assert!(TestVector::new(grid, modes, h, g, None).is_err());
    }

    #[test]
    fn conjugate_pair_accepted() {
        let grid = Arc::new(RadialGrid::log(64, 1e-2, 10.0).unwrap());
        let modes = Arc::new(ModeSet::new(1));
        let shape = [modes.len(), grid.len()];
        let mut h = Array2::<Complex64>::zeros(shape);
        let idx_p = modes.index_of(1, 1).unwrap();
        let idx_m = modes.index_of(1, -1).unwrap();
        for j in 0..grid.len() {
            let c = Complex64::new(0.3, -0.4);
            h[(idx_p, j)] = c;
            h[(idx_m, j)] = c.conj(); // (−1)^{1+(−1)} = +1
        }
        let g = Array2::<Complex64>::zeros(shape);
        let tv = TestVector::new(grid, modes, h, g, None).unwrap();
        // The wave function built from a Γ-real ĥ is Γ-odd? No: ω^{−1/2}ĥ is Γ-even.
        let wf = tv.wf();
        let even = wf.gamma_even();
        let diff = wf.lin_comb(1.0, &even, -1.0).norm();
        assert!(diff <= 1e-12 * wf.norm().max(1e-300));
    }
}
