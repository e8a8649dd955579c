//! Vectors of the discretized one-particle space and the basic sesquilinear
//! structure: inner product, symplectic form, the involution Γ and the
//! shell projections P_ε.

use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{HilbertError, Result};
use crate::grid::RadialGrid;
use crate::modes::ModeSet;

/// A vector v(k) = Σ_{ℓm} v_{ℓm}(ω) Y_{ℓm}(k̂) with coefficients sampled on
/// a radial grid.  Row index is the mode, column index the radial node.
#[derive(Debug, Clone)]
pub struct WaveFunction {
    grid: Arc<RadialGrid>,
    modes: Arc<ModeSet>,
    coeffs: Array2<Complex64>,
}

impl WaveFunction {
    pub fn zero(grid: Arc<RadialGrid>, modes: Arc<ModeSet>) -> Self {
        let coeffs = Array2::zeros((modes.len(), grid.len()));
        Self {
            grid,
            modes,
            coeffs,
        }
    }

    pub fn from_coeffs(
        grid: Arc<RadialGrid>,
        modes: Arc<ModeSet>,
        coeffs: Array2<Complex64>,
    ) -> Result<Self> {
        if coeffs.shape() != [modes.len(), grid.len()] {
            return Err(HilbertError::IncompatibleBasis(format!(
                "coefficient shape {:?} does not match ({}, {})",
                coeffs.shape(),
                modes.len(),
                grid.len()
            )));
        }
        if !coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            return Err(HilbertError::Domain("non-finite coefficient".into()));
        }
        Ok(Self {
            grid,
            modes,
            coeffs,
        })
    }

    /// Vector with a single populated mode.
    pub fn single_mode(
        grid: Arc<RadialGrid>,
        modes: Arc<ModeSet>,
        ell: u32,
        m: i32,
        profile: impl Fn(f64) -> Complex64,
    ) -> Result<Self> {
        let idx = modes.index_of(ell, m)?;
        let mut wf = Self::zero(grid, modes);
        let nodes: Vec<f64> = wf.grid.nodes().to_vec();
        for (j, &w) in nodes.iter().enumerate() {
            wf.coeffs[(idx, j)] = profile(w);
        }
        Ok(wf)
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn modes(&self) -> &Arc<ModeSet> {
        &self.modes
    }

    pub fn coeffs(&self) -> &Array2<Complex64> {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.coeffs
    }

    pub fn same_basis(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }

    fn check_basis(&self, other: &Self) -> Result<()> {
        if !(self.same_basis(other) && self.modes.ell_max() == other.modes.ell_max()) {
            return Err(HilbertError::IncompatibleBasis(
                "wave functions live on different grids or mode sets".into(),
            ));
        }
        Ok(())
    }

    /// ⟨u, v⟩ = Σ_{ℓm} Σ_j w_j conj(u_{ℓm}(ω_j)) v_{ℓm}(ω_j); antilinear in u.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        self.check_basis(other)?;
        let w = self.grid.weights();
        let mut acc = Complex64::new(0.0, 0.0);
        for mode in 0..self.modes.len() {
            for j in 0..self.grid.len() {
                acc += self.coeffs[(mode, j)].conj() * other.coeffs[(mode, j)] * w[j];
            }
        }
        Ok(acc)
    }

    /// σ(f, g) = −Im ⟨f, g⟩.
    pub fn symplectic_form(&self, other: &Self) -> Result<f64> {
        Ok(-self.inner_product(other)?.im)
    }

    pub fn norm_sq(&self) -> f64 {
        let w = self.grid.weights();
        let mut acc = 0.0;
        for mode in 0..self.modes.len() {
            for j in 0..self.grid.len() {
                acc += self.coeffs[(mode, j)].norm_sqr() * w[j];
            }
        }
        acc
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// The antiunitary involution (Γv)(k) = conj(v(−k)), in coefficient form
    /// (Γv)_{ℓm}(ω) = (−1)^{ℓ+m} conj(v_{ℓ,−m}(ω)).
    pub fn apply_gamma(&self) -> Self {
        let mut out = Self::zero(self.grid.clone(), self.modes.clone());
        for (idx, mode) in self.modes.modes().iter().enumerate() {
            let src = self.modes.conjugate_index(idx);
            let sign = if (mode.ell as i64 + i64::from(mode.m)).rem_euclid(2) == 0 {
                1.0
            } else {
                -1.0
            };
            for j in 0..self.grid.len() {
                out.coeffs[(idx, j)] = sign * self.coeffs[(src, j)].conj();
            }
        }
        out
    }

    /// Γ-even part (1+Γ)/2 v.
    pub fn gamma_even(&self) -> Self {
        let g = self.apply_gamma();
        self.lin_comb(0.5, &g, 0.5)
    }

    /// Γ-odd part (1−Γ)/2 v.
    pub fn gamma_odd(&self) -> Self {
        let g = self.apply_gamma();
        self.lin_comb(0.5, &g, -0.5)
    }

    /// The momentum-space conjugation Γ̂ = Γ ∘ (−1)^ℓ.
    pub fn apply_gamma_hat(&self) -> Self {
        let mut flipped = self.clone();
        for (idx, mode) in self.modes.modes().iter().enumerate() {
            if mode.ell % 2 == 1 {
                for j in 0..self.grid.len() {
                    flipped.coeffs[(idx, j)] = -flipped.coeffs[(idx, j)];
                }
            }
        }
        flipped.apply_gamma()
    }

    /// a·self + b·other (same basis required).
    pub fn lin_comb(&self, a: f64, other: &Self, b: f64) -> Self {
        debug_assert!(self.same_basis(other));
        let coeffs = &self.coeffs * Complex64::new(a, 0.0) + &other.coeffs * Complex64::new(b, 0.0);
        Self {
            grid: self.grid.clone(),
            modes: self.modes.clone(),
            coeffs,
        }
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Self {
            grid: self.grid.clone(),
            modes: self.modes.clone(),
            coeffs: &self.coeffs * a,
        }
    }

    /// Multiply every coefficient at node ω_j by `f(ω_j)`.
    pub fn apply_radial_multiplier(&self, f: impl Fn(f64) -> Complex64) -> Self {
        let mut out = self.clone();
        let nodes = self.grid.nodes();
        for mode in 0..self.modes.len() {
            for (j, &w) in nodes.iter().enumerate() {
                out.coeffs[(mode, j)] *= f(w);
            }
        }
        out
    }

    /// Shell projection P_ε: zeroes all coefficients at nodes with ω_j < ε.
    /// For ε ≤ ω_min this is the identity, for ε > ω_max the zero map.
    pub fn shell_project(&self, eps: f64) -> Self {
        let cut = self.grid.first_node_at_or_above(eps);
        let mut out = self.clone();
        for mode in 0..self.modes.len() {
            for j in 0..cut {
                out.coeffs[(mode, j)] = Complex64::new(0.0, 0.0);
            }
        }
        out
    }

    /// Restriction to a half-open frequency shell [lo, hi).
    pub fn restrict_shell(&self, lo: f64, hi: f64) -> Self {
        let mut out = Self::zero(self.grid.clone(), self.modes.clone());
        for (j, &w) in self.grid.nodes().iter().enumerate() {
            if w >= lo && w < hi {
                for mode in 0..self.modes.len() {
                    out.coeffs[(mode, j)] = self.coeffs[(mode, j)];
                }
            }
        }
        out
    }

    /// Sum of |coefficients|² weighted by quadrature, restricted to nodes below ε.
    pub fn mass_below(&self, eps: f64) -> f64 {
        let cut = self.grid.first_node_at_or_above(eps);
        let w = self.grid.weights();
        let mut acc = 0.0;
        for mode in 0..self.modes.len() {
            for j in 0..cut {
                acc += self.coeffs[(mode, j)].norm_sqr() * w[j];
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn small_basis() -> (Arc<RadialGrid>, Arc<ModeSet>) {
        (
            Arc::new(RadialGrid::log(256, 1e-3, 50.0).unwrap()),
            Arc::new(ModeSet::new(3)),
        )
    }

    fn random_wf(grid: &Arc<RadialGrid>, modes: &Arc<ModeSet>, seed: u64) -> WaveFunction {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut wf = WaveFunction::zero(grid.clone(), modes.clone());
        for mode in 0..modes.len() {
            for j in 0..grid.len() {
                wf.coeffs_mut()[(mode, j)] =
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        wf
    }

    #[test]
    fn normalized_mode_inner_product() {
        // Constant profile on mode (0,0), scaled so the total weight is 1.
        let (grid, modes) = small_basis();
        let total: f64 = grid.weights().iter().sum();
        let v = WaveFunction::single_mode(grid, modes, 0, 0, |_| {
            Complex64::new(1.0 / total.sqrt(), 0.0)
        })
        .unwrap();
        assert_relative_eq!(v.inner_product(&v).unwrap().re, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn disjoint_modes_orthogonal() {
        let (grid, modes) = small_basis();
        let u = WaveFunction::single_mode(grid.clone(), modes.clone(), 1, 0, |w| {
            Complex64::new(w.exp().recip(), 0.0)
        })
        .unwrap();
        let v = WaveFunction::single_mode(grid, modes, 2, 1, |w| Complex64::new(w, 0.2)).unwrap();
        assert_eq!(u.inner_product(&v).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn gaussian_pair_against_quadrature_oracle() {
        // ⟨e^{-ω²}, e^{-2ω²}⟩ on mode (0,0) = ∫ ω² e^{-3ω²} dω = sqrt(π/3)/12.
        let grid = Arc::new(RadialGrid::default_log());
        let modes = Arc::new(ModeSet::new(2));
        let u = WaveFunction::single_mode(grid.clone(), modes.clone(), 0, 0, |w| {
            Complex64::new((-w * w).exp(), 0.0)
        })
        .unwrap();
        let v = WaveFunction::single_mode(grid, modes, 0, 0, |w| {
            Complex64::new((-2.0 * w * w).exp(), 0.0)
        })
        .unwrap();
        let exact = (std::f64::consts::PI / 3.0).sqrt() / 12.0;
        assert_relative_eq!(u.inner_product(&v).unwrap().re, exact, max_relative = 1e-8);
    }

    #[test]
    fn conjugate_symmetry_random() {
        let (grid, modes) = small_basis();
        let u = random_wf(&grid, &modes, 7);
        let v = random_wf(&grid, &modes, 8);
        let uv = u.inner_product(&v).unwrap();
        let vu = v.inner_product(&u).unwrap();
        assert!((uv - vu.conj()).norm() < 1e-10 * uv.norm().max(1.0));
        assert!(u.norm_sq() > 0.0);
    }

    #[test]
    fn symplectic_antisymmetry() {
        let (grid, modes) = small_basis();
        let f = random_wf(&grid, &modes, 11);
        let g = random_wf(&grid, &modes, 12);
        assert_eq!(f.symplectic_form(&f).unwrap(), 0.0);
        let fg = f.symplectic_form(&g).unwrap();
        let gf = g.symplectic_form(&f).unwrap();
        assert_relative_eq!(fg, -gf, max_relative = 1e-12);
    }

    #[test]
    fn gamma_fixes_real_scalar_mode() {
        let (grid, modes) = small_basis();
        let v = WaveFunction::single_mode(grid, modes, 0, 0, |w| {
            Complex64::new((-w).exp(), 0.0)
        })
        .unwrap();
        let gv = v.apply_gamma();
        for (a, b) in v.coeffs().iter().zip(gv.coeffs().iter()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn gamma_negates_ell1_real_mode() {
        let (grid, modes) = small_basis();
        let v = WaveFunction::single_mode(grid, modes, 1, 0, |w| {
            Complex64::new((-w * w).exp(), 0.0)
        })
        .unwrap();
        let gv = v.apply_gamma();
        for (a, b) in v.coeffs().iter().zip(gv.coeffs().iter()) {
            assert!((a + b).norm() < 1e-15);
        }
    }

    #[test]
    fn gamma_involution_and_antiunitarity() {
        let (grid, modes) = small_basis();
        let u = random_wf(&grid, &modes, 21);
        let v = random_wf(&grid, &modes, 22);
        let ggu = u.apply_gamma().apply_gamma();
        for (a, b) in u.coeffs().iter().zip(ggu.coeffs().iter()) {
            assert_eq!(a, b);
        }
        let lhs = u.apply_gamma().inner_product(&v.apply_gamma()).unwrap();
        let rhs = u.inner_product(&v).unwrap().conj();
        assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
    }

    #[test]
    fn gamma_hat_is_involutive_antiunitary() {
        let (grid, modes) = small_basis();
        let u = random_wf(&grid, &modes, 31);
        let v = random_wf(&grid, &modes, 32);
        let ggu = u.apply_gamma_hat().apply_gamma_hat();
        for (a, b) in u.coeffs().iter().zip(ggu.coeffs().iter()) {
            assert!((a - b).norm() < 1e-15);
        }
        let lhs = u
            .apply_gamma_hat()
            .inner_product(&v.apply_gamma_hat())
            .unwrap();
        let rhs = u.inner_product(&v).unwrap().conj();
        assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
    }

    #[test]
    fn shell_projection_pythagoras() {
        let (grid, modes) = small_basis();
        let v = random_wf(&grid, &modes, 41);
        for eps in [1e-4, 0.05, 1.0, 100.0] {
            let p = v.shell_project(eps);
            let q = v.lin_comb(1.0, &p, -1.0);
            let total = p.norm_sq() + q.norm_sq();
            assert_relative_eq!(total, v.norm_sq(), max_relative = 1e-12);
            // Idempotence and the lattice rule P_ε P_ε' = P_max.
            let pp = p.shell_project(eps);
            for (a, b) in p.coeffs().iter().zip(pp.coeffs().iter()) {
                assert_eq!(a, b);
            }
        }
        // ε below the band: identity; above: zero.
        let id = v.shell_project(1e-6);
        for (a, b) in v.coeffs().iter().zip(id.coeffs().iter()) {
            assert_eq!(a, b);
        }
        assert_eq!(v.shell_project(1e3).norm_sq(), 0.0);
    }

    #[test]
    fn shell_projection_commutes_with_gamma() {
        let (grid, modes) = small_basis();
        let v = random_wf(&grid, &modes, 51);
        let a = v.shell_project(0.1).apply_gamma();
        let b = v.apply_gamma().shell_project(0.1);
        for (x, y) in a.coeffs().iter().zip(b.coeffs().iter()) {
            assert_eq!(x, y);
        }
    }

    #[test]
    fn incompatible_basis_rejected() {
        let (grid, modes) = small_basis();
        let other_grid = Arc::new(RadialGrid::log(128, 1e-3, 50.0).unwrap());
        let u = WaveFunction::zero(grid, modes.clone());
        let v = WaveFunction::zero(other_grid, modes);
        assert!(u.inner_product(&v).is_err());
    }
}
