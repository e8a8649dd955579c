//! The symplectic maps T₁, T₂, T and T̂ induced by a schedule on a grid.
//!
//! On the discrete space each Q_i is the exact orthogonal projection onto
//! span{ξ} ⊗ (kept Y_{ℓm}), with ξ_j = ω_j^{−3/2} on the shell nodes and the
//! grid quadrature supplying the norm.  This makes Q_i² = Q_i, T₁T₂ = 1 and
//! the symplectic identity hold to rounding error on the truncated space,
//! while the closed-form shell integrals ln(ε_i/ε_{i+1}) remain the
//! reference values for everything analytic.

use std::ops::Range;
use std::sync::Arc;

use num_complex::Complex64;

use lab_hilbert::{ModeSet, RadialGrid, WaveFunction};

use crate::error::{KprError, Result};
use crate::schedule::KprSchedule;

/// Selector for the operator variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TSelector {
    T1,
    T2,
    T,
    THat,
}

/// Grid data of one shell [ε_{i+1}, ε_i) that actually contains nodes.
#[derive(Debug, Clone)]
struct ShellBlock {
    /// Shell index i ∈ 1..=N.
    index: usize,
    nodes: Range<usize>,
    /// ξ_j = ω_j^{−3/2} on the shell nodes.
    xi: Vec<f64>,
    /// ⟨ξ|ξ⟩ under the grid quadrature.
    xi_norm_grid: f64,
    /// Mode-set indices retained by Q̃_i (0 < ℓ ≤ ell_cut(i), parity kept).
    kept_modes: Vec<usize>,
}

/// Outcome flag attached to operator applications: nonzero input mass below
/// the truncation boundary ε_{N+1}, where the operator acts as the identity.
#[derive(Debug, Clone, Default)]
pub struct TruncationFlag {
    pub mass_below_truncation: f64,
}

impl TruncationFlag {
    pub fn flagged(&self) -> bool {
        self.mass_below_truncation > 0.0
    }
}

#[derive(Debug, Clone)]
pub struct KprOperator {
    schedule: KprSchedule,
    grid: Arc<RadialGrid>,
    modes: Arc<ModeSet>,
    blocks: Vec<ShellBlock>,
    /// ⟨ξ_i|ξ_i⟩ in closed form, ln(ε_i/ε_{i+1}), for i = 1..=N.
    xi_norms_closed: Vec<f64>,
}

impl KprOperator {
    pub fn new(schedule: KprSchedule, grid: Arc<RadialGrid>, modes: Arc<ModeSet>) -> Result<Self> {
        let n = schedule.shells();
        let mut blocks = Vec::new();
        let nodes = grid.nodes();
        let weights = grid.weights();
        for i in 1..=n {
            let hi = schedule.epsilon(i);
            let lo = schedule.epsilon(i + 1);
            let start = nodes.partition_point(|&w| w < lo);
            let end = nodes.partition_point(|&w| w < hi);
            if start >= end {
                continue;
            }
            let xi: Vec<f64> = nodes[start..end].iter().map(|&w| w.powf(-1.5)).collect();
            let xi_norm_grid: f64 = (start..end)
                .zip(xi.iter())
                .map(|(j, &x)| weights[j] * x * x)
                .sum();
            let kept_modes: Vec<usize> = modes
                .modes()
                .iter()
                .enumerate()
                .filter(|(_, m)| {
                    m.ell <= schedule.ell_cut(i)
                        && schedule.parity().keeps(m.ell)
                })
                .map(|(idx, _)| idx)
                .collect();
            if kept_modes.is_empty() {
                continue;
            }
            blocks.push(ShellBlock {
                index: i,
                nodes: start..end,
                xi,
                xi_norm_grid,
                kept_modes,
            });
        }
        let xi_norms_closed = (1..=n).map(|i| schedule.xi_norm_sq(i)).collect();
        Ok(Self {
            schedule,
            grid,
            modes,
            blocks,
            xi_norms_closed,
        })
    }

    pub fn schedule(&self) -> &KprSchedule {
        &self.schedule
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn modes(&self) -> &Arc<ModeSet> {
        &self.modes
    }

    /// Closed-form shell norms ln(ε_i/ε_{i+1}).
    pub fn xi_norms_closed(&self) -> &[f64] {
        &self.xi_norms_closed
    }

    /// Grid-quadrature shell norms for shells that contain nodes, as
    /// (shell index, Σ w_j ω_j^{−3} over the shell).
    pub fn xi_norms_grid(&self) -> Vec<(usize, f64)> {
        self.blocks
            .iter()
            .map(|b| (b.index, b.xi_norm_grid))
            .collect()
    }

    fn check_basis(&self, v: &WaveFunction) -> Result<()> {
        if v.grid().len() != self.grid.len() || v.modes().len() != self.modes.len() {
            return Err(KprError::Domain(
                "wave function does not match the operator basis".into(),
            ));
        }
        Ok(())
    }

    /// ⟨ξ_i, row⟩ / ‖ξ_i‖² over a shell, then add (factor)·(that)·ξ to out.
    fn add_block_correction(
        &self,
        block: &ShellBlock,
        factor: f64,
        row_of: impl Fn(usize, usize) -> Complex64,
        out: &mut WaveFunction,
    ) {
        let weights = self.grid.weights();
        for &mode in &block.kept_modes {
            let mut c = Complex64::new(0.0, 0.0);
            for (off, j) in block.nodes.clone().enumerate() {
                c += weights[j] * block.xi[off] * row_of(mode, j);
            }
            let amp = factor * c / block.xi_norm_grid;
            for (off, j) in block.nodes.clone().enumerate() {
                out.coeffs_mut()[(mode, j)] += amp * block.xi[off];
            }
        }
    }

    /// Apply one of T₁, T₂, T, T̂.  The identity part is a bitwise copy, so
    /// vectors with no component in any Q_i (in particular all ℓ=0 vectors)
    /// pass through unchanged.
    pub fn apply(&self, which: TSelector, v: &WaveFunction) -> Result<(WaveFunction, TruncationFlag)> {
        self.check_basis(v)?;
        let flag = TruncationFlag {
            mass_below_truncation: v.mass_below(self.schedule.epsilon(self.schedule.shells() + 1)),
        };
        let mut out = v.clone();
        match which {
            TSelector::T1 | TSelector::T2 => {
                for block in &self.blocks {
                    let b = self.schedule.b(block.index);
                    let factor = match which {
                        TSelector::T1 => b - 1.0,
                        _ => 1.0 / b - 1.0,
                    };
                    self.add_block_correction(
                        block,
                        factor,
                        |mode, j| v.coeffs()[(mode, j)],
                        &mut out,
                    );
                }
            }
            TSelector::T | TSelector::THat => {
                // T = 1 + Σ_i (1/b_i − 1) Q_i (1+Γ)/2 + (b_i − 1) Q_i (1−Γ)/2,
                // with Γ̂ in place of Γ for T̂.
                let conj_part = |mode: usize, j: usize| -> Complex64 {
                    let m = self.modes.modes()[mode];
                    let src = self.modes.conjugate_index(mode);
                    let sign = if (m.ell as i64 + i64::from(m.m)).rem_euclid(2) == 0 {
                        1.0
                    } else {
                        -1.0
                    };
                    let gamma = sign * v.coeffs()[(src, j)].conj();
                    if which == TSelector::THat && m.ell % 2 == 1 {
                        -gamma
                    } else {
                        gamma
                    }
                };
                for block in &self.blocks {
                    let b = self.schedule.b(block.index);
                    let even_factor = 1.0 / b - 1.0;
                    let odd_factor = b - 1.0;
                    self.add_block_correction(
                        block,
                        even_factor,
                        |mode, j| 0.5 * (v.coeffs()[(mode, j)] + conj_part(mode, j)),
                        &mut out,
                    );
                    self.add_block_correction(
                        block,
                        odd_factor,
                        |mode, j| 0.5 * (v.coeffs()[(mode, j)] - conj_part(mode, j)),
                        &mut out,
                    );
                }
            }
        }
        Ok((out, flag))
    }

    /// The regularized energy ω_r = ω(1−P₀) + ε₁P₀ raised to `power`,
    /// applied as a radial multiplier.
    pub fn omega_r(&self, v: &WaveFunction, power: f64) -> Result<WaveFunction> {
        self.check_basis(v)?;
        let eps1 = self.schedule.epsilon(1);
        Ok(v.apply_radial_multiplier(|w| Complex64::new(w.min(eps1).powf(power), 0.0)))
    }

    /// Domain diagnostic for T₂: the ω_r^{−1/2}-weighted norm of v.  Finite
    /// on the truncated grid always; reported to preserve the analytic
    /// distinction D_{T₂} = ω_r^{1/2}K.
    pub fn t2_domain_weight(&self, v: &WaveFunction) -> Result<f64> {
        Ok(self.omega_r(v, -0.5)?.norm())
    }

    /// Numerically estimated operator norm of (T₂−1)ω_r^{1/2} by power
    /// iteration on A*A, together with the analytic bound
    /// sqrt(Σ (1/b_i − 1)² rkQ_i ε_i).
    pub fn t2_bound(&self, iterations: usize) -> (f64, f64) {
        let analytic: f64 = (1..=self.schedule.shells())
            .map(|i| {
                let f = 1.0 / self.schedule.b(i) - 1.0;
                f * f * self.schedule.rank(i) as f64 * self.schedule.epsilon(i)
            })
            .sum::<f64>()
            .sqrt();

        // A v = Σ (1/b_i−1) Q_i ω_r^{1/2} v;  A* w = ω_r^{1/2} Σ (1/b_i−1) Q_i w.
        let apply_a = |v: &WaveFunction| -> WaveFunction {
            let w = self.omega_r(v, 0.5).expect("basis checked");
            let mut out = WaveFunction::zero(self.grid.clone(), self.modes.clone());
            for block in &self.blocks {
                let f = 1.0 / self.schedule.b(block.index) - 1.0;
                self.add_block_correction(block, f, |m, j| w.coeffs()[(m, j)], &mut out);
            }
            out
        };
        let apply_a_star = |v: &WaveFunction| -> WaveFunction {
            let mut out = WaveFunction::zero(self.grid.clone(), self.modes.clone());
            for block in &self.blocks {
                let f = 1.0 / self.schedule.b(block.index) - 1.0;
                self.add_block_correction(block, f, |m, j| v.coeffs()[(m, j)], &mut out);
            }
            self.omega_r(&out, 0.5).expect("basis checked")
        };

        // Deterministic start vector spread over every block.
        let mut v = WaveFunction::zero(self.grid.clone(), self.modes.clone());
        for block in &self.blocks {
            for &mode in &block.kept_modes {
                for (off, j) in block.nodes.clone().enumerate() {
                    v.coeffs_mut()[(mode, j)] =
                        Complex64::new(block.xi[off] * (1.0 + 0.1 * (mode as f64).sin()), 0.0);
                }
            }
        }
        let mut norm_est = 0.0;
        if v.norm() > 0.0 {
            v = v.scale(Complex64::new(1.0 / v.norm(), 0.0));
            for _ in 0..iterations {
                let av = apply_a(&v);
                let aav = apply_a_star(&av);
                let n = aav.norm();
                if n == 0.0 {
                    norm_est = 0.0;
                    break;
                }
                norm_est = av.norm();
                v = aav.scale(Complex64::new(1.0 / n, 0.0));
            }
        }
        (norm_est, analytic)
    }

    /// Exact largest singular value of (T₂−1)ω_r^{1/2} on the grid: the
    /// rank-one blocks give (1/b_i−1)·‖ω_r^{1/2}ξ_i‖/‖ξ_i‖ per shell.
    pub fn t2_block_norm_exact(&self) -> f64 {
        let weights = self.grid.weights();
        let nodes = self.grid.nodes();
        let eps1 = self.schedule.epsilon(1);
        self.blocks
            .iter()
            .map(|b| {
                let num: f64 = b
                    .nodes
                    .clone()
                    .zip(b.xi.iter())
                    .map(|(j, &x)| weights[j] * nodes[j].min(eps1) * x * x)
                    .sum();
                (1.0 / self.schedule.b(b.index) - 1.0) * (num / b.xi_norm_grid).sqrt()
            })
            .fold(0.0, f64::max)
    }
}
