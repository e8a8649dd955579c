//! Radial frequency grids carrying the measure ω²dω.
//!
//! The default grid is log-spaced so that dilations f(ω) ↦ f(λω) act as
//! index shifts plus interpolation.  Quadrature weights are built from a
//! composite Simpson rule in s = ln ω applied to the transformed integrand
//! e^{3s} g(e^s), which is fourth-order accurate and keeps the plain
//! ω²-sum rule below 1e-9 relative on the default 2048-node grid.

use serde::{Deserialize, Serialize};

use crate::error::{HilbertError, Result};

/// Spacing law of a radial grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    Log,
    Linear,
}

/// A strictly increasing grid of radial frequencies ω_j > 0 together with
/// quadrature weights w_j approximating ∫ ω² dω.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    kind: GridKind,
}

/// Composite Simpson weights on a uniform grid of `n` points with spacing `h`.
///
/// For an even point count the last three intervals are handled by the 3/8
/// rule, keeping the composite rule fourth-order throughout.
fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    assert!(n >= 4, "simpson_weights needs at least 4 points");
    let mut w = vec![0.0; n];
    // Number of points covered by the plain Simpson part.
    let simpson_n = if n % 2 == 1 { n } else { n - 3 };
    let mut i = 0;
    while i + 2 < simpson_n + usize::from(n % 2 == 0) {
        // Panel over [i, i+2].
        w[i] += h / 3.0;
        w[i + 1] += 4.0 * h / 3.0;
        w[i + 2] += h / 3.0;
        i += 2;
    }
    if n % 2 == 0 {
        // 3/8 rule over the final three intervals.
        let j = n - 4;
        w[j] += 3.0 * h / 8.0;
        w[j + 1] += 9.0 * h / 8.0;
        w[j + 2] += 9.0 * h / 8.0;
        w[j + 3] += 3.0 * h / 8.0;
    }
    w
}

impl RadialGrid {
    /// Log-spaced grid with `count` nodes spanning [min, max], endpoints included.
    pub fn log(count: usize, min: f64, max: f64) -> Result<Self> {
        if !(min > 0.0 && max > min) {
            return Err(HilbertError::InvalidGrid(format!(
                "need 0 < min < max, got [{min}, {max}]"
            )));
        }
        if count < 8 {
            return Err(HilbertError::InvalidGrid(format!(
                "need at least 8 nodes, got {count}"
            )));
        }
        let ds = (max / min).ln() / (count - 1) as f64;
        let s0 = min.ln();
        let nodes: Vec<f64> = (0..count).map(|j| (s0 + j as f64 * ds).exp()).collect();
        // ∫ ω² g(ω) dω = ∫ e^{3s} g(e^s) ds, Simpson in s.
        let sw = simpson_weights(count, ds);
        let weights: Vec<f64> = nodes
            .iter()
            .zip(sw.iter())
            .map(|(&w_node, &sw)| sw * w_node.powi(3))
            .collect();
        Ok(Self {
            nodes,
            weights,
            kind: GridKind::Log,
        })
    }

    /// Linearly spaced grid with `count` nodes spanning [min, max].
    pub fn linear(count: usize, min: f64, max: f64) -> Result<Self> {
        if !(min > 0.0 && max > min) {
            return Err(HilbertError::InvalidGrid(format!(
                "need 0 < min < max, got [{min}, {max}]"
            )));
        }
        if count < 8 {
            return Err(HilbertError::InvalidGrid(format!(
                "need at least 8 nodes, got {count}"
            )));
        }
        let h = (max - min) / (count - 1) as f64;
        let nodes: Vec<f64> = (0..count).map(|j| min + j as f64 * h).collect();
        let sw = simpson_weights(count, h);
        let weights: Vec<f64> = nodes
            .iter()
            .zip(sw.iter())
            .map(|(&w_node, &sw)| sw * w_node * w_node)
            .collect();
        Ok(Self {
            nodes,
            weights,
            kind: GridKind::Linear,
        })
    }

    /// Default laboratory grid: 2048 log-spaced nodes on ω ∈ [1e-4, 1e2].
    pub fn default_log() -> Self {
        Self::log(2048, 1e-4, 1e2).expect("default grid parameters are valid")
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn min(&self) -> f64 {
        self.nodes[0]
    }

    pub fn max(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    /// Constant log-spacing Δs = ln(ω_{j+1}/ω_j); only defined for log grids.
    pub fn log_step(&self) -> Option<f64> {
        match self.kind {
            GridKind::Log => Some((self.nodes[1] / self.nodes[0]).ln()),
            GridKind::Linear => None,
        }
    }

    /// ∫ ω² dω over the grid band, in closed form.
    pub fn band_volume(&self) -> f64 {
        (self.max().powi(3) - self.min().powi(3)) / 3.0
    }

    /// Quadrature of a scalar function sampled on the nodes against ω²dω.
    pub fn integrate(&self, samples: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(samples.iter())
            .map(|(w, f)| w * f)
            .sum()
    }

    /// Index of the first node with ω_j >= eps (nodes.len() if none).
    pub fn first_node_at_or_above(&self, eps: f64) -> usize {
        self.nodes.partition_point(|&w| w < eps)
    }

    /// Grid invariants from the construction contract; returns a list of
    /// violations (empty if the grid is healthy).
    pub fn check_invariants(&self) -> Vec<String> {
        let mut bad = Vec::new();
        if !self.nodes.windows(2).all(|p| p[1] > p[0] && p[0] > 0.0) {
            bad.push("nodes not strictly increasing and positive".into());
        }
        if !self.weights.iter().all(|&w| w > 0.0) {
            bad.push("weights not strictly positive".into());
        }
        if self.kind == GridKind::Log {
            let r0 = self.nodes[1] / self.nodes[0];
            let worst = self
                .nodes
                .windows(2)
                .map(|p| ((p[1] / p[0]) / r0 - 1.0).abs())
                .fold(0.0, f64::max);
            if worst > 1e-12 {
                bad.push(format!("node ratio drift {worst:.2e} exceeds 1e-12"));
            }
        }
        let sum: f64 = self.weights.iter().sum();
        let exact = self.band_volume();
        let rel = ((sum - exact) / exact).abs();
        if rel > 1e-8 {
            bad.push(format!("ω² sum rule off by {rel:.2e} (tolerance 1e-8)"));
        }
        bad
    }
}

/// A uniform position-space radial grid on (0, r_max] used by the radial
/// Fourier transforms; carries r²dr Simpson weights.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl PositionGrid {
    pub fn uniform(count: usize, r_max: f64) -> Result<Self> {
        if !(r_max > 0.0) {
            return Err(HilbertError::InvalidGrid(format!("r_max = {r_max}")));
        }
        if count < 8 {
            return Err(HilbertError::InvalidGrid(format!(
                "need at least 8 nodes, got {count}"
            )));
        }
        let h = r_max / count as f64;
        // Offset from zero so 1/r-type factors stay finite.
        let nodes: Vec<f64> = (0..count).map(|j| (j as f64 + 1.0) * h).collect();
        let sw = simpson_weights(count, h);
        let mut weights: Vec<f64> = nodes
            .iter()
            .zip(sw.iter())
            .map(|(&r, &sw)| sw * r * r)
            .collect();
        // Close the [0, h] gap: ∫_0^h r² f dr ≈ f(h)·h³/3 for bounded f.
        weights[0] += h * h * h / 3.0;
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn r_max(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    /// ∫ r² f(r) dr by quadrature.
    pub fn integrate(&self, samples: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(samples.iter())
            .map(|(w, f)| w * f)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn log_grid_sum_rule() {
        let g = RadialGrid::default_log();
        let sum: f64 = g.weights().iter().sum();
        assert_relative_eq!(sum, g.band_volume(), max_relative = 1e-8);
        assert!(g.check_invariants().is_empty());
    }

    #[test]
    fn log_grid_ratio_constant() {
        let g = RadialGrid::log(512, 1e-3, 10.0).unwrap();
        let r0 = g.nodes()[1] / g.nodes()[0];
        for p in g.nodes().windows(2) {
            assert_relative_eq!(p[1] / p[0], r0, max_relative = 1e-12);
        }
    }

    #[test]
    fn gaussian_moment_quadrature() {
        // ∫_0^∞ ω² e^{-3ω²} dω = sqrt(π/3)/12
        let g = RadialGrid::default_log();
        let samples: Vec<f64> = g.nodes().iter().map(|&w| (-3.0 * w * w).exp()).collect();
        let exact = (std::f64::consts::PI / 3.0).sqrt() / 12.0;
        assert_relative_eq!(g.integrate(&samples), exact, max_relative = 1e-8);
    }

    #[test]
    fn linear_grid_polynomial() {
        // ∫_1^2 ω² · ω dω = (2^4 - 1)/4
        let g = RadialGrid::linear(101, 1.0, 2.0).unwrap();
        let samples: Vec<f64> = g.nodes().to_vec();
        assert_relative_eq!(g.integrate(&samples), 15.0 / 4.0, max_relative = 1e-10);
    }

    #[test]
    fn degenerate_grid_rejected() {
        assert!(RadialGrid::log(100, 1.0, 0.5).is_err());
        assert!(RadialGrid::log(100, -1.0, 0.5).is_err());
        assert!(RadialGrid::log(4, 0.1, 1.0).is_err());
    }

    #[test]
    fn position_grid_gaussian() {
        // ∫_0^∞ r² e^{-r²} dr = sqrt(π)/4
        let g = PositionGrid::uniform(2048, 12.0).unwrap();
        let samples: Vec<f64> = g.nodes().iter().map(|&r| (-r * r).exp()).collect();
        assert_relative_eq!(
            g.integrate(&samples),
            std::f64::consts::PI.sqrt() / 4.0,
            max_relative = 1e-10
        );
    }
}
