//! Minkowski grids and wedge frames.
//!
//! Axis 0 is time; the metric is x·y = x₀y₀ − Σ_k x_k y_k.

use serde::{Deserialize, Serialize};

use crate::error::{JldError, Result};

/// Minkowski product in 1+s dimensions.
pub fn mink(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = a[0] * b[0];
    for k in 1..a.len() {
        acc -= a[k] * b[k];
    }
    acc
}

/// Euclidean spatial norm of the components 1..dim.
pub fn spatial_norm(x: &[f64]) -> f64 {
    x[1..].iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// A uniform cell grid over a symmetric window of 1+s Minkowski space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinkowskiGrid {
    /// Cells per axis (axis 0 = time).
    pub counts: Vec<usize>,
    /// Cell size per axis.
    pub spacing: Vec<f64>,
    /// Coordinate of the cell with index 0 per axis.
    pub origin: Vec<f64>,
}

impl MinkowskiGrid {
    /// Symmetric window: cell centers at (i − (n−1)/2)·h per axis.
    pub fn symmetric(counts: &[usize], spacing: &[f64]) -> Result<Self> {
        if counts.len() != spacing.len() || counts.len() < 2 || counts.len() > 4 {
            return Err(JldError::Grid(format!(
                "need 1+s axes with s ∈ {{1,2,3}}, got counts {counts:?}"
            )));
        }
        if counts.iter().any(|&n| n < 2) || spacing.iter().any(|&h| !(h > 0.0)) {
            return Err(JldError::Grid("degenerate counts or spacing".into()));
        }
        let origin = counts
            .iter()
            .zip(spacing)
            .map(|(&n, &h)| -((n - 1) as f64) / 2.0 * h)
            .collect();
        Ok(Self {
            counts: counts.to_vec(),
            spacing: spacing.to_vec(),
            origin,
        })
    }

    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn cell_count(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn coord(&self, axis: usize, idx: usize) -> f64 {
        self.origin[axis] + idx as f64 * self.spacing[axis]
    }

    /// Cell center of a flat index (row-major over `counts`).
    pub fn point(&self, flat: usize) -> Vec<f64> {
        let mut rem = flat;
        let mut out = vec![0.0; self.dim()];
        for axis in (0..self.dim()).rev() {
            let n = self.counts[axis];
            out[axis] = self.coord(axis, rem % n);
            rem /= n;
        }
        out
    }

    pub fn flat_index(&self, indices: &[usize]) -> usize {
        let mut acc = 0;
        for (axis, &i) in indices.iter().enumerate() {
            acc = acc * self.counts[axis] + i;
        }
        acc
    }

    /// Largest spacing (the "cell unit" for margins).
    pub fn max_spacing(&self) -> f64 {
        self.spacing.iter().cloned().fold(0.0, f64::max)
    }

    /// Nearest cell indices for a point, or None if outside the window.
    pub fn nearest_cell(&self, x: &[f64]) -> Option<Vec<usize>> {
        let mut idx = Vec::with_capacity(self.dim());
        for axis in 0..self.dim() {
            let pos = (x[axis] - self.origin[axis]) / self.spacing[axis];
            let i = pos.round();
            if i < -0.5 || i > self.counts[axis] as f64 - 0.5 {
                return None;
            }
            idx.push(i.clamp(0.0, (self.counts[axis] - 1) as f64) as usize);
        }
        Some(idx)
    }
}

/// A wedge W = w + W_{k₊,k₋} with its parallel plane M_∥ = span{k₊,k₋} and
/// the invariance plane M_⊥.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WedgeFrame {
    pub k_plus: Vec<f64>,
    pub k_minus: Vec<f64>,
    pub offset: Vec<f64>,
    /// Orthonormal M_∥ basis: e_t timelike, e_s spacelike.
    pub e_t: Vec<f64>,
    pub e_s: Vec<f64>,
    /// Orthonormal spacelike basis of M_⊥ (Minkowski-orthogonal to M_∥).
    pub perp: Vec<Vec<f64>>,
}

impl WedgeFrame {
    pub fn new(k_plus: Vec<f64>, k_minus: Vec<f64>, offset: Vec<f64>) -> Result<Self> {
        let dim = k_plus.len();
        if k_minus.len() != dim || offset.len() != dim || !(2..=4).contains(&dim) {
            return Err(JldError::Frame("dimension mismatch".into()));
        }
        let kp2 = mink(&k_plus, &k_plus);
        let km2 = mink(&k_minus, &k_minus);
        if kp2.abs() > 1e-10 || km2.abs() > 1e-10 {
            return Err(JldError::Frame(format!(
                "k± must be lightlike: k₊² = {kp2:.3e}, k₋² = {km2:.3e}"
            )));
        }
        if !(k_plus[0] > 0.0 && k_minus[0] < 0.0) {
            return Err(JldError::Frame("need k₊ ∈ ∂V₊ and k₋ ∈ ∂V₋".into()));
        }
        let kpm = mink(&k_plus, &k_minus);
        if !(kpm < 0.0) {
            return Err(JldError::Frame(format!("need k₊·k₋ < 0, got {kpm:.3e}")));
        }
        // e_t ∝ k₊ − k₋ (timelike), e_s ∝ k₊ + k₋ (spacelike).
        let diff: Vec<f64> = k_plus.iter().zip(&k_minus).map(|(a, b)| a - b).collect();
        let sum: Vec<f64> = k_plus.iter().zip(&k_minus).map(|(a, b)| a + b).collect();
        let nt = mink(&diff, &diff); // = −2 k₊k₋ > 0
        let ns = -mink(&sum, &sum); // = +2 |k₊k₋| > 0
        let e_t: Vec<f64> = diff.iter().map(|c| c / nt.sqrt()).collect();
        let e_s: Vec<f64> = sum.iter().map(|c| c / ns.sqrt()).collect();
        // M_⊥: Minkowski-orthogonal complement, via Gram–Schmidt on the
        // coordinate axes (spacelike, so the Euclidean inner product works
        // after removing the M_∥ components).
        let mut perp: Vec<Vec<f64>> = Vec::new();
        for axis in 0..dim {
            let mut v = vec![0.0; dim];
            v[axis] = 1.0;
            // Remove Minkowski projections onto e_t (timelike: +) and e_s
            // (spacelike: −), then onto the accumulated perp vectors.
            let ct = mink(&v, &e_t);
            let cs = -mink(&v, &e_s);
            for k in 0..dim {
                v[k] -= ct * e_t[k];
                v[k] -= cs * e_s[k];
            }
            for p in &perp {
                let c = -mink(&v, p);
                for k in 0..dim {
                    v[k] -= c * p[k];
                }
            }
            let n2 = -mink(&v, &v);
            if n2 > 1e-12 {
                let n = n2.sqrt();
                perp.push(v.iter().map(|c| c / n).collect());
            }
        }
        if perp.len() != dim - 2 {
            return Err(JldError::Frame(format!(
                "M_⊥ basis has {} vectors, expected {}",
                perp.len(),
                dim - 2
            )));
        }
        let frame = Self {
            k_plus,
            k_minus,
            offset,
            e_t,
            e_s,
            perp,
        };
        let resid = frame.reconstruction_residual();
        if resid > 1e-12 {
            return Err(JldError::Frame(format!(
                "basis reconstruction residual {resid:.3e}"
            )));
        }
        Ok(frame)
    }

    /// ∥-coordinates (t', s') of a point (relative to the origin, not the
    /// wedge offset: M_∥ passes through 0 by definition).
    pub fn par_coords(&self, x: &[f64]) -> (f64, f64) {
        (mink(x, &self.e_t), -mink(x, &self.e_s))
    }

    /// ⊥-coordinates of a point.
    pub fn perp_coords(&self, x: &[f64]) -> Vec<f64> {
        self.perp.iter().map(|p| -mink(x, p)).collect()
    }

    /// Worst-case |x − (reassembled from frame coordinates)| over the basis
    /// vectors themselves.
    fn reconstruction_residual(&self) -> f64 {
        let dim = self.e_t.len();
        let mut worst = 0.0_f64;
        for axis in 0..dim {
            let mut v = vec![0.0; dim];
            v[axis] = 1.0;
            let (t, s) = self.par_coords(&v);
            let pc = self.perp_coords(&v);
            for k in 0..dim {
                let mut rec = t * self.e_t[k] + s * self.e_s[k];
                for (c, p) in pc.iter().zip(&self.perp) {
                    rec += c * p[k];
                }
                worst = worst.max((rec - v[k]).abs());
            }
        }
        worst
    }

    /// Is x in the open wedge?
    pub fn contains(&self, x: &[f64]) -> bool {
        let y: Vec<f64> = x.iter().zip(&self.offset).map(|(a, b)| a - b).collect();
        mink(&self.k_plus, &y) < 0.0 && mink(&self.k_minus, &y) < 0.0
    }

    /// True when (e_t, e_s, perp…) is a signed permutation of the grid axes
    /// (the reductions are exact in that case).
    pub fn is_axis_aligned(&self, tol: f64) -> bool {
        let mut basis = vec![self.e_t.clone(), self.e_s.clone()];
        basis.extend(self.perp.iter().cloned());
        basis.iter().all(|v| {
            let mut big = 0;
            for c in v {
                if c.abs() > tol {
                    if (c.abs() - 1.0).abs() > tol {
                        return false;
                    }
                    big += 1;
                }
            }
            big == 1
        })
    }
}
