//! The 1+1 correspondence: f̌ with spectrum in V̄ ↦ the symmetric wave
//! field F(x, σ) = Σ_p f̌(p) cos(σ√(p²)) e^{ip·x} on the lifted window,
//! with the wave-equation, symmetry and restriction diagnostics.
//!
//! Everything is index-space DFT: position sample i ↔ x_i = (i − N/2)h,
//! momentum k ↔ p_k = 2πk̃/(Nh) with k̃ the signed index.  F(·, 0)
//! reproduces the synthesis of f̌ exactly, and □F vanishes for the
//! continuum derivatives of the trig polynomial, so the centered-difference
//! residual measures the pure O(h²) symbol error.

use ndarray::{Array2, Array3};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{JldError, Result};

/// The 1+1 position window behind the transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformGrid {
    /// Samples per axis (time, space).
    pub n: [usize; 2],
    /// Spacing per axis.
    pub h: [f64; 2],
}

impl TransformGrid {
    /// Signed frequency of index k on the given axis.
    pub fn freq(&self, axis: usize, k: usize) -> f64 {
        let n = self.n[axis];
        let signed = if k <= n / 2 {
            k as i64
        } else {
            k as i64 - n as i64
        };
        2.0 * std::f64::consts::PI * signed as f64 / (n as f64 * self.h[axis])
    }

    /// Minkowski square p² = p₀² − p₁² of a momentum lattice point.
    pub fn p_squared(&self, k0: usize, k1: usize) -> f64 {
        let p0 = self.freq(0, k0);
        let p1 = self.freq(1, k1);
        p0 * p0 - p1 * p1
    }

    /// Position coordinate of sample i (centered convention).
    pub fn x(&self, axis: usize, i: usize) -> f64 {
        (i as f64 - (self.n[axis] / 2) as f64) * self.h[axis]
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransformReport {
    /// ‖□F‖₂/‖F‖₂ over interior σ-planes (centered differences).
    pub wave_residual_rel: f64,
    /// max‖F(·,σ) − F(·,−σ)‖∞ / max|F|.
    pub symmetry_defect: f64,
    /// sup|F(·,0) − f|/sup|f| against the reference samples (0 when no
    /// reference is supplied).
    pub restriction_defect_sup: f64,
    pub sigmas: Vec<f64>,
}

/// The computed field F indexed [σ][i0][i1], plus the report.
pub struct JldField {
    pub grid: TransformGrid,
    pub sigmas: Vec<f64>,
    pub data: Array3<Complex64>,
}

/// 2D synthesis Σ_k g[k] e^{+2πi(k·i/N)} / 1 (unnormalized inverse FFT).
fn synthesize_2d(g: &Array2<Complex64>, planner: &mut FftPlanner<f64>) -> Array2<Complex64> {
    let (n0, n1) = g.dim();
    let mut data = g.clone();
    let fft0 = planner.plan_fft_inverse(n0);
    let fft1 = planner.plan_fft_inverse(n1);
    // Rows (axis 1).
    for mut row in data.rows_mut() {
        let mut buf: Vec<Complex64> = row.to_vec();
        fft1.process(&mut buf);
        for (dst, src) in row.iter_mut().zip(buf) {
            *dst = src;
        }
    }
    // Columns (axis 0).
    for j in 0..n1 {
        let mut buf: Vec<Complex64> = (0..n0).map(|i| data[(i, j)]).collect();
        fft0.process(&mut buf);
        for (i, v) in buf.into_iter().enumerate() {
            data[(i, j)] = v;
        }
    }
    data
}

/// Forward 2D DFT with 1/(N0·N1) normalization: the inverse of `synthesize_2d`.
pub fn analyze_2d(f: &Array2<Complex64>) -> Array2<Complex64> {
    let (n0, n1) = f.dim();
    let mut planner = FftPlanner::new();
    let mut data = f.clone();
    let fft0 = planner.plan_fft_forward(n0);
    let fft1 = planner.plan_fft_forward(n1);
    for mut row in data.rows_mut() {
        let mut buf: Vec<Complex64> = row.to_vec();
        fft1.process(&mut buf);
        for (dst, src) in row.iter_mut().zip(buf) {
            *dst = src;
        }
    }
    for j in 0..n1 {
        let mut buf: Vec<Complex64> = (0..n0).map(|i| data[(i, j)]).collect();
        fft0.process(&mut buf);
        for (i, v) in buf.into_iter().enumerate() {
            data[(i, j)] = v;
        }
    }
    let norm = 1.0 / (n0 * n1) as f64;
    data.mapv_inplace(|c| c * norm);
    data
}

/// Run the transform.  `n_sigma` must be odd so the σ = 0 plane exists;
/// `reference` is compared against F(·, 0) in sup norm.
pub fn jld_transform_1p1(
    f_check: &Array2<Complex64>,
    grid: TransformGrid,
    n_sigma: usize,
    h_sigma: f64,
    reference: Option<&Array2<Complex64>>,
) -> Result<(JldField, TransformReport)> {
    let (n0, n1) = f_check.dim();
    if [n0, n1] != grid.n {
        return Err(JldError::Input(format!(
            "f̌ shape ({n0},{n1}) does not match the grid {:?}",
            grid.n
        )));
    }
    if n_sigma % 2 == 0 || n_sigma < 3 {
        return Err(JldError::Input("n_sigma must be odd and ≥ 3".into()));
    }
    // Support mask: spectrum must sit in V̄ = {p² ≥ 0}.
    for k0 in 0..n0 {
        for k1 in 0..n1 {
            let p2 = grid.p_squared(k0, k1);
            if p2 < -1e-12 && f_check[(k0, k1)].norm() > 0.0 {
                return Err(JldError::Input(format!(
                    "f̌ has support outside V̄ at lattice ({k0},{k1}), p² = {p2:.3e}"
                )));
            }
        }
    }

    let mut planner = FftPlanner::new();
    let half = (n_sigma - 1) / 2;
    let sigmas: Vec<f64> = (0..n_sigma)
        .map(|s| (s as i64 - half as i64) as f64 * h_sigma)
        .collect();
    let mut data = Array3::<Complex64>::zeros((n_sigma, n0, n1));
    for (s, &sigma) in sigmas.iter().enumerate() {
        let mut g = f_check.clone();
        for k0 in 0..n0 {
            for k1 in 0..n1 {
                let m = grid.p_squared(k0, k1).max(0.0).sqrt();
                g[(k0, k1)] *= (sigma * m).cos();
            }
        }
        let plane = synthesize_2d(&g, &mut planner);
        data.index_axis_mut(ndarray::Axis(0), s).assign(&plane);
    }

    // Wave residual on interior σ-planes, periodic wrap in t and x.
    let (h0, h1) = (grid.h[0], grid.h[1]);
    let mut num = 0.0;
    let mut den = 0.0;
    for s in 1..n_sigma - 1 {
        for i in 0..n0 {
            let ip = (i + 1) % n0;
            let im = (i + n0 - 1) % n0;
            for j in 0..n1 {
                let jp = (j + 1) % n1;
                let jm = (j + n1 - 1) % n1;
                let f = data[(s, i, j)];
                let d2t = (data[(s, ip, j)] - 2.0 * f + data[(s, im, j)]) / (h0 * h0);
                let d2x = (data[(s, i, jp)] - 2.0 * f + data[(s, i, jm)]) / (h1 * h1);
                let d2s = (data[(s + 1, i, j)] - 2.0 * f + data[(s - 1, i, j)])
                    / (h_sigma * h_sigma);
                let box_f = d2t - d2x - d2s;
                num += box_f.norm_sqr();
                den += f.norm_sqr();
            }
        }
    }
    let wave_residual_rel = if den > 0.0 { (num / den).sqrt() } else { 0.0 };

    // Symmetry defect.
    let max_f = data.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1e-300);
    let mut sym = 0.0_f64;
    for s in 0..half {
        let a = data.index_axis(ndarray::Axis(0), s);
        let b = data.index_axis(ndarray::Axis(0), n_sigma - 1 - s);
        for (x, y) in a.iter().zip(b.iter()) {
            sym = sym.max((x - y).norm());
        }
    }
    let symmetry_defect = sym / max_f;

    // Restriction identity against the reference.
    let restriction_defect_sup = if let Some(reff) = reference {
        let plane = data.index_axis(ndarray::Axis(0), half);
        let sup_ref = reff.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1e-300);
        let mut worst = 0.0_f64;
        for (a, b) in plane.iter().zip(reff.iter()) {
            worst = worst.max((a - b).norm());
        }
        worst / sup_ref
    } else {
        0.0
    };

    Ok((
        JldField {
            grid,
            sigmas: sigmas.clone(),
            data,
        },
        TransformReport {
            wave_residual_rel,
            symmetry_defect,
            restriction_defect_sup,
            sigmas,
        },
    ))
}

/// A smooth momentum bump centered on the mass-m hyperboloid, hard-masked
/// to V̄ (the mask cut is exponentially small for the default geometry).
pub fn hyperboloid_chord_fixture(grid: TransformGrid, mass: f64, width: f64) -> Array2<Complex64> {
    let (n0, n1) = (grid.n[0], grid.n[1]);
    let mut f = Array2::<Complex64>::zeros((n0, n1));
    for k0 in 0..n0 {
        for k1 in 0..n1 {
            let p0 = grid.freq(0, k0);
            let p1 = grid.freq(1, k1);
            if p0 * p0 - p1 * p1 < 0.0 {
                continue;
            }
            let on_shell = (p1 * p1 + mass * mass).sqrt();
            let d2 = (p0 - on_shell).powi(2) + p1 * p1;
            f[(k0, k1)] = Complex64::new((-d2 / (width * width)).exp(), 0.0);
        }
    }
    f
}

/// Alternate-projection construction of an f vanishing on the double cone
/// O = {|t| + |x| < radius} with spectrum in V̄: von Neumann iterations
/// between the O-vanishing subspace and the band-limited cone-spectrum
/// subspace V̄ ∩ {|p| ≤ band_fraction·Nyquist}.  The low-pass keeps the
/// trig interpolant tame *between* the zeroed lattice cells, so the
/// vanishing transfers to the open diamond instead of just its samples.
/// Returns (f̌ supported in the masked spectrum, position samples with
/// exact O-zeros).
pub fn double_cone_fixture(
    grid: TransformGrid,
    radius: f64,
    iterations: usize,
    band_fraction: f64,
) -> (Array2<Complex64>, Array2<Complex64>) {
    let (n0, n1) = (grid.n[0], grid.n[1]);
    let in_cone_mask = |i: usize, j: usize| -> bool {
        let t = grid.x(0, i);
        let x = grid.x(1, j);
        t.abs() + x.abs() < radius
    };
    let p_cut = [
        band_fraction * std::f64::consts::PI / grid.h[0],
        band_fraction * std::f64::consts::PI / grid.h[1],
    ];
    let keep = |k0: usize, k1: usize| -> bool {
        grid.p_squared(k0, k1) >= 0.0
            && grid.freq(0, k0).abs() <= p_cut[0]
            && grid.freq(1, k1).abs() <= p_cut[1]
    };
    // Seed: two bumps in the spacelike complement of O.
    let mut f = Array2::<Complex64>::zeros((n0, n1));
    for i in 0..n0 {
        for j in 0..n1 {
            let t = grid.x(0, i);
            let x = grid.x(1, j);
            let g1 = (-(t * t + (x - 2.0 * radius).powi(2)) / (0.5 * radius * radius)).exp();
            let g2 = (-(t * t + (x + 2.0 * radius).powi(2)) / (0.3 * radius * radius)).exp();
            f[(i, j)] = Complex64::new(g1 + 0.7 * g2, 0.0);
        }
    }
    let mut planner = FftPlanner::new();
    let mut f_hat = Array2::<Complex64>::zeros((n0, n1));
    for _ in 0..iterations.max(1) {
        // Project onto the O-vanishing subspace.
        for i in 0..n0 {
            for j in 0..n1 {
                if in_cone_mask(i, j) {
                    f[(i, j)] = Complex64::new(0.0, 0.0);
                }
            }
        }
        // Project onto the band-limited cone-spectrum subspace.
        f_hat = analyze_2d(&f);
        for k0 in 0..n0 {
            for k1 in 0..n1 {
                if !keep(k0, k1) {
                    f_hat[(k0, k1)] = Complex64::new(0.0, 0.0);
                }
            }
        }
        f = synthesize_2d(&f_hat, &mut planner);
    }
    // Final position iterate with exact O-zeros.
    let mut f_pos = f.clone();
    for i in 0..n0 {
        for j in 0..n1 {
            if in_cone_mask(i, j) {
                f_pos[(i, j)] = Complex64::new(0.0, 0.0);
            }
        }
    }
    (f_hat, f_pos)
}
