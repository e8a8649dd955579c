//! Two-cone feasibility: can a point cloud be covered by
//! (a₊ + V₊) ∪ (a₋ + V₋) with a₊ − a₋ strictly timelike-future?
//!
//! In 1+1 this is exact in lightcone coordinates u = t − x, v = t + x: a
//! valid split is a quadrant, so the upper set must simultaneously be a
//! u-upper set and a v-upper set; scanning the u-sorted prefix splits with
//! suffix minima in v decides feasibility in O(n log n).  In higher
//! dimensions the apex pair is scanned on a coarsened lattice.
//!
//! Window-consistency rule: the sets being reduced are windowed samples of
//! unbounded sets, so apexes must lie inside the window (a cone whose apex
//! escapes the window could never cover the continuation of the content
//! beyond it) and every point must sit at least `margin` deep inside its
//! cone, so that cells just outside the window stay covered by slope-1
//! continuation.

use crate::error::Result;
use crate::geometry::{spatial_norm, MinkowskiGrid};
use crate::region::Region;

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub a_plus: Vec<f64>,
    pub a_minus: Vec<f64>,
}

/// Rectangular apex window for the exact 1+1 test, in (t, x) coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApexWindow {
    pub t_min: f64,
    pub t_max: f64,
    pub x_min: f64,
    pub x_max: f64,
}

impl ApexWindow {
    pub fn contains(&self, t: f64, x: f64) -> bool {
        t >= self.t_min && t <= self.t_max && x >= self.x_min && x <= self.x_max
    }

    pub fn unbounded() -> Self {
        Self {
            t_min: f64::NEG_INFINITY,
            t_max: f64::INFINITY,
            x_min: f64::NEG_INFINITY,
            x_max: f64::INFINITY,
        }
    }
}

/// Exact 1+1 feasibility for points given as (t, x), with required cone
/// depth `margin` and apexes constrained to `window`.
pub fn two_cone_feasible_1p1(
    points: &[[f64; 2]],
    margin: f64,
    window: ApexWindow,
) -> (bool, Option<Witness>) {
    if points.is_empty() {
        let t0 = window.t_min.max(-2.0 * margin.max(1.0));
        let a_minus = vec![t0, 0.0];
        let a_plus = vec![t0 + 4.0 * margin.max(1.0), 0.0];
        return (true, Some(Witness { a_plus, a_minus }));
    }
    let mut uv: Vec<(f64, f64)> = points.iter().map(|p| (p[0] - p[1], p[0] + p[1])).collect();
    uv.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = uv.len();
    let mut suffix_min_v = vec![f64::INFINITY; n + 1];
    for i in (0..n).rev() {
        suffix_min_v[i] = suffix_min_v[i + 1].min(uv[i].1);
    }
    let mut prefix_max_v = vec![f64::NEG_INFINITY; n + 1];
    for i in 0..n {
        prefix_max_v[i + 1] = prefix_max_v[i].max(uv[i].1);
    }
    let global_min_u = uv[0].0;
    let global_max_u = uv[n - 1].0;

    // Candidate apexes for split k (L = first k by u, U = rest):
    //   a₊ = (min_U u − margin, min_U v − margin)        [in (u,v) coords]
    //   a₋ = (max_L u + margin, max_L v + margin)
    // For empty U/L the missing cone is anchored next to its partner.
    let to_tx = |(u, v): (f64, f64)| -> (f64, f64) { ((u + v) / 2.0, (v - u) / 2.0) };
    for k in 0..=n {
        let u_ok = if k == 0 || k == n {
            true
        } else {
            uv[k].0 - uv[k - 1].0 > 2.0 * margin
        };
        if !u_ok {
            continue;
        }
        let v_ok = if k == 0 || k == n {
            true
        } else {
            suffix_min_v[k] - prefix_max_v[k] > 2.0 * margin
        };
        if !v_ok {
            continue;
        }
        let a_plus_uv = if k < n {
            (uv[k].0 - margin, suffix_min_v[k] - margin)
        } else {
            // Empty U: park a₊ just above a₋.
            (
                uv[n - 1].0 + 3.0 * margin,
                prefix_max_v[n] + 3.0 * margin,
            )
        };
        let a_minus_uv = if k > 0 {
            (uv[k - 1].0 + margin, prefix_max_v[k] + margin)
        } else {
            (global_min_u - 3.0 * margin, suffix_min_v[0] - 3.0 * margin)
        };
        let _ = global_max_u;
        let (tp, xp) = to_tx(a_plus_uv);
        let (tm, xm) = to_tx(a_minus_uv);
        if window.contains(tp, xp) && window.contains(tm, xm) {
            return (
                true,
                Some(Witness {
                    a_plus: vec![tp, xp],
                    a_minus: vec![tm, xm],
                }),
            );
        }
    }
    (false, None)
}

/// Exhaustive-at-resolution feasibility in 1+s, s ≥ 2: scan apex pairs on a
/// lattice coarsened by `stride` cells over the window.
pub fn two_cone_feasible_scan(
    points: &[Vec<f64>],
    window: &MinkowskiGrid,
    stride: usize,
    margin: f64,
) -> (bool, Option<Witness>) {
    if points.is_empty() {
        let dim = window.dim();
        let mut a_minus = vec![0.0; dim];
        let mut a_plus = vec![0.0; dim];
        a_minus[0] = -margin.max(1.0);
        a_plus[0] = margin.max(1.0);
        return (true, Some(Witness { a_plus, a_minus }));
    }
    let dim = window.dim();
    let stride = stride.max(1);
    let mut candidates: Vec<Vec<f64>> = Vec::new();
    let mut idx = vec![0usize; dim];
    'outer: loop {
        let x: Vec<f64> = (0..dim).map(|a| window.coord(a, idx[a])).collect();
        candidates.push(x);
        for a in (0..dim).rev() {
            idx[a] += stride;
            if idx[a] < window.counts[a] {
                continue 'outer;
            }
            idx[a] = 0;
            if a == 0 {
                break 'outer;
            }
        }
    }
    let depth_plus = |a: &[f64], p: &[f64]| -> f64 {
        let y: Vec<f64> = p.iter().zip(a).map(|(u, v)| u - v).collect();
        y[0] - spatial_norm(&y)
    };
    for a_minus in &candidates {
        let rest: Vec<&Vec<f64>> = points
            .iter()
            .filter(|p| {
                let y: Vec<f64> = a_minus.iter().zip(p.iter()).map(|(a, q)| a - q).collect();
                !(y[0] - spatial_norm(&y) >= margin)
            })
            .collect();
        'aplus: for a_plus in &candidates {
            let d: Vec<f64> = a_plus
                .iter()
                .zip(a_minus.iter())
                .map(|(p, q)| p - q)
                .collect();
            if !(d[0] - spatial_norm(&d) >= margin) {
                continue;
            }
            for p in &rest {
                if depth_plus(a_plus, p) < margin {
                    continue 'aplus;
                }
            }
            return (
                true,
                Some(Witness {
                    a_plus: a_plus.clone(),
                    a_minus: a_minus.clone(),
                }),
            );
        }
    }
    (false, None)
}

/// Feasibility for the occupied cells of a region (1+1 exact; otherwise the
/// lattice scan), with apexes confined to the region's own window.
pub fn two_cone_feasible_region(
    region: &Region,
    stride: usize,
    margin: f64,
) -> Result<(bool, Option<Witness>)> {
    let pts: Vec<Vec<f64>> = region
        .occupied()
        .iter()
        .map(|&f| region.grid.point(f))
        .collect();
    if region.grid.dim() == 2 {
        let p2: Vec<[f64; 2]> = pts.iter().map(|p| [p[0], p[1]]).collect();
        let g = &region.grid;
        let window = ApexWindow {
            t_min: g.coord(0, 0),
            t_max: g.coord(0, g.counts[0] - 1),
            x_min: g.coord(1, 0),
            x_max: g.coord(1, g.counts[1] - 1),
        };
        Ok(two_cone_feasible_1p1(&p2, margin, window))
    } else {
        Ok(two_cone_feasible_scan(&pts, &region.grid, stride, margin))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wide_window() -> ApexWindow {
        ApexWindow {
            t_min: -10.0,
            t_max: 10.0,
            x_min: -10.0,
            x_max: 10.0,
        }
    }

    #[test]
    fn empty_set_has_canonical_witness() {
        let (ok, w) = two_cone_feasible_1p1(&[], 0.1, wide_window());
        assert!(ok);
        let w = w.unwrap();
        let d0 = w.a_plus[0] - w.a_minus[0];
        let d1 = (w.a_plus[1] - w.a_minus[1]).abs();
        assert!(d0 > d1);
    }

    #[test]
    fn single_point_feasible() {
        let (ok, w) = two_cone_feasible_1p1(&[[0.3, -0.2]], 0.05, wide_window());
        assert!(ok);
        let w = w.unwrap();
        // Depth equals the margin up to rounding.
        let in_plus = (0.3 - w.a_plus[0]) - (-0.2 - w.a_plus[1]).abs() >= 0.05 - 1e-12;
        let in_minus = (w.a_minus[0] - 0.3) - (w.a_minus[1] + 0.2).abs() >= 0.05 - 1e-12;
        assert!(in_plus || in_minus);
    }

    #[test]
    fn lightcone_threshold_split() {
        // Timelike pair (t,x) = (±1, 0): feasible via the threshold split.
        let (ok, w) = two_cone_feasible_1p1(&[[1.0, 0.0], [-1.0, 0.0]], 0.1, wide_window());
        assert!(ok);
        let w = w.unwrap();
        assert!(w.a_plus[0] - w.a_minus[0] > 0.0);
    }

    #[test]
    fn spacelike_pair_coverable_by_one_cone() {
        // (0, ±1) fits a single forward cone whose apex stays in a
        // generous window; with the window floor pulled up to t = 0 the
        // apex can no longer drop below the points and the cover fails.
        let pts = [[0.0, 1.0], [0.0, -1.0]];
        let (ok, _) = two_cone_feasible_1p1(&pts, 0.1, wide_window());
        assert!(ok);
        let tight = ApexWindow {
            t_min: -0.5,
            t_max: 0.5,
            x_min: -2.0,
            x_max: 2.0,
        };
        let (ok, _) = two_cone_feasible_1p1(&pts, 0.1, tight);
        assert!(!ok);
    }

    #[test]
    fn crossing_wings_infeasible() {
        // Four points forcing both an up- and a down-cone with
        // incompatible thresholds in u and v.
        let pts = [
            [0.5, 2.0],  // up-wing   (u,v) = (−1.5, 2.5)
            [0.5, -2.0], // up-wing   (2.5, −1.5)
            [-0.5, 2.0], // down-wing (−2.5, 1.5)
            [-0.5, -2.0],// down-wing (1.5, −2.5)
        ];
        let window = ApexWindow {
            t_min: -1.0,
            t_max: 1.0,
            x_min: -3.0,
            x_max: 3.0,
        };
        let (ok, _) = two_cone_feasible_1p1(&pts, 0.2, window);
        assert!(!ok);
    }

    #[test]
    fn margin_respected() {
        // Window tight enough that the single-cone escape is blocked; the
        // split then needs a 2·margin gap in both lightcone coordinates.
        let pts = [[0.5, 0.0], [-0.5, 0.0]];
        let window = ApexWindow {
            t_min: -0.6,
            t_max: 0.6,
            x_min: -2.0,
            x_max: 2.0,
        };
        let (ok_small, _) = two_cone_feasible_1p1(&pts, 0.2, window);
        assert!(ok_small);
        let (ok_big, _) = two_cone_feasible_1p1(&pts, 0.6, window);
        assert!(!ok_big);
    }

    #[test]
    fn scan_agrees_on_simple_3d_cases() {
        let grid = MinkowskiGrid::symmetric(&[17, 17, 17], &[0.5, 0.5, 0.5]).unwrap();
        let pts = vec![vec![3.0, 0.0, 0.0], vec![-3.0, 0.0, 0.0]];
        let (ok, w) = two_cone_feasible_scan(&pts, &grid, 2, 0.25);
        assert!(ok);
        assert!(w.is_some());
        // Content pinned to both the window floor and ceiling in opposite
        // wings with overlapping spatial reach: infeasible.
        let pts = vec![
            vec![4.0, 3.0, 0.0],
            vec![4.0, -3.0, 0.0],
            vec![-4.0, 3.0, 0.0],
            vec![-4.0, -3.0, 0.0],
            vec![0.5, 2.0, 0.0],
            vec![-0.5, -2.0, 0.0],
            vec![0.5, -2.0, 0.0],
            vec![-0.5, 2.0, 0.0],
        ];
        let (ok, _) = two_cone_feasible_scan(&pts, &grid, 1, 0.25);
        assert!(!ok);
    }
}
