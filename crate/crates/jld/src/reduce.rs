//! The support-reduction maps r_W, r̃_W and their fixed-point iteration.
//!
//! Both maps remove cells covered by invariant neighborhoods over which the
//! content admits a two-cone cover (r_W) or a one-sided mass-band gap
//! (r̃_W).  The dictionaries are the computable sub-families the design
//! fixes: axis-aligned dyadic slabs in M_⊥ coordinates for r_W, plus coarse
//! lattice offsets and dyadic symmetric mass intervals for r̃_W.  Removals
//! are sound relative to the dictionary: the computed result contains the
//! analytic one.
//!
//! Open-set semantics on the raster: a slab of radius r cells *covers*
//! cells within r·h of its center but its *content* is taken one cell
//! wider, since any open neighborhood of the covered cells reaches into
//! the adjacent layer.  Without the dilation the reduction of the
//! three-cone scene would erase the surviving plane.  The dilated band is
//! clipped at the window: the window is treated as a faithful sample of
//! the ⊥-continuation, which is why acceptance fixtures keep their
//! features ≥ 8 cells away from the boundary.

use serde::{Deserialize, Serialize};

use crate::error::{JldError, Result};
use crate::feasible::{two_cone_feasible_1p1, ApexWindow};
use crate::geometry::{mink, WedgeFrame};
use crate::region::Region;

/// Dictionary of slab radii (in cells) for the M_⊥ boxes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReductionOptions {
    /// Dyadic slab radii in cells.
    pub radii_cells: Vec<usize>,
    /// Required cone depth, in cells.
    pub margin_cells: f64,
    /// Stride of the b-lattice for r̃_W, in cells.
    pub band_stride: usize,
    /// Dyadic mass-interval radii for r̃_W, in cells (scaled by spacing).
    pub band_radii_cells: Vec<usize>,
}

impl Default for ReductionOptions {
    fn default() -> Self {
        Self {
            radii_cells: vec![1, 2, 4, 8, 16],
            margin_cells: 1.0,
            band_stride: 4,
            band_radii_cells: vec![2, 4, 8, 16, 32],
        }
    }
}

/// Cells of the region in wedge-frame coordinates.
struct FrameView {
    /// (flat index, t∥, s∥, ⊥ coords) per occupied cell.
    cells: Vec<(usize, f64, f64, Vec<f64>)>,
    /// ⊥ lattice spacing (the grid's largest spacing).
    h: f64,
    /// ⊥ bounds of the window (per ⊥ axis).
    perp_min: Vec<f64>,
    perp_max: Vec<f64>,
    /// ∥ bounds of the window (apex confinement).
    apex_window: ApexWindow,
}

fn frame_view(g: &Region, w: &WedgeFrame) -> Result<FrameView> {
    let dim = g.grid.dim();
    if dim < 3 {
        return Err(JldError::Frame(
            "wedge reduction needs at least 1+2 dimensions".into(),
        ));
    }
    if w.e_t.len() != dim {
        return Err(JldError::Frame("wedge dimension mismatch".into()));
    }
    let h = g.grid.max_spacing();
    let cells: Vec<(usize, f64, f64, Vec<f64>)> = g
        .occupied()
        .into_iter()
        .map(|flat| {
            let p = g.grid.point(flat);
            let (t, s) = w.par_coords(&p);
            (flat, t, s, w.perp_coords(&p))
        })
        .collect();
    // Window extents in frame coordinates from the corner points.
    let mut perp_min = vec![f64::INFINITY; dim - 2];
    let mut perp_max = vec![f64::NEG_INFINITY; dim - 2];
    let mut t_rng = (f64::INFINITY, f64::NEG_INFINITY);
    let mut s_rng = (f64::INFINITY, f64::NEG_INFINITY);
    let corners = 1usize << dim;
    for c in 0..corners {
        let p: Vec<f64> = (0..dim)
            .map(|a| {
                if c & (1 << a) == 0 {
                    g.grid.coord(a, 0)
                } else {
                    g.grid.coord(a, g.grid.counts[a] - 1)
                }
            })
            .collect();
        let (t, s) = w.par_coords(&p);
        t_rng = (t_rng.0.min(t), t_rng.1.max(t));
        s_rng = (s_rng.0.min(s), s_rng.1.max(s));
        for (k, v) in w.perp_coords(&p).iter().enumerate() {
            perp_min[k] = perp_min[k].min(*v);
            perp_max[k] = perp_max[k].max(*v);
        }
    }
    Ok(FrameView {
        cells,
        h,
        perp_min,
        perp_max,
        apex_window: ApexWindow {
            t_min: t_rng.0,
            t_max: t_rng.1,
            x_min: s_rng.0,
            x_max: s_rng.1,
        },
    })
}

/// Slab centers: the ⊥ lattice positions of the window.
fn perp_centers(view: &FrameView) -> Vec<Vec<f64>> {
    let n_perp = view.perp_min.len();
    let mut axes: Vec<Vec<f64>> = Vec::new();
    for k in 0..n_perp {
        let mut vals = Vec::new();
        let mut v = view.perp_min[k];
        while v <= view.perp_max[k] + 1e-9 {
            vals.push(v);
            v += view.h;
        }
        axes.push(vals);
    }
    // Cartesian product.
    let mut centers: Vec<Vec<f64>> = vec![vec![]];
    for axis in &axes {
        let mut next = Vec::with_capacity(centers.len() * axis.len());
        for c in &centers {
            for &v in axis {
                let mut cc = c.clone();
                cc.push(v);
                next.push(cc);
            }
        }
        centers = next;
    }
    centers
}

/// One application of r_W: remove every cell covered by a dictionary slab
/// whose (dilated) content admits a two-cone cover in the ∥-plane.
pub fn r_w_step(g: &Region, w: &WedgeFrame, opts: &ReductionOptions) -> Result<Region> {
    let view = frame_view(g, w)?;
    let h = view.h;
    let mut removed = vec![false; g.grid.cell_count()];
    for center in perp_centers(&view) {
        for &r in &opts.radii_cells {
            let cover_r = r as f64 * h + 1e-9;
            let content_r = (r + 1) as f64 * h + 1e-9;
            let mut covered: Vec<usize> = Vec::new();
            let mut content_par: Vec<[f64; 2]> = Vec::new();
            let mut w_eff = 0.0_f64;
            for (flat, t, s, perp) in &view.cells {
                let dist = perp
                    .iter()
                    .zip(&center)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                if dist <= content_r {
                    content_par.push([*t, *s]);
                    w_eff = w_eff.max(dist);
                }
                if dist <= cover_r {
                    covered.push(*flat);
                }
            }
            if covered.is_empty() {
                continue;
            }
            content_par.sort_by(|a, b| a.partial_cmp(b).unwrap());
            content_par.dedup();
            // 1+1 feasibility in the ∥-plane; the ⊥ spread tightens the
            // required depth: 3D containment at depth m needs 2D depth
            // m + w_eff.
            let margin = opts.margin_cells * h + w_eff;
            let (ok, _) = two_cone_feasible_1p1(&content_par, margin, view.apex_window);
            if ok {
                for f in covered {
                    removed[f] = true;
                }
            }
        }
    }
    let mut out = g.clone();
    out.primitives = None;
    let flat = out.mask.as_slice_mut().expect("contiguous");
    for (i, r) in removed.iter().enumerate() {
        if *r {
            flat[i] = false;
        }
    }
    Ok(out)
}

/// One application of r̃_W: remove the suitable sets
/// N = slab ∩ (b + Ĩ) with G∩slab ⊆ b + V̄ and one of G∩slab∩(b+Ĩ_±) empty.
pub fn r_tilde_step(g: &Region, w: &WedgeFrame, opts: &ReductionOptions) -> Result<Region> {
    let view = frame_view(g, w)?;
    let h = view.h;
    let dim = g.grid.dim();
    // b-lattice: coarse sub-lattice of the grid.
    let mut b_candidates: Vec<Vec<f64>> = Vec::new();
    {
        let stride = opts.band_stride.max(1);
        let mut idx = vec![0usize; dim];
        'outer: loop {
            b_candidates.push((0..dim).map(|a| g.grid.coord(a, idx[a])).collect());
            for a in (0..dim).rev() {
                idx[a] += stride;
                if idx[a] < g.grid.counts[a] {
                    continue 'outer;
                }
                idx[a] = 0;
                if a == 0 {
                    break 'outer;
                }
            }
        }
    }
    let points: Vec<(usize, Vec<f64>, Vec<f64>)> = view
        .cells
        .iter()
        .map(|(flat, _, _, perp)| (*flat, g.grid.point(*flat), perp.clone()))
        .collect();
    let mut removed = vec![false; g.grid.cell_count()];
    for center in perp_centers(&view) {
        for &r in &opts.radii_cells {
            let cover_r = r as f64 * h + 1e-9;
            let content_r = (r + 1) as f64 * h + 1e-9;
            // Slab content (dilated) and covered cells.
            let mut content: Vec<&(usize, Vec<f64>, Vec<f64>)> = Vec::new();
            let mut covered: Vec<(usize, Vec<f64>)> = Vec::new();
            for entry in &points {
                let dist = entry
                    .2
                    .iter()
                    .zip(&center)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                if dist <= content_r {
                    content.push(entry);
                }
                if dist <= cover_r {
                    covered.push((entry.0, entry.1.clone()));
                }
            }
            if covered.is_empty() {
                continue;
            }
            for b in &b_candidates {
                // (a): all slab content inside b + V̄.
                let all_in_vbar = content.iter().all(|(_, p, _)| {
                    let y: Vec<f64> = p.iter().zip(b).map(|(a, c)| a - c).collect();
                    mink(&y, &y) >= 0.0
                });
                if !all_in_vbar {
                    continue;
                }
                for &m_cells in &opts.band_radii_cells {
                    let m_val = m_cells as f64 * h;
                    // (b): one of the band signs must be empty (checked on
                    // the dilated interval for honesty).
                    let occupied_sign = |sign: f64| -> bool {
                        content.iter().any(|(_, p, _)| {
                            let y: Vec<f64> = p.iter().zip(b).map(|(a, c)| a - c).collect();
                            let m2 = mink(&y, &y);
                            sign * y[0] > 0.0 && m2 >= 0.0 && m2 < (m_val + h) * (m_val + h)
                        })
                    };
                    let plus_occ = occupied_sign(1.0);
                    let minus_occ = occupied_sign(-1.0);
                    if plus_occ && minus_occ {
                        continue;
                    }
                    // Remove covered cells inside the (shrunk) band.
                    let shrunk = (m_val - opts.margin_cells * h).max(0.0);
                    for (flat, p) in &covered {
                        let y: Vec<f64> = p.iter().zip(b).map(|(a, c)| a - c).collect();
                        let m2 = mink(&y, &y);
                        if m2 >= 0.0 && m2 < shrunk * shrunk {
                            removed[*flat] = true;
                        }
                    }
                }
            }
        }
    }
    let mut out = g.clone();
    out.primitives = None;
    let flat = out.mask.as_slice_mut().expect("contiguous");
    for (i, r) in removed.iter().enumerate() {
        if *r {
            flat[i] = false;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionMode {
    Plain,
    Tilde,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixpointTrace {
    /// Cell counts per iterate, starting with the input.
    pub cell_counts: Vec<usize>,
    pub iterations: usize,
    pub converged: bool,
}

impl FixpointTrace {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iteration,cell_count\n");
        for (i, c) in self.cell_counts.iter().enumerate() {
            out.push_str(&format!("{i},{c}\n"));
        }
        out
    }
}

/// Iterate G ↦ ∩_W r_W(G) (or r̃_W) to the fixed point.
pub fn r_fixpoint(
    g: &Region,
    wedges: &[WedgeFrame],
    mode: ReductionMode,
    opts: &ReductionOptions,
    cap: usize,
) -> Result<(Region, FixpointTrace)> {
    if wedges.is_empty() {
        return Err(JldError::Input("empty wedge collection".into()));
    }
    let mut current = g.clone();
    let mut counts = vec![current.cell_count()];
    let mut converged = false;
    let mut iterations = 0;
    for _ in 0..cap {
        let mut next: Option<Region> = None;
        for w in wedges {
            let reduced = match mode {
                ReductionMode::Plain => r_w_step(&current, w, opts)?,
                ReductionMode::Tilde => r_tilde_step(&current, w, opts)?,
            };
            next = Some(match next {
                None => reduced,
                Some(acc) => acc.intersect(&reduced),
            });
        }
        let next = next.expect("nonempty wedge list");
        iterations += 1;
        let stable = next.mask == current.mask;
        counts.push(next.cell_count());
        current = next;
        if stable {
            converged = true;
            break;
        }
    }
    Ok((
        current,
        FixpointTrace {
            cell_counts: counts,
            iterations,
            converged,
        },
    ))
}
