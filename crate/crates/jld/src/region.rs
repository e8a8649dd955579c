//! Regions: boolean rasters over a grid window plus the symbolic primitives
//! that generated them.

use ndarray::ArrayD;
use serde::{Deserialize, Serialize};

use crate::error::{JldError, Result};
use crate::geometry::{mink, spatial_norm, MinkowskiGrid};

/// Symbolic region primitives (all open sets).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Primitive {
    /// apex + V₊ (sign = 1) or apex + V₋ (sign = −1).
    Cone { apex: Vec<f64>, sign: i32 },
    /// O_{a,b} = (a + V₋) ∩ (b + V₊) with a − b ∈ V₊.
    DoubleCone { a: Vec<f64>, b: Vec<f64> },
    /// w + W_{k₊,k₋}.
    Wedge {
        k_plus: Vec<f64>,
        k_minus: Vec<f64>,
        #[serde(default)]
        offset: Option<Vec<f64>>,
    },
    /// {base + t·e_axis | t ∈ (t_min, t_max)} ± C, with C the 2D light cone
    /// in the (x⁰, x¹) plane: the §D.3 half-line cones.
    HalflineCone {
        base: Vec<f64>,
        axis: usize,
        t_min: f64,
        t_max: f64,
        sign: i32,
    },
}

impl Primitive {
    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        match self {
            Primitive::Cone { apex, sign } => {
                if apex.len() != x.len() {
                    return Err(JldError::Parse("cone apex dimension mismatch".into()));
                }
                let y: Vec<f64> = x.iter().zip(apex).map(|(a, b)| a - b).collect();
                Ok(*sign as f64 * y[0] > spatial_norm(&y))
            }
            Primitive::DoubleCone { a, b } => {
                if a.len() != x.len() || b.len() != x.len() {
                    return Err(JldError::Parse("double cone dimension mismatch".into()));
                }
                let ya: Vec<f64> = a.iter().zip(x).map(|(p, q)| p - q).collect();
                let yb: Vec<f64> = x.iter().zip(b).map(|(p, q)| p - q).collect();
                Ok(ya[0] > spatial_norm(&ya) && yb[0] > spatial_norm(&yb))
            }
            Primitive::Wedge {
                k_plus,
                k_minus,
                offset,
            } => {
                if k_plus.len() != x.len() || k_minus.len() != x.len() {
                    return Err(JldError::Parse("wedge dimension mismatch".into()));
                }
                let zero = vec![0.0; x.len()];
                let w = offset.as_deref().unwrap_or(&zero);
                let y: Vec<f64> = x.iter().zip(w).map(|(a, b)| a - b).collect();
                Ok(mink(k_plus, &y) < 0.0 && mink(k_minus, &y) < 0.0)
            }
            Primitive::HalflineCone {
                base,
                axis,
                t_min,
                t_max,
                sign,
            } => {
                if base.len() != x.len() || *axis < 2 || *axis >= x.len() {
                    return Err(JldError::Parse(
                        "halfline cone needs a spatial line axis outside the (x⁰,x¹) plane".into(),
                    ));
                }
                // Solve for the line parameter from the line axis; all other
                // non-cone axes must match the base.
                let t = x[*axis] - base[*axis];
                if !(t > *t_min && t < *t_max) {
                    return Ok(false);
                }
                for k in 2..x.len() {
                    if k != *axis && (x[k] - base[k]).abs() > 1e-9 {
                        return Ok(false);
                    }
                }
                let d0 = x[0] - base[0];
                let d1 = x[1] - base[1];
                Ok(*sign as f64 * d0 > d1.abs())
            }
        }
    }
}

/// Boolean set expression over the primitive list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum SetExpr {
    Prim { index: usize },
    Union { args: Vec<SetExpr> },
    Intersect { args: Vec<SetExpr> },
    Complement { arg: Box<SetExpr> },
}

impl SetExpr {
    fn eval(&self, prims: &[Primitive], x: &[f64]) -> Result<bool> {
        match self {
            SetExpr::Prim { index } => prims
                .get(*index)
                .ok_or_else(|| JldError::Parse(format!("unknown primitive index {index}")))?
                .contains(x),
            SetExpr::Union { args } => {
                for a in args {
                    if a.eval(prims, x)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            SetExpr::Intersect { args } => {
                for a in args {
                    if !a.eval(prims, x)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            SetExpr::Complement { arg } => Ok(!arg.eval(prims, x)?),
        }
    }
}

/// A scene file: grid + primitives + optional op tree (default: union).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scene {
    pub grid: MinkowskiGrid,
    pub primitives: Vec<Primitive>,
    #[serde(default)]
    pub ops: Option<SetExpr>,
}

/// A rasterized region: mask plus provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub grid: MinkowskiGrid,
    pub mask: ArrayD<bool>,
    pub primitives: Option<(Vec<Primitive>, SetExpr)>,
}

impl Region {
    pub fn empty(grid: MinkowskiGrid) -> Self {
        let mask = ArrayD::from_elem(ndarray::IxDyn(&grid.counts), false);
        Self {
            grid,
            mask,
            primitives: None,
        }
    }

    pub fn from_mask(grid: MinkowskiGrid, mask: ArrayD<bool>) -> Result<Self> {
        if mask.shape() != grid.counts.as_slice() {
            return Err(JldError::Grid(format!(
                "mask shape {:?} does not match grid {:?}",
                mask.shape(),
                grid.counts
            )));
        }
        Ok(Self {
            grid,
            mask,
            primitives: None,
        })
    }

    /// Rasterize a scene.
    pub fn rasterize(scene: &Scene) -> Result<Self> {
        let expr = scene.ops.clone().unwrap_or(SetExpr::Union {
            args: (0..scene.primitives.len())
                .map(|index| SetExpr::Prim { index })
                .collect(),
        });
        let grid = scene.grid.clone();
        let mut mask = ArrayD::from_elem(ndarray::IxDyn(&grid.counts), false);
        let total = grid.cell_count();
        for flat in 0..total {
            let x = grid.point(flat);
            if expr.eval(&scene.primitives, &x)? {
                *mask
                    .as_slice_mut()
                    .expect("contiguous mask")
                    .get_mut(flat)
                    .unwrap() = true;
            }
        }
        Ok(Self {
            grid,
            mask,
            primitives: Some((scene.primitives.clone(), expr)),
        })
    }

    pub fn cell_count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_subset_of(&self, other: &Region) -> bool {
        self.mask
            .iter()
            .zip(other.mask.iter())
            .all(|(&a, &b)| !a || b)
    }

    pub fn union(&self, other: &Region) -> Region {
        let mask = ndarray::Zip::from(&self.mask)
            .and(&other.mask)
            .map_collect(|&a, &b| a || b);
        Region {
            grid: self.grid.clone(),
            mask,
            primitives: None,
        }
    }

    pub fn intersect(&self, other: &Region) -> Region {
        let mask = ndarray::Zip::from(&self.mask)
            .and(&other.mask)
            .map_collect(|&a, &b| a && b);
        Region {
            grid: self.grid.clone(),
            mask,
            primitives: None,
        }
    }

    pub fn difference(&self, other: &Region) -> Region {
        let mask = ndarray::Zip::from(&self.mask)
            .and(&other.mask)
            .map_collect(|&a, &b| a && !b);
        Region {
            grid: self.grid.clone(),
            mask,
            primitives: None,
        }
    }

    /// Cells on which the two masks differ.
    pub fn symmetric_difference_count(&self, other: &Region) -> usize {
        self.mask
            .iter()
            .zip(other.mask.iter())
            .filter(|(&a, &b)| a != b)
            .count()
    }

    /// Flat indices of all occupied cells.
    pub fn occupied(&self) -> Vec<usize> {
        self.mask
            .as_slice()
            .expect("contiguous mask")
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| if b { Some(i) } else { None })
            .collect()
    }

    /// Translate by an integer number of cells per axis (cells shifted out
    /// of the window are dropped).
    pub fn translate_cells(&self, shift: &[i64]) -> Region {
        let mut out = Region::empty(self.grid.clone());
        let dims = self.grid.counts.clone();
        for flat in self.occupied() {
            let mut rem = flat;
            let mut idx = vec![0usize; dims.len()];
            for axis in (0..dims.len()).rev() {
                idx[axis] = rem % dims[axis];
                rem /= dims[axis];
            }
            let mut ok = true;
            for axis in 0..dims.len() {
                let ni = idx[axis] as i64 + shift[axis];
                if ni < 0 || ni >= dims[axis] as i64 {
                    ok = false;
                    break;
                }
                idx[axis] = ni as usize;
            }
            if ok {
                let nf = self.grid.flat_index(&idx);
                out.mask.as_slice_mut().unwrap()[nf] = true;
            }
        }
        out
    }

    /// Portable bitmap export (P1) of a 2D mask; higher-dimensional masks
    /// export the time-major slice stack concatenated vertically.
    pub fn to_pbm(&self) -> String {
        let dims = self.grid.counts.clone();
        let (rows, cols) = match dims.len() {
            2 => (dims[0], dims[1]),
            _ => (
                dims[..dims.len() - 1].iter().product::<usize>(),
                dims[dims.len() - 1],
            ),
        };
        let mut out = format!("P1\n{cols} {rows}\n");
        let flat = self.mask.as_slice().expect("contiguous mask");
        for r in 0..rows {
            let line: Vec<&str> = (0..cols)
                .map(|c| if flat[r * cols + c] { "1" } else { "0" })
                .collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}
