use lab_jld::*;
use std::collections::BTreeMap;

fn main() {
    let n = 49usize;
    let h = 0.25f64;
    let inf = f64::INFINITY;
    let grid = MinkowskiGrid::symmetric(&[n, n, n], &[h, h, h]).unwrap();
    let prims = vec![
        Primitive::HalflineCone { base: vec![1.0, 2.0, 0.0], axis: 2, t_min: 0.0, t_max: inf, sign: 1 },
        Primitive::HalflineCone { base: vec![-1.0, 2.0, 0.0], axis: 2, t_min: 0.0, t_max: inf, sign: -1 },
        Primitive::HalflineCone { base: vec![1.0, -2.0, 0.0], axis: 2, t_min: -inf, t_max: 0.0, sign: 1 },
        Primitive::HalflineCone { base: vec![-1.0, -2.0, 0.0], axis: 2, t_min: -inf, t_max: 0.0, sign: -1 },
        Primitive::HalflineCone { base: vec![3.0, 0.0, 0.0], axis: 2, t_min: -inf, t_max: inf, sign: 1 },
        Primitive::HalflineCone { base: vec![-3.0, 0.0, 0.0], axis: 2, t_min: -inf, t_max: inf, sign: -1 },
    ];
    let scene = Scene { grid: grid.clone(), primitives: prims, ops: None };
    let g = Region::rasterize(&scene).unwrap();
    println!("G: {}", g.cell_count());
    let w = WedgeFrame::new(vec![1.0,1.0,0.0], vec![-1.0,1.0,0.0], vec![0.0;3]).unwrap();
    let r1 = r_w_step(&g, &w, &ReductionOptions::default()).unwrap();
    println!("r1: {}", r1.cell_count());
    // survivors by x2 value
    let mut by_x2: BTreeMap<i64, usize> = BTreeMap::new();
    for f in r1.occupied() {
        let p = r1.grid.point(f);
        *by_x2.entry((p[2]/h).round() as i64).or_default() += 1;
    }
    for (k, v) in &by_x2 {
        println!("x2 = {:+} cells: {}", *k as f64 * h, v);
    }
    // sample survivors at one off-plane level
    for f in r1.occupied().iter() {
        let p = r1.grid.point(*f);
        if (p[2] - 2.0*h).abs() < 1e-9 {
            println!("sample off-plane survivor: {:?}", p);
            break;
        }
    }
}
