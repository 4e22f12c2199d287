use rayon::prelude::*;

use crate::error::{param, Result};
use crate::grid::GridFunction;
use crate::weights::cube_family;

/// `sup_Q ⟨|g - ⟨g⟩_Q|⟩_Q` over shifted-grid cubes of level `<= depth`.
pub fn bmo_seminorm(g: &GridFunction, depth: u32) -> Result<f64> {
    let geom = *g.geometry();
    if depth > geom.depth() {
        return param(format!("depth {depth} exceeds the grid depth {}", geom.depth()));
    }
    let fam = geom.family();
    Ok(cube_family(&geom, depth)
        .par_iter()
        .map(|q| {
            let s = g.samples_in(&fam.cells(q).expect("family cube"));
            let mean = s.iter().sum::<f64>() / s.len() as f64;
            s.iter().map(|v| (v - mean).abs()).sum::<f64>() / s.len() as f64
        })
        .reduce(|| 0.0, f64::max))
}
