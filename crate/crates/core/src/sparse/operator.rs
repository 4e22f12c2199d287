use rayon::prelude::*;

use super::family::SparseFamily;
use crate::error::{param, Result};
use crate::grid::{CellBox, FunctionSequence, Geometry, GridFunction};
use crate::maximal::{CellSet, SublinearOperator};
use crate::orlicz::{luxemburg_norm_on, OrliczParams};

/// `A_S f = Σ_{Q ∈ S} ‖f‖_{L(log L)^β, Q} χ_Q`.
pub fn sparse_operator(family: &SparseFamily, f: &GridFunction, params: &OrliczParams) -> Result<GridFunction> {
    let geom = *family.geometry();
    if f.geometry() != &geom {
        return param("function and family live on different geometries");
    }
    let norms: Vec<f64> =
        family.cubes().par_iter().map(|c| luxemburg_norm_on(f, &c.dilated, params)).collect::<Result<_>>()?;
    let mut out = vec![0.0; geom.cell_count()];
    for (c, v) in family.cubes().iter().zip(norms) {
        if v != 0.0 {
            c.dilated.for_each_index(&geom, |i| out[i] += v);
        }
    }
    GridFunction::new(geom, out)
}

/// `max_x ‖{T f_k(x)}‖_{ℓ^q} / A_S(‖{f_k}‖_{ℓ^q})(x)`: the empirical
/// domination constant. The denominator is floored at `ε · max A_S` so
/// that cells outside the family do not divide by zero.
pub fn domination_ratio<T: SublinearOperator + ?Sized>(
    op: &T,
    fs: &FunctionSequence,
    family: &SparseFamily,
    q: f64,
    params: &OrliczParams,
) -> Result<f64> {
    let images: Vec<GridFunction> = fs.items().iter().map(|f| op.apply(f, &CellSet::All)).collect::<Result<_>>()?;
    let lhs = crate::grid::lq_combine(fs.geometry(), images.iter().map(|g| g.values()), q);
    let rhs = sparse_operator(family, &fs.lq_norm(q), params)?;
    let floor = f64::EPSILON * rhs.max_abs().max(f64::MIN_POSITIVE);
    Ok(lhs.values().iter().zip(rhs.values()).fold(0.0f64, |m, (l, r)| m.max(l / r.max(floor))))
}

/// The sparse operator of a fixed family as a [`SublinearOperator`]:
/// `T f = A_S(|f χ_S|)`.
#[derive(Clone, Debug)]
pub struct SparseAveraging {
    family: SparseFamily,
    params: OrliczParams,
}

impl SparseAveraging {
    pub fn new(family: SparseFamily, params: OrliczParams) -> Self {
        Self { family, params }
    }
}

impl SublinearOperator for SparseAveraging {
    fn geometry(&self) -> &Geometry {
        self.family.geometry()
    }

    fn apply_on(&self, f: &GridFunction, source: &CellSet, targets: &CellBox) -> Result<Vec<f64>> {
        let full = sparse_operator(&self.family, &source.restrict(f).abs(), &self.params)?;
        Ok(targets.indices(self.geometry()).into_iter().map(|i| full.values()[i]).collect())
    }

    fn cost(&self, sources: usize, targets: usize) -> f64 {
        (sources * self.family.len() + targets) as f64
    }
}
