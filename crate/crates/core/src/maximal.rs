//! Maximal operators on shifted dyadic grids, and the grand maximal
//! operator of a sublinear operator.

use rayon::prelude::*;

use crate::error::{param, Error, Result};
use crate::grid::{CellBox, CubeSums, DyadicCube, Geometry, GridFunction, ShiftedGridFamily};
use crate::orlicz::{luxemburg_of_samples, OrliczParams};
use crate::weights::cube_family;

/// A set of cells on which the input of an operator is kept.
#[derive(Clone, Debug, PartialEq)]
pub enum CellSet {
    All,
    Inside(CellBox),
    Outside(CellBox),
    Mask(Vec<bool>),
}

impl CellSet {
    pub fn contains(&self, geom: &Geometry, idx: usize) -> bool {
        match self {
            CellSet::All => true,
            CellSet::Inside(b) => b.contains_coords(geom.cell_coords(idx)),
            CellSet::Outside(b) => !b.contains_coords(geom.cell_coords(idx)),
            CellSet::Mask(m) => m[idx],
        }
    }

    /// `f χ_S`.
    pub fn restrict(&self, f: &GridFunction) -> GridFunction {
        let g = *f.geometry();
        let mut out = f.clone();
        for (i, v) in out.values_mut().iter_mut().enumerate() {
            if !self.contains(&g, i) {
                *v = 0.0;
            }
        }
        out
    }
}

/// An operator evaluated on cell-resolved inputs: `x ↦ T(f χ_S)(x)`.
///
/// Sublinearity is assumed, not checked.
pub trait SublinearOperator: Sync {
    fn geometry(&self) -> &Geometry;

    /// `T(f χ_S)` at the cells of `targets`, in the layout order of `targets`.
    fn apply_on(&self, f: &GridFunction, source: &CellSet, targets: &CellBox) -> Result<Vec<f64>>;

    fn apply(&self, f: &GridFunction, source: &CellSet) -> Result<GridFunction> {
        let whole = self.geometry().whole();
        GridFunction::new(*self.geometry(), self.apply_on(f, source, &whole)?)
    }

    /// Declared `L^q` boundedness; informational.
    fn lq_bounded(&self) -> bool {
        true
    }

    /// Rough cost of one evaluation from `sources` cells to `targets` cells.
    fn cost(&self, sources: usize, targets: usize) -> f64 {
        sources as f64 * targets as f64
    }
}

/// `T f(x) = m(x) f(x)`.
#[derive(Clone, Debug)]
pub struct Multiplier {
    pub factor: GridFunction,
}

impl SublinearOperator for Multiplier {
    fn geometry(&self) -> &Geometry {
        self.factor.geometry()
    }

    fn apply_on(&self, f: &GridFunction, source: &CellSet, targets: &CellBox) -> Result<Vec<f64>> {
        self.factor.check_same(f)?;
        let g = *f.geometry();
        let mut out = Vec::with_capacity(targets.cell_count());
        targets.for_each_index(&g, |i| {
            let v = if source.contains(&g, i) { self.factor.values()[i] * f.values()[i] } else { 0.0 };
            out.push(v);
        });
        Ok(out)
    }

    fn cost(&self, _sources: usize, targets: usize) -> f64 {
        targets as f64
    }
}

/// Raise `out` to `value` on every cell of `cells`.
fn raise(out: &mut [f64], geom: &Geometry, cells: &CellBox, value: f64) {
    cells.for_each_index(geom, |i| {
        if out[i] < value {
            out[i] = value;
        }
    });
}

fn check_grid(geom: &Geometry, grid: u8) -> Result<()> {
    if grid as usize >= geom.family().grid_count() {
        return param(format!("grid {grid} does not exist in dimension {}", geom.dim()));
    }
    Ok(())
}

/// Per-cell maximum of the cube means of one grid, over all levels.
fn grid_mean_max(sums: &CubeSums, grid: u8) -> Vec<f64> {
    let fam = sums.family();
    let geom = *fam.geometry();
    let mut out = vec![0.0; geom.cell_count()];
    for level in 0..=geom.depth() {
        let vol = fam.side_cells(level).pow(geom.dim() as u32) as f64;
        for (cube, s) in fam.cubes(grid, level).iter().zip(sums.level(grid, level)) {
            let cells = fam.cells(cube).expect("family cube");
            raise(&mut out, &geom, &cells, s / vol);
        }
    }
    out
}

/// `M_D f(x) = sup_{Q ∋ x, Q ∈ D} ⟨|f|⟩_Q` for one grid of the family.
pub fn dyadic_maximal(f: &GridFunction, grid: u8) -> Result<GridFunction> {
    check_grid(f.geometry(), grid)?;
    let sums = CubeSums::new(&f.abs());
    GridFunction::new(*f.geometry(), grid_mean_max(&sums, grid))
}

/// Maximum of the dyadic maximal functions of all shifted grids.
pub fn shifted_maximal(f: &GridFunction) -> GridFunction {
    let sums = CubeSums::new(&f.abs());
    let fam = f.geometry().family();
    let parts: Vec<Vec<f64>> = fam.grids().collect::<Vec<_>>().par_iter().map(|&t| grid_mean_max(&sums, t)).collect();
    pointwise_max(f.geometry(), &parts)
}

fn pointwise_max(geom: &Geometry, parts: &[Vec<f64>]) -> GridFunction {
    let mut out = vec![0.0f64; geom.cell_count()];
    for p in parts {
        for (o, v) in out.iter_mut().zip(p) {
            *o = o.max(*v);
        }
    }
    GridFunction::new(*geom, out).expect("one value per cell")
}

/// Uncentered Hardy–Littlewood maximal function.
///
/// In 1-D every interval with cell endpoints is searched; in 2-D the
/// shifted dyadic maximal function stands in for it.
pub fn hl_maximal(f: &GridFunction) -> GridFunction {
    let g = *f.geometry();
    if g.dim() == 2 {
        return shifted_maximal(f);
    }
    let n = g.cells_per_axis();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    for v in f.values() {
        prefix.push(prefix.last().unwrap() + v.abs());
    }
    // For each left end a: best(x) = max over b > x of mean(a..b).
    let out = (0..n)
        .into_par_iter()
        .fold(
            || vec![0.0f64; n],
            |mut acc, a| {
                let mut best = 0.0f64;
                for b in (a + 1..=n).rev() {
                    let m = (prefix[b] - prefix[a]) / (b - a) as f64;
                    best = best.max(m);
                    let x = b - 1;
                    if acc[x] < best {
                        acc[x] = best;
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0.0f64; n],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x = x.max(y);
                }
                a
            },
        );
    GridFunction::new(g, out).expect("one value per cell")
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return param(format!("δ must lie in (0,1), got {delta}"));
    }
    Ok(())
}

/// `M_{D,δ} f = (M_D |f|^δ)^{1/δ}`.
pub fn m_delta(f: &GridFunction, grid: u8, delta: f64) -> Result<GridFunction> {
    check_delta(delta)?;
    Ok(dyadic_maximal(&f.map(|v| v.abs().powf(delta)), grid)?.map(|v| v.powf(1.0 / delta)))
}

/// Mean absolute deviation from a median over a sample set.
fn median_deviation(samples: &mut [f64]) -> f64 {
    let n = samples.len();
    let mid = (n - 1) / 2;
    let (_, med, _) = samples.select_nth_unstable_by(mid, |a, b| a.total_cmp(b));
    let med = *med;
    samples.iter().map(|v| (v - med).abs()).sum::<f64>() / n as f64
}

/// `M^♯_D f(x) = sup_{Q ∋ x} inf_c ⟨|f - c|⟩_Q`, the infimum attained at a median.
pub fn sharp_maximal(f: &GridFunction, grid: u8) -> Result<GridFunction> {
    let geom = *f.geometry();
    check_grid(&geom, grid)?;
    let fam = geom.family();
    let mut out = vec![0.0; geom.cell_count()];
    for level in 0..geom.depth() {
        for cube in fam.cubes(grid, level) {
            let cells = fam.cells(&cube)?;
            let mut s = f.samples_in(&cells);
            let dev = median_deviation(&mut s);
            raise(&mut out, &geom, &cells, dev);
        }
    }
    GridFunction::new(geom, out)
}

/// `M^♯_{D,δ} f = (M^♯_D |f|^δ)^{1/δ}`.
pub fn sharp_maximal_delta(f: &GridFunction, grid: u8, delta: f64) -> Result<GridFunction> {
    check_delta(delta)?;
    Ok(sharp_maximal(&f.map(|v| v.abs().powf(delta)), grid)?.map(|v| v.powf(1.0 / delta)))
}

/// `M_{L(log L)^β} f(x)`: sup of Luxemburg norms over shifted-grid cubes containing `x`.
pub fn orlicz_maximal(f: &GridFunction, params: &OrliczParams) -> Result<GridFunction> {
    let geom = *f.geometry();
    let fam = geom.family();
    let cubes = cube_family(&geom, geom.depth());
    let norms: Vec<f64> = cubes
        .par_iter()
        .map(|c| {
            let cells = fam.cells(c).expect("family cube");
            luxemburg_of_samples(&f.samples_in(&cells), params)
        })
        .collect::<Result<_>>()?;
    let mut out = vec![0.0; geom.cell_count()];
    for (c, v) in cubes.iter().zip(norms) {
        raise(&mut out, &geom, &fam.cells(c)?, v);
    }
    GridFunction::new(geom, out)
}

/// `M² f`: `M_D(M_D f)` within each grid, then the maximum over grids.
pub fn iterated_maximal(f: &GridFunction) -> Result<GridFunction> {
    let geom = *f.geometry();
    let parts: Vec<Vec<f64>> = geom
        .family()
        .grids()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&t| dyadic_maximal(&dyadic_maximal(f, t)?, t).map(GridFunction::into_values))
        .collect::<Result<_>>()?;
    Ok(pointwise_max(&geom, &parts))
}

/// Cube family bound and cost guard for the grand maximal operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrandMaximalConfig {
    /// Finest level of the cubes `Q`.
    pub depth: u32,
    /// Largest accepted total cost, in operator-cost units.
    pub budget: f64,
}

impl GrandMaximalConfig {
    pub fn new(depth: u32) -> Self {
        Self { depth, budget: 5e10 }
    }
}

fn support_box(f: &GridFunction) -> Option<CellBox> {
    let g = f.geometry();
    let mut lo = [usize::MAX; 2];
    let mut hi = [0usize; 2];
    let mut any = false;
    for (i, v) in f.values().iter().enumerate() {
        if *v != 0.0 {
            any = true;
            let c = g.cell_coords(i);
            for a in 0..2 {
                lo[a] = lo[a].min(c[a]);
                hi[a] = hi[a].max(c[a] + 1);
            }
        }
    }
    any.then(|| CellBox::new(g.dim(), lo, [hi[0] - lo[0], hi[1] - lo[1]]))
}

/// `sup_{ξ ∈ Q} |T(f χ_{(3Q)^c})(ξ)|` for one cube.
fn cube_value<T: SublinearOperator + ?Sized>(
    op: &T,
    f: &GridFunction,
    fam: &ShiftedGridFamily,
    support: &CellBox,
    cube: &DyadicCube,
) -> Result<f64> {
    let cells = fam.cells(cube)?;
    let triple = cells.triple_clipped(fam.geometry().cells_per_axis());
    if triple.contains_box(support) {
        return Ok(0.0);
    }
    let vals = op.apply_on(f, &CellSet::Outside(triple), &cells)?;
    Ok(vals.iter().fold(0.0f64, |m, v| m.max(v.abs())))
}

fn check_budget<T: SublinearOperator + ?Sized>(
    op: &T,
    cubes: &[DyadicCube],
    fam: &ShiftedGridFamily,
    support: &CellBox,
    budget: f64,
) -> Result<()> {
    let cost: f64 =
        cubes.iter().map(|c| op.cost(support.cell_count(), fam.cells(c).map(|b| b.cell_count()).unwrap_or(0))).sum();
    if cost > budget {
        return Err(Error::Budget(format!("grand maximal cost {cost:.3e} exceeds the budget {budget:.3e}")));
    }
    Ok(())
}

/// `M_T f(x) = sup_{Q ∋ x} ess sup_{ξ ∈ Q} |T(f χ_{(3Q)^c})(ξ)|` over the
/// shifted-grid cubes of level `<= config.depth`, `3Q` clipped to the box.
pub fn grand_maximal<T: SublinearOperator + ?Sized>(
    op: &T,
    f: &GridFunction,
    config: &GrandMaximalConfig,
) -> Result<GridFunction> {
    let geom = *f.geometry();
    if config.depth > geom.depth() {
        return param(format!("depth {} exceeds the grid depth {}", config.depth, geom.depth()));
    }
    let Some(support) = support_box(f) else {
        return Ok(GridFunction::zeros(geom));
    };
    let fam = geom.family();
    let cubes = cube_family(&geom, config.depth);
    check_budget(op, &cubes, &fam, &support, config.budget)?;
    let values: Vec<f64> = cubes.par_iter().map(|c| cube_value(op, f, &fam, &support, c)).collect::<Result<_>>()?;
    let mut out = vec![0.0; geom.cell_count()];
    for (c, v) in cubes.iter().zip(values) {
        raise(&mut out, &geom, &fam.cells(c)?, v);
    }
    GridFunction::new(geom, out)
}

/// [`grand_maximal`] restricted to the cells of `region`: only cubes
/// meeting `region` are visited, and the result is zero elsewhere.
pub fn grand_maximal_on<T: SublinearOperator + ?Sized>(
    op: &T,
    f: &GridFunction,
    region: &CellBox,
    config: &GrandMaximalConfig,
) -> Result<GridFunction> {
    let geom = *f.geometry();
    if config.depth > geom.depth() {
        return param(format!("depth {} exceeds the grid depth {}", config.depth, geom.depth()));
    }
    let Some(support) = support_box(f) else {
        return Ok(GridFunction::zeros(geom));
    };
    let fam = geom.family();
    let cubes: Vec<DyadicCube> =
        fam.grids().flat_map(|t| (0..=config.depth).flat_map(move |k| fam.cubes_meeting(t, k, region))).collect();
    check_budget(op, &cubes, &fam, &support, config.budget)?;
    let values: Vec<f64> = cubes.par_iter().map(|c| cube_value(op, f, &fam, &support, c)).collect::<Result<_>>()?;
    let mut out = vec![0.0; geom.cell_count()];
    for (c, v) in cubes.iter().zip(values) {
        if let Some(meet) = fam.cells(c)?.intersection(region) {
            raise(&mut out, &geom, &meet, v);
        }
    }
    GridFunction::new(geom, out)
}
