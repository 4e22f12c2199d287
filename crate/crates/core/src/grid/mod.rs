//! Bounded-box discretisation: grid functions, dyadic cubes and the
//! shifted dyadic families used for every supremum in the crate.
//!
//! A [`GridFunction`] stores one value per cell of a uniform mesh with
//! `2^depth` cells per axis. Values are either midpoint samples or exact
//! cell averages, and integrals are always `cell_volume * sum(values)`.
//! Outside the box every function is zero.

mod cube;
mod cz;
pub mod io;
mod sums;

pub use cube::{CellBox, DyadicCube, ShiftedGridFamily, MAX_COVER_RATIO};
pub use cz::cz_decompose;
pub use sums::{CubeSums, PrefixSums};

use crate::error::{param, Error, Result};

/// The computational domain: an axis-parallel cube in dimension 1 or 2.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GridBox {
    dim: usize,
    lower: [f64; 2],
    side: f64,
}

impl GridBox {
    pub fn new(dim: usize, lower: &[f64], side: f64) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return param(format!("dimension must be 1 or 2, got {dim}"));
        }
        if lower.len() != dim {
            return param(format!("expected {dim} lower-corner coordinates, got {}", lower.len()));
        }
        if !(side > 0.0 && side.is_finite()) || lower.iter().any(|v| !v.is_finite()) {
            return param(format!("box side must be positive and finite, got {side}"));
        }
        let mut lo = [0.0; 2];
        lo[..dim].copy_from_slice(lower);
        Ok(Self { dim, lower: lo, side })
    }

    pub fn interval(lower: f64, side: f64) -> Result<Self> {
        Self::new(1, &[lower], side)
    }

    pub fn square(lower: [f64; 2], side: f64) -> Result<Self> {
        Self::new(2, &lower, side)
    }

    /// `[0,1)^dim`.
    pub fn unit(dim: usize) -> Result<Self> {
        Self::new(dim, &vec![0.0; dim], 1.0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower[..self.dim]
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn volume(&self) -> f64 {
        self.side.powi(self.dim as i32)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        (0..self.dim).all(|a| x[a] >= self.lower[a] && x[a] < self.lower[a] + self.side)
    }
}

/// A box together with its resolution.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Geometry {
    bx: GridBox,
    depth: u32,
}

/// Largest supported depth per axis (2-D grids are capped lower, see [`Geometry::new`]).
pub const MAX_DEPTH: u32 = 24;

impl Geometry {
    pub fn new(bx: GridBox, depth: u32) -> Result<Self> {
        let cap = if bx.dim == 1 { MAX_DEPTH } else { MAX_DEPTH / 2 };
        if depth > cap {
            return param(format!("depth {depth} exceeds the cap {cap} for dimension {}", bx.dim));
        }
        Ok(Self { bx, depth })
    }

    pub fn grid_box(&self) -> &GridBox {
        &self.bx
    }

    pub fn dim(&self) -> usize {
        self.bx.dim
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Cells per axis, `2^depth`.
    pub fn cells_per_axis(&self) -> usize {
        1usize << self.depth
    }

    pub fn cell_count(&self) -> usize {
        self.cells_per_axis().pow(self.bx.dim as u32)
    }

    pub fn cell_width(&self) -> f64 {
        self.bx.side / self.cells_per_axis() as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.cell_width().powi(self.bx.dim as i32)
    }

    /// Row-major layout: the first axis varies fastest.
    pub fn cell_index(&self, coords: [usize; 2]) -> usize {
        if self.bx.dim == 1 {
            coords[0]
        } else {
            coords[1] * self.cells_per_axis() + coords[0]
        }
    }

    pub fn cell_coords(&self, idx: usize) -> [usize; 2] {
        if self.bx.dim == 1 {
            [idx, 0]
        } else {
            let n = self.cells_per_axis();
            [idx % n, idx / n]
        }
    }

    pub fn midpoint(&self, idx: usize) -> [f64; 2] {
        let c = self.cell_coords(idx);
        let h = self.cell_width();
        let mut x = [0.0; 2];
        for a in 0..self.bx.dim {
            x[a] = self.bx.lower[a] + (c[a] as f64 + 0.5) * h;
        }
        x
    }

    /// Cell containing a point of the box.
    pub fn cell_of_point(&self, x: &[f64]) -> Option<usize> {
        if !self.bx.contains(x) {
            return None;
        }
        let h = self.cell_width();
        let n = self.cells_per_axis();
        let mut c = [0usize; 2];
        for a in 0..self.bx.dim {
            c[a] = (((x[a] - self.bx.lower[a]) / h).floor() as usize).min(n - 1);
        }
        Some(self.cell_index(c))
    }

    /// The whole box as a cell range.
    pub fn whole(&self) -> CellBox {
        CellBox::cube(self.dim(), [0, 0], self.cells_per_axis())
    }

    pub fn family(&self) -> ShiftedGridFamily {
        ShiftedGridFamily::new(*self)
    }

    /// Same box, one level finer.
    pub fn refined(&self) -> Result<Self> {
        Self::new(self.bx, self.depth + 1)
    }
}

/// Real-valued samples, one per cell.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    geom: Geometry,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(geom: Geometry, values: Vec<f64>) -> Result<Self> {
        if values.len() != geom.cell_count() {
            return Err(Error::Format(format!("expected {} samples, got {}", geom.cell_count(), values.len())));
        }
        Ok(Self { geom, values })
    }

    pub fn zeros(geom: Geometry) -> Self {
        Self { geom, values: vec![0.0; geom.cell_count()] }
    }

    pub fn constant(geom: Geometry, c: f64) -> Self {
        Self { geom, values: vec![c; geom.cell_count()] }
    }

    /// Midpoint sampling of a point function.
    pub fn from_fn(geom: Geometry, f: impl Fn(&[f64]) -> f64) -> Self {
        let d = geom.dim();
        let values = (0..geom.cell_count()).map(|i| f(&geom.midpoint(i)[..d])).collect();
        Self { geom, values }
    }

    /// Exact cell averages of a 1-D function given its antiderivative.
    pub fn from_antiderivative(geom: Geometry, antiderivative: impl Fn(f64) -> f64) -> Result<Self> {
        if geom.dim() != 1 {
            return param("antiderivative construction is one-dimensional");
        }
        let h = geom.cell_width();
        let lo = geom.grid_box().lower()[0];
        let n = geom.cells_per_axis();
        let mut prev = antiderivative(lo);
        let mut values = Vec::with_capacity(n);
        for i in 0..n {
            let next = antiderivative(lo + (i + 1) as f64 * h);
            values.push((next - prev) / h);
            prev = next;
        }
        Ok(Self { geom, values })
    }

    /// Piecewise-constant function: `pieces` equal blocks per axis, each
    /// carrying one value. The same block values give the same function at
    /// every depth `>= log2(pieces)`.
    pub fn piecewise_constant(geom: Geometry, pieces: usize, block_values: &[f64]) -> Result<Self> {
        let n = geom.cells_per_axis();
        if pieces == 0 || !pieces.is_power_of_two() || pieces > n {
            return param(format!("pieces must be a power of two <= {n}, got {pieces}"));
        }
        let want = pieces.pow(geom.dim() as u32);
        if block_values.len() != want {
            return param(format!("expected {want} block values, got {}", block_values.len()));
        }
        let per = n / pieces;
        let values = (0..geom.cell_count())
            .map(|i| {
                let c = geom.cell_coords(i);
                let b = if geom.dim() == 1 { c[0] / per } else { (c[1] / per) * pieces + c[0] / per };
                block_values[b]
            })
            .collect();
        Ok(Self { geom, values })
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geom
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { geom: self.geom, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn abs(&self) -> Self {
        self.map(f64::abs)
    }

    /// Pointwise combination of two functions on the same geometry.
    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_same(other)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { geom: self.geom, values })
    }

    pub fn check_same(&self, other: &Self) -> Result<()> {
        if self.geom != other.geom {
            return param("grid functions live on different geometries");
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.geom.cell_volume()
    }

    pub fn sum_over(&self, cells: &CellBox) -> f64 {
        let mut s = 0.0;
        cells.for_each_index(&self.geom, |i| s += self.values[i]);
        s
    }

    /// Average over a cell range.
    pub fn mean_over(&self, cells: &CellBox) -> f64 {
        self.sum_over(cells) / cells.cell_count() as f64
    }

    /// Values inside a cell range, in layout order.
    pub fn samples_in(&self, cells: &CellBox) -> Vec<f64> {
        let mut out = Vec::with_capacity(cells.cell_count());
        cells.for_each_index(&self.geom, |i| out.push(self.values[i]));
        out
    }

    /// Zero outside the given cell range.
    pub fn restricted_to(&self, cells: &CellBox) -> Self {
        let mut out = Self::zeros(self.geom);
        cells.for_each_index(&self.geom, |i| out.values[i] = self.values[i]);
        out
    }

    /// The mean `|Q|^{-1} ∫_Q f` over a dyadic cube of any shifted grid.
    pub fn mean(&self, cube: &DyadicCube) -> Result<f64> {
        let cells = self.geom.family().cells(cube)?;
        Ok(self.mean_over(&cells))
    }
}

/// A finite sequence of functions on one geometry.
#[derive(Clone, Debug)]
pub struct FunctionSequence {
    items: Vec<GridFunction>,
}

impl FunctionSequence {
    pub fn new(items: Vec<GridFunction>) -> Result<Self> {
        let Some(first) = items.first() else {
            return param("a function sequence needs at least one member");
        };
        for f in &items[1..] {
            first.check_same(f)?;
        }
        Ok(Self { items })
    }

    pub fn single(f: GridFunction) -> Self {
        Self { items: vec![f] }
    }

    pub fn geometry(&self) -> &Geometry {
        self.items[0].geometry()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[GridFunction] {
        &self.items
    }

    /// Pointwise `‖{f_k(x)}‖_{ℓ^q}`; `q = ∞` gives the maximum.
    pub fn lq_norm(&self, q: f64) -> GridFunction {
        lq_combine(self.geometry(), self.items.iter().map(|f| f.values()), q)
    }
}

/// Pointwise ℓ^q norm of a family of value slices.
pub fn lq_combine<'a>(geom: &Geometry, parts: impl Iterator<Item = &'a [f64]>, q: f64) -> GridFunction {
    let mut acc = vec![0.0f64; geom.cell_count()];
    if q.is_infinite() {
        for p in parts {
            for (a, v) in acc.iter_mut().zip(p) {
                *a = a.max(v.abs());
            }
        }
    } else {
        for p in parts {
            for (a, v) in acc.iter_mut().zip(p) {
                *a += v.abs().powf(q);
            }
        }
        for a in &mut acc {
            *a = a.powf(1.0 / q);
        }
    }
    GridFunction { geom: *geom, values: acc }
}

/// ℓ^q norm of a short vector.
pub fn lq_norm_of(values: &[f64], q: f64) -> f64 {
    if q.is_infinite() {
        values.iter().fold(0.0, |m, v| m.max(v.abs()))
    } else {
        values.iter().map(|v| v.abs().powf(q)).sum::<f64>().powf(1.0 / q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(depth: u32) -> Geometry {
        Geometry::new(GridBox::unit(1).unwrap(), depth).unwrap()
    }

    #[test]
    fn mean_of_constant_and_indicator() {
        let g = unit(6);
        let f = GridFunction::constant(g, 3.0);
        let root = DyadicCube::standard(0, &[0]);
        assert_eq!(f.mean(&root).unwrap(), 3.0);
        let q = DyadicCube::standard(3, &[5]);
        assert_eq!(f.mean(&q).unwrap(), 3.0);

        let ind = GridFunction::from_fn(g, |x| if x[0] < 0.25 { 1.0 } else { 0.0 });
        assert_eq!(ind.mean(&root).unwrap(), 0.25);
    }

    #[test]
    fn midpoint_mean_of_linear_function_is_exact() {
        for depth in [1, 4, 9] {
            let f = GridFunction::from_fn(unit(depth), |x| x[0]);
            let m = f.mean(&DyadicCube::standard(0, &[0])).unwrap();
            assert!((m - 0.5).abs() < 1e-14, "depth {depth}: {m}");
        }
    }

    #[test]
    fn misaligned_cubes_are_rejected() {
        let f = GridFunction::constant(unit(3), 1.0);
        assert!(matches!(f.mean(&DyadicCube::standard(4, &[0])), Err(Error::Alignment(_))));
        assert!(matches!(f.mean(&DyadicCube::standard(2, &[4])), Err(Error::Alignment(_))));
        assert!(matches!(f.mean(&DyadicCube::standard(2, &[-1])), Err(Error::Alignment(_))));
    }

    #[test]
    fn antiderivative_gives_exact_averages() {
        let g = unit(5);
        let f = GridFunction::from_antiderivative(g, |x| x.powf(0.3) / 0.3).unwrap();
        assert!((f.integral() - 1.0 / 0.3).abs() < 1e-12);
    }

    #[test]
    fn piecewise_constant_is_depth_stable() {
        let vals = [1.0, 4.0, 0.5, 2.0];
        let a = GridFunction::piecewise_constant(unit(4), 4, &vals).unwrap();
        let b = GridFunction::piecewise_constant(unit(7), 4, &vals).unwrap();
        assert!((a.integral() - b.integral()).abs() < 1e-14);
        let g2 = Geometry::new(GridBox::unit(2).unwrap(), 3).unwrap();
        let c = GridFunction::piecewise_constant(g2, 2, &vals).unwrap();
        assert_eq!(c.values()[g2.cell_index([7, 0])], 4.0);
        assert_eq!(c.values()[g2.cell_index([0, 7])], 0.5);
    }

    #[test]
    fn lq_norms_of_sequences() {
        let g = unit(2);
        let a = GridFunction::constant(g, 3.0);
        let b = GridFunction::constant(g, -4.0);
        let seq = FunctionSequence::new(vec![a, b]).unwrap();
        assert!((seq.lq_norm(2.0).values()[0] - 5.0).abs() < 1e-14);
        assert_eq!(seq.lq_norm(f64::INFINITY).values()[1], 4.0);
    }

    #[test]
    fn bad_boxes_are_rejected() {
        assert!(GridBox::new(3, &[0.0, 0.0, 0.0], 1.0).is_err());
        assert!(GridBox::interval(0.0, -1.0).is_err());
        assert!(Geometry::new(GridBox::unit(2).unwrap(), 13).is_err());
    }
}
