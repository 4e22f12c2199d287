use super::Geometry;
use crate::error::{Error, Result};

/// Covering guarantee of the shifted family: `ℓ(Q') <= 6 ℓ(Q)`.
pub const MAX_COVER_RATIO: f64 = 6.0;

/// A half-open rectangle of cells, `[lo, lo + len)` per axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CellBox {
    dim: usize,
    lo: [usize; 2],
    len: [usize; 2],
}

impl CellBox {
    pub fn new(dim: usize, lo: [usize; 2], len: [usize; 2]) -> Self {
        let mut len = len;
        let mut lo = lo;
        if dim == 1 {
            lo[1] = 0;
            len[1] = 1;
        }
        Self { dim, lo, len }
    }

    pub fn cube(dim: usize, lo: [usize; 2], side: usize) -> Self {
        Self::new(dim, lo, [side, side])
    }

    pub fn single(dim: usize, coords: [usize; 2]) -> Self {
        Self::cube(dim, coords, 1)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lo(&self) -> [usize; 2] {
        self.lo
    }

    pub fn len(&self) -> [usize; 2] {
        self.len
    }

    /// Side length in cells of the first axis.
    pub fn side(&self) -> usize {
        self.len[0]
    }

    pub fn hi(&self, axis: usize) -> usize {
        self.lo[axis] + self.len[axis]
    }

    pub fn cell_count(&self) -> usize {
        self.len[0] * self.len[1]
    }

    pub fn is_empty(&self) -> bool {
        self.cell_count() == 0
    }

    pub fn contains_coords(&self, c: [usize; 2]) -> bool {
        (0..self.dim).all(|a| c[a] >= self.lo[a] && c[a] < self.hi(a))
    }

    pub fn contains_box(&self, other: &CellBox) -> bool {
        (0..self.dim).all(|a| other.lo[a] >= self.lo[a] && other.hi(a) <= self.hi(a))
    }

    pub fn intersects(&self, other: &CellBox) -> bool {
        (0..self.dim).all(|a| other.lo[a] < self.hi(a) && self.lo[a] < other.hi(a))
    }

    pub fn intersection(&self, other: &CellBox) -> Option<CellBox> {
        if !self.intersects(other) {
            return None;
        }
        let mut lo = [0; 2];
        let mut len = [1; 2];
        for a in 0..self.dim {
            lo[a] = self.lo[a].max(other.lo[a]);
            len[a] = self.hi(a).min(other.hi(a)) - lo[a];
        }
        Some(CellBox::new(self.dim, lo, len))
    }

    /// The concentric dilation by 3 (each side grows by `len` on both ends),
    /// clipped to `[0, n)` per axis.
    pub fn triple_clipped(&self, n: usize) -> CellBox {
        let mut lo = [0; 2];
        let mut len = [1; 2];
        for a in 0..self.dim {
            let l = self.lo[a].saturating_sub(self.len[a]);
            let h = (self.hi(a) + self.len[a]).min(n);
            lo[a] = l;
            len[a] = h - l;
        }
        CellBox::new(self.dim, lo, len)
    }

    pub fn for_each_index(&self, geom: &Geometry, mut f: impl FnMut(usize)) {
        if self.dim == 1 {
            (self.lo[0]..self.hi(0)).for_each(f);
        } else {
            let n = geom.cells_per_axis();
            for y in self.lo[1]..self.hi(1) {
                let row = y * n;
                for x in self.lo[0]..self.hi(0) {
                    f(row + x);
                }
            }
        }
    }

    pub fn indices(&self, geom: &Geometry) -> Vec<usize> {
        let mut v = Vec::with_capacity(self.cell_count());
        self.for_each_index(geom, |i| v.push(i));
        v
    }
}

/// A cube `lower_t + 2^{-level} L (j + [0,1)^n)` of shifted grid `grid`.
///
/// `grid` encodes one shift digit in `{0,1,2}` per axis (base 3, first axis
/// least significant); grid 0 is the standard dyadic grid of the box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct DyadicCube {
    pub grid: u8,
    pub level: u32,
    pub index: [i64; 2],
}

impl DyadicCube {
    pub fn new(grid: u8, level: u32, index: &[i64]) -> Self {
        let mut idx = [0; 2];
        idx[..index.len()].copy_from_slice(index);
        Self { grid, level, index: idx }
    }

    /// A cube of the standard grid.
    pub fn standard(level: u32, index: &[i64]) -> Self {
        Self::new(0, level, index)
    }

    /// Level-major, then grid, then row-major index. Used for byte-stable output.
    pub fn sort_key(&self) -> (u32, u8, i64, i64) {
        (self.level, self.grid, self.index[1], self.index[0])
    }
}

/// The `3^n` shifted dyadic grids of a geometry.
///
/// Grid `t` is the standard dyadic grid translated by `round(t_a N / 3)`
/// cells along axis `a`, restricted to cubes lying inside the box. The
/// translation is constant across levels, so each grid stays nested.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShiftedGridFamily {
    geom: Geometry,
    shifts: [usize; 3],
}

impl ShiftedGridFamily {
    pub fn new(geom: Geometry) -> Self {
        let n = geom.cells_per_axis();
        let third = |k: usize| ((k * n) as f64 / 3.0).round() as usize % n.max(1);
        Self { geom, shifts: [0, third(1), third(2)] }
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geom
    }

    pub fn grid_count(&self) -> usize {
        3usize.pow(self.geom.dim() as u32)
    }

    pub fn grids(&self) -> impl Iterator<Item = u8> {
        0..self.grid_count() as u8
    }

    /// Translation of `grid` along `axis`, in cells.
    pub fn shift(&self, grid: u8, axis: usize) -> usize {
        let digit = (grid as usize / 3usize.pow(axis as u32)) % 3;
        self.shifts[digit]
    }

    pub fn side_cells(&self, level: u32) -> usize {
        self.geom.cells_per_axis() >> level
    }

    /// Cell coordinate of the first in-box cube boundary at `level`.
    pub fn level_offset(&self, grid: u8, axis: usize, level: u32) -> usize {
        self.shift(grid, axis) % self.side_cells(level)
    }

    /// Number of in-box cubes of `grid` at `level` along `axis`.
    pub fn count(&self, grid: u8, axis: usize, level: u32) -> usize {
        let s = self.side_cells(level);
        (self.geom.cells_per_axis() - self.level_offset(grid, axis, level)) / s
    }

    fn check_grid_level(&self, grid: u8, level: u32) -> Result<()> {
        if grid as usize >= self.grid_count() {
            return Err(Error::Alignment(format!("grid {grid} does not exist in dimension {}", self.geom.dim())));
        }
        if level > self.geom.depth() {
            return Err(Error::Alignment(format!("level {level} is finer than the grid depth {}", self.geom.depth())));
        }
        Ok(())
    }

    /// Cell range of a cube; fails when the cube is finer than a cell or
    /// not inside the box.
    pub fn cells(&self, cube: &DyadicCube) -> Result<CellBox> {
        self.check_grid_level(cube.grid, cube.level)?;
        let dim = self.geom.dim();
        let s = self.side_cells(cube.level);
        let mut lo = [0usize; 2];
        for (a, &j) in cube.index.iter().enumerate() {
            if a >= dim {
                if j != 0 {
                    return Err(Error::Alignment(format!("{cube:?} has an index on an absent axis")));
                }
                continue;
            }
            if j < 0 || j as usize >= self.count(cube.grid, a, cube.level) {
                return Err(Error::Alignment(format!("{cube:?} lies outside the box")));
            }
            lo[a] = self.level_offset(cube.grid, a, cube.level) + j as usize * s;
        }
        Ok(CellBox::cube(dim, lo, s))
    }

    /// The cube of `grid` at `level` containing a cell, if it lies in the box.
    pub fn containing(&self, grid: u8, level: u32, coords: [usize; 2]) -> Option<DyadicCube> {
        let s = self.side_cells(level);
        let mut index = [0i64; 2];
        for (a, slot) in index.iter_mut().enumerate().take(self.geom.dim()) {
            let off = self.level_offset(grid, a, level);
            if coords[a] < off {
                return None;
            }
            let j = (coords[a] - off) / s;
            if j >= self.count(grid, a, level) {
                return None;
            }
            *slot = j as i64;
        }
        Some(DyadicCube { grid, level, index })
    }

    /// All in-box cubes of one grid and level, row-major.
    pub fn cubes(&self, grid: u8, level: u32) -> Vec<DyadicCube> {
        let c0 = self.count(grid, 0, level);
        let c1 = if self.geom.dim() == 2 { self.count(grid, 1, level) } else { 1 };
        let mut out = Vec::with_capacity(c0 * c1);
        for j1 in 0..c1 {
            for j0 in 0..c0 {
                out.push(DyadicCube { grid, level, index: [j0 as i64, j1 as i64] });
            }
        }
        out
    }

    /// In-box cubes of one grid and level meeting a cell range.
    pub fn cubes_meeting(&self, grid: u8, level: u32, region: &CellBox) -> Vec<DyadicCube> {
        let dim = self.geom.dim();
        let s = self.side_cells(level);
        let mut ranges = [(0usize, 1usize); 2];
        for (a, r) in ranges.iter_mut().enumerate().take(dim) {
            let off = self.level_offset(grid, a, level);
            let count = self.count(grid, a, level);
            if count == 0 || region.hi(a) <= off {
                return Vec::new();
            }
            let first = region.lo()[a].saturating_sub(off) / s;
            let last = ((region.hi(a) - 1 - off.min(region.hi(a) - 1)) / s).min(count - 1);
            if region.hi(a) - 1 < off || first > last {
                return Vec::new();
            }
            *r = (first, last + 1);
        }
        let mut out = Vec::new();
        for j1 in ranges[1].0..ranges[1].1 {
            for j0 in ranges[0].0..ranges[0].1 {
                out.push(DyadicCube { grid, level, index: [j0 as i64, j1 as i64] });
            }
        }
        out
    }

    pub fn children(&self, cube: &DyadicCube) -> Result<Vec<DyadicCube>> {
        let cells = self.cells(cube)?;
        if cube.level >= self.geom.depth() {
            return Ok(Vec::new());
        }
        let child_level = cube.level + 1;
        let half = cells.side() / 2;
        let dim = self.geom.dim();
        let mut out = Vec::with_capacity(1 << dim);
        let offsets: &[[usize; 2]] = if dim == 1 { &[[0, 0], [1, 0]] } else { &[[0, 0], [1, 0], [0, 1], [1, 1]] };
        for o in offsets {
            let c = [cells.lo()[0] + o[0] * half, cells.lo()[1] + o[1] * half];
            let child = self.containing(cube.grid, child_level, c).expect("children of an in-box cube are in the box");
            out.push(child);
        }
        Ok(out)
    }

    /// Smallest family cube containing the real cube `lower + [0, side)^n`
    /// with side ratio at most [`MAX_COVER_RATIO`].
    ///
    /// The cube must lie in the box, have `side <= L/6`, and be resolvable:
    /// cubes narrower than two cells straddling a cell boundary cannot be
    /// covered within the ratio.
    pub fn covering_cube(&self, lower: &[f64], side: f64) -> Result<DyadicCube> {
        let dim = self.geom.dim();
        let bx = self.geom.grid_box();
        if lower.len() != dim {
            return Err(Error::Coverage(format!("expected {dim} coordinates")));
        }
        if !(side > 0.0) || side > bx.side() / MAX_COVER_RATIO * (1.0 + 1e-12) {
            return Err(Error::Coverage(format!("side {side} must lie in (0, L/6] with L = {}", bx.side())));
        }
        let h = self.geom.cell_width();
        let slack = 1e-9;
        let mut a = [0.0f64; 2];
        for ax in 0..dim {
            a[ax] = (lower[ax] - bx.lower()[ax]) / h;
            if a[ax] < -slack || a[ax] + side / h > self.geom.cells_per_axis() as f64 + slack {
                return Err(Error::Coverage("cube is not inside the box".into()));
            }
        }
        let ell = side / h;
        for level in (0..=self.geom.depth()).rev() {
            let s = self.side_cells(level) as f64;
            if s + slack < ell {
                continue;
            }
            if s > MAX_COVER_RATIO * ell * (1.0 + 1e-12) {
                break;
            }
            'grids: for grid in self.grids() {
                let mut index = [0i64; 2];
                for ax in 0..dim {
                    let off = self.level_offset(grid, ax, level) as f64;
                    let rel = a[ax] - off;
                    if rel < -slack {
                        continue 'grids;
                    }
                    let j = (rel / s + slack / s).floor().max(0.0);
                    if j as usize >= self.count(grid, ax, level) {
                        continue 'grids;
                    }
                    let lo = off + j * s;
                    if a[ax] + ell > lo + s + slack {
                        continue 'grids;
                    }
                    index[ax] = j as i64;
                }
                return Ok(DyadicCube { grid, level, index });
            }
        }
        Err(Error::Coverage(format!(
            "no family cube of side <= {MAX_COVER_RATIO}·{side} contains the cube at {lower:?}"
        )))
    }
}
