use super::CellBox;
use super::{DyadicCube, GridFunction, ShiftedGridFamily};

/// Summed-area table for O(1) sums over arbitrary cell rectangles.
#[derive(Clone, Debug)]
pub struct PrefixSums {
    dim: usize,
    n: usize,
    table: Vec<f64>,
}

impl PrefixSums {
    pub fn new(f: &GridFunction) -> Self {
        Self::from_values(f.geometry().dim(), f.geometry().cells_per_axis(), f.values())
    }

    pub fn from_values(dim: usize, n: usize, values: &[f64]) -> Self {
        if dim == 1 {
            let mut table = Vec::with_capacity(n + 1);
            table.push(0.0);
            let mut acc = 0.0;
            for v in values {
                acc += v;
                table.push(acc);
            }
            return Self { dim, n, table };
        }
        let w = n + 1;
        let mut table = vec![0.0; w * w];
        for y in 0..n {
            let mut row = 0.0;
            for x in 0..n {
                row += values[y * n + x];
                table[(y + 1) * w + x + 1] = table[y * w + x + 1] + row;
            }
        }
        Self { dim, n, table }
    }

    pub fn sum(&self, b: &CellBox) -> f64 {
        if self.dim == 1 {
            return self.table[b.hi(0)] - self.table[b.lo()[0]];
        }
        let w = self.n + 1;
        let (x0, y0, x1, y1) = (b.lo()[0], b.lo()[1], b.hi(0), b.hi(1));
        self.table[y1 * w + x1] - self.table[y0 * w + x1] - self.table[y1 * w + x0] + self.table[y0 * w + x0]
    }

    pub fn mean(&self, b: &CellBox) -> f64 {
        self.sum(b) / b.cell_count() as f64
    }
}

/// Cube sums for every cube of every shifted grid, built bottom-up by
/// adding children so each sum is a fixed-order reduction of cell values.
#[derive(Clone, Debug)]
pub struct CubeSums {
    family: ShiftedGridFamily,
    // [grid][level] -> row-major sums, first axis fastest
    sums: Vec<Vec<Vec<f64>>>,
    widths: Vec<Vec<usize>>,
}

impl CubeSums {
    pub fn new(f: &GridFunction) -> Self {
        let family = f.geometry().family();
        let depth = f.geometry().depth();
        let dim = f.geometry().dim();
        let mut sums = Vec::new();
        let mut widths = Vec::new();
        for grid in family.grids() {
            let mut per_level: Vec<Vec<f64>> = vec![Vec::new(); depth as usize + 1];
            let mut w_level = vec![0usize; depth as usize + 1];
            per_level[depth as usize] = f.values().to_vec();
            w_level[depth as usize] = f.geometry().cells_per_axis();
            for level in (0..depth).rev() {
                let c0 = family.count(grid, 0, level);
                let c1 = if dim == 2 { family.count(grid, 1, level) } else { 1 };
                let fine = &per_level[level as usize + 1];
                let fw = w_level[level as usize + 1];
                let side = family.side_cells(level + 1);
                let shift =
                    |a: usize| (family.level_offset(grid, a, level) - family.level_offset(grid, a, level + 1)) / side;
                let (s0, s1) = (shift(0), if dim == 2 { shift(1) } else { 0 });
                let mut out = vec![0.0; c0 * c1];
                for j1 in 0..c1 {
                    for j0 in 0..c0 {
                        let x = 2 * j0 + s0;
                        out[j1 * c0 + j0] = if dim == 1 {
                            fine[x] + fine[x + 1]
                        } else {
                            let y = 2 * j1 + s1;
                            (fine[y * fw + x] + fine[y * fw + x + 1])
                                + (fine[(y + 1) * fw + x] + fine[(y + 1) * fw + x + 1])
                        };
                    }
                }
                per_level[level as usize] = out;
                w_level[level as usize] = c0;
            }
            sums.push(per_level);
            widths.push(w_level);
        }
        Self { family, sums, widths }
    }

    pub fn family(&self) -> &ShiftedGridFamily {
        &self.family
    }

    /// Sum of cell values over an in-box cube.
    pub fn sum(&self, cube: &DyadicCube) -> f64 {
        let w = self.widths[cube.grid as usize][cube.level as usize];
        self.sums[cube.grid as usize][cube.level as usize][cube.index[1] as usize * w + cube.index[0] as usize]
    }

    pub fn mean(&self, cube: &DyadicCube) -> f64 {
        let s = self.family.side_cells(cube.level);
        self.sum(cube) / s.pow(self.family.geometry().dim() as u32) as f64
    }

    /// All cube sums of one grid and level, row-major.
    pub fn level(&self, grid: u8, level: u32) -> &[f64] {
        &self.sums[grid as usize][level as usize]
    }
}
