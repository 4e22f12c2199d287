use rayon::prelude::*;

use super::{Amplitude, SphericalKernel};
use crate::error::{param, Error, Result};
use crate::grid::{CellBox, Geometry, GridFunction};
use crate::maximal::{CellSet, SublinearOperator};

/// Which quantity a [`TaOperator`] reports when used as a [`SublinearOperator`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TaMode {
    /// `T_A f`, the finest truncation.
    Principal,
    /// `T_A^* f = sup_ε |T_{A,ε} f|` over the dyadic ε ladder.
    Maximal,
}

/// The commutator-type operator with kernel
/// `Ω(x-y) |x-y|^{-n-1} (A(x) - A(y) - ∇A(y)·(x-y))`, discretized by
/// midpoint quadrature with center-to-center distances. The diagonal cell
/// is always excluded.
#[derive(Clone, Debug)]
pub struct TaOperator {
    geom: Geometry,
    kernel: SphericalKernel,
    amplitude: Amplitude,
    mids: Vec<[f64; 2]>,
    a: Vec<f64>,
    grad: Vec<[f64; 2]>,
    mode: TaMode,
}

/// `T_A f` with its convergence diagnostic.
#[derive(Clone, Debug)]
pub struct PrincipalValue {
    pub value: GridFunction,
    /// Contribution of the innermost shell `h <= |x-y| < 2h`.
    pub last_increment: GridFunction,
    /// Contribution of the next shell `2h <= |x-y| < 4h`.
    pub previous_increment: GridFunction,
    /// Cells where the innermost increment is larger than the previous one
    /// and larger than `tolerance · |T_A f(x)|`.
    pub non_cauchy_cells: usize,
}

impl TaOperator {
    pub fn new(geom: Geometry, kernel: SphericalKernel, amplitude: Amplitude) -> Result<Self> {
        if kernel.dim() != geom.dim() || amplitude.dim() != geom.dim() {
            return param("kernel, amplitude and grid dimensions differ");
        }
        let d = geom.dim();
        let mids: Vec<[f64; 2]> = (0..geom.cell_count()).map(|i| geom.midpoint(i)).collect();
        let (a, grad): (Vec<f64>, Vec<[f64; 2]>) = mids.iter().map(|m| amplitude.value_and_gradient(&m[..d])).unzip();
        if a.iter().chain(grad.iter().flat_map(|g| g.iter())).any(|v| !v.is_finite()) {
            return Err(Error::Resolution("amplitude or gradient is not finite at a cell midpoint".into()));
        }
        Ok(Self { geom, kernel, amplitude, mids, a, grad, mode: TaMode::Principal })
    }

    pub fn with_mode(mut self, mode: TaMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn mode(&self) -> TaMode {
        self.mode
    }

    pub fn kernel(&self) -> &SphericalKernel {
        &self.kernel
    }

    pub fn amplitude(&self) -> &Amplitude {
        &self.amplitude
    }

    /// Number of dyadic shells `h 2^j <= |x-y| < h 2^{j+1}`.
    pub fn shell_count(&self) -> usize {
        self.geom.depth() as usize + 1
    }

    fn shell(&self, x: usize, y: usize) -> usize {
        let cx = self.geom.cell_coords(x);
        let cy = self.geom.cell_coords(y);
        let di = cx[0].abs_diff(cy[0]) as u64;
        let dj = cx[1].abs_diff(cy[1]) as u64;
        let d2 = di * di + dj * dj;
        ((63 - d2.leading_zeros()) / 2) as usize
    }

    /// `(K(x,y)·|cell|, |Ω|(|A(x)|+|A(y)|+|∇A(y)||x-y|)|x-y|^{-n-1}·|cell|)`.
    fn pair(&self, x: usize, y: usize) -> (f64, f64) {
        let d = self.geom.dim();
        let mx = self.mids[x];
        let my = self.mids[y];
        let z = [mx[0] - my[0], mx[1] - my[1]];
        let r2 = z[0] * z[0] + z[1] * z[1];
        let r = r2.sqrt();
        let g = self.grad[y];
        let lin = g[0] * z[0] + g[1] * z[1];
        let num = self.a[x] - self.a[y] - lin;
        let om = self.kernel.eval(z);
        let scale = self.geom.cell_volume() / r.powi(d as i32 + 1);
        let gnorm = (g[0] * g[0] + g[1] * g[1]).sqrt();
        (om * num * scale, om.abs() * (self.a[x].abs() + self.a[y].abs() + gnorm * r) * scale)
    }

    fn sources(&self, f: &GridFunction, source: &CellSet) -> Result<Vec<usize>> {
        if f.geometry() != &self.geom {
            return param("function and operator live on different geometries");
        }
        Ok((0..self.geom.cell_count()).filter(|&i| f.values()[i] != 0.0 && source.contains(&self.geom, i)).collect())
    }

    /// Per target cell, the contribution of each dyadic shell.
    pub fn shell_sums(&self, f: &GridFunction, source: &CellSet, targets: &CellBox) -> Result<Vec<Vec<f64>>> {
        let src = self.sources(f, source)?;
        let shells = self.shell_count();
        let idx = targets.indices(&self.geom);
        Ok(idx
            .par_iter()
            .map(|&x| {
                let mut acc = vec![0.0; shells];
                for &y in &src {
                    if y != x {
                        acc[self.shell(x, y)] += self.pair(x, y).0 * f.values()[y];
                    }
                }
                acc
            })
            .collect())
    }

    /// `Σ_y |K|-magnitude · |f(y)|`: the size against which cancellation is measured.
    pub fn magnitude(&self, f: &GridFunction) -> Result<GridFunction> {
        let src = self.sources(f, &CellSet::All)?;
        let vals = (0..self.geom.cell_count())
            .into_par_iter()
            .map(|x| src.iter().filter(|&&y| y != x).map(|&y| self.pair(x, y).1 * f.values()[y].abs()).sum())
            .collect();
        GridFunction::new(self.geom, vals)
    }

    /// `T_{A,ε} f` over cells with `|x - y| >= ε` (center to center).
    pub fn t_a_epsilon(&self, f: &GridFunction, eps: f64) -> Result<GridFunction> {
        let h = self.geom.cell_width();
        if !(eps >= h * (1.0 - 1e-12)) {
            return Err(Error::Resolution(format!("ε = {eps} is below the cell width {h}")));
        }
        let src = self.sources(f, &CellSet::All)?;
        let vals = (0..self.geom.cell_count())
            .into_par_iter()
            .map(|x| {
                let mx = self.mids[x];
                src.iter()
                    .filter(|&&y| {
                        let my = self.mids[y];
                        y != x && ((mx[0] - my[0]).powi(2) + (mx[1] - my[1]).powi(2)).sqrt() >= eps * (1.0 - 1e-12)
                    })
                    .map(|&y| self.pair(x, y).0 * f.values()[y])
                    .sum()
            })
            .collect();
        GridFunction::new(self.geom, vals)
    }

    /// `T_A f` along the ε ladder `h 2^j`, reporting the finest value.
    pub fn t_a(&self, f: &GridFunction, tolerance: f64) -> Result<PrincipalValue> {
        let shells = self.shell_sums(f, &CellSet::All, &self.geom.whole())?;
        let n = self.geom.cell_count();
        let mut value = Vec::with_capacity(n);
        let mut last = Vec::with_capacity(n);
        let mut prev = Vec::with_capacity(n);
        let mut flagged = 0;
        for s in &shells {
            let total: f64 = s.iter().sum();
            let c0 = s[0];
            let c1 = s.get(1).copied().unwrap_or(0.0);
            if c0.abs() > c1.abs() && c0.abs() > tolerance * total.abs().max(f64::MIN_POSITIVE) {
                flagged += 1;
            }
            value.push(total);
            last.push(c0);
            prev.push(c1);
        }
        Ok(PrincipalValue {
            value: GridFunction::new(self.geom, value)?,
            last_increment: GridFunction::new(self.geom, last)?,
            previous_increment: GridFunction::new(self.geom, prev)?,
            non_cauchy_cells: flagged,
        })
    }

    /// `T_A^* f = max_j |T_{A, h 2^j} f|`.
    pub fn t_a_star(&self, f: &GridFunction) -> Result<GridFunction> {
        let shells = self.shell_sums(f, &CellSet::All, &self.geom.whole())?;
        GridFunction::new(self.geom, shells.iter().map(|s| suffix_max(s)).collect())
    }
}

/// `max_j |Σ_{i >= j} s_i|`.
fn suffix_max(s: &[f64]) -> f64 {
    let mut acc = 0.0f64;
    let mut best = 0.0f64;
    for v in s.iter().rev() {
        acc += v;
        best = best.max(acc.abs());
    }
    best
}

impl SublinearOperator for TaOperator {
    fn geometry(&self) -> &Geometry {
        &self.geom
    }

    fn apply_on(&self, f: &GridFunction, source: &CellSet, targets: &CellBox) -> Result<Vec<f64>> {
        let shells = self.shell_sums(f, source, targets)?;
        Ok(match self.mode {
            TaMode::Principal => shells.iter().map(|s| s.iter().sum()).collect(),
            TaMode::Maximal => shells.iter().map(|s| suffix_max(s)).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridBox;
    use crate::maximal::{grand_maximal, GrandMaximalConfig};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn geom(dim: usize, depth: u32) -> Geometry {
        Geometry::new(GridBox::new(dim, &vec![-2.0; dim], 4.0).unwrap(), depth).unwrap()
    }

    fn random(g: Geometry, seed: u64) -> GridFunction {
        let rng = std::cell::RefCell::new(ChaCha8Rng::seed_from_u64(seed));
        GridFunction::from_fn(g, |x| {
            let inside = x.iter().all(|v| (0.0..1.0).contains(v));
            if inside {
                rng.borrow_mut().gen_range(-1.0..1.0)
            } else {
                0.0
            }
        })
    }

    #[test]
    fn affine_amplitudes_are_annihilated() {
        for (dim, omegas) in [(1, vec!["const1", "sign"]), (2, vec!["const1", "cos2theta", "costheta"])] {
            let g = geom(dim, if dim == 1 { 8 } else { 4 });
            for name in omegas {
                let k = SphericalKernel::preset(name, dim).unwrap();
                let spec = if dim == 1 { "affine:0.7,-1.3" } else { "affine:0.7,-1.3,2.1" };
                let a = Amplitude::preset(spec, dim).unwrap();
                let op = TaOperator::new(g, k, a).unwrap();
                let f = random(g, 3);
                let scale = op.magnitude(&f).unwrap();
                let t = op.t_a(&f, 1e-3).unwrap().value;
                let ts = op.t_a_star(&f).unwrap();
                let gm = grand_maximal(&op, &f, &GrandMaximalConfig::new(g.depth())).unwrap();
                for i in 0..g.cell_count() {
                    let s = scale.values()[i].max(f64::MIN_POSITIVE);
                    assert!(t.values()[i].abs() <= 1e-12 * s);
                    assert!(ts.values()[i] <= 1e-12 * s);
                    assert!(gm.values()[i] <= 1e-12 * s.max(scale.max_abs()));
                }
            }
        }
    }

    #[test]
    fn zero_input_and_resolution_guard() {
        let g = geom(1, 6);
        let op = TaOperator::new(g, SphericalKernel::line(1.0, 1.0), Amplitude::xlogx(1)).unwrap();
        let z = GridFunction::zeros(g);
        assert!(op.t_a(&z, 1e-3).unwrap().value.values().iter().all(|&v| v == 0.0));
        assert!(matches!(op.t_a_epsilon(&z, 0.5 * g.cell_width()), Err(Error::Resolution(_))));
    }

    #[test]
    fn truncations_agree_with_shell_sums() {
        let g = geom(2, 4);
        let op = TaOperator::new(g, SphericalKernel::preset("cos2theta", 2).unwrap(), Amplitude::xlogx(2)).unwrap();
        let f = random(g, 8);
        let h = g.cell_width();
        let shells = op.shell_sums(&f, &CellSet::All, &g.whole()).unwrap();
        for j in 0..op.shell_count() {
            let eps = h * 2f64.powi(j as i32);
            let direct = op.t_a_epsilon(&f, eps).unwrap();
            for (i, s) in shells.iter().enumerate() {
                let tail: f64 = s[j..].iter().sum();
                assert!((direct.values()[i] - tail).abs() < 1e-9 * (1.0 + tail.abs()));
            }
        }
        let t = op.t_a(&f, 1e-3).unwrap().value;
        let ts = op.t_a_star(&f).unwrap();
        for i in 0..g.cell_count() {
            assert!(ts.values()[i] >= t.values()[i].abs() - 1e-12);
        }
    }

    #[test]
    fn linearity() {
        let g = geom(1, 8);
        let op = TaOperator::new(g, SphericalKernel::line(1.0, 1.0), Amplitude::xlogx(1)).unwrap();
        let f = random(g, 1);
        let h = random(g, 2);
        let sum = f.zip_with(&h, |a, b| a + b).unwrap();
        let tf = op.t_a(&f, 1e-3).unwrap().value;
        let th = op.t_a(&h, 1e-3).unwrap().value;
        let ts = op.t_a(&sum, 1e-3).unwrap().value;
        for i in 0..g.cell_count() {
            let want = tf.values()[i] + th.values()[i];
            assert!((ts.values()[i] - want).abs() < 1e-10 * (1.0 + want.abs()));
        }
    }
}
