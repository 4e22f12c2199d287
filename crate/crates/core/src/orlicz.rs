//! Luxemburg norms for `Φ(t) = t·log^β(1+t)` (or `log(e+t)`), the
//! `exp L` norm, and the Hölder pairing between the two.

use crate::error::{param, Error, Result};
use crate::grid::{CellBox, DyadicCube, GridFunction};

/// Constant of the pairing `⟨|f h|⟩_Q <= C ‖f‖_{L log L,Q} ‖h‖_{exp L,Q}`.
///
/// With `Φ(s) = s log(1+s)` and `Ψ(t) = e^t - 1`, Young's inequality
/// `st <= Φ(s) + Ψ(t)` holds, so the Luxemburg pairing is bounded by 2.
pub const HOLDER_CONSTANT: f64 = 2.0;

/// Which logarithm the Young function uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LogShift {
    /// `log(1 + t)`.
    #[default]
    One,
    /// `log(e + t)`.
    E,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrliczParams {
    pub beta: f64,
    pub shift: LogShift,
    pub tol: f64,
    pub max_expansions: u32,
}

impl OrliczParams {
    pub fn new(beta: f64) -> Result<Self> {
        Self { beta, shift: LogShift::One, tol: 1e-10, max_expansions: 128 }.validated()
    }

    pub fn with_shift(mut self, shift: LogShift) -> Self {
        self.shift = shift;
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Result<Self> {
        self.tol = tol;
        self.validated()
    }

    fn validated(self) -> Result<Self> {
        if !(self.beta >= 0.0) || !self.beta.is_finite() {
            return param(format!("beta must be finite and nonnegative, got {}", self.beta));
        }
        if !(self.tol > 0.0) {
            return param(format!("tolerance must be positive, got {}", self.tol));
        }
        Ok(self)
    }

    /// `Φ(t)`.
    pub fn young(&self, t: f64) -> f64 {
        if self.beta == 0.0 {
            return t;
        }
        let l = match self.shift {
            LogShift::One => t.ln_1p(),
            LogShift::E => (std::f64::consts::E + t).ln(),
        };
        t * l.powf(self.beta)
    }

    /// `(Φ(t), t Φ'(t))`.
    fn young_and_slope(&self, t: f64) -> (f64, f64) {
        if t == 0.0 {
            return (0.0, 0.0);
        }
        if self.beta == 0.0 {
            return (t, t);
        }
        let (l, dl) = match self.shift {
            LogShift::One => (t.ln_1p(), 1.0 / (1.0 + t)),
            LogShift::E => ((std::f64::consts::E + t).ln(), 1.0 / (std::f64::consts::E + t)),
        };
        let lb = l.powf(self.beta);
        let phi = t * lb;
        (phi, phi + self.beta * t * t * lb / l * dl)
    }
}

/// `|Q|^{-1} Σ Φ(|a|/λ)` over the samples of a cube.
pub fn orlicz_average(samples: &[f64], lambda: f64, params: &OrliczParams) -> f64 {
    samples.iter().map(|a| params.young(a.abs() / lambda)).sum::<f64>() / samples.len() as f64
}

/// Luxemburg norm of a sample set (the cell values of one cube).
pub fn luxemburg_of_samples(samples: &[f64], params: &OrliczParams) -> Result<f64> {
    if samples.is_empty() {
        return param("empty cube");
    }
    let mean = samples.iter().map(|a| a.abs()).sum::<f64>() / samples.len() as f64;
    if mean == 0.0 {
        return Ok(0.0);
    }
    if !mean.is_finite() {
        return Err(Error::NonConvergence("samples are not finite".into()));
    }
    if params.beta == 0.0 {
        return Ok(mean);
    }
    let excess = |lambda: f64| orlicz_average(samples, lambda, params) - 1.0;

    // The average is strictly decreasing in λ. The mean is a starting
    // point only: the root may lie on either side of it.
    let (mut lo, mut hi) = (mean, mean);
    let mut expansions = 0;
    if excess(mean) > 0.0 {
        while excess(hi) > 0.0 {
            hi *= 2.0;
            expansions += 1;
            if expansions > params.max_expansions {
                return Err(Error::NonConvergence("upper bracket not found".into()));
            }
        }
        lo = hi / 2.0;
    } else {
        while excess(lo) <= 0.0 {
            lo /= 2.0;
            expansions += 1;
            if expansions > params.max_expansions {
                return Err(Error::NonConvergence("lower bracket not found".into()));
            }
        }
        hi = lo * 2.0;
    }

    // Safeguarded Newton in u = log λ, keeping excess(lo) > 0 >= excess(hi).
    let width = params.tol / (2.0 * (1.0 + params.beta));
    let mut u = (lo * hi).sqrt().ln();
    for _ in 0..200 {
        if hi / lo - 1.0 <= width {
            return Ok(hi);
        }
        let lambda = u.exp();
        let mut g = 0.0;
        let mut dg = 0.0;
        for a in samples {
            let (phi, slope) = params.young_and_slope(a.abs() / lambda);
            g += phi;
            dg += slope;
        }
        let n = samples.len() as f64;
        g = g / n - 1.0;
        dg /= n;
        if g > 0.0 {
            lo = lambda;
        } else {
            hi = lambda;
        }
        // d/du Σ Φ(a e^{-u}) = -Σ tΦ'(t).
        let step = if dg > 0.0 { g / dg } else { f64::NAN };
        let next = u + step;
        let (llo, lhi) = (lo.ln(), hi.ln());
        u = if next.is_finite() && next > llo && next < lhi {
            if step.abs() < 0.25 * width {
                // Close enough: test a tight bracket around the estimate.
                let cand_hi = next.exp() * (1.0 + 0.5 * width);
                let cand_lo = next.exp() * (1.0 - 0.5 * width);
                if cand_hi < hi && excess(cand_hi) <= 0.0 {
                    hi = cand_hi;
                }
                if cand_lo > lo && excess(cand_lo) > 0.0 {
                    lo = cand_lo;
                }
                0.5 * (lo.ln() + hi.ln())
            } else {
                next
            }
        } else {
            0.5 * (llo + lhi)
        };
    }
    Err(Error::NonConvergence("root solve did not reach the tolerance".into()))
}

pub fn luxemburg_norm_on(f: &GridFunction, cells: &CellBox, params: &OrliczParams) -> Result<f64> {
    luxemburg_of_samples(&f.samples_in(cells), params)
}

/// `‖f‖_{L(log L)^β, Q}` with the default tolerance.
pub fn luxemburg_norm(f: &GridFunction, cube: &DyadicCube, beta: f64) -> Result<f64> {
    let cells = f.geometry().family().cells(cube)?;
    luxemburg_norm_on(f, &cells, &OrliczParams::new(beta)?)
}

/// Least `t` with `⟨exp(|h|/t)⟩ <= 2` over a sample set.
pub fn exp_norm_of_samples(samples: &[f64], tol: f64) -> Result<f64> {
    if samples.is_empty() {
        return param("empty cube");
    }
    let top = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if top == 0.0 {
        return Ok(0.0);
    }
    if !top.is_finite() {
        return Err(Error::NonConvergence("samples are not finite".into()));
    }
    let n = samples.len() as f64;
    // Factor out exp(top/t) so large ratios do not overflow.
    let excess = |t: f64| {
        let s: f64 = samples.iter().map(|v| ((v.abs() - top) / t).exp()).sum::<f64>() / n;
        s.ln() + top / t - std::f64::consts::LN_2
    };
    let mut hi = top / std::f64::consts::LN_2;
    let mut lo = hi;
    let mut expansions = 0;
    while excess(lo) <= 0.0 {
        lo /= 2.0;
        expansions += 1;
        if expansions > 128 {
            return Err(Error::NonConvergence("lower bracket not found".into()));
        }
    }
    if expansions > 0 {
        hi = hi.min(lo * 2.0);
    }
    while hi / lo - 1.0 > tol {
        let mid = (lo * hi).sqrt();
        if excess(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

pub fn exp_norm_on(h: &GridFunction, cells: &CellBox) -> Result<f64> {
    exp_norm_of_samples(&h.samples_in(cells), 1e-12)
}

/// `‖h‖_{exp L, Q}`.
pub fn exp_norm(h: &GridFunction, cube: &DyadicCube) -> Result<f64> {
    exp_norm_on(h, &h.geometry().family().cells(cube)?)
}

/// `(⟨|f h|⟩_Q, ‖f‖_{L log L,Q} ‖h‖_{exp L,Q})`.
pub fn orlicz_holder_pair(f: &GridFunction, h: &GridFunction, cube: &DyadicCube) -> Result<(f64, f64)> {
    f.check_same(h)?;
    let cells = f.geometry().family().cells(cube)?;
    let fs = f.samples_in(&cells);
    let hs = h.samples_in(&cells);
    let lhs = fs.iter().zip(&hs).map(|(a, b)| (a * b).abs()).sum::<f64>() / fs.len() as f64;
    let rhs = luxemburg_of_samples(&fs, &OrliczParams::new(1.0)?)? * exp_norm_of_samples(&hs, 1e-12)?;
    Ok((lhs, rhs))
}
