//! The lower-bound example on the line: `f = x^{-1+δ} χ_(0,1)`,
//! `w = |x|^{(p-1)(1-δ)}`, `A(y) = y log|y|`, `Ω ≡ 1`.
//!
//! For `x ∈ (0,1)` the substitution `y = x t` gives
//! `T_A f(x) = x^{-1+δ} G(x)` with `G(x) = ∫_0^{1/x} g(t) t^{-1+δ} dt` and
//! `g(t) = log(1/t)/(1-t)^2 - 1/(1-t)`, which is bounded at `t = 1`.
//! Everything is evaluated on a grid that is uniform in `s = log(1/x)`.

use crate::error::{param, Error, Result};
use crate::quadrature::GaussLegendre;

/// Cells uniform in `s = log(1/x)` covering `x ∈ (x_min, 1)`.
///
/// `2^depth` cells with `2^{⌈depth/2⌉-1}` cells per octave: one extra
/// level alternately halves the step or doubles the covered range.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogGrid {
    depth: u32,
    per_octave: usize,
}

impl LogGrid {
    pub fn new(depth: u32) -> Result<Self> {
        if !(4..=22).contains(&depth) {
            return param(format!("log-grid depth must lie in 4..=22, got {depth}"));
        }
        Ok(Self { depth, per_octave: 1 << (depth.div_ceil(2) - 1) })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn len(&self) -> usize {
        1 << self.depth
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn per_octave(&self) -> usize {
        self.per_octave
    }

    /// Step in `s`.
    pub fn step(&self) -> f64 {
        std::f64::consts::LN_2 / self.per_octave as f64
    }

    /// Covered range `s ∈ (0, span)`, i.e. `x_min = e^{-span}`.
    pub fn span(&self) -> f64 {
        self.len() as f64 * self.step()
    }

    /// Midpoint `s_i` of cell `i`.
    pub fn s_mid(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.step()
    }
}

/// `g(e^{-s})` for `s >= 0`, i.e. `t <= 1`.
fn combined_below(s: f64) -> f64 {
    let u = -(-s).exp_m1();
    if u < 1e-4 {
        return series(u);
    }
    s / (u * u) - 1.0 / u
}

/// `g(e^{s})` for `s >= 0`, i.e. `t >= 1`.
fn combined_above(s: f64) -> f64 {
    if s < 1e-4 {
        return series(-s.exp_m1());
    }
    let e = (-s).exp();
    let v = -(-s).exp_m1();
    (1.0 - (1.0 + s) * e) * e / (v * v)
}

/// `Σ_{k>=0} u^k/(k+2)` with `u = 1 - t`.
fn series(u: f64) -> f64 {
    (0..8).rev().fold(0.0, |acc, k| acc * u + 1.0 / (k as f64 + 2.0))
}

/// `g(t) = log(1/t)/(1-t)^2 - 1/(1-t)`, continuous at `t = 1` with value 1/2.
pub fn combined_integrand(t: f64) -> f64 {
    if t <= 1.0 {
        combined_below(-t.ln())
    } else {
        combined_above(t.ln())
    }
}

/// `G(1) = ∫_0^1 g(t) t^{-1+δ} dt`.
pub fn profile_at_one(delta: f64) -> Result<f64> {
    check_delta(delta)?;
    Ok(inner_part(delta, &GaussLegendre::new(8)))
}

/// `∫_0^1 g(t) t^{-1+δ} dt = ∫_0^∞ g(e^{-s}) e^{-δ s} ds`.
fn inner_part(delta: f64, rule: &GaussLegendre) -> f64 {
    let mut total = 0.0;
    let mut a = 0.0;
    loop {
        let piece = rule.integrate(a, a + 1.0, |s| combined_below(s) * (-delta * s).exp());
        total += piece;
        a += 1.0;
        if piece.abs() < 1e-18 * total.abs() && a > 1.0 / delta {
            return total;
        }
    }
}

/// `G(x_i)` at the midpoints of a log grid.
pub fn example_profile(delta: f64, grid: &LogGrid) -> Result<Vec<f64>> {
    check_delta(delta)?;
    let rule = GaussLegendre::new(8);
    let base = inner_part(delta, &rule);
    let h = grid.step();
    // ∫_1^{1/x} g(t) t^{-1+δ} dt = ∫_0^{s} g(e^σ) e^{δσ} dσ.
    let integrand = |s: f64| combined_above(s) * (delta * s).exp();
    let mut out = Vec::with_capacity(grid.len());
    let mut acc = 0.0;
    for i in 0..grid.len() {
        let lo = i as f64 * h;
        let mid = grid.s_mid(i);
        out.push(base + acc + rule.integrate(lo, mid, integrand));
        acc += rule.integrate(lo, lo + h, integrand);
    }
    Ok(out)
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return param(format!("δ must lie in (0,1), got {delta}"));
    }
    Ok(())
}

/// `(∫ |F|^p w dx)` over `x ∈ (x_min, 1)` for `log F`, `log w` given at the
/// log-grid midpoints; midpoint rule in `s` with `dx = x ds`.
pub fn log_grid_lp_power(grid: &LogGrid, log_f: &[f64], log_w: &[f64], p: f64) -> f64 {
    let h = grid.step();
    log_f.iter().zip(log_w).enumerate().map(|(i, (lf, lw))| (p * lf + lw - grid.s_mid(i)).exp()).sum::<f64>() * h
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct SharpnessNorms {
    pub p: f64,
    pub delta: f64,
    /// `‖f‖^p_{L^p(w)}`.
    pub f_norm_pow: f64,
    pub f_norm: f64,
    /// `‖T_A f‖_{L^p(w)}`, integrated over `(0,1)` only.
    pub ta_norm: f64,
    pub ratio: f64,
    /// `x_min^δ`: the share of `‖f‖^p` below the grid.
    pub unresolved: f64,
}

/// Weighted norms of `f` and `T_A f` for the example.
///
/// `T_A f` is integrated over `(0,1)` only, so the ratio is a lower bound
/// for the full-line ratio. Fails with a resolution error when more than
/// `unresolved_tol` of `‖f‖^p` lies below the grid.
pub fn sharpness_norms(p: f64, delta: f64, depth: u32, unresolved_tol: f64) -> Result<SharpnessNorms> {
    if !(p > 1.0) || !p.is_finite() {
        return param(format!("p must be finite and greater than 1, got {p}"));
    }
    check_delta(delta)?;
    let grid = LogGrid::new(depth)?;
    let unresolved = (-delta * grid.span()).exp();
    if unresolved > unresolved_tol {
        let need = (-(unresolved_tol.ln()) / delta / std::f64::consts::LN_2).ceil();
        return Err(Error::Resolution(format!(
            "{:.2}% of ‖f‖^p lies below x = 2^-{:.0}; δ = {delta} needs about {need} octaves",
            100.0 * unresolved,
            grid.span() / std::f64::consts::LN_2
        )));
    }
    let profile = example_profile(delta, &grid)?;
    let n = grid.len();
    let s: Vec<f64> = (0..n).map(|i| grid.s_mid(i)).collect();
    // log x = -s.
    let log_f: Vec<f64> = s.iter().map(|s| (1.0 - delta) * s).collect();
    let log_w: Vec<f64> = s.iter().map(|s| -(p - 1.0) * (1.0 - delta) * s).collect();
    let log_t: Vec<f64> = log_f.iter().zip(&profile).map(|(lf, g)| lf + g.ln()).collect();
    let f_norm_pow = log_grid_lp_power(&grid, &log_f, &log_w, p);
    let f_norm = f_norm_pow.powf(1.0 / p);
    let ta_norm = log_grid_lp_power(&grid, &log_t, &log_w, p).powf(1.0 / p);
    Ok(SharpnessNorms { p, delta, f_norm_pow, f_norm, ta_norm, ratio: ta_norm / f_norm, unresolved })
}
