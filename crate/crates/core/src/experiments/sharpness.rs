use rayon::prelude::*;

use super::{fit_excluding, refinement_delta, ExperimentConfig, Report};
use crate::error::{param, Result};
use crate::grid::{Geometry, GridBox};
use crate::singular::sharpness::sharpness_norms;
use crate::weights::{ap_constant, Weight};

/// Share of `‖f‖^p` allowed to lie below the log grid.
const UNRESOLVED_TOLERANCE: f64 = 1e-2;

/// `[w]_{A_p}` of `|x|^{(p-1)(1-δ)}` on `[-2, 2)` at `depth`.
pub fn example_ap_constant(p: f64, delta: f64, depth: u32) -> Result<f64> {
    let geom = Geometry::new(GridBox::interval(-2.0, 4.0)?, depth)?;
    ap_constant(&Weight::power(geom, &[0.0], (p - 1.0) * (1.0 - delta))?, p, depth)
}

fn ratios(cfg: &ExperimentConfig, depth: u32) -> Result<Vec<crate::singular::sharpness::SharpnessNorms>> {
    cfg.deltas.par_iter().map(|d| sharpness_norms(cfg.p, *d, depth, UNRESOLVED_TOLERANCE)).collect()
}

/// The lower-bound example `f = x^{-1+δ}χ_(0,1)`, `w = |x|^{(p-1)(1-δ)}`,
/// `A(y) = y log|y|` over the `δ` list: `[w]_{A_p}`, the weighted norms of
/// `f` and `T_A f`, their ratio against `½δ^{-2}`, and log–log slopes.
///
/// Norms are computed on a grid uniform in `log(1/x)` with `2^depth`
/// cells; `[w]_{A_p}` on the uniform grid of `[-2, 2)` at the same depth.
pub fn cmd_sharpness(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.check_common()?;
    if cfg.dim != 1 {
        return param("the sharpness example is one-dimensional");
    }
    if cfg.deltas.len() < 2 {
        return param("the δ list needs at least two values for a slope");
    }
    if let Some(d) = cfg.deltas.iter().find(|d| !(**d > 0.0 && **d < 0.5)) {
        return param(format!("every δ must lie in (0, 1/2), got {d}"));
    }
    let depth = cfg.depth_or(14, 14);
    let norms = ratios(cfg, depth)?;
    let aps: Vec<f64> = cfg.deltas.par_iter().map(|d| example_ap_constant(cfg.p, *d, depth)).collect::<Result<_>>()?;

    let mut report =
        Report::new("sharpness", &["delta", "ap_constant", "f_norm_pow", "f_norm", "ta_norm", "ratio", "lower_bound"]);
    for ((d, n), ap) in cfg.deltas.iter().zip(&norms).zip(&aps) {
        report.push_row(vec![*d, *ap, n.f_norm_pow, n.f_norm, n.ta_norm, n.ratio, 0.5 / (d * d)]);
    }
    let ratio: Vec<f64> = norms.iter().map(|n| n.ratio).collect();
    let slope = fit_excluding(&cfg.deltas, &ratio, cfg.exclude_coarsest)?;
    report.set("depth", depth as f64);
    report.set("ratio_slope", slope);
    report.set("ap_slope", fit_excluding(&cfg.deltas, &aps, cfg.exclude_coarsest)?);
    report.set(
        "min_ratio_over_bound",
        norms.iter().zip(&cfg.deltas).map(|(n, d)| n.ratio * d * d).fold(f64::INFINITY, f64::min),
    );
    report.set("max_unresolved", norms.iter().map(|n| n.unresolved).fold(0.0, f64::max));

    let fine: Vec<f64> = ratios(cfg, depth + 1)?.iter().map(|n| n.ratio).collect();
    let fine_slope = fit_excluding(&cfg.deltas, &fine, cfg.exclude_coarsest)?;
    report.set("ratio_slope_refined", fine_slope);
    report.set("refinement_delta", refinement_delta(slope, fine_slope));
    report
        .notes
        .push("‖T_A f‖ is integrated over (0,1) only, so each ratio is a lower bound for the full-line ratio".into());
    if cfg.p > 2.0 {
        report.notes.push("p > 2: exploratory; sharpness is only expected for p in (1, 2]".into());
    }
    Ok(report)
}
