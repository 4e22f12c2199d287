use super::{fit_excluding, fit_loglog_slope, refinement_delta, ExperimentConfig, Report};
use crate::error::{param, Result};
use crate::grid::{DyadicCube, FunctionSequence, Geometry, GridFunction};
use crate::maximal::{hl_maximal, CellSet, SublinearOperator};
use crate::singular::{bmo_seminorm, Amplitude, TaMode};
use crate::sparse::{build_sparse_family, sparse_operator, SparseConfig};
use crate::weights::{ainf_constant, ap_constant, conjugate, dual_weight, vector_lp_lq_norm, weighted_lp_norm, Weight};

/// `|x|^{n(p-1)(1-δ)}`: in `A_p` for `δ ∈ (0, 1]`, with `[w]_{A_p} ≈ δ^{1-p}`.
fn sweep_weight(cfg: &ExperimentConfig, geom: Geometry, delta: f64) -> Result<Weight> {
    Weight::power(geom, &vec![0.0; cfg.dim], cfg.dim as f64 * (cfg.p - 1.0) * (1.0 - delta))
}

fn check_sweep(cfg: &ExperimentConfig) -> Result<()> {
    cfg.check_common()?;
    if cfg.deltas.is_empty() {
        return param("the δ list is empty");
    }
    if let Some(d) = cfg.deltas.iter().find(|d| !(**d > 0.0 && **d <= 1.0)) {
        return param(format!("every δ must lie in (0, 1], got {d}"));
    }
    Ok(())
}

/// `sup` of the mean oscillation of the components of `∇A`.
fn gradient_bmo(amplitude: &Amplitude, geom: Geometry) -> Result<f64> {
    let mut worst = 0.0f64;
    for axis in 0..geom.dim() {
        let g = GridFunction::from_fn(geom, |x| amplitude.gradient(x)[axis]);
        worst = worst.max(bmo_seminorm(&g, geom.depth())?);
    }
    Ok(worst)
}

fn images<T: SublinearOperator>(op: &T, fs: &FunctionSequence) -> Result<FunctionSequence> {
    FunctionSequence::new(fs.items().iter().map(|f| op.apply(f, &CellSet::All)).collect::<Result<_>>()?)
}

struct WeightedRow {
    values: Vec<f64>,
    ratio_ta: f64,
}

fn weighted_row(cfg: &ExperimentConfig, depth: u32, delta: f64) -> Result<WeightedRow> {
    let geom = cfg.geometry(depth)?;
    let p = cfg.p;
    let w = sweep_weight(cfg, geom, delta)?;
    let sigma = dual_weight(&w, p)?;
    let ap = ap_constant(&w, p, depth)?;
    let ainf_w = ainf_constant(&w, depth)?;
    let ainf_s = ainf_constant(&sigma, depth)?;
    let op = cfg.operator(geom)?;
    let bmo = gradient_bmo(op.amplitude(), geom)?;
    let fs = cfg.inputs(geom, cfg.seed)?;
    let base = vector_lp_lq_norm(&fs, &w, p, cfg.q)?;
    if base == 0.0 {
        return param("the input sequence is zero; the weighted ratio is undefined");
    }
    let t = vector_lp_lq_norm(&images(&op, &fs)?, &w, p, cfg.q)? / base;
    let star = op.clone().with_mode(TaMode::Maximal);
    let t_star = vector_lp_lq_norm(&images(&star, &fs)?, &w, p, cfg.q)? / base;
    let rhs = bmo * ap.powf(1.0 / p) * (ainf_s.powf(1.0 / p) + ainf_w.powf(1.0 / conjugate(p))) * ainf_s;

    let mut sc = SparseConfig::new(cfg.q, cfg.beta)?;
    sc.c2_initial = cfg.c2_initial;
    let family = build_sparse_family(&op, &fs, &DyadicCube::standard(0, &vec![0; cfg.dim]), &sc)?;
    let norm = fs.lq_norm(cfg.q);
    let sparse = weighted_lp_norm(&sparse_operator(&family, &norm, &sc.orlicz)?, &w, p)? / base;
    let sparse_rhs =
        ap.powf(1.0 / p) * (ainf_w.powf(1.0 / conjugate(p)) + ainf_s.powf(1.0 / p)) * ainf_s.powf(cfg.beta);
    Ok(WeightedRow {
        values: vec![
            delta,
            ap,
            ainf_w,
            ainf_s,
            bmo,
            t,
            t_star,
            rhs,
            t / rhs,
            t_star / rhs,
            sparse,
            sparse / sparse_rhs,
        ],
        ratio_ta: t / rhs,
    })
}

/// Weighted vector-valued bound for `T_A` and `T_A^*` over the power
/// weights `|x|^{n(p-1)(1-δ)}`: the left side `‖{T f_k}‖/‖{f_k}‖` in
/// `L^p(ℓ^q, w)` against `‖∇A‖_BMO [w]_{A_p}^{1/p}([σ]_{A_∞}^{1/p} +
/// [w]_{A_∞}^{1/p'})[σ]_{A_∞}`, plus the sparse operator against its own
/// weighted bound. `δ = 1` is the unweighted case.
pub fn cmd_weighted_bound(cfg: &ExperimentConfig) -> Result<Report> {
    check_sweep(cfg)?;
    let depth = cfg.depth_or(11, 5);
    let mut report = Report::new(
        "weighted_bound",
        &[
            "delta",
            "ap_constant",
            "ainf_w",
            "ainf_sigma",
            "grad_bmo",
            "ta_ratio",
            "ta_star_ratio",
            "rhs",
            "ratio_ta",
            "ratio_ta_star",
            "sparse_ratio",
            "sparse_over_bound",
        ],
    );
    let rows: Vec<WeightedRow> = cfg.deltas.iter().map(|d| weighted_row(cfg, depth, *d)).collect::<Result<_>>()?;
    let max_of = |i: usize| rows.iter().map(|r| r.values[i]).fold(0.0f64, f64::max);
    report.set("depth", depth as f64);
    report.set("max_ratio_ta", max_of(8));
    report.set("max_ratio_ta_star", max_of(9));
    report.set("max_sparse_over_bound", max_of(11));
    if cfg.deltas.len() >= 2 {
        let r: Vec<f64> = rows.iter().map(|r| r.ratio_ta).collect();
        report.set("ratio_ta_slope", fit_excluding(&cfg.deltas, &r, cfg.exclude_coarsest)?);
    }
    let smallest = cfg.deltas.iter().copied().fold(f64::INFINITY, f64::min);
    let coarse = rows[cfg.deltas.iter().position(|d| *d == smallest).unwrap()].ratio_ta;
    let fine = weighted_row(cfg, depth + 1, smallest)?.ratio_ta;
    report.set("refinement_delta", refinement_delta(coarse, fine));
    for r in rows {
        report.push_row(r.values);
    }
    Ok(report)
}

fn buckley_row(cfg: &ExperimentConfig, depth: u32, delta: f64) -> Result<(f64, f64)> {
    let geom = cfg.geometry(depth)?;
    let w = sweep_weight(cfg, geom, delta)?;
    let f = GridFunction::from_fn(geom, |x| if x.iter().all(|v| (0.0..1.0).contains(v)) { 1.0 } else { 0.0 });
    let ratio = weighted_lp_norm(&hl_maximal(&f), &w, cfg.p)? / weighted_lp_norm(&f, &w, cfg.p)?;
    Ok((ap_constant(&w, cfg.p, depth)?, ratio))
}

/// `‖M f‖_{L^p(w)} / ‖f‖_{L^p(w)}` for `f = χ_{(0,1)^n}` over the power
/// weights, and its log–log slope against `[w]_{A_p}`.
pub fn cmd_buckley(cfg: &ExperimentConfig) -> Result<Report> {
    check_sweep(cfg)?;
    if cfg.deltas.len() < 2 {
        return param("the δ list needs at least two values for a slope");
    }
    let depth = cfg.depth_or(12, 7);
    let mut report = Report::new("buckley", &["delta", "ap_constant", "maximal_ratio"]);
    let rows: Vec<(f64, f64)> = cfg.deltas.iter().map(|d| buckley_row(cfg, depth, *d)).collect::<Result<_>>()?;
    for (d, (ap, r)) in cfg.deltas.iter().zip(&rows) {
        report.push_row(vec![*d, *ap, *r]);
    }
    let aps: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let ratios: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let slope = fit_loglog_slope(&aps, &ratios)?;
    report.set("depth", depth as f64);
    report.set("slope", slope);
    report.set("slope_bound", 1.0 / (cfg.p - 1.0) + 0.2);
    report.set("ap_slope", fit_excluding(&cfg.deltas, &aps, cfg.exclude_coarsest)?);
    let fine: Vec<(f64, f64)> = cfg.deltas.iter().map(|d| buckley_row(cfg, depth + 1, *d)).collect::<Result<_>>()?;
    let (fa, fr): (Vec<f64>, Vec<f64>) = fine.into_iter().unzip();
    report.set("refinement_delta", refinement_delta(slope, fit_loglog_slope(&fa, &fr)?));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_weight_row_is_finite() {
        let cfg = ExperimentConfig { depth: Some(7), deltas: vec![1.0], functions: 2, ..Default::default() };
        let r = cmd_weighted_bound(&cfg).unwrap();
        let row = &r.rows[0];
        assert_eq!((row[1], row[2], row[3]), (1.0, 1.0, 1.0));
        assert!(row[8].is_finite() && row[8] > 0.0);
        assert!(row[9] >= row[8]);
    }

    #[test]
    fn buckley_slope_stays_below_the_sharp_exponent() {
        let cfg = ExperimentConfig { p: 2.0, depth: Some(9), deltas: vec![0.4, 0.2, 0.1], ..Default::default() };
        let r = cmd_buckley(&cfg).unwrap();
        assert!(r.summary_value("slope").unwrap() <= 1.2);
        let ap = r.column("ap_constant").unwrap();
        assert!(ap[0] < ap[1] && ap[1] < ap[2]);
    }
}
