use super::weak_type::{endpoint_level_sets, lambda_grid, remark_level_sets, vector_image};
use super::{refinement_delta, ExperimentConfig, Report};
use crate::error::{param, Result};
use crate::weights::{a1_constant, ainf_constant};

const EPSILONS: [f64; 3] = [0.25, 0.5, 1.0];
const LEVELS: usize = 16;

fn endpoint_constant(cfg: &ExperimentConfig, depth: u32, lambdas: &[f64]) -> Result<f64> {
    let geom = cfg.geometry(depth)?;
    let fs = cfg.inputs(geom, cfg.seed)?;
    Ok(endpoint_level_sets(&cfg.operator(geom)?, &fs, cfg.q, &cfg.weight(geom)?, lambdas)?.constant())
}

/// Weighted endpoint bounds over a λ grid: `w({‖T_A f‖ > λ}) +
/// w({‖T_A^* f‖ > λ})` against `[w]_{A_1} log²(e + [w]_{A_∞}) ∫ (F/λ)
/// log(e + F/λ) w`, and the same level sets against
/// `ε^{-2} ∫ (F/λ) log(e + F/λ) M_{L(log L)^ε} w` for several `ε`.
pub fn cmd_endpoint(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.check_common()?;
    if cfg.zero_input {
        return param("the endpoint experiment needs a nonzero input");
    }
    let depth = cfg.depth_or(10, 5);
    let geom = cfg.geometry(depth)?;
    let w = cfg.weight(geom)?;
    let op = cfg.operator(geom)?;
    let fs = cfg.inputs(geom, cfg.seed)?;
    let scale = vector_image(&op, &fs, cfg.q)?.max_abs();
    if scale == 0.0 {
        return param("T_A vanishes on the input; choose another seed or amplitude");
    }
    let lambdas = lambda_grid(scale, LEVELS);
    let main = endpoint_level_sets(&op, &fs, cfg.q, &w, &lambdas)?;
    let remarks: Vec<_> =
        EPSILONS.iter().map(|e| remark_level_sets(&op, &fs, cfg.q, &w, *e, &lambdas)).collect::<Result<_>>()?;

    let mut report = Report::new(
        "endpoint",
        &["lambda", "level_sets", "rhs", "ratio", "ratio_eps_0.25", "ratio_eps_0.5", "ratio_eps_1"],
    );
    let main_ratios = main.ratios();
    let remark_ratios: Vec<Vec<f64>> = remarks.iter().map(|r| r.ratios()).collect();
    for i in 0..lambdas.len() {
        report.push_row(vec![
            lambdas[i],
            main.lhs[i],
            main.rhs[i],
            main_ratios[i],
            remark_ratios[0][i],
            remark_ratios[1][i],
            remark_ratios[2][i],
        ]);
    }
    let constant = main.constant();
    report.set("depth", depth as f64);
    report.set("a1_constant", a1_constant(&w, depth)?);
    report.set("ainf_constant", ainf_constant(&w, depth)?);
    report.set("max_ratio", constant);
    for (e, r) in EPSILONS.iter().zip(&remarks) {
        report.set(&format!("max_ratio_eps_{e}"), r.constant());
    }
    report.set("refinement_delta", refinement_delta(constant, endpoint_constant(cfg, depth + 1, &lambdas)?));
    Ok(report)
}
