use super::{refinement_delta, ExperimentConfig, Report};
use crate::error::Result;
use crate::grid::DyadicCube;
use crate::sparse::{build_sparse_family, domination_ratio, verify_sparsity, SparseConfig, SparseFamily};

fn sparse_config(cfg: &ExperimentConfig) -> Result<SparseConfig> {
    let mut sc = SparseConfig::new(cfg.q, cfg.beta)?;
    sc.c2_initial = cfg.c2_initial;
    Ok(sc)
}

/// One construction: the family and its domination ratio for `T_A`.
pub(crate) fn run_seed(cfg: &ExperimentConfig, depth: u32, seed: u64) -> Result<(SparseFamily, f64, bool)> {
    let geom = cfg.geometry(depth)?;
    let op = cfg.operator(geom)?;
    let fs = cfg.inputs(geom, seed)?;
    let trivial = fs.items().iter().all(|f| f.max_abs() == 0.0);
    let sc = sparse_config(cfg)?;
    let root = DyadicCube::standard(0, &vec![0; cfg.dim]);
    let family = build_sparse_family(&op, &fs, &root, &sc)?;
    let ratio = domination_ratio(&op, &fs, &family, cfg.q, &sc.orlicz)?;
    Ok((family, ratio, trivial))
}

/// Sparse families for `T_A` over `seeds` random sequences: sparsity,
/// construction metadata and the domination constant per seed.
pub fn cmd_domination(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.check_common()?;
    let depth = cfg.depth_or(10, 5);
    let mut report = Report::new(
        "domination",
        &[
            "seed",
            "functions",
            "trivial",
            "cubes",
            "c2_max",
            "recursion_depth",
            "worst_witness_ratio",
            "sparse",
            "worst_child_fraction",
            "domination_ratio",
        ],
    );
    let mut worst_ratio = 0.0f64;
    let mut all_sparse = true;
    let mut c2_max = 0.0f64;
    for s in 0..cfg.seeds.max(1) {
        let seed = cfg.seed + s as u64;
        let (family, ratio, trivial) = run_seed(cfg, depth, seed)?;
        let check = verify_sparsity(&family, family.eta());
        let m = &family.metadata;
        all_sparse &= check.sparse;
        worst_ratio = worst_ratio.max(ratio);
        c2_max = c2_max.max(m.c2_max);
        report.push_row(vec![
            seed as f64,
            cfg.functions.max(1) as f64,
            trivial as u8 as f64,
            family.len() as f64,
            m.c2_max,
            m.recursion_depth as f64,
            check.worst_ratio,
            check.sparse as u8 as f64,
            m.worst_child_fraction,
            ratio,
        ]);
    }
    report.set("depth", depth as f64);
    report.set("eta", 0.5 * 3f64.powi(-(cfg.dim as i32)));
    report.set("all_sparse", all_sparse as u8 as f64);
    report.set("max_domination_ratio", worst_ratio);
    report.set("max_c2", c2_max);
    let (_, coarse, _) = run_seed(cfg, depth, cfg.seed)?;
    let (_, fine, _) = run_seed(cfg, depth + 1, cfg.seed)?;
    report.set("refinement_delta", refinement_delta(coarse, fine));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_inputs_are_flagged_trivial() {
        let cfg = ExperimentConfig { depth: Some(6), seeds: 2, zero_input: true, ..Default::default() };
        let r = cmd_domination(&cfg).unwrap();
        assert_eq!(r.column("trivial").unwrap(), vec![1.0, 1.0]);
        assert_eq!(r.column("cubes").unwrap(), vec![0.0, 0.0]);
        assert_eq!(r.summary_value("max_domination_ratio"), Some(0.0));
    }

    #[test]
    fn one_and_four_functions_give_comparable_constants() {
        let base = ExperimentConfig { depth: Some(8), seeds: 3, ..Default::default() };
        let one = cmd_domination(&ExperimentConfig { functions: 1, ..base.clone() }).unwrap();
        let four = cmd_domination(&ExperimentConfig { functions: 4, ..base }).unwrap();
        let a = one.summary_value("max_domination_ratio").unwrap();
        let b = four.summary_value("max_domination_ratio").unwrap();
        assert!(a > 0.0 && b > 0.0 && a / b < 10.0 && b / a < 10.0, "{a} {b}");
        assert_eq!(one.summary_value("all_sparse"), Some(1.0));
    }
}
