//! Experiment drivers behind the command-line harness. Each driver returns
//! a [`Report`]: a numeric table, named summary values (fitted slopes,
//! worst constants, refinement deltas) and free-form notes.

mod domination;
mod endpoint;
mod sharpness;
pub mod weak_type;
mod weighted;

pub use domination::cmd_domination;
pub use endpoint::cmd_endpoint;
pub use sharpness::cmd_sharpness;
pub use weighted::{cmd_buckley, cmd_weighted_bound};

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{param, Result};
use crate::grid::{FunctionSequence, Geometry, GridBox, GridFunction};
use crate::singular::{Amplitude, SphericalKernel, TaOperator};
use crate::weights::Weight;

/// Command names accepted by [`run_command`].
pub const COMMANDS: [&str; 5] = ["sharpness", "domination", "weighted-bound", "endpoint", "buckley"];

/// Runs the experiment called `name`.
pub fn run_command(name: &str, cfg: &ExperimentConfig) -> Result<Report> {
    match name {
        "sharpness" => cmd_sharpness(cfg),
        "domination" => cmd_domination(cfg),
        "weighted-bound" => cmd_weighted_bound(cfg),
        "endpoint" => cmd_endpoint(cfg),
        "buckley" => cmd_buckley(cfg),
        _ => param(format!("unknown experiment '{name}'; expected one of {}", COMMANDS.join(", "))),
    }
}

/// Parameters shared by all experiments. Each experiment reads the fields
/// it needs and ignores the rest.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub p: f64,
    pub q: f64,
    pub beta: f64,
    pub deltas: Vec<f64>,
    /// Cells per axis are `2^depth`; `None` picks the experiment default.
    pub depth: Option<u32>,
    pub dim: usize,
    pub seed: u64,
    /// Number of random seeds for experiments that aggregate over seeds.
    pub seeds: usize,
    /// Length of random function sequences.
    pub functions: usize,
    pub omega: String,
    pub amplitude: String,
    /// `unit` or `power:<exponent>` (centered at the origin).
    pub weight: String,
    /// Leave out this many of the largest `δ` from slope fits.
    pub exclude_coarsest: usize,
    /// Initial threshold multiplier of the sparse construction.
    pub c2_initial: Option<f64>,
    /// Replace the random inputs by zero (control runs).
    pub zero_input: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            p: 1.5,
            q: 2.0,
            beta: 1.0,
            deltas: vec![0.4, 0.2, 0.1, 0.05],
            depth: None,
            dim: 1,
            seed: 0,
            seeds: 20,
            functions: 2,
            omega: "const1".into(),
            amplitude: "xlogx".into(),
            weight: "power:-0.5".into(),
            exclude_coarsest: 0,
            c2_initial: None,
            zero_input: false,
        }
    }
}

impl ExperimentConfig {
    /// Parses a JSON object; absent fields keep their defaults.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| crate::Error::Format(format!("experiment config: {e}")))
    }

    pub(crate) fn depth_or(&self, one_d: u32, two_d: u32) -> u32 {
        self.depth.unwrap_or(if self.dim == 2 { two_d } else { one_d })
    }

    pub(crate) fn check_common(&self) -> Result<()> {
        if self.dim != 1 && self.dim != 2 {
            return param(format!("dimension must be 1 or 2, got {}", self.dim));
        }
        if !(self.p > 1.0) || !self.p.is_finite() {
            return param(format!("p must be finite and greater than 1, got {}", self.p));
        }
        if !(self.q >= 1.0) {
            return param(format!("q must be at least 1, got {}", self.q));
        }
        if !(self.beta >= 0.0) || !self.beta.is_finite() {
            return param(format!("β must be finite and non-negative, got {}", self.beta));
        }
        Ok(())
    }

    /// The box `[-2, 2)^n` at `depth`.
    pub(crate) fn geometry(&self, depth: u32) -> Result<Geometry> {
        Geometry::new(GridBox::new(self.dim, &vec![-2.0; self.dim], 4.0)?, depth)
    }

    pub(crate) fn operator(&self, geom: Geometry) -> Result<TaOperator> {
        TaOperator::new(
            geom,
            SphericalKernel::preset(&self.omega, self.dim)?,
            Amplitude::preset(&self.amplitude, self.dim)?,
        )
    }

    pub(crate) fn weight(&self, geom: Geometry) -> Result<Weight> {
        parse_weight(&self.weight, geom)
    }

    /// `functions` random functions for `seed`, or zeros for a control run.
    pub(crate) fn inputs(&self, geom: Geometry, seed: u64) -> Result<FunctionSequence> {
        if self.zero_input {
            return FunctionSequence::new(vec![GridFunction::zeros(geom); self.functions.max(1)]);
        }
        random_sequence(geom, seed, self.functions.max(1))
    }
}

/// `unit` or `power:<exponent>`.
pub fn parse_weight(spec: &str, geom: Geometry) -> Result<Weight> {
    if spec == "unit" {
        return Ok(Weight::unit(geom));
    }
    if let Some(e) = spec.strip_prefix("power:") {
        let e: f64 =
            e.trim().parse().map_err(|_| crate::Error::Parameter(format!("bad weight exponent in '{spec}'")))?;
        return Weight::power(geom, &vec![0.0; geom.dim()], e);
    }
    param(format!("unknown weight '{spec}'; use unit or power:<exponent>"))
}

/// Random piecewise-constant functions on 16 blocks per axis, supported
/// in `[-1, 1)^n` for the box `[-2, 2)^n`, with about 40% zero blocks.
pub fn random_sequence(geom: Geometry, seed: u64, count: usize) -> Result<FunctionSequence> {
    let pieces = 16.min(geom.cells_per_axis());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inner = |b: usize| (pieces / 4..3 * pieces / 4).contains(&b);
    let items = (0..count)
        .map(|_| {
            let vals: Vec<f64> = (0..pieces.pow(geom.dim() as u32))
                .map(|i| {
                    let inside = inner(i % pieces) && (geom.dim() == 1 || inner(i / pieces));
                    if inside && rng.gen_bool(0.6) {
                        rng.gen_range(-4.0..4.0)
                    } else {
                        0.0
                    }
                })
                .collect();
            GridFunction::piecewise_constant(geom, pieces, &vals)
        })
        .collect::<Result<Vec<_>>>()?;
    FunctionSequence::new(items)
}

/// Ordinary least-squares slope of `log y` against `log x`.
pub fn fit_loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return param("a slope fit needs at least two (x, y) pairs");
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return param("log-log fits need positive finite data");
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return param("a slope fit needs at least two distinct x values");
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

/// Drops the `skip` pairs with the largest `x` before fitting.
pub(crate) fn fit_excluding(xs: &[f64], ys: &[f64], skip: usize) -> Result<f64> {
    let mut pairs: Vec<(f64, f64)> = xs.iter().copied().zip(ys.iter().copied()).collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let kept = &pairs[skip.min(pairs.len())..];
    let (x, y): (Vec<f64>, Vec<f64>) = kept.iter().copied().unzip();
    fit_loglog_slope(&x, &y)
}

/// Relative change `|fine - coarse| / |coarse|` (absolute when `coarse = 0`).
pub fn refinement_delta(coarse: f64, fine: f64) -> f64 {
    if coarse == 0.0 {
        fine.abs()
    } else {
        ((fine - coarse) / coarse).abs()
    }
}

/// Result of one experiment.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct Report {
    pub experiment: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub summary: Vec<(String, f64)>,
    pub notes: Vec<String>,
}

fn format_value(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:?}")
    }
}

impl Report {
    pub(crate) fn new(experiment: &str, columns: &[&str]) -> Self {
        Self {
            experiment: experiment.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub(crate) fn push_row(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub(crate) fn set(&mut self, name: &str, value: f64) {
        self.summary.push((name.into(), value));
    }

    pub fn summary_value(&self, name: &str) -> Option<f64> {
        self.summary.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format_value(*v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports contain only plain data")
    }

    /// `name = value` lines followed by the notes.
    pub fn summary_text(&self) -> String {
        let mut out = String::new();
        for (name, v) in &self.summary {
            let _ = writeln!(out, "{name} = {}", format_value(*v));
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }

    /// Two-column `x y` files, one per remaining column, keyed by file name.
    pub fn plot_data(&self) -> Vec<(String, String)> {
        let Some(x) = self.columns.first() else {
            return Vec::new();
        };
        self.columns[1..]
            .iter()
            .enumerate()
            .map(|(j, y)| {
                let mut body = format!("# {x} {y}\n");
                for row in &self.rows {
                    let _ = writeln!(body, "{} {}", format_value(row[0]), format_value(row[j + 1]));
                }
                (format!("{}_{}.dat", self.experiment, y), body)
            })
            .collect()
    }
}
