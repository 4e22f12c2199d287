//! Level-set inequalities measured on a λ grid, and the pointwise bound
//! for grand maximal operators. Each suite returns both sides per λ; the
//! recorded constant is the worst ratio.

use crate::error::{param, Result};
use crate::grid::{FunctionSequence, GridFunction};
use crate::maximal::{grand_maximal, orlicz_maximal, CellSet, GrandMaximalConfig, SublinearOperator};
use crate::orlicz::{LogShift, OrliczParams};
use crate::singular::{TaMode, TaOperator};
use crate::sparse::{sparse_operator, SparseFamily};
use crate::weights::{a1_constant, ainf_constant, level_set_measure, Weight};

/// Both sides of a level-set inequality over a λ grid.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct LevelSetProfile {
    pub lambdas: Vec<f64>,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl LevelSetProfile {
    /// `max lhs/rhs`; infinite if some level set has mass against a zero
    /// right side.
    pub fn constant(&self) -> f64 {
        self.lhs.iter().zip(&self.rhs).fold(0.0f64, |m, (l, r)| {
            if *l == 0.0 {
                m
            } else if *r == 0.0 {
                f64::INFINITY
            } else {
                m.max(l / r)
            }
        })
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.lhs.iter().zip(&self.rhs).map(|(l, r)| if *l == 0.0 { 0.0 } else { l / r }).collect()
    }
}

/// `count` levels `scale · 2^{(i - count + 4)/2}`: from far below `scale`
/// to `2^{3/2}` above it.
pub fn lambda_grid(scale: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| scale * 2f64.powf((i as f64 - count as f64 + 4.0) / 2.0)).collect()
}

/// `∫ (g/λ) log^β(s + g/λ) u` with `s = 1` or `e`.
pub fn young_integral(g: &GridFunction, u: &[f64], lambda: f64, beta: f64, shift: LogShift) -> f64 {
    let params = OrliczParams { beta, shift, ..OrliczParams::new(0.0).expect("β = 0 is valid") };
    g.values().iter().zip(u).map(|(v, w)| params.young(v.abs() / lambda) * w).sum::<f64>() * g.geometry().cell_volume()
}

fn check_lambdas(lambdas: &[f64]) -> Result<()> {
    if lambdas.is_empty() || lambdas.iter().any(|l| !(*l > 0.0) || !l.is_finite()) {
        return param("λ grid must be non-empty, positive and finite");
    }
    Ok(())
}

fn profile(lambdas: &[f64], lhs: impl Fn(f64) -> f64, rhs: impl Fn(f64) -> f64) -> Result<LevelSetProfile> {
    check_lambdas(lambdas)?;
    Ok(LevelSetProfile {
        lambdas: lambdas.to_vec(),
        lhs: lambdas.iter().map(|l| lhs(*l)).collect(),
        rhs: lambdas.iter().map(|l| rhs(*l)).collect(),
    })
}

/// `|{M_{L(log L)^β} f > λ}|` against `∫ (|f|/λ) log^β(1 + |f|/λ)`.
pub fn orlicz_maximal_level_sets(f: &GridFunction, beta: f64, lambdas: &[f64]) -> Result<LevelSetProfile> {
    let m = orlicz_maximal(f, &OrliczParams::new(beta)?)?;
    let ones = vec![1.0; f.geometry().cell_count()];
    let vol = f.geometry().cell_volume();
    profile(
        lambdas,
        |l| level_set_measure(m.values(), &ones, vol, l),
        |l| young_integral(f, &ones, l, beta, LogShift::One),
    )
}

/// `|{‖{M_{L(log L)^l} f_k}‖_{ℓ^q} > λ}|` against the same integral of
/// `‖{f_k}‖_{ℓ^q}`.
pub fn vector_orlicz_level_sets(fs: &FunctionSequence, q: f64, l: f64, lambdas: &[f64]) -> Result<LevelSetProfile> {
    let params = OrliczParams::new(l)?;
    let maxima: Vec<GridFunction> = fs.items().iter().map(|f| orlicz_maximal(f, &params)).collect::<Result<_>>()?;
    let lhs = FunctionSequence::new(maxima)?.lq_norm(q);
    let norm = fs.lq_norm(q);
    let ones = vec![1.0; norm.geometry().cell_count()];
    let vol = norm.geometry().cell_volume();
    profile(
        lambdas,
        |x| level_set_measure(lhs.values(), &ones, vol, x),
        |x| young_integral(&norm, &ones, x, l, LogShift::One),
    )
}

/// `‖{T f_k}‖_{ℓ^q}` per cell.
pub fn vector_image<T: SublinearOperator + ?Sized>(op: &T, fs: &FunctionSequence, q: f64) -> Result<GridFunction> {
    let parts: Vec<GridFunction> = fs.items().iter().map(|f| op.apply(f, &CellSet::All)).collect::<Result<_>>()?;
    Ok(FunctionSequence::new(parts)?.lq_norm(q))
}

/// `|{‖{T f_k}‖_{ℓ^q} > λ}|` against `∫ (F/λ) log(1 + F/λ)`,
/// `F = ‖{f_k}‖_{ℓ^q}`.
pub fn operator_level_sets<T: SublinearOperator + ?Sized>(
    op: &T,
    fs: &FunctionSequence,
    q: f64,
    lambdas: &[f64],
) -> Result<LevelSetProfile> {
    let image = vector_image(op, fs, q)?;
    let norm = fs.lq_norm(q);
    let ones = vec![1.0; norm.geometry().cell_count()];
    let vol = norm.geometry().cell_volume();
    profile(
        lambdas,
        |l| level_set_measure(image.values(), &ones, vol, l),
        |l| young_integral(&norm, &ones, l, 1.0, LogShift::One),
    )
}

/// `w({‖T_A f‖ > λ}) + w({‖T_A^* f‖ > λ})` against
/// `[w]_{A_1} log²(e + [w]_{A_∞}) ∫ (F/λ) log(e + F/λ) w`.
pub fn endpoint_level_sets(
    op: &TaOperator,
    fs: &FunctionSequence,
    q: f64,
    w: &Weight,
    lambdas: &[f64],
) -> Result<LevelSetProfile> {
    let depth = w.geometry().depth();
    let constant = a1_constant(w, depth)? * (std::f64::consts::E + ainf_constant(w, depth)?).ln().powi(2);
    let t = vector_image(op, fs, q)?;
    let t_star = vector_image(&op.clone().with_mode(TaMode::Maximal), fs, q)?;
    let wc = w.cells()?;
    let norm = fs.lq_norm(q);
    let vol = norm.geometry().cell_volume();
    profile(
        lambdas,
        |l| {
            level_set_measure(t.values(), wc.values(), vol, l) + level_set_measure(t_star.values(), wc.values(), vol, l)
        },
        |l| constant * young_integral(&norm, wc.values(), l, 1.0, LogShift::E),
    )
}

/// `w({‖T_A f‖ + ‖T_A^* f‖ > λ})` against
/// `ε^{-2} ∫ (F/λ) log(e + F/λ) M_{L(log L)^ε} w`.
pub fn remark_level_sets(
    op: &TaOperator,
    fs: &FunctionSequence,
    q: f64,
    w: &Weight,
    epsilon: f64,
    lambdas: &[f64],
) -> Result<LevelSetProfile> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return param(format!("ε must lie in (0, 1], got {epsilon}"));
    }
    let t = vector_image(op, fs, q)?;
    let t_star = vector_image(&op.clone().with_mode(TaMode::Maximal), fs, q)?;
    let sum = t.zip_with(&t_star, |a, b| a + b)?;
    let wc = w.cells()?;
    let mw = orlicz_maximal(&wc, &OrliczParams::new(epsilon)?)?;
    let norm = fs.lq_norm(q);
    let vol = norm.geometry().cell_volume();
    profile(
        lambdas,
        |l| level_set_measure(sum.values(), wc.values(), vol, l),
        |l| epsilon.powi(-2) * young_integral(&norm, mw.values(), l, 1.0, LogShift::E),
    )
}

/// `u({A_S f > λ})` against
/// `ε^{-1-β} ∫ (|f|/λ) log^β(e + |f|/λ) M_{L(log L)^ε} u`.
pub fn sparse_level_sets(
    family: &SparseFamily,
    f: &GridFunction,
    beta: f64,
    u: &Weight,
    epsilon: f64,
    lambdas: &[f64],
) -> Result<LevelSetProfile> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return param(format!("ε must lie in (0, 1], got {epsilon}"));
    }
    let a = sparse_operator(family, f, &OrliczParams::new(beta)?)?;
    let uc = u.cells()?;
    let mu = orlicz_maximal(&uc, &OrliczParams::new(epsilon)?)?;
    let vol = f.geometry().cell_volume();
    profile(
        lambdas,
        |l| level_set_measure(a.values(), uc.values(), vol, l),
        |l| epsilon.powf(-1.0 - beta) * young_integral(f, mu.values(), l, beta, LogShift::E),
    )
}

/// `max_x M_T f(x) / (M_{L log L} f(x) + T^* f(x))` for a `T_A` in either
/// mode; `T^*` is always the maximal truncation.
pub fn pointwise_grand_constant(op: &TaOperator, f: &GridFunction, config: &GrandMaximalConfig) -> Result<f64> {
    let grand = grand_maximal(op, f, config)?;
    let orlicz = orlicz_maximal(f, &OrliczParams::new(1.0)?)?;
    let star = op.t_a_star(f)?;
    let floor = f64::EPSILON * orlicz.max_abs().max(star.max_abs()).max(f64::MIN_POSITIVE);
    Ok(grand
        .values()
        .iter()
        .zip(orlicz.values().iter().zip(star.values()))
        .fold(0.0f64, |m, (g, (a, b))| m.max(g / (a + b).max(floor))))
}
