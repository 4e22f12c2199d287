use super::{DyadicCube, GridFunction, PrefixSums};
use crate::error::{param, Result};

/// Maximal dyadic subcubes `P ⊆ Q0` (same grid, `Q0` included) whose mean
/// exceeds `lambda`. Recursion stops at single cells.
pub fn cz_decompose(f: &GridFunction, q0: &DyadicCube, lambda: f64) -> Result<Vec<DyadicCube>> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return param(format!("level must be positive and finite, got {lambda}"));
    }
    if f.values().iter().any(|&v| v < 0.0 || v.is_nan()) {
        return param("decomposition needs a nonnegative function");
    }
    let fam = f.geometry().family();
    fam.cells(q0)?;
    let sums = PrefixSums::new(f);
    let mut out = Vec::new();
    let mut stack = vec![*q0];
    while let Some(q) = stack.pop() {
        let cells = fam.cells(&q)?;
        if sums.mean(&cells) > lambda {
            out.push(q);
        } else {
            stack.extend(fam.children(&q)?);
        }
    }
    out.sort_by_key(|c| c.sort_key());
    Ok(out)
}
