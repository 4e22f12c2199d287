use std::fmt;
use std::sync::Arc;

use crate::error::{param, Result};
use crate::quadrature::adaptive;

type Eval = Arc<dyn Fn(&[f64]) -> (f64, [f64; 2]) + Send + Sync>;

/// The function `A` together with its gradient.
#[derive(Clone)]
pub struct Amplitude {
    name: String,
    dim: usize,
    eval: Eval,
    /// Coordinates where `∇A` is singular, per axis.
    breakpoints: Vec<f64>,
}

impl fmt::Debug for Amplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Amplitude({}, dim {})", self.name, self.dim)
    }
}

impl Amplitude {
    pub fn new(
        name: &str,
        dim: usize,
        breakpoints: Vec<f64>,
        eval: impl Fn(&[f64]) -> (f64, [f64; 2]) + Send + Sync + 'static,
    ) -> Self {
        Self { name: name.to_string(), dim, eval: Arc::new(eval), breakpoints }
    }

    /// `A(y) = Σ_i y_i log|y_i|`, `∂_i A = 1 + log|y_i|`.
    pub fn xlogx(dim: usize) -> Self {
        Self::new("xlogx", dim, vec![0.0], move |y| {
            let mut a = 0.0;
            let mut g = [0.0; 2];
            for i in 0..dim {
                let v = y[i];
                a += if v == 0.0 { 0.0 } else { v * v.abs().ln() };
                g[i] = 1.0 + v.abs().ln();
            }
            (a, g)
        })
    }

    /// `A(y) = c + b·y`.
    pub fn affine(dim: usize, c: f64, b: [f64; 2]) -> Self {
        Self::new("affine", dim, Vec::new(), move |y| {
            let a = c + (0..dim).map(|i| b[i] * y[i]).sum::<f64>();
            (a, b)
        })
    }

    /// Presets: `xlogx`, `affine:<s>` (`A(y) = s Σ y_i`), `affine:<c>,<b1>[,<b2>]`.
    pub fn preset(name: &str, dim: usize) -> Result<Self> {
        if name == "xlogx" {
            return Ok(Self::xlogx(dim));
        }
        if let Some(rest) = name.strip_prefix("affine:") {
            let nums: Vec<f64> = rest
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| crate::Error::Parameter(format!("bad affine amplitude {name:?}: {e}")))?;
            return match nums.len() {
                1 => Ok(Self::affine(dim, 0.0, [nums[0], if dim == 2 { nums[0] } else { 0.0 }])),
                n if n == dim + 1 => {
                    let mut b = [0.0; 2];
                    b[..dim].copy_from_slice(&nums[1..]);
                    Ok(Self::affine(dim, nums[0], b))
                }
                _ => param(format!("affine amplitude {name:?} needs 1 or {} numbers", dim + 1)),
            };
        }
        param(format!("unknown amplitude preset {name:?}"))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn value(&self, y: &[f64]) -> f64 {
        (self.eval)(y).0
    }

    pub fn gradient(&self, y: &[f64]) -> [f64; 2] {
        (self.eval)(y).1
    }

    pub fn value_and_gradient(&self, y: &[f64]) -> (f64, [f64; 2]) {
        (self.eval)(y)
    }

    /// `|∇A(y)|`.
    pub fn gradient_norm(&self, y: &[f64]) -> f64 {
        let g = self.gradient(y);
        (0..self.dim).map(|i| g[i] * g[i]).sum::<f64>().sqrt()
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }
}

/// `(|A(x) - A(y)|, |x - y| (⟨|∇A|^q⟩_{I})^{1/q})` with `I` the cube
/// centered at `x` of side `2|x - y|`.
pub fn gradient_mean_bound(a: &Amplitude, x: &[f64], y: &[f64], q: f64) -> Result<(f64, f64)> {
    let dim = a.dim();
    if x.len() != dim || y.len() != dim {
        return param("points must match the amplitude dimension");
    }
    if !(q >= 1.0) || !q.is_finite() {
        return param(format!("q must be finite and at least 1, got {q}"));
    }
    let lhs = (a.value(x) - a.value(y)).abs();
    let dist = (0..dim).map(|i| (x[i] - y[i]).powi(2)).sum::<f64>().sqrt();
    if dist == 0.0 {
        return Ok((lhs, 0.0));
    }
    let pieces = |lo: f64, hi: f64| -> Vec<(f64, f64)> {
        let mut cuts = vec![lo];
        cuts.extend(a.breakpoints().iter().copied().filter(|b| *b > lo && *b < hi));
        cuts.push(hi);
        cuts.windows(2).map(|w| (w[0], w[1])).collect()
    };
    let integrate = |f: &dyn Fn(f64) -> f64, lo: f64, hi: f64| -> f64 {
        pieces(lo, hi).iter().map(|&(s, t)| adaptive(f, s, t, 1e-10 * (t - s))).sum()
    };
    let mean = if dim == 1 {
        let f = |t: f64| a.gradient_norm(&[t]).powf(q);
        integrate(&f, x[0] - dist, x[0] + dist) / (2.0 * dist)
    } else {
        let outer = |t1: f64| {
            let f = |t0: f64| a.gradient_norm(&[t0, t1]).powf(q);
            integrate(&f, x[0] - dist, x[0] + dist)
        };
        integrate(&outer, x[1] - dist, x[1] + dist) / (4.0 * dist * dist)
    };
    Ok((lhs, dist * mean.powf(1.0 / q)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gradients_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for a in [Amplitude::xlogx(2), Amplitude::preset("affine:1,2,-3", 2).unwrap()] {
            for _ in 0..50 {
                let y = [rng.gen_range(0.1..2.0), rng.gen_range(-2.0..-0.1)];
                let h = 1e-6;
                let g = a.gradient(&y);
                for i in 0..2 {
                    let mut yp = y;
                    let mut ym = y;
                    yp[i] += h;
                    ym[i] -= h;
                    let fd = (a.value(&yp) - a.value(&ym)) / (2.0 * h);
                    assert!((fd - g[i]).abs() < 1e-6, "{a:?} {y:?}");
                }
            }
        }
    }

    #[test]
    fn presets_parse() {
        let a = Amplitude::preset("affine:2", 1).unwrap();
        assert_eq!(a.value(&[3.0]), 6.0);
        let b = Amplitude::preset("affine:1,2", 1).unwrap();
        assert_eq!(b.value(&[3.0]), 7.0);
        assert!(Amplitude::preset("affine:1,2,3", 1).is_err());
        assert!(Amplitude::preset("cubic", 1).is_err());
    }

    #[test]
    fn gradient_bound_for_affine_and_equal_points() {
        let a = Amplitude::affine(2, 1.0, [3.0, -4.0]);
        let (lhs, rhs) = gradient_mean_bound(&a, &[0.1, 0.2], &[0.5, -0.3], 2.0).unwrap();
        assert!((lhs - (3.0 * 0.4f64 - 4.0 * -0.5f64).abs()).abs() < 1e-12);
        assert!(lhs <= rhs * 2f64.sqrt() + 1e-12);
        let (l, r) = gradient_mean_bound(&a, &[0.3, 0.3], &[0.3, 0.3], 2.0).unwrap();
        assert_eq!((l, r), (0.0, 0.0));
    }

    #[test]
    fn gradient_bound_for_xlogx_is_uniform() {
        let a = Amplitude::xlogx(1);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let x = rng.gen_range(0.0..1.0);
            let y = rng.gen_range(0.0..1.0);
            let (lhs, rhs) = gradient_mean_bound(&a, &[x], &[y], 2.0).unwrap();
            worst = worst.max(lhs / rhs);
        }
        assert!(worst < 4.0, "recorded constant {worst}");
    }
}
