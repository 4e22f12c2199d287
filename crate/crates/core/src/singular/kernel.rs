use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{param, Result};
use crate::quadrature::GaussLegendre;

type AngularFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A function on the unit sphere: a value pair in 1-D, a function of the
/// angle in 2-D. Homogeneity of degree zero is structural: the kernel is
/// only ever evaluated on directions.
#[derive(Clone)]
pub enum SphericalKernel {
    Line { plus: f64, minus: f64 },
    Plane { name: String, omega: AngularFn },
}

impl fmt::Debug for SphericalKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SphericalKernel::Line { plus, minus } => write!(f, "Line({plus}, {minus})"),
            SphericalKernel::Plane { name, .. } => write!(f, "Plane({name})"),
        }
    }
}

impl SphericalKernel {
    pub fn line(plus: f64, minus: f64) -> Self {
        SphericalKernel::Line { plus, minus }
    }

    pub fn plane(name: &str, omega: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        SphericalKernel::Plane { name: name.to_string(), omega: Arc::new(omega) }
    }

    /// Linear interpolation of `samples[k] = Ω(2πk/len)`.
    pub fn from_samples(samples: Vec<f64>) -> Result<Self> {
        if samples.len() < 3 || samples.iter().any(|v| !v.is_finite()) {
            return param("a sampled kernel needs at least three finite samples");
        }
        let n = samples.len();
        Ok(Self::plane("samples", move |theta| {
            let u = theta.rem_euclid(2.0 * PI) / (2.0 * PI) * n as f64;
            let i = (u.floor() as usize).min(n - 1);
            let frac = u - i as f64;
            samples[i] * (1.0 - frac) + samples[(i + 1) % n] * frac
        }))
    }

    /// Named presets: `const1`, `cos2theta`, `costheta` (2-D), `sign` (1-D odd pair).
    pub fn preset(name: &str, dim: usize) -> Result<Self> {
        match (name, dim) {
            ("const1", 1) => Ok(Self::line(1.0, 1.0)),
            ("sign", 1) => Ok(Self::line(1.0, -1.0)),
            ("const1", 2) => Ok(Self::plane("const1", |_| 1.0)),
            ("cos2theta", 2) => Ok(Self::plane("cos2theta", |t| (2.0 * t).cos())),
            ("costheta", 2) => Ok(Self::plane("costheta", f64::cos)),
            _ => param(format!("unknown kernel preset {name:?} in dimension {dim}")),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            SphericalKernel::Line { .. } => 1,
            SphericalKernel::Plane { .. } => 2,
        }
    }

    pub fn at_angle(&self, theta: f64) -> f64 {
        match self {
            SphericalKernel::Line { plus, minus } => {
                if theta.cos() >= 0.0 {
                    *plus
                } else {
                    *minus
                }
            }
            SphericalKernel::Plane { omega, .. } => omega(theta),
        }
    }

    /// `Ω(z/|z|)` for a nonzero vector.
    pub fn eval(&self, z: [f64; 2]) -> f64 {
        match self {
            SphericalKernel::Line { plus, minus } => {
                if z[0] >= 0.0 {
                    *plus
                } else {
                    *minus
                }
            }
            SphericalKernel::Plane { omega, .. } => omega(z[1].atan2(z[0])),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        match self {
            SphericalKernel::Line { plus, minus } => plus.abs().max(minus.abs()),
            SphericalKernel::Plane { omega, .. } => {
                (0..4096).map(|k| omega(2.0 * PI * k as f64 / 4096.0).abs()).fold(0.0, f64::max)
            }
        }
    }
}

/// First spherical moments `∫ Ω(x') x'_j dσ(x')`, one residual per coordinate.
pub fn check_vanishing_moment(kernel: &SphericalKernel) -> Vec<f64> {
    match kernel {
        SphericalKernel::Line { plus, minus } => vec![plus - minus],
        SphericalKernel::Plane { omega, .. } => {
            // Periodic trapezoid rule: exact for trigonometric polynomials of low degree.
            let m = 4096;
            let dt = 2.0 * PI / m as f64;
            let (mut c, mut s) = (0.0, 0.0);
            for k in 0..m {
                let t = k as f64 * dt;
                let w = omega(t);
                c += w * t.cos();
                s += w * t.sin();
            }
            vec![c * dt, s * dt]
        }
    }
}

const THETA_SAMPLES: usize = 8192;

/// `ω_∞(t) = sup_{|ρ - I| < t} sup_{x'} |Ω(ρx') - Ω(x')|`, with rotations
/// `ρ` by angle `φ`, `|ρ - I| = 2 sin(φ/2)`. Zero in 1-D.
pub fn continuity_modulus(kernel: &SphericalKernel, t: f64) -> f64 {
    let SphericalKernel::Plane { omega, .. } = kernel else {
        return 0.0;
    };
    if t <= 0.0 {
        return 0.0;
    }
    let phi_max = if t >= 2.0 { PI } else { 2.0 * (t / 2.0).asin() };
    let mut phis: Vec<f64> = (1..=32).map(|k| phi_max * k as f64 / 32.0).collect();
    phis[31] = phi_max * (1.0 - 1e-12);
    let base: Vec<f64> = (0..THETA_SAMPLES).map(|k| omega(2.0 * PI * k as f64 / THETA_SAMPLES as f64)).collect();
    let mut best = 0.0f64;
    for phi in phis {
        for sign in [1.0, -1.0] {
            for (k, b) in base.iter().enumerate() {
                let theta = 2.0 * PI * k as f64 / THETA_SAMPLES as f64;
                best = best.max((omega(theta + sign * phi) - b).abs());
            }
        }
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiniReport {
    /// `∫_{t_min}^1 ω_∞(t)(1 + |log t|) dt/t`.
    pub integral: f64,
    /// Contribution of the last decade `(t_min, 10 t_min)`.
    pub last_decade: f64,
}

/// Log-Dini integral of the continuity modulus, Gauss–Legendre per decade in `log t`.
pub fn dini_log_integral(kernel: &SphericalKernel, t_min: f64) -> Result<DiniReport> {
    if !(t_min > 0.0 && t_min < 1.0) {
        return param(format!("t_min must lie in (0,1), got {t_min}"));
    }
    let rule = GaussLegendre::new(8);
    let lo = t_min.ln();
    let decade = 10f64.ln();
    let mut edges = vec![0.0];
    while *edges.last().unwrap() > lo {
        let next = (edges.last().unwrap() - decade).max(lo);
        edges.push(next);
    }
    let mut pieces = Vec::new();
    for w in edges.windows(2) {
        // t = e^u: ω(t)(1 + |log t|) dt/t = ω(e^u)(1 - u) du.
        pieces.push(rule.integrate(w[1], w[0], |u| continuity_modulus(kernel, u.exp()) * (1.0 - u)));
    }
    Ok(DiniReport { integral: pieces.iter().sum(), last_decade: *pieces.last().unwrap_or(&0.0) })
}
