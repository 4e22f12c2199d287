//! The rough kernel `Ω`, the amplitude `A`, the operator `T_A`, its
//! truncations and maximal truncation, and kernel diagnostics.

mod amplitude;
mod bmo;
mod kernel;
mod operator;
pub mod sharpness;

pub use amplitude::{gradient_mean_bound, Amplitude};
pub use bmo::bmo_seminorm;
pub use kernel::{check_vanishing_moment, continuity_modulus, dini_log_integral, DiniReport, SphericalKernel};
pub use operator::{PrincipalValue, TaMode, TaOperator};
