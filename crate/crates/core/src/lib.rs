// Negated float comparisons are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod grid;
pub mod maximal;
pub mod orlicz;
pub mod quadrature;
pub mod singular;
pub mod sparse;
pub mod weights;

pub use error::{Error, Result};
