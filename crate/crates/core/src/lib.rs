//! Explicit zero-density bounds for the Riemann zeta function.
//!
//! All logarithms are natural logarithms. Real powers `x^y` go through
//! [`constants::powr`] so every table value is computed the same way.

// `!(x > y)` is used on purpose so NaN inputs fail checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// reference coefficients and table entries are kept as printed
#![allow(clippy::excessive_precision)]

pub mod bounds;
pub mod constants;
pub mod error;
pub mod optimizer;
pub mod special;
pub mod tables;
pub mod verification;

pub use bounds::{bound_log_form, bound_power_form, validate_params, BoundForm, BoundResult, Violation};
pub use constants::{ConstantBundle, FixedInputs, ParameterSet, H0};
pub use error::{Error, Result};
pub use optimizer::{minimize, minimize_eta_mu, Objective, SearchConfig};
pub use special::EvalPrecision;
pub use tables::{emit_table, ParamsSource, TableFormat, TableRow, WhichTable};
