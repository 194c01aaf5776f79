//! Physical growth theory: closed-form S-function solutions for GDP,
//! physical capital and life expectancy, the demand/supply equilibrium,
//! parameter estimation from national series, and numerical verification
//! of the analytic solutions against their growth laws.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dataio;
pub mod error;
pub mod estimation;
pub mod growth_model;
mod numeric;
pub mod ode_verify;
pub mod types;

pub use error::{Error, Result};
pub use types::{
    default_constants, AnnualSeries, FitReport, ModelConstants, NationParams, RecoveryCurve,
    SCurve, Unit,
};
