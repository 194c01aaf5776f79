//! Command implementations behind the `physgrowth` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod plot;
pub mod validate;
