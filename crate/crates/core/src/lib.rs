//! Partitioned bulk-synchronous graph processing on emulated heterogeneous
//! processing elements.

// `!(x > 0.0)` is used on purpose so that NaN fails range checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algorithms;
pub mod engine;
pub mod error;
pub mod graph;
pub mod model;
pub mod par;
pub mod partition;
pub mod runner;
pub mod telemetry;

pub use error::{Error, Result};
