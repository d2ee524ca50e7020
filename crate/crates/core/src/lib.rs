//! Searching `w` rays from a common origin with `λ` robots, the geometric
//! counterpart of running `w` basic algorithms in `λ` memory areas.
//!
//! - [`model`]: traces, plans, costs and goal truncation.
//! - [`analytic`]: closed-form competitive ratios and their numeric solvers.
//! - [`strategies`]: deterministic and randomized plan generators.
//! - [`simulator`]: worst-case and Monte Carlo ratio estimates.
//! - [`sequences`]: ratio sequences used by the lower-bound argument.
//! - [`schedule`]: reading a plan as a time-sliced hybrid algorithm.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod model;
pub mod rng;
pub mod schedule;
pub mod sequences;
pub mod simulator;
pub mod strategies;

pub use error::{Error, Result};
pub use model::{ExplorationPlan, GoalPlacement, Segment, Trace};
pub use rng::RandomSource;
