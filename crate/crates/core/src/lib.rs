//! Approximation algorithms for makespan minimization with assignment
//! constraints when jobs come in two sizes.
//!
//! Pipelines:
//! - [`unitk`]: sizes `{1, k}`, throttled flow relaxation plus Hall matching,
//!   ratio `2 - 1/k`.
//! - [`lenstra`]: transportation relaxation plus forest rounding, additive
//!   error of one big job, ratio `3/2` once the optimum is at least `2b`.
//! - [`two_valued`]: arbitrary two sizes by rounding the small size to a unit
//!   fraction in both directions.
//! - [`graph_balancing`]: every job allowed on at most two machines.
//!
//! [`oracle`] computes exact optima for small instances, and everything is
//! exact rational arithmetic.

pub mod bounds;
pub mod error;
pub mod flow;
pub mod format;
pub mod fractional;
pub mod gen;
pub mod graph_balancing;
pub mod lenstra;
pub mod matching;
pub mod maxflow;
pub mod model;
pub mod oracle;
pub mod rational;
pub mod solve;
pub mod two_valued;
pub mod unitk;

pub use error::{Error, Result};
pub use fractional::FractionalAssignment;
pub use model::{
    makespan, normalize, scale_to_integer, Instance, Job, ScaledInstance, Schedule, Violation,
};
pub use rational::Rational;
