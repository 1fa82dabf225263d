use thiserror::Error;

use crate::model::Violation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    Invalid(#[from] Violation),

    #[error("job {job} assigned to machine {machine} outside its allowed set")]
    NotAllowed { job: usize, machine: usize },

    #[error("schedule covers {got} jobs, instance has {expected}")]
    ScheduleLength { expected: usize, got: usize },

    #[error("non-integer ratio: small size {small} does not divide the big size")]
    NonIntegerRatio { small: String },

    #[error("not a graph balancing instance: job {job} has {allowed} allowed machines")]
    NotGraphBalancing { job: usize, allowed: usize },

    #[error("flow does not meet demand: {value} of {demand}")]
    DemandNotMet { value: i64, demand: i64 },

    #[error("support graph contains a cycle")]
    CyclicSupport,

    #[error("vertex {vertex} has degree {degree} in the half-edge graph")]
    DegreeTooHigh { vertex: usize, degree: usize },

    /// A structural guarantee of the algorithm failed. Always a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("oracle budget of {budget} search nodes exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invariant(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Invariant(msg()))
    }
}
