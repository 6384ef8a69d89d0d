use thiserror::Error;

use crate::forms::Axis;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(u32, u32),
    #[error("wrong degree: expected {expected}, found {found}")]
    WrongDegree { expected: u32, found: u32 },
    #[error("modulus form has no pure power of {0}; cannot eliminate along this axis")]
    NoEliminationTerm(Axis),
    #[error("zero input: {0}")]
    ZeroInput(&'static str),
    #[error("point {0} is not on the curve")]
    NotOnCurve(String),
    #[error("the invariant psi0 vanishes; the form is not a Klein twist")]
    VanishingInvariant,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("bad reduction at p = {0}")]
    BadReduction(u64),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error("degenerate chart: {0}")]
    DegenerateChart(String),
    #[error("internal error: {0}")]
    Internal(String),
}
