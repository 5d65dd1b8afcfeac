//! Exact scalar arithmetic: arbitrary-precision rationals, quadratic surds,
//! and Bernoulli numbers.
//!
//! Everything in this module is exact; floating point only appears at the
//! `to_f64` boundary. All values are immutable after construction and safe to
//! share across threads.

mod bernoulli;
mod rational;
mod surd;

pub use bernoulli::bernoulli;
pub(crate) use bernoulli::binomial;
pub use rational::Rational;
pub(crate) use surd::squarefree_decompose;
pub use surd::{ComplexSurdSum, QuadSurd, SurdSum};

use thiserror::Error;

/// Errors raised by exact arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator must be non-zero")]
    ZeroDenominator,
    #[error("mixed radicands sqrt({0}) and sqrt({1}) cannot combine in one surd")]
    MixedRadicands(u64, u64),
    #[error("radicand too large to reduce to square-free form")]
    RadicandTooLarge,
    #[error("square root of a negative number is not a real surd")]
    NegativeRadicand,
    #[error("Bernoulli index {0} outside the supported range 1..=64")]
    BernoulliRange(u32),
    #[error("invalid rational literal `{0}`")]
    ParseRational(String),
}
