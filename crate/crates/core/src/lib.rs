//! Universal sums of generalized heptagonal numbers: counting engines and
//! explicit bounds.
//!
//! The crate is organized bottom-up:
//!
//! * [`arith`] — exact rationals, rigorous interval arithmetic, and the
//!   elementary number-theoretic estimates (totients, subgroup indices,
//!   exponential-sum and divisor-count bounds, exact quadratic `L`-values).
//! * [`polygonal`] — generalized `m`-gonal numbers, representation tables,
//!   and the completion identity that turns sums of polygonal numbers into
//!   congruence-constrained sums of squares.
//! * [`escalator`] — the escalator tree: truants, child expansion, and the
//!   depth-4 candidate list for `m = 7`.
//! * [`quadform`] — shifted diagonal quadratic forms: level/character data,
//!   lattice-point counts and the explicit box bound, `p`-adic local
//!   densities by stabilized counting plus an exact Gauss-sum evaluator,
//!   isotropy tests, and Minkowski reduction.
//! * [`bounds`] — the bound pipeline: Eisenstein lower bounds, cuspidal
//!   upper bounds with certified constants, crossover constants per
//!   coefficient vector, the `(1,1,3,3)` special case, and the assembled
//!   final bound.
//!
//! # Conventions
//!
//! Quantities that are rational are kept exact ([`Rational`]); π, `e^{2π}`,
//! ζ-values, and irrational powers are enclosed in directed-rounding
//! intervals ([`arith::RigorousInterval`]). Every inequality the crate
//! certifies is checked against the conservative interval endpoint.

pub mod arith;
pub mod bounds;
pub mod escalator;
pub mod polygonal;
pub mod quadform;

use num_bigint::BigInt;

/// Exact arbitrary-precision rational, always reduced, denominator > 0.
pub type Rational = num_rational::Ratio<BigInt>;

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("representation count overflowed 64 bits at n = {0}")]
    CountOverflow(u64),
    #[error("scan limit {limit} exhausted without a truant for {coeffs:?}")]
    ScanExhausted { coeffs: Vec<u64>, limit: u64 },
    #[error("local density did not stabilize: p = {p}, n = {n}, depth {depth}")]
    NotStabilized { p: u64, n: u64, depth: u32 },
    #[error("counting modulus {0} exceeds the 10^8 cap")]
    ModulusCap(u128),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}

/// Convenience constructor for small rationals.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact rational value of a decimal literal such as `"5.84e38"` or
/// `"1.25e-6"`. Pinned constants enter the pipeline through this, never
/// through binary floats.
pub fn rat_dec(s: &str) -> Rational {
    arith::interval::rational_from_decimal(s).expect("malformed decimal literal")
}
