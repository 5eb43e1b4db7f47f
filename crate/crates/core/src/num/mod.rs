//! Exact numbers: rationals and the quadratic field Q(√2).

mod quad;
mod rational;

pub use quad::{simplest_between, simplest_dyadic_between, simplest_run, QuadRat};
pub use rational::Rational;
