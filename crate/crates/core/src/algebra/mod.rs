//! Exact rational arithmetic, (Laurent) polynomials and dense linear algebra.

pub mod linalg;
pub mod poly;
pub mod rational;

pub use poly::{Monomial, Polynomial, Var};
pub use rational::{fmt_rational, int, one, parse_rational, rat, zero, Rational};
