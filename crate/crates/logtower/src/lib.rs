//! Exact symbolic oscillation analysis for second-order linear differential
//! equations over the iterated-logarithm field, cross-validated by an
//! adaptive floating-point ODE lab.
//!
//! The library decides, by exact sign computations, whether `y'' + q y = 0`
//! has oscillating solutions when `q` is a generalized rational function of
//! `x, log x, log log x, ...` (the Kneser / Riemann-Weber boundary family
//! at every tower depth), and produces a verifiable witness inequality for
//! each verdict. A numeric module integrates the same equations with an
//! embedded Runge-Kutta pair to cross-check verdicts, count zeros, and
//! test Wronskian and growth-bound diagnostics.

pub mod diffpoly;
pub mod error;
pub mod numeric;
pub mod oscillation;
pub mod seq;
pub mod tower;

pub use error::{AlgebraError, NumericError};
pub use tower::{Comparison, Monomial, Relation, TowerElem, TowerPoly};
