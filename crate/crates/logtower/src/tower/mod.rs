//! Exact arithmetic, derivation, and asymptotic comparison for the field of
//! generalized rational functions in the iterated logarithms.
//!
//! The ambient structure is the fraction field of ℚ-linear combinations of
//! power products `x^e0 * l1^e1 * ... * lN^eN` with exact rational
//! exponents, where `l1 = log x`, `l2 = log log x`, and so on. Every
//! nonzero germ in this field has an eventual sign, and growth comparisons
//! are decided exactly on leading monomials. Coefficients and exponents
//! are arbitrary-precision rationals throughout; this module contains no
//! floating point.
//!
//! All values are immutable; operations are pure functions, so values can
//! be shared freely across threads.

mod elem;
mod monomial;
mod poly;

pub use elem::{Comparison, Relation, TowerElem};
pub use monomial::Monomial;
pub use poly::TowerPoly;
