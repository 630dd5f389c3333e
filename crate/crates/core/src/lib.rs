//! Numerical laboratory for the integral operator `S_g f(z) = ∫₀ᶻ f′g dw`
//! on spaces of analytic functions on the unit disk.
//!
//! The crate provides exact disk geometry, expression trees for analytic
//! symbols with exact derivatives, deterministic boundary-refined
//! quadrature, the Hardy / BMOA / Q_p / Besov / weighted-Bergman norms,
//! extremal test families, and the level-set area-density criterion that
//! characterizes when `S_g` is bounded below (has closed range) on these
//! spaces, together with a cross-validation driver that compares the
//! density verdict against directly measured lower bounds.

pub mod criteria;
pub mod error;
pub mod geometry;
pub mod norms;
pub mod operator;
pub mod quadrature;
pub mod symbols;

pub use error::{Error, Result};
