//! Numerical calculus on Baouendi-Grushin space ℝ^n × ℝ (n ≥ 2, Q = n + 2):
//! the gauge and polar coordinates, Grushin operators on exact-derivative test
//! fields, Grushin spherical harmonics, Bessel pairs, and quadrature-based
//! verification of Hardy, Rellich and uncertainty-principle identities.

pub mod bessel;
pub mod cli;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod harmonics;
pub mod jet;
pub mod quadrature;
pub mod verifier;

pub use error::{Error, Result};
pub use fields::{Field, ScalarField};
pub use geometry::Point;
