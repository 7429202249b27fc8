//! Exact rational polyhedral computations for projected deformed products
//! of polygons.
//!
//! The crate builds the inequality systems of deformed products of even
//! polygons, converts them between inequality and vertex descriptions with
//! exact arithmetic, projects them to four-space and checks which faces
//! survive the projection. Flag vectors, fatness and complexity of the
//! projected 4-polytopes are computed from the resulting face lattices.

pub mod analysis;
pub mod cone;
pub mod construction;
pub mod error;
pub mod linalg;
pub mod metrics;
pub mod polytope;
pub mod projection;
pub mod rational;

pub use error::{Error, Result};
pub use linalg::{QMatrix, QVector};
pub use rational::Rational;
