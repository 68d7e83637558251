//! Circular coordinates for point clouds with a certified lifting step.
//!
//! The pipeline builds a Vietoris–Rips complex, computes persistent
//! cohomology over `F_p`, lifts a representative cocycle (and a dual cycle) to
//! the integers with a scaling search whose success is certified by a
//! coefficient-range criterion, reduces the winding number of the integer
//! class to one, smooths it to a harmonic real cocycle and integrates it to a
//! circle-valued map on the vertices.

pub mod complex;
pub mod error;
pub mod experiments;
pub mod finite_field;
pub mod fixtures;
pub mod io;
pub mod lifting;
pub mod linalg;
pub mod persistence;
pub mod pipeline;
pub mod ring;
pub mod smoothing;
pub mod winding;

pub use error::{Error, Result};
