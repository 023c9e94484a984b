//! Curvature, asymptotic lines and index counting on Lagrangean surfaces in R⁴.
//!
//! Surfaces are given as charts ([`jets::SurfaceChart`]) built from a
//! generating function, a pair of graph components, or a general immersion.
//! Everything downstream consumes Taylor jets evaluated on those charts.

pub mod bde;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod inflection;
pub mod jets;
mod numerics;
pub mod oracle;
pub use numerics::ProjRoot;
pub mod scene;

pub use error::{Error, Result};
