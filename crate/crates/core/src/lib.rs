//! Exact Farey-sequence rank/statistic queries in sublinear time, and
//! primitive lattice point counting in star-shaped rational polygons.

pub mod bench;
pub mod cli;
pub mod error;
pub mod exactmath;
pub mod farey;
pub mod fixtures;
pub mod geometry;
pub mod primitive;
pub mod selftest;

pub use error::{Error, Result};
pub use exactmath::Rational;
pub use farey::Algorithm;
pub use geometry::{Point, Polygon, Violation};
