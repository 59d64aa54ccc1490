//! Computational hyperbolic geometry in the Poincaré disk: the metric and its
//! isometries, equilateral triangles and their skew, the equilateral-generating
//! rotation maps, triangle chains, distortion scans for self-maps of the disk,
//! and distances on cyclic quotients.

pub mod chain;
pub mod distortion;
pub mod error;
pub mod geodesic;
pub mod maps;
pub mod metric;
pub mod mobius;
pub mod point;
pub mod quotient;
pub mod rotmap;
pub mod search;
pub mod triangle;
pub mod zoo;

pub use error::{GeomError, Result};
pub use maps::MapUnderTest;
pub use mobius::MobiusMap;
pub use point::{BallPoint, HPoint, UpperPoint};
