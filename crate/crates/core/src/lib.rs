//! Numerical laboratory for Kobayashi hyperbolic geometry on model domains:
//! distances and infinitesimal metrics, geodesics, the scaling automorphisms
//! of the ball, exponential coverings and monomial maps, and an audit of
//! holomorphic maps that act isometrically along families of geodesics.

pub mod base;
pub mod checker;
pub mod cli;
pub mod coverings;
pub mod domains;
pub mod error;
pub mod geodesics;
pub mod metric;
pub mod numerics;
pub mod point;
pub mod scaling;

pub use base::ConvexBase;
pub use coverings::{HolomorphicMap, IntegerMatrix};
pub use domains::{BoundaryPoint, ModelDomain};
pub use error::{Error, Result};
pub use geodesics::{GeodesicCurve, GeodesicFamily};
pub use metric::{distance, DistanceValue};
pub use point::ComplexPoint;
