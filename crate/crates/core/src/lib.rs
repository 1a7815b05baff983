//! Finite metric spaces and the machinery that lives on them: validated
//! distance tables and products, chain and path metrics at a scale,
//! Hausdorff distances between point sets, set-valued self-maps with
//! contraction certificates and fixed-point solvers, and strategic-form
//! games whose best-response dynamics run on the product space.
//!
//! Everything is exact-by-default: tolerances are explicit parameters with
//! documented defaults, derived metrics mark unreachable pairs as absent
//! instead of inventing infinities, and random fixtures are seeded.

pub mod derived;
pub mod doc;
pub mod error;
pub mod expr;
pub mod games;
pub mod gen;
pub mod hausdorff;
pub mod setvalued;
pub mod space;

pub use error::{Error, Result};
pub use hausdorff::MetricView;
pub use setvalued::SetValuedMap;
pub use space::{FiniteMetricSpace, PointSet};
