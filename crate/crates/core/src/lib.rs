//! Minimum spanning trees with location-dependent power weights on random
//! point sets in the unit square.
//!
//! Node sets come from [`sampling`], edge weights `h(u, v)` with
//! `c1·d(u, v) ≤ h(u, v) ≤ c2·d(u, v)` from [`weights`], exact trees and
//! structural verifiers from [`mst`], analytic constants from [`bounds`], and
//! the grid and probe constructions from [`experiments`].

pub mod bounds;
pub mod experiments;
pub mod geometry;
pub mod mst;
pub mod report;
pub mod sampling;
pub mod weights;

pub use geometry::{build_tiling, dist, CellIndex, Point, Rect, Tiling};
pub use mst::{MstError, MstResult};
pub use sampling::{Density, PointSet};
pub use weights::{HotspotLayout, WeightSpec};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
