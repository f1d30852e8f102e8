//! Two- and three-asset backward pricers on rectangular multi-asset lattices.

mod backward2d;
mod backward3d;
mod cholesky;
mod geometry;
pub(crate) mod lattice;

pub use backward2d::{price_backward_2d, price_backward_2d_with};
pub use backward3d::price_backward_3d;
pub use cholesky::{check_correlation, cholesky3, Cholesky3};
pub use geometry::{build_geometry_2d, build_geometry_3d, GridGeometryND, MIN_INTERVALS_3D};
