//! Equity with Hull–White short rates or Heston variance on the two-factor lattice.

mod geometry;
mod hw;
mod params;
mod pricing;

pub use geometry::{
    build_heston_geometry, build_hw_geometry, HybridGeometry, MIN_SECOND_INTERVALS, VARIANCE_FLOOR,
};
pub(crate) use geometry::{point_axis, spread};
pub use hw::{hw_phi, hw_phi_integral, hw_rate_stddev};
pub use params::{HestonParams, HullWhiteParams};
pub use pricing::{calibrate_hw_shift, price_heston, price_hybrid_hw};
