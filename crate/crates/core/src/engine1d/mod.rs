//! Single-factor grid: geometry, backward pricing and the forward
//! Fokker–Planck pass producing Arrow–Debreu prices.

mod backward;
mod diffusion;
mod forward;
mod geometry;

pub use backward::{price_backward_1d, BackwardResult, ValueSheet1D};
pub use diffusion::{ConstantDiffusion, Diffusion1D, FnDiffusion, LocalVolDiffusion};
pub(crate) use forward::normal_cell_masses;
pub use forward::{forward_ad_1d, ADSheet1D};
pub use geometry::{
    build_geometry_1d, check_grid_finess, GridGeometry1D, StateAxis, MIN_INTERVALS,
};
pub(crate) use geometry::{check_time_grid, time_points};
