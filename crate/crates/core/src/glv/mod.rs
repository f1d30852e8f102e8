//! Generalized local volatility: equity local vol adjusted for Hull–White rates,
//! calibrated forward on the grid and priced backward on the same grid.

mod adjust;
mod forward;
mod pricing;

pub use adjust::{
    adj_factor_row, adjusted_vol, calibrate_glv, AdjustedVolField, DigitalSource, GlvCalibration,
    GlvOptions, VEGA_CUTOFF,
};
pub use forward::{binormal_sheet, fp_step_2d, ADSheet2D, StepRates, MAX_WEIGHT};
pub use pricing::{build_glv_geometry, price_glv};
