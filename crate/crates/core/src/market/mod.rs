//! Synthetic market data and the analytics built on it.
//!
//! The yield curve and SSVI implied-volatility surface are closed-form; the
//! Black formula, its inverse and Dupire's local volatility are layered on top.

mod black;
mod curve;
mod hw_vol;
mod local_vol;
pub mod presets;
mod ssvi;

pub use black::{black_price, bs_implied_vol, BSQuote, OptionKind};
pub use curve::{forward_price, forward_price_with_yield, CurvePoint, YieldCurve};
pub use hw_vol::hw_adjusted_vol;
pub use local_vol::{DupireTerms, LocalVolSurface, LV_MIN_TIME};
pub use ssvi::{FlatVol, ImpliedVol, SSVISurface};

/// `(1 - e^{-u}) / u`, stable near zero.
#[inline]
pub fn decay_ratio(u: f64) -> f64 {
    if u.abs() < 1e-6 {
        1.0 - 0.5 * u + u * u / 6.0
    } else {
        -(-u).exp_m1() / u
    }
}
