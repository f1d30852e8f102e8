//! Interpolated trinomial-grid ("ODgrid") option pricing.
//!
//! A trinomial-style stencil with constant probabilities is stepped over a
//! fixed lattice; off-lattice target states are read back with monotone
//! cubic (1D), bicubic / Keys (2D), cubic-by-linear (hybrid) or trilinear
//! (3D) interpolation. The crate covers:
//!
//! * [`engine1d`]: single-asset local volatility, backward pricing and the
//!   forward Fokker–Planck pass producing Arrow–Debreu prices.
//! * [`engine_nd`]: two- and three-asset local volatility baskets.
//! * [`hybrid`]: equity with Hull–White rates or Heston variance.
//! * [`glv`]: generalized local volatility calibrated forward on the grid.
//! * [`mc`]: a Monte Carlo oracle for every model above.
//! * [`market`]: synthetic curve and SSVI surface, Black and Dupire analytics.

pub mod config;
pub mod engine1d;
pub mod engine_nd;
pub mod error;
pub mod glv;
pub mod hybrid;
pub mod interp;
pub mod market;
pub mod mc;
pub mod normal;
pub mod payoff;
pub mod stencil;
pub mod tables;

pub use error::{Error, Result};
pub use interp::InterpMethod;
pub use market::{BSQuote, LocalVolSurface, OptionKind, SSVISurface, YieldCurve};
pub use payoff::{MultiPayoff, Payoff};
