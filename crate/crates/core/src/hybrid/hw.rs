use super::params::HullWhiteParams;
use crate::market::{decay_ratio, YieldCurve};

/// Deterministic shift `φ(t) = f(0,t) + σr²/(2k²)·(1 - e^{-kt})²` that makes
/// `r = X2 + φ` fit the curve.
pub fn hw_phi(curve: &YieldCurve, hw: &HullWhiteParams, t: f64) -> f64 {
    let g = t * decay_ratio(hw.k * t);
    curve.inst_forward(t) + 0.5 * hw.sigma_r * hw.sigma_r * g * g
}

/// `∫₀ᵀ φ(s) ds`.
pub fn hw_phi_integral(curve: &YieldCurve, hw: &HullWhiteParams, t: f64) -> f64 {
    let u = hw.k * t;
    let shape = if u < 1e-3 {
        t * t * t / 6.0 * (1.0 - 0.75 * u)
    } else {
        t * (1.0 - 2.0 * decay_ratio(u) + decay_ratio(2.0 * u)) / (hw.k * hw.k)
    };
    curve.integrated_rate(t) + 0.5 * hw.sigma_r * hw.sigma_r * shape
}

/// Standard deviation of the centred rate state, `σr·√((1 - e^{-2kt})/(2k))`.
pub fn hw_rate_stddev(hw: &HullWhiteParams, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    hw.sigma_r * (t * decay_ratio(2.0 * hw.k * t)).sqrt()
}
