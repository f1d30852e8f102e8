use super::decay_ratio;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Zero-coupon curve `R(t) = r1 + (r0 - r1)(1 - e^{-ct})/(ct)`, continuously compounded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct YieldCurve {
    pub r0: f64,
    pub r1: f64,
    pub c: f64,
}

/// Zero rate, discount factor and instantaneous forward at one date.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub zero_rate: f64,
    pub discount: f64,
    pub forward_rate: f64,
}

impl YieldCurve {
    pub fn new(r0: f64, r1: f64, c: f64) -> Result<Self> {
        let curve = Self { r0, r1, c };
        curve.validate()?;
        Ok(curve)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0) || !self.c.is_finite() {
            return Err(Error::param("c", self.c, "curvature must be positive"));
        }
        if !self.r0.is_finite() {
            return Err(Error::param("r0", self.r0, "must be finite"));
        }
        if !self.r1.is_finite() {
            return Err(Error::param("r1", self.r1, "must be finite"));
        }
        Ok(())
    }

    /// The zero-rate curve used for the single- and multi-asset local-vol examples.
    pub fn zero() -> Self {
        Self {
            r0: 0.0,
            r1: 0.0,
            c: 1.0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.r0 == 0.0 && self.r1 == 0.0
    }

    #[inline]
    pub fn zero_rate(&self, t: f64) -> f64 {
        self.r1 + (self.r0 - self.r1) * decay_ratio(self.c * t)
    }

    /// `t·R(t)`, the integrated instantaneous forward.
    #[inline]
    pub fn integrated_rate(&self, t: f64) -> f64 {
        t * self.zero_rate(t)
    }

    #[inline]
    pub fn discount(&self, t: f64) -> f64 {
        (-self.integrated_rate(t)).exp()
    }

    /// Discount factor from `t1` back to `t0`.
    #[inline]
    pub fn step_discount(&self, t0: f64, t1: f64) -> f64 {
        (self.integrated_rate(t0) - self.integrated_rate(t1)).exp()
    }

    /// `f(0,t) = d/dt [t·R(t)] = r1 + (r0 - r1) e^{-ct}`.
    #[inline]
    pub fn inst_forward(&self, t: f64) -> f64 {
        self.r1 + (self.r0 - self.r1) * (-self.c * t).exp()
    }

    pub fn eval(&self, t: f64) -> Result<CurvePoint> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!(
                "curve evaluated at negative time {t}"
            )));
        }
        Ok(CurvePoint {
            zero_rate: self.zero_rate(t),
            discount: self.discount(t),
            forward_rate: self.inst_forward(t),
        })
    }
}

/// Forward price under zero dividends: `F(t) = spot · e^{t R(t)}`.
pub fn forward_price(curve: &YieldCurve, spot: f64, t: f64) -> Result<f64> {
    forward_price_with_yield(curve, spot, t, |_| 0.0)
}

/// Forward price with a dividend yield given by its integral `∫₀ᵗ q(u) du`.
pub fn forward_price_with_yield(
    curve: &YieldCurve,
    spot: f64,
    t: f64,
    yield_integral: impl Fn(f64) -> f64,
) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!(
            "forward requested at negative time {t}"
        )));
    }
    Ok(spot * (curve.integrated_rate(t) - yield_integral(t)).exp())
}
