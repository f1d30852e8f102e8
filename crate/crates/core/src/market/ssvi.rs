use super::decay_ratio;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A Black implied-volatility surface quoted against absolute strike.
pub trait ImpliedVol: Send + Sync {
    fn spot(&self) -> f64;

    /// Implied vol at strike `k` and maturity `t`; callers guarantee `k, t > 0`.
    fn vol(&self, k: f64, t: f64) -> f64;

    fn atm_vol(&self, t: f64) -> f64 {
        self.vol(self.spot(), t)
    }
}

/// Constant implied volatility.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatVol {
    pub spot: f64,
    pub vol: f64,
}

impl ImpliedVol for FlatVol {
    fn spot(&self) -> f64 {
        self.spot
    }

    fn vol(&self, _k: f64, _t: f64) -> f64 {
        self.vol
    }
}

/// SSVI-type implied-vol surface with an exponentially interpolated ATM term structure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SSVISurface {
    pub spot: f64,
    pub v0: f64,
    pub v1: f64,
    pub c: f64,
    pub rho: f64,
    pub a: f64,
    pub b: f64,
}

impl SSVISurface {
    pub fn new(spot: f64, v0: f64, v1: f64, c: f64, rho: f64, a: f64, b: f64) -> Result<Self> {
        let s = Self {
            spot,
            v0,
            v1,
            c,
            rho,
            a,
            b,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.spot > 0.0) || !self.spot.is_finite() {
            return Err(Error::param("spot", self.spot, "must be positive"));
        }
        if !(self.v0 > 0.0) {
            return Err(Error::param("v0", self.v0, "must be positive"));
        }
        if !(self.v1 > 0.0) {
            return Err(Error::param("v1", self.v1, "must be positive"));
        }
        if !(self.c > 0.0) {
            return Err(Error::param("c", self.c, "must be positive"));
        }
        if !(self.rho.abs() < 1.0) {
            return Err(Error::param("rho", self.rho, "must lie in (-1, 1)"));
        }
        if !(self.b > 0.0 && self.b < 1.0) {
            return Err(Error::param("b", self.b, "must lie in (0, 1)"));
        }
        if !self.a.is_finite() {
            return Err(Error::param("a", self.a, "must be finite"));
        }
        let mut prev = 0.0;
        for i in 1..=3000 {
            let t = i as f64 * 0.01;
            let w = self.total_variance(t);
            if !(w > prev) {
                return Err(Error::param(
                    "v0",
                    self.v0,
                    "ATM total variance must increase with maturity",
                ));
            }
            prev = w;
        }
        Ok(())
    }

    /// ATM volatility term structure `vol(t)`.
    #[inline]
    pub fn atm_vol(&self, t: f64) -> f64 {
        let ratio = self.v0 * self.v0 / (self.v1 * self.v1) - 1.0;
        self.v1 * (1.0 + decay_ratio(self.c * t) * ratio).sqrt()
    }

    /// ATM total variance `w = vol(t)² t`.
    #[inline]
    pub fn total_variance(&self, t: f64) -> f64 {
        let v = self.atm_vol(t);
        v * v * t
    }

    #[inline]
    fn skew(&self, w: f64) -> f64 {
        if self.a == 0.0 {
            return 0.0;
        }
        self.a / (w.powf(self.b) * (1.0 + w).powf(1.0 - self.b))
    }

    /// Implied vol without argument checks.
    #[inline]
    pub fn vol_unchecked(&self, k: f64, t: f64) -> f64 {
        let x = (k / self.spot).ln();
        if x == 0.0 {
            return self.atm_vol(t);
        }
        let w = self.total_variance(t);
        let xp = x * self.skew(w);
        let r = self.rho;
        let total = 0.5 * w * (1.0 + r * xp + (1.0 - r * r + (r + xp) * (r + xp)).sqrt());
        (total / t).sqrt()
    }

    pub fn implied_vol(&self, k: f64, t: f64) -> Result<f64> {
        if !(k > 0.0) {
            return Err(Error::Domain(format!(
                "implied vol at non-positive strike {k}"
            )));
        }
        if !(t > 0.0) {
            return Err(Error::Domain(format!(
                "implied vol at non-positive maturity {t}"
            )));
        }
        Ok(self.vol_unchecked(k, t))
    }
}

impl ImpliedVol for SSVISurface {
    fn spot(&self) -> f64 {
        self.spot
    }

    fn vol(&self, k: f64, t: f64) -> f64 {
        self.vol_unchecked(k, t)
    }

    fn atm_vol(&self, t: f64) -> f64 {
        SSVISurface::atm_vol(self, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market::presets;

    #[test]
    fn atm_collapse() {
        let s = presets::asset1();
        for t in [0.01, 0.25, 1.0, 5.0, 30.0] {
            assert_eq!(s.implied_vol(100.0, t).unwrap(), s.atm_vol(t));
            assert!((s.atm_vol(t) - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_skew_is_flat() {
        let s = presets::asset3();
        for k in [40.0, 80.0, 100.0, 150.0, 300.0] {
            for t in [0.1, 1.0, 4.0] {
                assert!((s.implied_vol(k, t).unwrap() - 0.30).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn asset1_80_one_year() {
        // hand evaluation of the closed form
        let w: f64 = 0.0625;
        let phi = -0.718 / (w.powf(0.424) * (1.0 + w).powf(0.576));
        let x = (0.8f64).ln();
        let r = 0.8;
        let var = w / 2.0 * (1.0 + r * x * phi + (1.0 - r * r + (r + x * phi).powi(2)).sqrt());
        let v = presets::asset1().implied_vol(80.0, 1.0).unwrap();
        assert!((v - var.sqrt()).abs() < 1e-14);
        assert!(v > 0.25);
    }

    #[test]
    fn term_structure_interpolates_between_short_and_long_vol() {
        let s = SSVISurface::new(100.0, 0.30, 0.20, 2.0, 0.5, -0.5, 0.4).unwrap();
        assert!((s.atm_vol(1e-9) - 0.30).abs() < 1e-8);
        assert!((s.atm_vol(1e4) - 0.20).abs() < 1e-3);
    }

    #[test]
    fn invalid_inputs() {
        let s = presets::asset1();
        assert!(s.implied_vol(0.0, 1.0).is_err());
        assert!(s.implied_vol(100.0, 0.0).is_err());
        assert!(SSVISurface::new(100.0, 0.25, 0.25, 5.0, 1.0, -0.7, 0.4).is_err());
        assert!(SSVISurface::new(100.0, 0.25, 0.25, 5.0, 0.8, -0.7, 1.0).is_err());
        assert!(SSVISurface::new(100.0, 0.0, 0.25, 5.0, 0.8, -0.7, 0.4).is_err());
    }
}
