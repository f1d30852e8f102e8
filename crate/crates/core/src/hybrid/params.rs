use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Hull–White short-rate parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HullWhiteParams {
    pub k: f64,
    pub sigma_r: f64,
    pub rho_sr: f64,
}

impl HullWhiteParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.k > 0.0) || !self.k.is_finite() {
            return Err(Error::param("k", self.k, "mean reversion must be positive"));
        }
        if !(self.sigma_r >= 0.0) || !self.sigma_r.is_finite() {
            return Err(Error::param(
                "sigma_r",
                self.sigma_r,
                "rate vol must be non-negative",
            ));
        }
        if !(self.rho_sr.abs() <= 1.0) {
            return Err(Error::param(
                "rho_sr",
                self.rho_sr,
                "correlation must lie in [-1, 1]",
            ));
        }
        Ok(())
    }
}

/// Heston variance parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HestonParams {
    pub v0: f64,
    pub v_bar: f64,
    pub sigma_v: f64,
    pub k_v: f64,
    pub rho_sv: f64,
}

impl HestonParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.v0 >= 0.0) {
            return Err(Error::param("v0", self.v0, "variance must be non-negative"));
        }
        if !(self.v_bar > 0.0) {
            return Err(Error::param(
                "v_bar",
                self.v_bar,
                "long-run variance must be positive",
            ));
        }
        if !(self.sigma_v >= 0.0) {
            return Err(Error::param(
                "sigma_v",
                self.sigma_v,
                "vol of variance must be non-negative",
            ));
        }
        if !(self.k_v > 0.0) {
            return Err(Error::param(
                "k_v",
                self.k_v,
                "mean reversion must be positive",
            ));
        }
        if !(self.rho_sv.abs() <= 1.0) {
            return Err(Error::param(
                "rho_sv",
                self.rho_sv,
                "correlation must lie in [-1, 1]",
            ));
        }
        Ok(())
    }
}
