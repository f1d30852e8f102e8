//! Named market parameter sets.

use super::curve::YieldCurve;
use super::ssvi::SSVISurface;
use crate::hybrid::{HestonParams, HullWhiteParams};

pub const SPOT: f64 = 100.0;

pub fn asset1() -> SSVISurface {
    SSVISurface {
        spot: SPOT,
        v0: 0.25,
        v1: 0.25,
        c: 5.0,
        rho: 0.8,
        a: -0.718,
        b: 0.424,
    }
}

pub fn asset2() -> SSVISurface {
    SSVISurface {
        spot: SPOT,
        v0: 0.20,
        v1: 0.20,
        c: 5.0,
        rho: 0.8,
        a: -0.299,
        b: 0.451,
    }
}

pub fn asset3() -> SSVISurface {
    SSVISurface {
        spot: SPOT,
        v0: 0.30,
        v1: 0.30,
        c: 5.0,
        rho: 0.8,
        a: 0.0,
        b: 0.392,
    }
}

/// Upward-sloping curve: 2% short, 4% long, unit curvature.
pub fn appendix_curve() -> YieldCurve {
    YieldCurve {
        r0: 0.02,
        r1: 0.04,
        c: 1.0,
    }
}

pub fn hw_default() -> HullWhiteParams {
    HullWhiteParams {
        k: 0.05,
        sigma_r: 0.02,
        rho_sr: -0.3,
    }
}

pub fn heston_default() -> HestonParams {
    HestonParams {
        v0: 0.029,
        v_bar: 0.029,
        sigma_v: 0.35,
        k_v: 3.0,
        rho_sv: -0.5,
    }
}

pub fn surface(name: &str) -> Option<SSVISurface> {
    match name {
        "asset1" => Some(asset1()),
        "asset2" => Some(asset2()),
        "asset3" => Some(asset3()),
        _ => None,
    }
}

pub fn curve(name: &str) -> Option<YieldCurve> {
    match name {
        "zero" => Some(YieldCurve::zero()),
        "appendix" => Some(appendix_curve()),
        _ => None,
    }
}
