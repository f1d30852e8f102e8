use super::hw::hw_rate_stddev;
use super::params::{HestonParams, HullWhiteParams};
use crate::engine1d::{check_grid_finess, check_time_grid, time_points, StateAxis, MIN_INTERVALS};
use crate::error::{Error, Result};

/// Interval floor on the rate or variance axis.
pub const MIN_SECOND_INTERVALS: usize = 2;

/// Variance floor inside the Heston coefficients.
pub const VARIANCE_FLOOR: f64 = 1e-6;

/// Equity axis `x1 = ln(S/F(t))` paired with a rate-state or variance axis.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridGeometry {
    pub maturity: f64,
    pub steps: usize,
    pub dt: f64,
    pub spot: f64,
    pub grid_finess: [f64; 2],
    pub equity: StateAxis,
    pub second: StateAxis,
}

impl HybridGeometry {
    #[inline]
    pub fn time(&self, step: usize) -> f64 {
        step as f64 * self.dt
    }
}

/// Axis holding a single node at `x` on every step.
pub(crate) fn point_axis(x: f64, steps: usize) -> StateAxis {
    StateAxis {
        dx: 1.0,
        raw_dn: vec![x; steps + 1],
        raw_up: vec![x; steps + 1],
        x_dn: vec![x; steps + 1],
        nx: vec![0; steps + 1],
    }
}

fn check_common(maturity: f64, steps: usize, gf: [f64; 2]) -> Result<(f64, Vec<f64>)> {
    check_time_grid(maturity, steps)?;
    check_grid_finess("grid_finess", gf[0])?;
    check_grid_finess("grid_finess", gf[1])?;
    Ok((maturity / steps as f64, time_points(maturity, steps)))
}

pub(crate) fn spread(rho: f64, dt: f64) -> f64 {
    (1.25 * (1.0 + rho.abs()) * dt).sqrt()
}

/// Equity axis at `±4·σS·√t` and rate axis at `±4·stdDevR(t)`; a zero rate vol gives a
/// single rate node.
pub fn build_hw_geometry(
    sigma_s: f64,
    hw: &HullWhiteParams,
    spot: f64,
    maturity: f64,
    steps: usize,
    grid_finess: [f64; 2],
) -> Result<HybridGeometry> {
    hw.validate()?;
    if !(sigma_s > 0.0) {
        return Err(Error::param(
            "sigma_s",
            sigma_s,
            "equity vol must be positive",
        ));
    }
    let (dt, times) = check_common(maturity, steps, grid_finess)?;
    let s = spread(hw.rho_sr, dt);
    let equity = StateAxis::from_stddev(
        &times,
        sigma_s * s * grid_finess[0],
        MIN_INTERVALS,
        |_| 0.0,
        |t| sigma_s * t.sqrt(),
    );
    let second = if hw.sigma_r == 0.0 {
        point_axis(0.0, steps)
    } else {
        StateAxis::from_stddev(
            &times,
            hw.sigma_r * s * grid_finess[1],
            MIN_SECOND_INTERVALS,
            |_| 0.0,
            |t| hw_rate_stddev(hw, t),
        )
    };
    Ok(HybridGeometry {
        maturity,
        steps,
        dt,
        spot,
        grid_finess,
        equity,
        second,
    })
}

/// Equity axis scaled by `√v̄`; variance axis on
/// `[max(1e-6, v̄ - 4·sd), v̄ + 4·sd]` with the stationary `sd = σv·√(v̄/(2k))`.
pub fn build_heston_geometry(
    heston: &HestonParams,
    spot: f64,
    maturity: f64,
    steps: usize,
    grid_finess: [f64; 2],
) -> Result<HybridGeometry> {
    heston.validate()?;
    let (dt, times) = check_common(maturity, steps, grid_finess)?;
    let s = spread(heston.rho_sv, dt);
    let vol = heston.v_bar.sqrt();
    let equity = StateAxis::from_stddev(
        &times,
        vol * s * grid_finess[0],
        MIN_INTERVALS,
        |_| 0.0,
        |t| vol * t.sqrt(),
    );
    let (v0, v_bar) = (heston.v0, heston.v_bar);
    let second = if heston.sigma_v == 0.0 {
        if v0 == v_bar {
            point_axis(v0, steps)
        } else {
            let (lo, hi) = (v0.min(v_bar), v0.max(v_bar));
            let dv = (hi - lo) / MIN_INTERVALS as f64;
            StateAxis::from_bounds(&times, dv, MIN_INTERVALS, |t| {
                if t <= 0.0 {
                    (v0, v0)
                } else {
                    (lo, hi)
                }
            })
        }
    } else {
        let sd = heston.sigma_v * (v_bar / (2.0 * heston.k_v)).sqrt();
        let lo = (v_bar - 4.0 * sd).min(v0).max(VARIANCE_FLOOR);
        let hi = (v_bar + 4.0 * sd).max(v0);
        let dv = heston.sigma_v * vol * s * grid_finess[1];
        StateAxis::from_bounds(&times, dv, MIN_SECOND_INTERVALS, |t| {
            if t <= 0.0 {
                (v0, v0)
            } else {
                (lo, hi)
            }
        })
    };
    Ok(HybridGeometry {
        maturity,
        steps,
        dt,
        spot,
        grid_finess,
        equity,
        second,
    })
}
