use super::adjust::AdjustedVolField;
use crate::engine1d::{check_grid_finess, check_time_grid, time_points, StateAxis, MIN_INTERVALS};
use crate::engine_nd::lattice::{backward_2d, Move2};
use crate::error::{Error, Result};
use crate::hybrid::{
    calibrate_hw_shift, hw_rate_stddev, point_axis, spread, HullWhiteParams, HybridGeometry,
    MIN_SECOND_INTERVALS,
};
use crate::interp::InterpMethod;
use crate::market::{ImpliedVol, YieldCurve};
use crate::payoff::Payoff;

/// Rectangular hybrid grid for the adjusted local vol: skew-aware equity bounds from the
/// surface, Hull–White rate bounds at `±4·stdDevR(T)`.
pub fn build_glv_geometry(
    surface: &impl ImpliedVol,
    hw: &HullWhiteParams,
    maturity: f64,
    steps: usize,
    grid_finess: [f64; 2],
) -> Result<HybridGeometry> {
    hw.validate()?;
    check_time_grid(maturity, steps)?;
    check_grid_finess("grid_finess", grid_finess[0])?;
    check_grid_finess("grid_finess", grid_finess[1])?;
    let dt = maturity / steps as f64;
    let times = time_points(maturity, steps);
    let s = spread(hw.rho_sr, dt);
    let dx1 = surface.atm_vol(maturity) * s * grid_finess[0];
    if !(dx1 > 0.0) || !dx1.is_finite() {
        return Err(Error::param("dx", dx1, "state spacing must be positive"));
    }
    let equity = StateAxis::from_surface(surface, &times, dx1, MIN_INTERVALS).rectangular();
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
        .rectangular()
    };
    Ok(HybridGeometry {
        maturity,
        steps,
        dt,
        spot: surface.spot(),
        grid_finess,
        equity,
        second,
    })
}

/// Backward pricing with Hull–White rates and the node-dependent adjusted equity vol in
/// both the drift and the diffusion.
pub fn price_glv(
    geom: &HybridGeometry,
    field: &AdjustedVolField,
    curve: &YieldCurve,
    hw: &HullWhiteParams,
    payoff: &Payoff,
    method: InterpMethod,
) -> Result<f64> {
    hw.validate()?;
    if !method.is_1d() {
        return Err(Error::Config(format!(
            "`{}` cannot be used along the equity axis (use stineman, akima or steffen)",
            method.name()
        )));
    }
    if field.steps() != geom.steps || field.equity != geom.equity {
        return Err(Error::Config(
            "the vol field was calibrated on a different grid".into(),
        ));
    }
    let dt = geom.dt;
    let fwd = |t: f64| geom.spot / curve.discount(t);
    let f_t = fwd(geom.maturity);
    let shifts = calibrate_hw_shift(geom, curve, hw)?;
    let prepare = |step: usize, t: f64, _: &[f64], xs2: &[f64]| -> Result<_> {
        let phi = shifts[step];
        let carry = (curve.integrated_rate(geom.time(step + 1)) - curve.integrated_rate(t)) / dt;
        let xs2 = xs2.to_vec();
        let vols = field.row(step);
        Ok(move |i: usize, j: usize| {
            let r = xs2[j] + phi;
            let s = vols[i];
            Move2 {
                mu: [r - carry - 0.5 * s * s, -hw.k * xs2[j]],
                sigma: [s, hw.sigma_r],
                rho: hw.rho_sr,
                df: (-r * dt).exp(),
            }
        })
    };
    let exercise = |v: f64, x1: f64, _: f64, t: f64| {
        payoff
            .has_exercise()
            .then(|| payoff.apply_exercise(v, x1, fwd(t) * x1.exp(), t))
    };
    backward_2d(
        [&geom.equity, &geom.second],
        geom.steps,
        dt,
        method,
        None,
        |x1, _| payoff.terminal(x1, f_t * x1.exp()),
        prepare,
        exercise,
    )
}
