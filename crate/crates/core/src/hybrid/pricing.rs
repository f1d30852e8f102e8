use super::geometry::{HybridGeometry, VARIANCE_FLOOR};
use super::params::{HestonParams, HullWhiteParams};
use crate::engine_nd::lattice::{backward_2d, Move2};
use crate::error::{Error, Result};
use crate::interp::InterpMethod;
use crate::market::YieldCurve;
use crate::payoff::Payoff;
use crate::stencil::five_point_factors;

fn check_method(method: InterpMethod) -> Result<()> {
    if !method.is_1d() {
        return Err(Error::Config(format!(
            "`{}` cannot be used along the equity axis (use stineman, akima or steffen)",
            method.name()
        )));
    }
    Ok(())
}

/// Per-step drift shifts `φⱼ` that make the lattice reprice every curve discount
/// factor `P(0, tⱼ₊₁)`.
///
/// Arrow–Debreu weights on the rate axis are pushed forward through the transpose of
/// the backward step (five rate targets, linear reads), so a zero-coupon bond priced
/// backward on the same lattice returns the curve to rounding.
pub fn calibrate_hw_shift(
    geom: &HybridGeometry,
    curve: &YieldCurve,
    hw: &HullWhiteParams,
) -> Result<Vec<f64>> {
    let dt = geom.dt;
    let (co, counter) = five_point_factors(hw.rho_sr, dt);
    let axis = &geom.second;
    let mut ad = vec![0.0; axis.node_count(0)];
    let root = ad.len() / 2;
    ad[root] = 1.0;
    let mut shifts = Vec::with_capacity(geom.steps);
    for step in 0..geom.steps {
        let xs = axis.nodes(step);
        let growth: f64 = ad.iter().zip(&xs).map(|(q, x)| q * (-x * dt).exp()).sum();
        let target = curve.discount(geom.time(step + 1));
        let phi = (growth.ln() - target.ln()) / dt;
        if !phi.is_finite() {
            return Err(Error::NonFinite { step, node: 0 });
        }
        shifts.push(phi);
        let next = axis.axis(step + 1);
        let nx = next.xs();
        let mut out = vec![0.0; nx.len()];
        for (q, &x) in ad.iter().zip(&xs) {
            let w = q * (-(x + phi) * dt).exp() / 5.0;
            let centre = x - hw.k * x * dt;
            for d in [0.0, co, -counter, counter, -co] {
                let y = centre + hw.sigma_r * d;
                if nx.len() == 1 {
                    out[0] += w;
                    continue;
                }
                let i = next.locate(y);
                let u = (y - nx[i]) / (nx[i + 1] - nx[i]);
                out[i] += w * (1.0 - u);
                out[i + 1] += w * u;
            }
        }
        ad = out;
    }
    Ok(shifts)
}

/// Constant-vol equity with Hull–White rates on the five-point lattice.
///
/// States are `x1 = ln(S/F(t))` against the deterministic curve forward and the centred
/// rate `X2` with `r = X2 + φ`; each node discounts with its own `e^{-r·dt}`.
/// The shift `φ` comes from [`calibrate_hw_shift`]. Values are read cubically along
/// the equity axis and linearly across rates.
pub fn price_hybrid_hw(
    geom: &HybridGeometry,
    curve: &YieldCurve,
    hw: &HullWhiteParams,
    sigma_s: f64,
    payoff: &Payoff,
    method: InterpMethod,
) -> Result<f64> {
    hw.validate()?;
    check_method(method)?;
    let dt = geom.dt;
    let fwd = |t: f64| geom.spot / curve.discount(t);
    let f_t = fwd(geom.maturity);
    let half_var = 0.5 * sigma_s * sigma_s;
    let shifts = calibrate_hw_shift(geom, curve, hw)?;
    let prepare = |step: usize, t: f64, _: &[f64], xs2: &[f64]| -> Result<_> {
        let phi = shifts[step];
        let carry = (curve.integrated_rate(geom.time(step + 1)) - curve.integrated_rate(t)) / dt;
        let xs2 = xs2.to_vec();
        Ok(move |_: usize, j: usize| {
            let r = xs2[j] + phi;
            Move2 {
                mu: [r - carry - half_var, -hw.k * xs2[j]],
                sigma: [sigma_s, hw.sigma_r],
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

/// Heston on the five-point lattice over `(ln(S/F(t)), v)`; the variance is floored at
/// `1e-6` inside the coefficients.
pub fn price_heston(
    geom: &HybridGeometry,
    heston: &HestonParams,
    curve: &YieldCurve,
    payoff: &Payoff,
    method: InterpMethod,
) -> Result<f64> {
    heston.validate()?;
    check_method(method)?;
    let fwd = |t: f64| geom.spot / curve.discount(t);
    let f_t = fwd(geom.maturity);
    let prepare = |step: usize, t: f64, _: &[f64], xs2: &[f64]| -> Result<_> {
        let df = curve.step_discount(t, geom.time(step + 1));
        let vs: Vec<f64> = xs2.iter().map(|v| v.max(VARIANCE_FLOOR)).collect();
        Ok(move |_: usize, j: usize| {
            let v = vs[j];
            let vol = v.sqrt();
            Move2 {
                mu: [-0.5 * v, heston.k_v * (heston.v_bar - v)],
                sigma: [vol, heston.sigma_v * vol],
                rho: heston.rho_sv,
                df,
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
        geom.dt,
        method,
        None,
        |x1, _| payoff.terminal(x1, f_t * x1.exp()),
        prepare,
        exercise,
    )
}
