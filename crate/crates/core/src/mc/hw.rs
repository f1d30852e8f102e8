use super::{run_paths, McConfig, McEstimate};
use crate::error::{Error, Result};
use crate::hybrid::{hw_phi, hw_phi_integral, HullWhiteParams};
use crate::market::YieldCurve;
use crate::payoff::Payoff;

/// Constant-vol equity with Hull–White rates `r = X2 + φ(t)`.
///
/// `X2` follows its exact Gaussian transition; the equity takes Euler steps with the
/// left-point rate and paths are discounted with `exp(-∫φ - Σ X2 dt)` (trapezoid in `X2`).
pub fn mc_price_hybrid_hw(
    curve: &YieldCurve,
    hw: &HullWhiteParams,
    sigma_s: f64,
    spot: f64,
    payoff: &Payoff,
    maturity: f64,
    cfg: &McConfig,
) -> Result<McEstimate> {
    hw.validate()?;
    if !(sigma_s >= 0.0) {
        return Err(Error::param(
            "sigma_s",
            sigma_s,
            "equity vol must be non-negative",
        ));
    }
    if !(maturity > 0.0) {
        return Err(Error::param("maturity", maturity, "must be positive"));
    }
    let steps = cfg.steps_for(maturity);
    let dt = maturity / steps as f64;
    let sqrt_dt = dt.sqrt();
    let decay = (-hw.k * dt).exp();
    let x2_sd = crate::hybrid::hw_rate_stddev(hw, dt);
    let rho = hw.rho_sr;
    let rho_bar = (1.0 - rho * rho).max(0.0).sqrt();
    let phi: Vec<f64> = (0..steps)
        .map(|j| hw_phi(curve, hw, j as f64 * dt))
        .collect();
    let phi_int = hw_phi_integral(curve, hw, maturity);
    let ln_spot = spot.ln();
    run_paths(cfg, 2 * steps, |z| {
        let (mut x1, mut x2) = (ln_spot, 0.0f64);
        let mut x2_sum = 0.0;
        for (j, zj) in z.chunks_exact(2).enumerate() {
            let r = x2 + phi[j];
            x1 += (r - 0.5 * sigma_s * sigma_s) * dt + sigma_s * sqrt_dt * zj[0];
            let next = x2 * decay + x2_sd * (rho * zj[0] + rho_bar * zj[1]);
            x2_sum += 0.5 * (x2 + next) * dt;
            x2 = next;
        }
        (-phi_int - x2_sum).exp() * payoff.terminal(x1 - ln_spot, x1.exp())
    })
}
