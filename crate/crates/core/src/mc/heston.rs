use super::{run_paths, McConfig, McEstimate};
use crate::error::{Error, Result};
use crate::hybrid::HestonParams;
use crate::market::YieldCurve;
use crate::payoff::Payoff;

/// Full-truncation Euler on `(ln(S/F), v)`: the variance enters drift and diffusion
/// through `v⁺ = max(v, 0)`.
pub fn mc_price_heston(
    heston: &HestonParams,
    spot: f64,
    curve: &YieldCurve,
    payoff: &Payoff,
    maturity: f64,
    cfg: &McConfig,
) -> Result<McEstimate> {
    heston.validate()?;
    if !(maturity > 0.0) {
        return Err(Error::param("maturity", maturity, "must be positive"));
    }
    let steps = cfg.steps_for(maturity);
    let dt = maturity / steps as f64;
    let sqrt_dt = dt.sqrt();
    let rho = heston.rho_sv;
    let rho_bar = (1.0 - rho * rho).max(0.0).sqrt();
    let forward = spot * curve.integrated_rate(maturity).exp();
    let df = curve.discount(maturity);

    run_paths(cfg, 2 * steps, |z| {
        let (mut x, mut v) = (0.0f64, heston.v0);
        for zj in z.chunks_exact(2) {
            let vp = v.max(0.0);
            let sv = vp.sqrt();
            x += -0.5 * vp * dt + sv * sqrt_dt * zj[0];
            v += heston.k_v * (heston.v_bar - vp) * dt
                + heston.sigma_v * sv * sqrt_dt * (rho * zj[0] + rho_bar * zj[1]);
        }
        df * payoff.terminal(x, forward * x.exp())
    })
}
