use super::{run_paths, McConfig, McEstimate};
use crate::engine1d::Diffusion1D;
use crate::engine_nd::{check_correlation, cholesky3};
use crate::error::{Error, Result};
use crate::market::YieldCurve;
use crate::payoff::MultiPayoff;
use rayon::prelude::*;

/// Table points per time step for the coefficient lookup.
const TABLE_POINTS: usize = 1601;

/// Drift and vol sampled on a uniform state grid at one time.
struct CoefTable {
    x0: f64,
    inv_h: f64,
    mu: Vec<f64>,
    sigma: Vec<f64>,
}

impl CoefTable {
    fn new(d: &impl Diffusion1D, t: f64, half_width: f64) -> Self {
        let h = 2.0 * half_width / (TABLE_POINTS - 1) as f64;
        let xs: Vec<f64> = (0..TABLE_POINTS)
            .map(|i| -half_width + i as f64 * h)
            .collect();
        let mut mu = vec![0.0; TABLE_POINTS];
        let mut sigma = vec![0.0; TABLE_POINTS];
        d.fill_coefficients(&xs, t, &mut mu, &mut sigma);
        Self {
            x0: -half_width,
            inv_h: 1.0 / h,
            mu,
            sigma,
        }
    }

    /// Linear lookup, flat beyond the table.
    #[inline]
    fn at(&self, x: f64) -> (f64, f64) {
        let u = ((x - self.x0) * self.inv_h).clamp(0.0, (TABLE_POINTS - 1) as f64);
        let i = (u as usize).min(TABLE_POINTS - 2);
        let w = u - i as f64;
        (
            self.mu[i] + w * (self.mu[i + 1] - self.mu[i]),
            self.sigma[i] + w * (self.sigma[i + 1] - self.sigma[i]),
        )
    }
}

/// Lower-triangular factor rows for one to three assets.
fn factor_rows(dims: usize, correlations: &[f64]) -> Result<[[f64; 3]; 3]> {
    let expected = match dims {
        1 => 0,
        2 => 1,
        3 => 3,
        _ => {
            return Err(Error::Config(format!(
                "Monte Carlo supports 1 to 3 assets, got {dims}"
            )))
        }
    };
    if correlations.len() != expected {
        return Err(Error::LengthMismatch {
            what: format!(
                "{dims} assets need {expected} correlations, got {}",
                correlations.len()
            ),
        });
    }
    let mut l = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    match dims {
        2 => {
            let r = correlations[0];
            check_correlation("rho12", r)?;
            l[1] = [r, (1.0 - r * r).max(0.0).sqrt(), 0.0];
        }
        3 => {
            let c = cholesky3(correlations[0], correlations[1], correlations[2])?;
            l[1] = [c.a, c.b, 0.0];
            l[2] = [c.c, c.d, c.e];
        }
        _ => {}
    }
    Ok(l)
}

/// Correlated log-space Euler paths of `xᵢ = ln(Sᵢ/Fᵢ(t))` under the given diffusions,
/// discounted on `curve`.
///
/// Coefficients are tabulated once per time step on a fine state grid and read back
/// linearly along each path.
pub fn mc_price_lv<D: Diffusion1D>(
    spots: &[f64],
    diffusions: &[&D],
    correlations: &[f64],
    curve: &YieldCurve,
    payoff: &MultiPayoff,
    maturity: f64,
    cfg: &McConfig,
) -> Result<McEstimate> {
    let dims = diffusions.len();
    if spots.len() != dims {
        return Err(Error::LengthMismatch {
            what: format!("{} spots for {dims} assets", spots.len()),
        });
    }
    let l = factor_rows(dims, correlations)?;
    if !(maturity > 0.0) {
        return Err(Error::param("maturity", maturity, "must be positive"));
    }
    let steps = cfg.steps_for(maturity);
    let dt = maturity / steps as f64;
    let sqrt_dt = dt.sqrt();

    let tables: Vec<Vec<CoefTable>> = diffusions
        .iter()
        .map(|d| {
            let (_, s) = d.coefficients(0.0, maturity);
            let half_width = (10.0 * s * maturity.sqrt()).max(0.5);
            (0..steps)
                .into_par_iter()
                .map(|j| CoefTable::new(*d, j as f64 * dt, half_width))
                .collect()
        })
        .collect();
    let growth = curve.integrated_rate(maturity).exp();
    let forwards: Vec<f64> = spots.iter().map(|s| s * growth).collect();
    let df = curve.discount(maturity);

    run_paths(cfg, steps * dims, |z| {
        let mut x = [0.0; 3];
        let mut w = [0.0; 3];
        for (j, zj) in z.chunks_exact(dims).enumerate() {
            for i in 0..dims {
                w[i] = (0..=i).map(|k| l[i][k] * zj[k]).sum();
            }
            for i in 0..dims {
                let (mu, sigma) = tables[i][j].at(x[i]);
                x[i] += mu * dt + sigma * sqrt_dt * w[i];
            }
        }
        let mut s = [0.0; 3];
        for i in 0..dims {
            s[i] = forwards[i] * x[i].exp();
        }
        df * payoff.terminal(&s[..dims])
    })
}
