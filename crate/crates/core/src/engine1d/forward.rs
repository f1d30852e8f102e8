use super::diffusion::Diffusion1D;
use super::geometry::GridGeometry1D;
use crate::error::{Error, Result};
use crate::interp::{InterpMethod, Knots1D};
use crate::market::YieldCurve;
use crate::normal::interval_mass;
use rayon::prelude::*;

/// Threshold below which a negative Arrow–Debreu price signals an unstable step.
pub(crate) const AD_NEGATIVE_TOL: f64 = -1e-12;

/// Arrow–Debreu prices on one slice of a rectangular grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ADSheet1D {
    pub step: usize,
    pub t: f64,
    pub xs: Vec<f64>,
    pub ad: Vec<f64>,
}

impl ADSheet1D {
    pub fn mass(&self) -> f64 {
        self.ad.iter().sum()
    }

    /// `Σ AD(i)·f(x_i)`.
    pub fn expectation(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.xs.iter().zip(&self.ad).map(|(&x, &a)| a * f(x)).sum()
    }
}

/// Node masses of `N(mean, sd²)` over midpoint-to-midpoint cells, tails included.
pub(crate) fn normal_cell_masses(xs: &[f64], mean: f64, sd: f64) -> Vec<f64> {
    let n = xs.len();
    (0..n)
        .map(|i| {
            let lo = if i == 0 {
                f64::NEG_INFINITY
            } else {
                0.5 * (xs[i - 1] + xs[i])
            };
            let hi = if i + 1 == n {
                f64::INFINITY
            } else {
                0.5 * (xs[i] + xs[i + 1])
            };
            interval_mass(mean, sd, lo, hi)
        })
        .collect()
}

/// Explicit Fokker–Planck pass on a rectangular grid.
///
/// Starts at `t = dt` from the one-step normal approximation, then each node takes a
/// third of its own mass plus weighted masses interpolated at `x ± h` with
/// `h = σ(x,t)·√(3/2·dt)`. Returns the slices for steps `1..=N`.
///
/// Use a Hermite kernel (Akima or Steffen): Stineman's rational form does not
/// preserve sums of translated samples and leaks mass from narrow densities.
pub fn forward_ad_1d(
    geom: &GridGeometry1D,
    diffusion: &impl Diffusion1D,
    curve: &YieldCurve,
    method: InterpMethod,
) -> Result<Vec<ADSheet1D>> {
    if !geom.is_rectangular() {
        return Err(Error::Config(
            "the forward pass needs a rectangular geometry".into(),
        ));
    }
    let dt = geom.dt;
    let axis = geom.state.axis(geom.steps);
    let xs = axis.xs().to_vec();

    let (mu0, sigma0) = diffusion.coefficients(0.0, 0.0);
    let start = normal_cell_masses(&xs, mu0 * dt, sigma0 * dt.sqrt());
    let df0 = curve.step_discount(0.0, dt);
    let mut sheets = vec![ADSheet1D {
        step: 1,
        t: dt,
        xs: xs.clone(),
        ad: start.into_iter().map(|m| m * df0).collect(),
    }];

    let mut mu = vec![0.0; xs.len()];
    let mut sigma = vec![0.0; xs.len()];
    for step in 1..geom.steps {
        let t = geom.time(step);
        let cur = &sheets[step - 1];
        let knots = Knots1D::new(axis.clone(), cur.ad.clone(), method)?;
        let density = |x: f64| knots.eval(x).max(0.0);
        diffusion.fill_coefficients(&xs, t, &mut mu, &mut sigma);
        let df = curve.step_discount(t, t + dt);
        let k = 1.5f64.sqrt() * dt.sqrt();

        let next: Vec<f64> = xs
            .par_iter()
            .with_min_len(32)
            .enumerate()
            .map(|(i, &x)| {
                let s_md = sigma[i];
                let h = s_md * k;
                let (mu_up, s_up) = diffusion.coefficients(x + h, t);
                let (mu_dn, s_dn) = diffusion.coefficients(x - h, t);
                let r_up = s_up / s_md;
                let r_dn = s_dn / s_md;
                let q_up = (1.0 - h * mu_up / (s_up * s_up)) * r_up * r_up / 3.0;
                let q_dn = (1.0 + h * mu_dn / (s_dn * s_dn)) * r_dn * r_dn / 3.0;
                df * (q_up * density(x + h) + cur.ad[i] / 3.0 + q_dn * density(x - h))
            })
            .collect();
        let mut ad = next;
        for (node, v) in ad.iter_mut().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    step: step + 1,
                    node,
                });
            }
            if *v < AD_NEGATIVE_TOL {
                return Err(Error::Unstable {
                    step: step + 1,
                    node,
                    detail: format!("negative Arrow-Debreu price {v:.3e}; reduce dt"),
                });
            }
            *v = v.max(0.0);
        }
        sheets.push(ADSheet1D {
            step: step + 1,
            t: t + dt,
            xs: xs.clone(),
            ad,
        });
    }
    Ok(sheets)
}
