use super::diffusion::Diffusion1D;
use super::geometry::GridGeometry1D;
use crate::error::{Error, Result};
use crate::interp::{InterpMethod, Knots1D};
use crate::market::YieldCurve;
use crate::payoff::Payoff;
use rayon::prelude::*;

/// Option values on one time slice.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueSheet1D {
    pub step: usize,
    pub t: f64,
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
    /// Interpolation slopes; empty on slices too small to interpolate from.
    pub slopes: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct BackwardResult {
    pub value: f64,
    /// Slices from maturity back to the root, when requested.
    pub sheets: Option<Vec<ValueSheet1D>>,
}

/// Backward induction with three equiprobable targets per node, each read off the
/// next slice by 1D interpolation.
pub fn price_backward_1d(
    geom: &GridGeometry1D,
    diffusion: &impl Diffusion1D,
    payoff: &Payoff,
    curve: &YieldCurve,
    method: InterpMethod,
    keep_sheets: bool,
) -> Result<BackwardResult> {
    if !method.is_1d() {
        return Err(Error::Config(format!(
            "`{}` is not a 1D interpolation method",
            method.name()
        )));
    }
    let n = geom.steps;
    let dt = geom.dt;
    let forward = |t: f64| geom.spot * curve.integrated_rate(t).exp();

    let f_t = forward(geom.maturity);
    let mut xs = geom.nodes(n);
    let mut values: Vec<f64> = xs
        .iter()
        .map(|&x| payoff.terminal(x, f_t * x.exp()))
        .collect();
    if let Some(node) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { step: n, node });
    }
    let mut sheets = keep_sheets.then(Vec::new);
    let sqrt_dt = (1.5 * dt).sqrt();

    for step in (0..n).rev() {
        let knots = Knots1D::new(geom.state.axis(step + 1), values, method)?;
        let t = geom.time(step);
        let df = curve.step_discount(t, geom.time(step + 1));
        let next_xs = geom.nodes(step);
        let mut mu = vec![0.0; next_xs.len()];
        let mut sigma = vec![0.0; next_xs.len()];
        diffusion.fill_coefficients(&next_xs, t, &mut mu, &mut sigma);
        let f_step = forward(t);

        let new_values: Vec<f64> = next_xs
            .par_iter()
            .with_min_len(32)
            .enumerate()
            .map(|(i, &x)| {
                let centre = x + mu[i] * dt;
                let h = sigma[i] * sqrt_dt;
                let sum = knots.eval(centre + h) + knots.eval(centre) + knots.eval(centre - h);
                let v = df * sum / 3.0;
                payoff.apply_exercise(v, x, f_step * x.exp(), t)
            })
            .collect();
        if let Some(node) = new_values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { step, node });
        }
        if let Some(s) = sheets.as_mut() {
            s.push(ValueSheet1D {
                step: step + 1,
                t: geom.time(step + 1),
                xs: knots.xs().to_vec(),
                values: knots.ys().to_vec(),
                slopes: knots.slopes().to_vec(),
            });
        }
        xs = next_xs;
        values = new_values;
    }

    let value = if values.len() == 1 {
        values[0]
    } else {
        Knots1D::new(geom.state.axis(0), values.clone(), method)?.eval(0.0)
    };
    if let Some(s) = sheets.as_mut() {
        s.push(ValueSheet1D {
            step: 0,
            t: 0.0,
            xs,
            values,
            slopes: Vec::new(),
        });
    }
    Ok(BackwardResult { value, sheets })
}
