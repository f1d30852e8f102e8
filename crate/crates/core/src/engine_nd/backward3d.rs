use super::cholesky::cholesky3;
use super::geometry::GridGeometryND;
use super::lattice::check_finite;
use crate::engine1d::Diffusion1D;
use crate::error::{Error, Result};
use crate::interp::{Lattice3D, Trilinear};
use crate::market::YieldCurve;
use crate::payoff::MultiPayoff;
use crate::stencil::nine_point;
use rayon::prelude::*;

/// Three-asset backward induction with the nine-point stencil (cube corners plus centre)
/// and trilinear interpolation.
pub fn price_backward_3d<D: Diffusion1D>(
    geom: &GridGeometryND,
    diffusions: [&D; 3],
    payoff: &MultiPayoff,
    curve: &YieldCurve,
) -> Result<f64> {
    if geom.dims() != 3 {
        return Err(Error::Config(format!(
            "expected a 3-asset geometry, got {}",
            geom.dims()
        )));
    }
    let ch = cholesky3(geom.rho(0, 1), geom.rho(0, 2), geom.rho(1, 2))?;
    let fwd = |i: usize, t: f64| geom.spots[i] * curve.integrated_rate(t).exp();
    let dt = geom.dt;
    let n = geom.steps;

    let spots_at = |t: f64, x: [f64; 3]| -> [f64; 3] {
        [
            fwd(0, t) * x[0].exp(),
            fwd(1, t) * x[1].exp(),
            fwd(2, t) * x[2].exp(),
        ]
    };
    let xs: Vec<Vec<f64>> = geom.axes.iter().map(|a| a.nodes(n)).collect();
    let mut values = Vec::with_capacity(xs[0].len() * xs[1].len() * xs[2].len());
    for &c in &xs[2] {
        for &b in &xs[1] {
            for &a in &xs[0] {
                values.push(payoff.terminal(&spots_at(geom.maturity, [a, b, c])));
            }
        }
    }
    check_finite(&values, n)?;

    for step in (0..n).rev() {
        let axes: Vec<_> = geom.axes.iter().map(|a| a.axis(step + 1)).collect();
        let lattice = Lattice3D::new(axes[0].clone(), axes[1].clone(), axes[2].clone(), values)?;
        let interp = Trilinear::new(lattice)?;
        let t = geom.time(step);
        let df = curve.step_discount(t, geom.time(step + 1));
        let xs: Vec<Vec<f64>> = geom.axes.iter().map(|a| a.nodes(step)).collect();
        let coef: Vec<(Vec<f64>, Vec<f64>)> = xs
            .iter()
            .zip(diffusions)
            .map(|(x, d)| {
                let mut mu = vec![0.0; x.len()];
                let mut sigma = vec![0.0; x.len()];
                d.fill_coefficients(x, t, &mut mu, &mut sigma);
                (mu, sigma)
            })
            .collect();
        let (n1, n2) = (xs[0].len(), xs[1].len());
        values = (0..n1 * n2 * xs[2].len())
            .into_par_iter()
            .with_min_len(64)
            .map(|k| {
                let idx = [k % n1, (k / n1) % n2, k / (n1 * n2)];
                let x = [xs[0][idx[0]], xs[1][idx[1]], xs[2][idx[2]]];
                let mu = [coef[0].0[idx[0]], coef[1].0[idx[1]], coef[2].0[idx[2]]];
                let sigma = [coef[0].1[idx[0]], coef[1].1[idx[1]], coef[2].1[idx[2]]];
                let sum: f64 = nine_point(mu, sigma, &ch, dt)
                    .iter()
                    .map(|d| interp.eval(x[0] + d[0], x[1] + d[1], x[2] + d[2]))
                    .sum();
                let v = df * sum / 9.0;
                if payoff.has_exercise() {
                    payoff.apply_exercise(v, &spots_at(t, x), t)
                } else {
                    v
                }
            })
            .collect();
        check_finite(&values, step)?;
    }
    match values.as_slice() {
        [root] => Ok(*root),
        _ => Err(Error::Config(
            "the root slice of a three-asset lattice must be a single node".into(),
        )),
    }
}
