use super::cholesky::check_correlation;
use super::geometry::GridGeometryND;
use super::lattice::{backward_2d, Move2};
use crate::engine1d::Diffusion1D;
use crate::error::{Error, Result};
use crate::interp::InterpMethod;
use crate::market::YieldCurve;
use crate::payoff::MultiPayoff;

/// Two-asset backward induction with the five-point stencil and a constant correlation.
pub fn price_backward_2d<D: Diffusion1D>(
    geom: &GridGeometryND,
    diffusions: [&D; 2],
    payoff: &MultiPayoff,
    curve: &YieldCurve,
    method: InterpMethod,
) -> Result<f64> {
    let rho = geom.rho(0, 1);
    price_backward_2d_with(geom, diffusions, |_| rho, payoff, curve, method)
}

/// As [`price_backward_2d`] with a time-dependent correlation `ρ(t)`.
pub fn price_backward_2d_with<D: Diffusion1D>(
    geom: &GridGeometryND,
    diffusions: [&D; 2],
    rho: impl Fn(f64) -> f64,
    payoff: &MultiPayoff,
    curve: &YieldCurve,
    method: InterpMethod,
) -> Result<f64> {
    if geom.dims() != 2 {
        return Err(Error::Config(format!(
            "expected a 2-asset geometry, got {}",
            geom.dims()
        )));
    }
    if !matches!(method, InterpMethod::Bicubic | InterpMethod::Keys) {
        return Err(Error::Config(format!(
            "`{}` is not a two-asset interpolation method (use bicubic or keys)",
            method.name()
        )));
    }
    let fwd = |i: usize, t: f64| geom.spots[i] * curve.integrated_rate(t).exp();
    let (f1, f2) = (fwd(0, geom.maturity), fwd(1, geom.maturity));
    let clamp = payoff.is_nonnegative().then_some(0.0);

    let prepare = |step: usize, t: f64, xs1: &[f64], xs2: &[f64]| -> Result<_> {
        let r = rho(t);
        check_correlation("rho12", r)?;
        let mut coef = [
            (vec![0.0; xs1.len()], vec![0.0; xs1.len()]),
            (vec![0.0; xs2.len()], vec![0.0; xs2.len()]),
        ];
        diffusions[0].fill_coefficients(xs1, t, &mut coef[0].0, &mut coef[0].1);
        diffusions[1].fill_coefficients(xs2, t, &mut coef[1].0, &mut coef[1].1);
        let df = curve.step_discount(t, geom.time(step + 1));
        Ok(move |i: usize, j: usize| Move2 {
            mu: [coef[0].0[i], coef[1].0[j]],
            sigma: [coef[0].1[i], coef[1].1[j]],
            rho: r,
            df,
        })
    };
    let exercise = |v: f64, x1: f64, x2: f64, t: f64| {
        payoff
            .has_exercise()
            .then(|| payoff.apply_exercise(v, &[fwd(0, t) * x1.exp(), fwd(1, t) * x2.exp()], t))
    };
    backward_2d(
        [&geom.axes[0], &geom.axes[1]],
        geom.steps,
        geom.dt,
        method,
        clamp,
        |x1, x2| payoff.terminal(&[f1 * x1.exp(), f2 * x2.exp()]),
        prepare,
        exercise,
    )
}
