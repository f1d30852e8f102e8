use crate::engine1d::StateAxis;
use crate::error::{Error, Result};
use crate::interp::{Bicubic, CubicLinear, InterpMethod, Keys2D, Lattice2D};
use crate::stencil::five_point;
use rayon::prelude::*;

/// One node's stencil inputs: drifts, vols, correlation and the discount to the next slice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Move2 {
    pub mu: [f64; 2],
    pub sigma: [f64; 2],
    pub rho: f64,
    pub df: f64,
}

/// A 2D slice ready for interpolation.
pub(crate) enum Sheet2 {
    Bicubic(Bicubic),
    Keys(Keys2D, Option<f64>),
    CubicLinear(CubicLinear),
}

impl Sheet2 {
    pub fn build(
        lattice: Lattice2D,
        method: InterpMethod,
        clamp_floor: Option<f64>,
    ) -> Result<Self> {
        Ok(match method {
            InterpMethod::Bicubic => Sheet2::Bicubic(Bicubic::new(lattice)?),
            InterpMethod::Keys => Sheet2::Keys(Keys2D::new(lattice)?, clamp_floor),
            m if m.is_1d() => Sheet2::CubicLinear(CubicLinear::new(lattice, m)?),
            m => {
                return Err(Error::Config(format!(
                    "`{}` cannot interpolate a 2D slice",
                    m.name()
                )))
            }
        })
    }

    #[inline]
    pub fn eval(&self, x1: f64, x2: f64) -> f64 {
        match self {
            Sheet2::Bicubic(b) => b.eval(x1, x2),
            Sheet2::Keys(k, floor) => k.eval(x1, x2, *floor),
            Sheet2::CubicLinear(c) => c.eval(x1, x2),
        }
    }
}

/// Backward induction over a two-factor lattice with the five-point stencil.
///
/// `prepare(step, t, xs1, xs2)` returns the per-node stencil inputs for the slice at
/// `step`, indexed `(i1, i2)`. The root slice must be a single node.
#[allow(clippy::too_many_arguments)]
pub(crate) fn backward_2d<T, F, P, E>(
    axes: [&StateAxis; 2],
    steps: usize,
    dt: f64,
    method: InterpMethod,
    clamp_floor: Option<f64>,
    terminal: T,
    prepare: F,
    exercise: E,
) -> Result<f64>
where
    T: Fn(f64, f64) -> f64 + Sync,
    F: Fn(usize, f64, &[f64], &[f64]) -> Result<P>,
    P: Fn(usize, usize) -> Move2 + Sync,
    E: Fn(f64, f64, f64, f64) -> Option<f64> + Sync,
{
    let xs1 = axes[0].nodes(steps);
    let xs2 = axes[1].nodes(steps);
    let mut values = Vec::with_capacity(xs1.len() * xs2.len());
    for &b in &xs2 {
        for &a in &xs1 {
            values.push(terminal(a, b));
        }
    }
    check_finite(&values, steps)?;

    for step in (0..steps).rev() {
        let lattice = Lattice2D::new(axes[0].axis(step + 1), axes[1].axis(step + 1), values)?;
        let sheet = Sheet2::build(lattice, method, clamp_floor)?;
        let t = step as f64 * dt;
        let xs1 = axes[0].nodes(step);
        let xs2 = axes[1].nodes(step);
        let node = prepare(step, t, &xs1, &xs2)?;
        let n1 = xs1.len();
        values = (0..n1 * xs2.len())
            .into_par_iter()
            .with_min_len(64)
            .map(|k| {
                let (i, j) = (k % n1, k / n1);
                let (x1, x2) = (xs1[i], xs2[j]);
                let m = node(i, j);
                let sum: f64 = five_point(m.mu, m.sigma, m.rho, dt)
                    .iter()
                    .map(|d| sheet.eval(x1 + d[0], x2 + d[1]))
                    .sum();
                let v = m.df * sum / 5.0;
                exercise(v, x1, x2, t).unwrap_or(v)
            })
            .collect();
        check_finite(&values, step)?;
    }
    match values.as_slice() {
        [root] => Ok(*root),
        _ => Err(Error::Config(
            "the root slice of a two-factor lattice must be a single node".into(),
        )),
    }
}

pub(crate) fn check_finite(values: &[f64], step: usize) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(node) => Err(Error::NonFinite { step, node }),
        None => Ok(()),
    }
}
