use super::{Axis, InterpMethod};
use crate::error::{Error, Result};

/// Minimum knot count for the 1D cubics (the Akima stencil needs two
/// neighbours on each side plus the interval itself).
pub const MIN_KNOTS: usize = 6;

/// Per-knot derivative estimates for a 1D monotone scheme.
///
/// Every scheme returns the exact line slope for affine data.
pub fn slopes_1d(xs: &[f64], ys: &[f64], method: InterpMethod) -> Result<Vec<f64>> {
    if xs.len() < MIN_KNOTS {
        return Err(Error::TooFewKnots {
            min: MIN_KNOTS,
            got: xs.len(),
        });
    }
    if ys.len() != xs.len() {
        return Err(Error::LengthMismatch {
            what: format!("{} abscissae vs {} ordinates", xs.len(), ys.len()),
        });
    }
    if let Some(index) = xs.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::NotIncreasing { index: index + 1 });
    }
    if !method.is_1d() {
        return Err(Error::Config(format!(
            "`{}` is not a 1D interpolation method",
            method.name()
        )));
    }
    let mut out = vec![0.0; xs.len()];
    fill_slopes(xs, ys, method, &mut out);
    Ok(out)
}

/// Unchecked slope computation into `out`; callers guarantee `len >= 3`.
pub(crate) fn fill_slopes(xs: &[f64], ys: &[f64], method: InterpMethod, out: &mut [f64]) {
    match method {
        InterpMethod::Akima => akima(xs, ys, out),
        InterpMethod::Steffen => steffen(xs, ys, out),
        _ => stineman(xs, ys, out),
    }
}

fn stineman(xs: &[f64], ys: &[f64], out: &mut [f64]) {
    let n = xs.len();
    // the circle slope is not scale free, so work with ordinates scaled to
    // the abscissa range
    let (lo, hi) = ys
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &y| {
            (a.min(y), b.max(y))
        });
    let scale = if hi > lo {
        (xs[n - 1] - xs[0]) / (hi - lo)
    } else {
        1.0
    };
    // slope of the circle through three consecutive points
    for i in 1..n - 1 {
        let (dx0, dy0) = (xs[i] - xs[i - 1], ys[i] - ys[i - 1]);
        let (dx1, dy1) = (xs[i + 1] - xs[i], ys[i + 1] - ys[i]);
        let (dy0, dy1) = (dy0 * scale, dy1 * scale);
        // flat where the neighbouring secants disagree in sign or one is zero
        if dy0 * dy1 <= 0.0 {
            out[i] = 0.0;
            continue;
        }
        let l0 = dx0 * dx0 + dy0 * dy0;
        let l1 = dx1 * dx1 + dy1 * dy1;
        let m = (dy1 * l0 + dy0 * l1) / (dx1 * l0 + dx0 * l1);
        // keep the interior slope within three secants on both sides, beyond
        // which the rational form overshoots the interval
        let cap = 3.0 * (dy0 / dx0).abs().min((dy1 / dx1).abs());
        out[i] = m.clamp(-cap, cap) / scale;
    }
    let s0 = (ys[1] - ys[0]) / (xs[1] - xs[0]);
    out[0] = stineman_end(s0, out[1]);
    let sn = (ys[n - 1] - ys[n - 2]) / (xs[n - 1] - xs[n - 2]);
    out[n - 1] = stineman_end(sn, out[n - 2]);
}

fn stineman_end(secant: f64, inner: f64) -> f64 {
    let d = secant - inner;
    let m = if secant * d > 0.0 {
        secant + secant.abs() * d / (secant.abs() + d.abs())
    } else {
        2.0 * secant - inner
    };
    // an end slope against the secant would overshoot the end interval
    if m * secant < 0.0 {
        0.0
    } else {
        m
    }
}

fn akima(xs: &[f64], ys: &[f64], out: &mut [f64]) {
    let n = xs.len();
    // secants padded with two extrapolated values on each side
    let mut m = vec![0.0; n + 3];
    for i in 0..n - 1 {
        m[i + 2] = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
    }
    m[1] = 2.0 * m[2] - m[3];
    m[0] = 2.0 * m[1] - m[2];
    m[n + 1] = 2.0 * m[n] - m[n - 1];
    m[n + 2] = 2.0 * m[n + 1] - m[n];
    for (i, slope) in out.iter_mut().enumerate() {
        let (mm2, mm1, m0, mp1) = (m[i], m[i + 1], m[i + 2], m[i + 3]);
        let w1 = (mp1 - m0).abs();
        let w2 = (mm1 - mm2).abs();
        *slope = if w1 + w2 > 1e-300 {
            (w1 * mm1 + w2 * m0) / (w1 + w2)
        } else {
            0.5 * (mm1 + m0)
        };
    }
}

fn steffen(xs: &[f64], ys: &[f64], out: &mut [f64]) {
    let n = xs.len();
    let h = |i: usize| xs[i + 1] - xs[i];
    let s = |i: usize| (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
    for i in 1..n - 1 {
        let (h0, h1) = (h(i - 1), h(i));
        let (s0, s1) = (s(i - 1), s(i));
        let p = (s0 * h1 + s1 * h0) / (h0 + h1);
        out[i] =
            (s0.signum_or_zero() + s1.signum_or_zero()) * s0.abs().min(s1.abs()).min(0.5 * p.abs());
    }
    out[0] = steffen_end(s(0), s(1), h(0), h(1));
    out[n - 1] = steffen_end(s(n - 2), s(n - 3), h(n - 2), h(n - 3));
}

fn steffen_end(s0: f64, s1: f64, h0: f64, h1: f64) -> f64 {
    let p = s0 * (1.0 + h0 / (h0 + h1)) - s1 * h0 / (h0 + h1);
    if p * s0 <= 0.0 {
        0.0
    } else if p.abs() > 2.0 * s0.abs() {
        2.0 * s0
    } else {
        p
    }
}

trait SignumOrZero {
    fn signum_or_zero(self) -> f64;
}

impl SignumOrZero for f64 {
    #[inline]
    fn signum_or_zero(self) -> f64 {
        if self > 0.0 {
            1.0
        } else if self < 0.0 {
            -1.0
        } else {
            0.0
        }
    }
}

/// Cubic Hermite value on `[x0, x0 + h]` at `x`.
#[inline]
pub fn hermite_eval(x0: f64, h: f64, y0: f64, y1: f64, m0: f64, m1: f64, x: f64) -> f64 {
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1
}

/// Stineman's rational interpolant on one interval.
#[inline]
fn stineman_eval(x0: f64, x1: f64, y0: f64, y1: f64, m0: f64, m1: f64, x: f64) -> f64 {
    let s = (y1 - y0) / (x1 - x0);
    let chord = y0 + s * (x - x0);
    let d0 = y0 + m0 * (x - x0) - chord;
    let d1 = y1 + m1 * (x - x1) - chord;
    let p = d0 * d1;
    if p > 0.0 {
        chord + p / (d0 + d1)
    } else if p < 0.0 {
        chord + p * (2.0 * x - x0 - x1) / ((d0 - d1) * (x1 - x0))
    } else {
        chord
    }
}

/// Evaluates one interval `i` of a knot set with the given kernel.
#[inline]
pub(crate) fn eval_interval(
    method: InterpMethod,
    xs: &[f64],
    ys: &[f64],
    slopes: &[f64],
    i: usize,
    x: f64,
) -> f64 {
    let n = xs.len();
    if x < xs[0] {
        return ys[0] + slopes[0] * (x - xs[0]);
    }
    if x > xs[n - 1] {
        return ys[n - 1] + slopes[n - 1] * (x - xs[n - 1]);
    }
    let (x0, x1) = (xs[i], xs[i + 1]);
    match method {
        InterpMethod::Stineman => {
            stineman_eval(x0, x1, ys[i], ys[i + 1], slopes[i], slopes[i + 1], x)
        }
        _ => hermite_eval(x0, x1 - x0, ys[i], ys[i + 1], slopes[i], slopes[i + 1], x),
    }
}

/// Knots with precomputed slopes, ready for repeated evaluation.
#[derive(Debug, Clone)]
pub struct Knots1D {
    axis: Axis,
    ys: Vec<f64>,
    slopes: Vec<f64>,
    method: InterpMethod,
}

impl Knots1D {
    pub fn new(axis: Axis, ys: Vec<f64>, method: InterpMethod) -> Result<Self> {
        let slopes = slopes_1d(axis.xs(), &ys, method)?;
        Ok(Self {
            axis,
            ys,
            slopes,
            method,
        })
    }

    /// Knots at `xs`; the axis is flagged uniform when `spacing` is given.
    pub fn from_xs(
        xs: Vec<f64>,
        ys: Vec<f64>,
        spacing: Option<f64>,
        method: InterpMethod,
    ) -> Result<Self> {
        let axis = match spacing {
            Some(h) => Axis::with_spacing(xs, h)?,
            None => Axis::new(xs)?,
        };
        Self::new(axis, ys, method)
    }

    pub fn xs(&self) -> &[f64] {
        self.axis.xs()
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn uniform_spacing(&self) -> Option<f64> {
        self.axis.spacing()
    }

    pub fn method(&self) -> InterpMethod {
        self.method
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        let i = self.axis.locate(x);
        eval_interval(self.method, self.axis.xs(), &self.ys, &self.slopes, i, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const METHODS: [InterpMethod; 3] = [
        InterpMethod::Stineman,
        InterpMethod::Akima,
        InterpMethod::Steffen,
    ];

    fn grid(n: usize, h: f64) -> Vec<f64> {
        (0..n).map(|i| i as f64 * h).collect()
    }

    #[test]
    fn linear_data_gives_line_slope() {
        let xs = grid(6, 1.0);
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
        for m in METHODS {
            let s = slopes_1d(&xs, &ys, m).unwrap();
            assert!(s.iter().all(|&v| (v - 2.0).abs() < 1e-14), "{m:?}: {s:?}");
        }
    }

    #[test]
    fn constant_data_gives_zero_slopes() {
        let xs = grid(8, 0.25);
        let ys = vec![3.5; 8];
        for m in METHODS {
            let s = slopes_1d(&xs, &ys, m).unwrap();
            assert!(s.iter().all(|&v| v == 0.0), "{m:?}: {s:?}");
        }
    }

    #[test]
    fn steffen_step_is_monotone() {
        let xs = grid(6, 1.0);
        let ys = vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0];
        let k = Knots1D::from_xs(xs, ys, Some(1.0), InterpMethod::Steffen).unwrap();
        assert!(k.slopes().iter().all(|s| s.is_finite()));
        let mut prev = k.eval(0.0);
        for j in 1..=5000 {
            let v = k.eval(j as f64 * 5.0 / 5000.0);
            assert!(v >= prev - 1e-15, "decrease at sample {j}");
            prev = v;
        }
    }

    #[test]
    fn node_exactness_and_linear_reproduction() {
        let xs = grid(9, 0.3);
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
        let curved: Vec<f64> = xs.iter().map(|x| (3.0 * x).sin()).collect();
        for m in METHODS {
            let k = Knots1D::from_xs(xs.clone(), ys.clone(), Some(0.3), m).unwrap();
            for j in 0..200 {
                let x = j as f64 * 2.4 / 199.0;
                assert!((k.eval(x) - (2.0 * x + 1.0)).abs() < 1e-12, "{m:?} at {x}");
            }
            let c = Knots1D::from_xs(xs.clone(), curved.clone(), None, m).unwrap();
            for (x, y) in xs.iter().zip(&curved) {
                assert_eq!(c.eval(*x), *y);
            }
        }
    }

    #[test]
    fn stineman_parabola_midpoints() {
        let xs = grid(11, 0.1);
        let ys: Vec<f64> = xs.iter().map(|x| x * x).collect();
        let k = Knots1D::from_xs(xs, ys, Some(0.1), InterpMethod::Stineman).unwrap();
        for i in 1..9 {
            let x = 0.1 * i as f64 + 0.05;
            assert!((k.eval(x) - x * x).abs() < 1e-3, "x = {x}");
        }
    }

    #[test]
    fn extrapolates_linearly_with_end_slope() {
        let xs = grid(7, 1.0);
        let ys: Vec<f64> = xs.iter().map(|x| x * x).collect();
        let k = Knots1D::from_xs(xs, ys, Some(1.0), InterpMethod::Akima).unwrap();
        let s_last = *k.slopes().last().unwrap();
        assert!((k.eval(8.0) - (36.0 + 2.0 * s_last)).abs() < 1e-12);
        let s0 = k.slopes()[0];
        assert!((k.eval(-1.5) - (-1.5 * s0)).abs() < 1e-12);
    }

    #[test]
    fn size_and_ordering_errors() {
        let m = InterpMethod::Stineman;
        assert_eq!(
            slopes_1d(&[0.0, 1.0, 2.0, 3.0, 4.0], &[0.0; 5], m),
            Err(Error::TooFewKnots { min: 6, got: 5 })
        );
        assert_eq!(
            slopes_1d(&[0.0, 1.0, 2.0, 2.0, 4.0, 5.0], &[0.0; 6], m),
            Err(Error::NotIncreasing { index: 3 })
        );
    }

    fn monotone_data() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (6usize..20).prop_flat_map(|n| {
            (
                prop::collection::vec(0.01f64..2.0, n),
                prop::collection::vec(0.0f64..5.0, n),
            )
                .prop_map(|(dx, dy)| {
                    let mut xs = Vec::with_capacity(dx.len());
                    let mut ys = Vec::with_capacity(dy.len());
                    let (mut x, mut y) = (0.0, 0.0);
                    for (a, b) in dx.iter().zip(&dy) {
                        xs.push(x);
                        ys.push(y);
                        x += a;
                        // occasional flat stretches
                        y += if *b < 1.0 { 0.0 } else { b - 1.0 };
                    }
                    (xs, ys)
                })
        })
    }

    proptest! {
        #[test]
        fn bounded_on_monotone_data((xs, ys) in monotone_data()) {
            for m in [InterpMethod::Stineman, InterpMethod::Steffen] {
                let k = Knots1D::from_xs(xs.clone(), ys.clone(), None, m).unwrap();
                for i in 0..xs.len() - 1 {
                    let (lo, hi) = (ys[i].min(ys[i + 1]), ys[i].max(ys[i + 1]));
                    let pad = 0.05 * (hi - lo) + 1e-12;
                    for j in 0..=32 {
                        let x = xs[i] + (xs[i + 1] - xs[i]) * j as f64 / 32.0;
                        let v = k.eval(x);
                        prop_assert!(v >= lo - pad && v <= hi + pad,
                            "{:?} interval {} value {} outside [{}, {}]", m, i, v, lo, hi);
                    }
                }
            }
        }

        #[test]
        fn steffen_monotone_on_monotone_data((xs, ys) in monotone_data()) {
            let k = Knots1D::from_xs(xs.clone(), ys, None, InterpMethod::Steffen).unwrap();
            let last = *xs.last().unwrap();
            let mut prev = k.eval(0.0);
            for j in 1..=2000 {
                let v = k.eval(last * j as f64 / 2000.0);
                prop_assert!(v >= prev - 1e-12);
                prev = v;
            }
        }
    }
}
