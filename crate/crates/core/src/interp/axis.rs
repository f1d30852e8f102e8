use crate::error::{Error, Result};

/// Strictly increasing abscissae, optionally flagged as equally spaced.
///
/// Uniform axes locate a query's interval in O(1); general axes fall back to
/// binary search. Both return the same interval index `i` with
/// `xs[i] <= x < xs[i+1]`, clamped to `[0, len-2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    xs: Vec<f64>,
    uniform: Option<f64>,
}

impl Axis {
    pub fn new(xs: Vec<f64>) -> Result<Self> {
        if let Some(index) = xs.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::NotIncreasing { index: index + 1 });
        }
        Ok(Self { xs, uniform: None })
    }

    /// `n` equally spaced nodes starting at `start`.
    pub fn uniform(start: f64, step: f64, n: usize) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::param("step", step, "must be positive and finite"));
        }
        if n == 0 {
            return Err(Error::TooFewKnots { min: 1, got: 0 });
        }
        let xs = (0..n).map(|i| start + i as f64 * step).collect();
        Ok(Self {
            xs,
            uniform: Some(step),
        })
    }

    /// Marks an existing abscissa vector as uniform after checking the spacing.
    pub fn with_spacing(xs: Vec<f64>, step: f64) -> Result<Self> {
        let axis = Self::new(xs)?;
        let tol = 1e-12 * step.abs();
        if axis
            .xs
            .windows(2)
            .any(|w| ((w[1] - w[0]) - step).abs() > tol)
        {
            return Err(Error::NonUniformAxis {
                method: "uniform axis",
            });
        }
        Ok(Self {
            uniform: Some(step),
            ..axis
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    #[inline]
    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    #[inline]
    pub fn first(&self) -> f64 {
        self.xs[0]
    }

    #[inline]
    pub fn last(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    pub fn spacing(&self) -> Option<f64> {
        self.uniform
    }

    /// Bracketing interval index for `x`, clamped into `[0, len-2]`.
    #[inline]
    pub fn locate(&self, x: f64) -> usize {
        let n = self.xs.len();
        if n < 2 {
            return 0;
        }
        match self.uniform {
            Some(h) => {
                let raw = ((x - self.xs[0]) / h).floor();
                let mut i = if raw <= 0.0 {
                    0
                } else {
                    (raw as usize).min(n - 2)
                };
                // floor() can land one cell off when x sits on a node
                if i > 0 && x < self.xs[i] {
                    i -= 1;
                } else if i < n - 2 && x >= self.xs[i + 1] {
                    i += 1;
                }
                i
            }
            None => self.locate_binary(x),
        }
    }

    #[inline]
    pub fn locate_binary(&self, x: f64) -> usize {
        let n = self.xs.len();
        if n < 2 {
            return 0;
        }
        self.xs
            .partition_point(|&v| v <= x)
            .saturating_sub(1)
            .min(n - 2)
    }

    /// Clamps `x` into `[first, last]`.
    #[inline]
    pub fn clamp(&self, x: f64) -> f64 {
        x.max(self.first()).min(self.last())
    }
}
