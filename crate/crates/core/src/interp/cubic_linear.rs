use super::one_d::{eval_interval, fill_slopes, MIN_KNOTS};
use super::{InterpMethod, Lattice2D};
use crate::error::{Error, Result};

/// Monotone cubic along `x1` on each `x2` row, blended linearly across rows.
///
/// A single-row lattice is treated as constant in `x2`.
#[derive(Debug, Clone)]
pub struct CubicLinear {
    lattice: Lattice2D,
    slopes: Vec<f64>,
    method: InterpMethod,
}

impl CubicLinear {
    pub fn new(lattice: Lattice2D, method: InterpMethod) -> Result<Self> {
        let n1 = lattice.x1.len();
        if n1 < MIN_KNOTS {
            return Err(Error::TooFewKnots {
                min: MIN_KNOTS,
                got: n1,
            });
        }
        if !method.is_1d() {
            return Err(Error::Config(format!(
                "`{}` cannot be used along the cubic axis",
                method.name()
            )));
        }
        let mut slopes = vec![0.0; lattice.values.len()];
        for (row, out) in lattice.values.chunks(n1).zip(slopes.chunks_mut(n1)) {
            fill_slopes(lattice.x1.xs(), row, method, out);
        }
        Ok(Self {
            lattice,
            slopes,
            method,
        })
    }

    pub fn lattice(&self) -> &Lattice2D {
        &self.lattice
    }

    /// Per-row slopes along `x1`, laid out like the lattice values.
    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    #[inline]
    fn row_value(&self, j: usize, i: usize, x1: f64) -> f64 {
        let n1 = self.lattice.x1.len();
        let r = j * n1..(j + 1) * n1;
        eval_interval(
            self.method,
            self.lattice.x1.xs(),
            &self.lattice.values[r.clone()],
            &self.slopes[r],
            i,
            x1,
        )
    }

    #[inline]
    pub fn eval(&self, x1: f64, x2: f64) -> f64 {
        let i = self.lattice.x1.locate(x1);
        let ax2 = &self.lattice.x2;
        if ax2.len() == 1 {
            return self.row_value(0, i, x1);
        }
        let j = ax2.locate(x2);
        let (b0, b1) = (ax2.xs()[j], ax2.xs()[j + 1]);
        let w = (x2 - b0) / (b1 - b0);
        let v0 = self.row_value(j, i, x1);
        let v1 = self.row_value(j + 1, i, x1);
        v0 + w * (v1 - v0)
    }
}
