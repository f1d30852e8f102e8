//! Interpolation kernels shared by every engine.
//!
//! * 1D piecewise-cubic Hermite with Stineman, Akima or Steffen slopes.
//! * 2D bicubic (finite-difference node derivatives) and Keys cubic convolution.
//! * 2D cubic-by-linear for asymmetric hybrids.
//! * 3D trilinear.
//!
//! Queries outside the lattice are extrapolated linearly from the boundary
//! using the boundary derivative.

mod axis;
mod bicubic;
mod cubic_linear;
mod keys;
mod one_d;
mod trilinear;

pub use axis::Axis;
pub use bicubic::Bicubic;
pub use cubic_linear::CubicLinear;
pub use keys::{keys_kernel, Keys2D, KEYS_A};
pub use one_d::{hermite_eval, slopes_1d, Knots1D, MIN_KNOTS};
pub use trilinear::{Lattice3D, Trilinear};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Interpolation scheme selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum InterpMethod {
    #[default]
    Stineman,
    Akima,
    Steffen,
    Bicubic,
    Keys,
    CubicLinear,
    Trilinear,
}

impl InterpMethod {
    pub fn is_1d(self) -> bool {
        matches!(
            self,
            InterpMethod::Stineman | InterpMethod::Akima | InterpMethod::Steffen
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            InterpMethod::Stineman => "stineman",
            InterpMethod::Akima => "akima",
            InterpMethod::Steffen => "steffen",
            InterpMethod::Bicubic => "bicubic",
            InterpMethod::Keys => "keys",
            InterpMethod::CubicLinear => "cubic_linear",
            InterpMethod::Trilinear => "trilinear",
        }
    }
}

/// Node values on a rectangular 2D lattice, stored with `x1` varying fastest.
#[derive(Debug, Clone)]
pub struct Lattice2D {
    pub x1: Axis,
    pub x2: Axis,
    pub values: Vec<f64>,
}

impl Lattice2D {
    pub fn new(x1: Axis, x2: Axis, values: Vec<f64>) -> Result<Self> {
        if values.len() != x1.len() * x2.len() {
            return Err(Error::LengthMismatch {
                what: format!(
                    "lattice has {} values for a {}x{} grid",
                    values.len(),
                    x1.len(),
                    x2.len()
                ),
            });
        }
        Ok(Self { x1, x2, values })
    }

    /// Builds a lattice by sampling `f(x1, x2)` at every node.
    pub fn from_fn(x1: Axis, x2: Axis, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(x1.len() * x2.len());
        for &b in x2.xs() {
            for &a in x1.xs() {
                values.push(f(a, b));
            }
        }
        Self { x1, x2, values }
    }

    #[inline]
    pub fn at(&self, i1: usize, i2: usize) -> f64 {
        self.values[i2 * self.x1.len() + i1]
    }

    pub fn row(&self, i2: usize) -> &[f64] {
        let n1 = self.x1.len();
        &self.values[i2 * n1..(i2 + 1) * n1]
    }
}
