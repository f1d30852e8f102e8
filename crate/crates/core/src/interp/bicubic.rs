use super::{Axis, Lattice2D};
use crate::error::{Error, Result};

/// Bicubic Hermite patches over a 2D lattice.
///
/// Node derivatives `fx`, `fy`, `fxy` come from central differences
/// (one-sided on the edges) and are computed once at construction, so one
/// instance serves every query of a time step.
#[derive(Debug, Clone)]
pub struct Bicubic {
    lattice: Lattice2D,
    fx: Vec<f64>,
    fy: Vec<f64>,
    fxy: Vec<f64>,
}

fn diff_along_x1(axis: &Axis, n2: usize, v: &[f64]) -> Vec<f64> {
    let n1 = axis.len();
    let xs = axis.xs();
    let mut out = vec![0.0; v.len()];
    for j in 0..n2 {
        let row = &v[j * n1..(j + 1) * n1];
        let o = &mut out[j * n1..(j + 1) * n1];
        o[0] = (row[1] - row[0]) / (xs[1] - xs[0]);
        for i in 1..n1 - 1 {
            o[i] = (row[i + 1] - row[i - 1]) / (xs[i + 1] - xs[i - 1]);
        }
        o[n1 - 1] = (row[n1 - 1] - row[n1 - 2]) / (xs[n1 - 1] - xs[n1 - 2]);
    }
    out
}

fn diff_along_x2(axis: &Axis, n1: usize, v: &[f64]) -> Vec<f64> {
    let n2 = axis.len();
    let ys = axis.xs();
    let mut out = vec![0.0; v.len()];
    for j in 0..n2 {
        let (lo, hi) = if j == 0 {
            (0, 1)
        } else if j == n2 - 1 {
            (n2 - 2, n2 - 1)
        } else {
            (j - 1, j + 1)
        };
        let inv = 1.0 / (ys[hi] - ys[lo]);
        for i in 0..n1 {
            out[j * n1 + i] = (v[hi * n1 + i] - v[lo * n1 + i]) * inv;
        }
    }
    out
}

#[inline]
fn basis(t: f64) -> [f64; 4] {
    let t2 = t * t;
    let t3 = t2 * t;
    [
        2.0 * t3 - 3.0 * t2 + 1.0,
        t3 - 2.0 * t2 + t,
        -2.0 * t3 + 3.0 * t2,
        t3 - t2,
    ]
}

#[inline]
fn basis_d(t: f64) -> [f64; 4] {
    let t2 = t * t;
    [
        6.0 * t2 - 6.0 * t,
        3.0 * t2 - 4.0 * t + 1.0,
        -6.0 * t2 + 6.0 * t,
        3.0 * t2 - 2.0 * t,
    ]
}

impl Bicubic {
    pub fn new(lattice: Lattice2D) -> Result<Self> {
        let (n1, n2) = (lattice.x1.len(), lattice.x2.len());
        if n1 < 4 || n2 < 4 {
            return Err(Error::TooFewKnots {
                min: 4,
                got: n1.min(n2),
            });
        }
        let fx = diff_along_x1(&lattice.x1, n2, &lattice.values);
        let fy = diff_along_x2(&lattice.x2, n1, &lattice.values);
        let fxy = diff_along_x2(&lattice.x2, n1, &fx);
        Ok(Self {
            lattice,
            fx,
            fy,
            fxy,
        })
    }

    pub fn lattice(&self) -> &Lattice2D {
        &self.lattice
    }

    /// Value and partials of the patch containing the (already clamped) point.
    #[inline]
    fn patch(&self, x1: f64, x2: f64, need_grad: bool) -> (f64, f64, f64) {
        let l = &self.lattice;
        let n1 = l.x1.len();
        let i = l.x1.locate(x1);
        let j = l.x2.locate(x2);
        let (a0, a1) = (l.x1.xs()[i], l.x1.xs()[i + 1]);
        let (b0, b1) = (l.x2.xs()[j], l.x2.xs()[j + 1]);
        let (h1, h2) = (a1 - a0, b1 - b0);
        let u = (x1 - a0) / h1;
        let v = (x2 - b0) / h2;
        let bu = basis(u);
        let bv = basis(v);
        let idx = [
            j * n1 + i,
            j * n1 + i + 1,
            (j + 1) * n1 + i,
            (j + 1) * n1 + i + 1,
        ];
        // corner (a, b) -> (value basis index, slope basis index)
        let cu = [(0, 1), (2, 3), (0, 1), (2, 3)];
        let cv = [(0, 1), (0, 1), (2, 3), (2, 3)];
        let mut val = 0.0;
        for c in 0..4 {
            let k = idx[c];
            let (pu, su) = cu[c];
            let (pv, sv) = cv[c];
            val += bu[pu] * bv[pv] * l.values[k]
                + bu[su] * h1 * bv[pv] * self.fx[k]
                + bu[pu] * bv[sv] * h2 * self.fy[k]
                + bu[su] * h1 * bv[sv] * h2 * self.fxy[k];
        }
        if !need_grad {
            return (val, 0.0, 0.0);
        }
        let du = basis_d(u);
        let dv = basis_d(v);
        let (mut gx, mut gy) = (0.0, 0.0);
        for c in 0..4 {
            let k = idx[c];
            let (pu, su) = cu[c];
            let (pv, sv) = cv[c];
            gx += du[pu] * bv[pv] * l.values[k]
                + du[su] * h1 * bv[pv] * self.fx[k]
                + du[pu] * bv[sv] * h2 * self.fy[k]
                + du[su] * h1 * bv[sv] * h2 * self.fxy[k];
            gy += bu[pu] * dv[pv] * l.values[k]
                + bu[su] * h1 * dv[pv] * self.fx[k]
                + bu[pu] * dv[sv] * h2 * self.fy[k]
                + bu[su] * h1 * dv[sv] * h2 * self.fxy[k];
        }
        (val, gx / h1, gy / h2)
    }

    #[inline]
    pub fn eval(&self, x1: f64, x2: f64) -> f64 {
        let c1 = self.lattice.x1.clamp(x1);
        let c2 = self.lattice.x2.clamp(x2);
        if c1 == x1 && c2 == x2 {
            return self.patch(x1, x2, false).0;
        }
        let (v, gx, gy) = self.patch(c1, c2, true);
        v + gx * (x1 - c1) + gy * (x2 - c2)
    }
}
