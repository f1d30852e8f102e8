use super::Axis;
use crate::error::{Error, Result};

/// Node values on a 3D lattice, `x1` fastest then `x2` then `x3`.
#[derive(Debug, Clone)]
pub struct Lattice3D {
    pub x1: Axis,
    pub x2: Axis,
    pub x3: Axis,
    pub values: Vec<f64>,
}

impl Lattice3D {
    pub fn new(x1: Axis, x2: Axis, x3: Axis, values: Vec<f64>) -> Result<Self> {
        if values.len() != x1.len() * x2.len() * x3.len() {
            return Err(Error::LengthMismatch {
                what: format!("3D lattice has {} values", values.len()),
            });
        }
        Ok(Self { x1, x2, x3, values })
    }

    pub fn from_fn(x1: Axis, x2: Axis, x3: Axis, f: impl Fn(f64, f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(x1.len() * x2.len() * x3.len());
        for &c in x3.xs() {
            for &b in x2.xs() {
                for &a in x1.xs() {
                    values.push(f(a, b, c));
                }
            }
        }
        Self { x1, x2, x3, values }
    }

    #[inline]
    pub fn index(&self, i1: usize, i2: usize, i3: usize) -> usize {
        (i3 * self.x2.len() + i2) * self.x1.len() + i1
    }
}

/// Trilinear blend; outside the lattice the boundary cell is extended linearly.
#[derive(Debug, Clone)]
pub struct Trilinear {
    lattice: Lattice3D,
}

#[inline]
fn frac(axis: &Axis, x: f64) -> (usize, f64) {
    let i = axis.locate(x);
    let xs = axis.xs();
    (i, (x - xs[i]) / (xs[i + 1] - xs[i]))
}

impl Trilinear {
    pub fn new(lattice: Lattice3D) -> Result<Self> {
        let m = lattice.x1.len().min(lattice.x2.len()).min(lattice.x3.len());
        if m < 2 {
            return Err(Error::TooFewKnots { min: 2, got: m });
        }
        Ok(Self { lattice })
    }

    pub fn lattice(&self) -> &Lattice3D {
        &self.lattice
    }

    #[inline]
    pub fn eval(&self, x1: f64, x2: f64, x3: f64) -> f64 {
        let l = &self.lattice;
        let (i, u) = frac(&l.x1, x1);
        let (j, v) = frac(&l.x2, x2);
        let (k, w) = frac(&l.x3, x3);
        let n1 = l.x1.len();
        let s2 = n1 * l.x2.len();
        let base = l.index(i, j, k);
        let f = &l.values;
        let c00 = f[base] + u * (f[base + 1] - f[base]);
        let c10 = f[base + n1] + u * (f[base + n1 + 1] - f[base + n1]);
        let c01 = f[base + s2] + u * (f[base + s2 + 1] - f[base + s2]);
        let c11 = f[base + s2 + n1] + u * (f[base + s2 + n1 + 1] - f[base + s2 + n1]);
        let c0 = c00 + v * (c10 - c00);
        let c1 = c01 + v * (c11 - c01);
        c0 + w * (c1 - c0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn axis(n: usize) -> Axis {
        Axis::uniform(0.0, 1.0, n).unwrap()
    }

    #[test]
    fn exact_at_nodes() {
        let l = Lattice3D::from_fn(axis(3), axis(4), axis(5), |a, b, c| a * b - c * c + 0.5);
        let t = Trilinear::new(l.clone()).unwrap();
        for i in 0..3 {
            for j in 0..4 {
                for k in 0..5 {
                    let v = t.eval(i as f64, j as f64, k as f64);
                    assert_eq!(v, l.values[l.index(i, j, k)]);
                }
            }
        }
    }

    #[test]
    fn reproduces_affine_data() {
        let f = |a: f64, b: f64, c: f64| a + 2.0 * b + 3.0 * c;
        let t = Trilinear::new(Lattice3D::from_fn(axis(4), axis(4), axis(4), f)).unwrap();
        for s in 0..40 {
            let (a, b, c) = (
                0.07 * s as f64,
                3.0 - 0.06 * s as f64,
                0.5 + 0.04 * s as f64,
            );
            assert!((t.eval(a, b, c) - f(a, b, c)).abs() < 1e-12);
        }
    }

    #[test]
    fn unit_cube_centre_is_corner_average() {
        // corner (i, j, k) carries i + 2j + 4k
        let t = Trilinear::new(Lattice3D::from_fn(axis(2), axis(2), axis(2), |a, b, c| {
            a + 2.0 * b + 4.0 * c
        }))
        .unwrap();
        assert!((t.eval(0.5, 0.5, 0.5) - 3.5).abs() < 1e-15);
    }
}
