use super::Lattice2D;
use crate::error::{Error, Result};

/// Keys' kernel parameter.
pub const KEYS_A: f64 = -0.5;

/// Keys cubic-convolution kernel `W(s)`.
#[inline]
pub fn keys_kernel(s: f64) -> f64 {
    let s = s.abs();
    let a = KEYS_A;
    if s <= 1.0 {
        ((a + 2.0) * s - (a + 3.0)) * s * s + 1.0
    } else if s < 2.0 {
        ((a * s - 5.0 * a) * s + 8.0 * a) * s - 4.0 * a
    } else {
        0.0
    }
}

#[inline]
fn keys_kernel_d(s: f64) -> f64 {
    let sign = s.signum();
    let s = s.abs();
    let a = KEYS_A;
    sign * if s <= 1.0 {
        3.0 * (a + 2.0) * s * s - 2.0 * (a + 3.0) * s
    } else if s < 2.0 {
        3.0 * a * s * s - 10.0 * a * s + 8.0 * a
    } else {
        0.0
    }
}

/// Weights on four consecutive nodes `start..start+4` for a query at
/// fraction `u` of interval `i`. Ghost nodes beyond either edge use Keys'
/// boundary rule `f[-1] = 3 f[0] - 3 f[1] + f[2]`, folded into the window.
#[inline]
fn axis_weights(n: usize, i: usize, u: f64, derivative: bool) -> (usize, [f64; 4]) {
    let w = |s: f64| {
        if derivative {
            keys_kernel_d(s)
        } else {
            keys_kernel(s)
        }
    };
    // signed distances from the query to nodes i-1..i+2, with d/du sign folded in
    let raw = if derivative {
        [w(1.0 + u), w(u), -w(1.0 - u), -w(2.0 - u)]
    } else {
        [w(1.0 + u), w(u), w(1.0 - u), w(2.0 - u)]
    };
    if i == 0 {
        let g = raw[0];
        (0, [raw[1] + 3.0 * g, raw[2] - 3.0 * g, raw[3] + g, 0.0])
    } else if i + 2 >= n {
        let g = raw[3];
        (n - 4, [0.0, raw[0] + g, raw[1] - 3.0 * g, raw[2] + 3.0 * g])
    } else {
        (i - 1, raw)
    }
}

/// Separable Keys cubic convolution over a uniform 2D lattice.
#[derive(Debug, Clone)]
pub struct Keys2D {
    lattice: Lattice2D,
    h1: f64,
    h2: f64,
}

impl Keys2D {
    pub fn new(lattice: Lattice2D) -> Result<Self> {
        let (n1, n2) = (lattice.x1.len(), lattice.x2.len());
        if n1 < 4 || n2 < 4 {
            return Err(Error::TooFewKnots {
                min: 4,
                got: n1.min(n2),
            });
        }
        let h1 = lattice
            .x1
            .spacing()
            .ok_or(Error::NonUniformAxis { method: "keys" })?;
        let h2 = lattice
            .x2
            .spacing()
            .ok_or(Error::NonUniformAxis { method: "keys" })?;
        Ok(Self { lattice, h1, h2 })
    }

    pub fn lattice(&self) -> &Lattice2D {
        &self.lattice
    }

    #[inline]
    fn combine(&self, s1: usize, w1: &[f64; 4], s2: usize, w2: &[f64; 4]) -> f64 {
        let n1 = self.lattice.x1.len();
        let v = &self.lattice.values;
        let mut acc = 0.0;
        for (b, wb) in w2.iter().enumerate() {
            if *wb == 0.0 {
                continue;
            }
            let row = (s2 + b) * n1 + s1;
            let r = w1[0] * v[row] + w1[1] * v[row + 1] + w1[2] * v[row + 2] + w1[3] * v[row + 3];
            acc += wb * r;
        }
        acc
    }

    /// Interpolated value; results below `clamp_floor` are raised to it.
    #[inline]
    pub fn eval(&self, x1: f64, x2: f64, clamp_floor: Option<f64>) -> f64 {
        let l = &self.lattice;
        let (n1, n2) = (l.x1.len(), l.x2.len());
        let c1 = l.x1.clamp(x1);
        let c2 = l.x2.clamp(x2);
        let i = l.x1.locate(c1);
        let j = l.x2.locate(c2);
        let u = (c1 - l.x1.xs()[i]) / self.h1;
        let v = (c2 - l.x2.xs()[j]) / self.h2;
        let (s1, w1) = axis_weights(n1, i, u, false);
        let (s2, w2) = axis_weights(n2, j, v, false);
        let mut val = self.combine(s1, &w1, s2, &w2);
        if c1 != x1 {
            let (_, d1) = axis_weights(n1, i, u, true);
            val += self.combine(s1, &d1, s2, &w2) / self.h1 * (x1 - c1);
        }
        if c2 != x2 {
            let (_, d2) = axis_weights(n2, j, v, true);
            val += self.combine(s1, &w1, s2, &d2) / self.h2 * (x2 - c2);
        }
        match clamp_floor {
            Some(f) if val < f => f,
            _ => val,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::Axis;
    use super::*;

    fn lattice(n: usize, f: impl Fn(f64, f64) -> f64) -> Lattice2D {
        let ax = Axis::uniform(0.0, 1.0, n).unwrap();
        Lattice2D::from_fn(ax.clone(), ax, f)
    }

    #[test]
    fn kernel_is_interpolating() {
        assert_eq!(keys_kernel(0.0), 1.0);
        assert_eq!(keys_kernel(1.0), 0.0);
        assert_eq!(keys_kernel(2.0), 0.0);
        // partition of unity at an arbitrary offset
        let u = 0.37;
        let s = keys_kernel(1.0 + u) + keys_kernel(u) + keys_kernel(1.0 - u) + keys_kernel(2.0 - u);
        assert!((s - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exact_at_nodes_and_on_constants() {
        let k = Keys2D::new(lattice(6, |x, y| (x * 1.3).sin() + y * y)).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let v = k.eval(i as f64, j as f64, None);
                assert!((v - k.lattice().at(i, j)).abs() < 1e-14);
            }
        }
        let c = Keys2D::new(lattice(5, |_, _| 4.25)).unwrap();
        for t in 0..30 {
            let x = -0.5 + 0.17 * t as f64;
            assert!((c.eval(x, 4.5 - 0.15 * t as f64, None) - 4.25).abs() < 1e-13);
        }
    }

    #[test]
    fn reproduces_quadratic_interior() {
        let f = |x: f64, y: f64| 1.0 + 0.5 * x - y + 0.2 * x * y;
        let k = Keys2D::new(lattice(8, f)).unwrap();
        for t in 0..40 {
            let (x, y) = (0.1 + 0.17 * t as f64, 6.9 - 0.16 * t as f64);
            assert!((k.eval(x, y, None) - f(x, y)).abs() < 1e-12);
        }
    }

    #[test]
    fn clamp_floor_removes_undershoot() {
        // call payoff with a kink at x1 = 4; cubic convolution undershoots just left of it
        let k = Keys2D::new(lattice(10, |x, _| (x - 4.0).max(0.0))).unwrap();
        let mut undershoot = None;
        for t in 0..4000 {
            let x = 2.0 + t as f64 * 3.0 / 4000.0;
            if k.eval(x, 3.3, None) < 0.0 {
                undershoot = Some(x);
                break;
            }
        }
        let x = undershoot.expect("no undershoot found near the kink");
        assert_eq!(k.eval(x, 3.3, Some(0.0)), 0.0);
    }

    #[test]
    fn rejects_non_uniform_axes() {
        let x1 = Axis::new(vec![0.0, 1.0, 2.5, 3.0, 4.0]).unwrap();
        let x2 = Axis::uniform(0.0, 1.0, 5).unwrap();
        let l = Lattice2D::from_fn(x1, x2, |a, b| a + b);
        assert!(matches!(Keys2D::new(l), Err(Error::NonUniformAxis { .. })));
    }
}
