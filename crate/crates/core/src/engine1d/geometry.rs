use crate::error::{Error, Result};
use crate::interp::Axis;
use crate::market::ImpliedVol;

/// Interval count below which a time slice cannot carry a 1D cubic.
pub const MIN_INTERVALS: usize = 6;

/// Number of standard deviations spanned on each side of the forward.
const WIDTH_SD: f64 = 4.0;

pub fn check_grid_finess(name: &'static str, gf: f64) -> Result<()> {
    if !(gf > 0.0 && gf <= 1.0) {
        return Err(Error::param(name, gf, "grid_finess must lie in (0, 1]"));
    }
    Ok(())
}

/// Per-step bounds of one uniformly spaced state axis.
///
/// `raw_dn`/`raw_up` are the skew-aware ±4 sd bounds; `x_dn` and `nx` describe
/// the widened slice actually used, with nodes at `x_dn + i·dx` for `i ≤ nx`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateAxis {
    pub dx: f64,
    pub raw_dn: Vec<f64>,
    pub raw_up: Vec<f64>,
    pub x_dn: Vec<f64>,
    pub nx: Vec<usize>,
}

impl StateAxis {
    /// Skew-aware bounds from an implied-vol surface.
    pub fn from_surface(
        surface: &impl ImpliedVol,
        times: &[f64],
        dx: f64,
        min_intervals: usize,
    ) -> Self {
        let spot = surface.spot();
        let bounds = |t: f64| {
            if t <= 0.0 {
                return (0.0, 0.0);
            }
            let sd = surface.atm_vol(t) * t.sqrt();
            let k_dn = spot * (-WIDTH_SD * sd).exp();
            let k_up = spot * (WIDTH_SD * sd).exp();
            (
                -WIDTH_SD * surface.vol(k_dn, t) * t.sqrt(),
                WIDTH_SD * surface.vol(k_up, t) * t.sqrt(),
            )
        };
        Self::from_bounds(times, dx, min_intervals, bounds)
    }

    /// Bounds `±4·sd(t)` around a centre `mean(t)`.
    pub fn from_stddev(
        times: &[f64],
        dx: f64,
        min_intervals: usize,
        mean: impl Fn(f64) -> f64,
        sd: impl Fn(f64) -> f64,
    ) -> Self {
        Self::from_bounds(times, dx, min_intervals, |t| {
            let (m, s) = (mean(t), sd(t));
            (m - WIDTH_SD * s, m + WIDTH_SD * s)
        })
    }

    pub fn from_bounds(
        times: &[f64],
        dx: f64,
        min_intervals: usize,
        bounds: impl Fn(f64) -> (f64, f64),
    ) -> Self {
        let mut out = Self {
            dx,
            raw_dn: Vec::with_capacity(times.len()),
            raw_up: Vec::with_capacity(times.len()),
            x_dn: Vec::with_capacity(times.len()),
            nx: Vec::with_capacity(times.len()),
        };
        for (step, &t) in times.iter().enumerate() {
            let (dn, up) = bounds(t);
            out.raw_dn.push(dn);
            out.raw_up.push(up);
            if step == 0 && t <= 0.0 && dn == up {
                out.x_dn.push(dn);
                out.nx.push(0);
                continue;
            }
            let width = up - dn;
            let n = ((width / dx) - 1e-9).ceil().max(min_intervals as f64) as usize;
            let extra = n as f64 * dx - width;
            out.x_dn.push(dn - 0.5 * extra);
            out.nx.push(n);
        }
        out
    }

    /// Every step after the root uses the bounds of the last step.
    pub fn rectangular(&self) -> Self {
        let last = self.nx.len() - 1;
        let mut out = Self {
            dx: self.dx,
            raw_dn: vec![self.raw_dn[last]; last + 1],
            raw_up: vec![self.raw_up[last]; last + 1],
            x_dn: vec![self.x_dn[last]; last + 1],
            nx: vec![self.nx[last]; last + 1],
        };
        if self.nx[0] == 0 {
            out.raw_dn[0] = self.raw_dn[0];
            out.raw_up[0] = self.raw_up[0];
            out.x_dn[0] = self.x_dn[0];
            out.nx[0] = 0;
        }
        out
    }

    pub fn is_rectangular(&self) -> bool {
        self.nx[1..]
            .iter()
            .all(|&n| n == self.nx[self.nx.len() - 1])
            && self.x_dn[1..]
                .iter()
                .all(|&x| x == self.x_dn[self.x_dn.len() - 1])
    }

    pub fn node_count(&self, step: usize) -> usize {
        self.nx[step] + 1
    }

    pub fn x_up(&self, step: usize) -> f64 {
        self.x_dn[step] + self.nx[step] as f64 * self.dx
    }

    #[inline]
    pub fn node(&self, step: usize, i: usize) -> f64 {
        self.x_dn[step] + i as f64 * self.dx
    }

    pub fn nodes(&self, step: usize) -> Vec<f64> {
        (0..self.node_count(step))
            .map(|i| self.node(step, i))
            .collect()
    }

    pub fn axis(&self, step: usize) -> Axis {
        let xs = self.nodes(step);
        if xs.len() > 1 {
            Axis::uniform(self.x_dn[step], self.dx, xs.len()).expect("positive spacing")
        } else {
            Axis::new(xs).expect("single node")
        }
    }
}

/// Time grid and log-forward-moneyness lattice for a single-factor model.
#[derive(Debug, Clone, PartialEq)]
pub struct GridGeometry1D {
    pub maturity: f64,
    pub steps: usize,
    pub dt: f64,
    pub grid_finess: f64,
    pub spot: f64,
    pub state: StateAxis,
}

impl GridGeometry1D {
    #[inline]
    pub fn time(&self, step: usize) -> f64 {
        step as f64 * self.dt
    }

    pub fn dx(&self) -> f64 {
        self.state.dx
    }

    pub fn node_count(&self, step: usize) -> usize {
        self.state.node_count(step)
    }

    pub fn nodes(&self, step: usize) -> Vec<f64> {
        self.state.nodes(step)
    }

    /// Copy whose every slice spans the maturity bounds, as the forward pass requires.
    pub fn rectangular(&self) -> Self {
        Self {
            state: self.state.rectangular(),
            ..self.clone()
        }
    }

    pub fn is_rectangular(&self) -> bool {
        self.state.is_rectangular()
    }
}

pub(crate) fn check_time_grid(maturity: f64, steps: usize) -> Result<()> {
    if !(maturity > 0.0) || !maturity.is_finite() {
        return Err(Error::param("maturity", maturity, "must be positive"));
    }
    if steps == 0 {
        return Err(Error::param("steps", 0.0, "need at least one time step"));
    }
    Ok(())
}

pub(crate) fn time_points(maturity: f64, steps: usize) -> Vec<f64> {
    let dt = maturity / steps as f64;
    (0..=steps).map(|i| i as f64 * dt).collect()
}

/// Lattice with spacing `ATMvol(T)·√(3/2·dt)·grid_finess` and skew-aware ±4 sd bounds.
pub fn build_geometry_1d(
    surface: &impl ImpliedVol,
    maturity: f64,
    steps: usize,
    grid_finess: f64,
) -> Result<GridGeometry1D> {
    check_time_grid(maturity, steps)?;
    check_grid_finess("grid_finess", grid_finess)?;
    let dt = maturity / steps as f64;
    let dx = surface.atm_vol(maturity) * (1.5 * dt).sqrt() * grid_finess;
    if !(dx > 0.0) || !dx.is_finite() {
        return Err(Error::param("dx", dx, "state spacing must be positive"));
    }
    let times = time_points(maturity, steps);
    Ok(GridGeometry1D {
        maturity,
        steps,
        dt,
        grid_finess,
        spot: surface.spot(),
        state: StateAxis::from_surface(surface, &times, dx, MIN_INTERVALS),
    })
}
