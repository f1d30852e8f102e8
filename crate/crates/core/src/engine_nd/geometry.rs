use super::cholesky::{check_correlation, cholesky3};
use crate::engine1d::{check_grid_finess, check_time_grid, time_points, StateAxis, MIN_INTERVALS};
use crate::error::{Error, Result};
use crate::market::ImpliedVol;

/// Node-count floor per axis for the trilinear three-asset lattice.
pub const MIN_INTERVALS_3D: usize = 2;

/// Time grid, one state axis per asset and the pairwise correlations.
///
/// Asset `i` uses `xᵢ = ln(Sᵢ/Fᵢ(t))` on a uniform axis of spacing
/// `ATMvolᵢ(T)·√(5/4·(1+|ρ|)·dt)·grid_finessᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridGeometryND {
    pub maturity: f64,
    pub steps: usize,
    pub dt: f64,
    pub spots: Vec<f64>,
    pub grid_finess: Vec<f64>,
    pub axes: Vec<StateAxis>,
    /// Upper triangle row by row: `[ρ12]` or `[ρ12, ρ13, ρ23]`.
    pub correlations: Vec<f64>,
}

impl GridGeometryND {
    pub fn dims(&self) -> usize {
        self.axes.len()
    }

    #[inline]
    pub fn time(&self, step: usize) -> f64 {
        step as f64 * self.dt
    }

    /// Correlation between assets `i` and `j` (zero-based).
    pub fn rho(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 1.0;
        }
        let (lo, hi) = (i.min(j), i.max(j));
        match (self.correlations.len(), lo, hi) {
            (_, 0, 1) => self.correlations[0],
            (3, 0, 2) => self.correlations[1],
            (3, 1, 2) => self.correlations[2],
            _ => panic!("asset index out of range"),
        }
    }

    /// Largest correlation magnitude over the pairs that contain asset `i`.
    pub fn max_abs_rho(&self, i: usize) -> f64 {
        let dims = if self.correlations.len() == 1 { 2 } else { 3 };
        (0..dims)
            .filter(|&j| j != i)
            .map(|j| self.rho(i, j).abs())
            .fold(0.0, f64::max)
    }
}

fn build<S: ImpliedVol>(
    surfaces: &[&S],
    correlations: Vec<f64>,
    maturity: f64,
    steps: usize,
    grid_finess: &[f64],
    min_intervals: usize,
) -> Result<GridGeometryND> {
    check_time_grid(maturity, steps)?;
    for &gf in grid_finess {
        check_grid_finess("grid_finess", gf)?;
    }
    let dt = maturity / steps as f64;
    let times = time_points(maturity, steps);
    let mut geom = GridGeometryND {
        maturity,
        steps,
        dt,
        spots: surfaces.iter().map(|s| s.spot()).collect(),
        grid_finess: grid_finess.to_vec(),
        axes: Vec::new(),
        correlations,
    };
    for (i, (s, &gf)) in surfaces.iter().zip(grid_finess).enumerate() {
        let spread = (1.25 * (1.0 + geom.max_abs_rho(i)) * dt).sqrt();
        let dx = s.atm_vol(maturity) * spread * gf;
        if !(dx > 0.0) || !dx.is_finite() {
            return Err(Error::param("dx", dx, "state spacing must be positive"));
        }
        geom.axes
            .push(StateAxis::from_surface(*s, &times, dx, min_intervals));
    }
    Ok(geom)
}

/// Two-asset lattice; each axis gets the single-asset ±4 sd bounds.
pub fn build_geometry_2d<S: ImpliedVol>(
    surfaces: [&S; 2],
    rho12: f64,
    maturity: f64,
    steps: usize,
    grid_finess: [f64; 2],
) -> Result<GridGeometryND> {
    check_correlation("rho12", rho12)?;
    build(
        &surfaces,
        vec![rho12],
        maturity,
        steps,
        &grid_finess,
        MIN_INTERVALS,
    )
}

/// Three-asset lattice; each axis is widened for the largest correlation it takes part in.
pub fn build_geometry_3d<S: ImpliedVol>(
    surfaces: [&S; 3],
    correlations: [f64; 3],
    maturity: f64,
    steps: usize,
    grid_finess: [f64; 3],
) -> Result<GridGeometryND> {
    let [r12, r13, r23] = correlations;
    cholesky3(r12, r13, r23)?;
    build(
        &surfaces,
        correlations.to_vec(),
        maturity,
        steps,
        &grid_finess,
        MIN_INTERVALS_3D,
    )
}
