use crate::engine1d::normal_cell_masses;
use crate::error::{Error, Result};
use crate::hybrid::HullWhiteParams;
use crate::interp::{Axis, CubicLinear, InterpMethod, Lattice2D};
use rayon::prelude::*;

/// Largest stencil weight magnitude accepted before a step is declared unstable.
pub const MAX_WEIGHT: f64 = 1.5;

/// Arrow–Debreu prices over `(equity node i, rate node j)` at one step, `i` fastest.
#[derive(Debug, Clone)]
pub struct ADSheet2D {
    pub step: usize,
    pub t: f64,
    pub x1: Axis,
    pub x2: Axis,
    pub ad: Vec<f64>,
}

impl ADSheet2D {
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.ad[j * self.x1.len() + i]
    }

    pub fn mass(&self) -> f64 {
        self.ad.iter().sum()
    }

    /// `Σ AD(i,j)·f(x1_i, x2_j)`.
    pub fn expectation(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        let n1 = self.x1.len();
        self.ad
            .iter()
            .enumerate()
            .map(|(k, a)| a * f(self.x1.xs()[k % n1], self.x2.xs()[k / n1]))
            .sum()
    }

    /// Sums over the rate axis.
    pub fn equity_marginal(&self) -> Vec<f64> {
        let n1 = self.x1.len();
        let mut out = vec![0.0; n1];
        for row in self.ad.chunks(n1) {
            for (o, a) in out.iter_mut().zip(row) {
                *o += a;
            }
        }
        out
    }
}

/// Short-rate shift `φ` and curve carry `(∫f)/dt` over one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRates {
    pub shift: f64,
    pub carry: f64,
}

/// Discretized joint normal on the grid cells, scaled by `df`.
///
/// The rate marginal takes exact cell masses; along the equity axis each rate row holds
/// the conditional normal given the row's rate state.
pub fn binormal_sheet(
    x1: Axis,
    x2: Axis,
    mean: [f64; 2],
    sd: [f64; 2],
    rho: f64,
    df: f64,
    step: usize,
    t: f64,
) -> ADSheet2D {
    let n1 = x1.len();
    let mut ad = Vec::with_capacity(n1 * x2.len());
    if x2.len() == 1 || sd[1] == 0.0 {
        let rows = x2.len();
        for j in 0..rows {
            let w = if j == rows / 2 { df } else { 0.0 };
            ad.extend(
                normal_cell_masses(x1.xs(), mean[0], sd[0])
                    .into_iter()
                    .map(|m| m * w),
            );
        }
    } else {
        let marginal = normal_cell_masses(x2.xs(), mean[1], sd[1]);
        let cond_sd = (sd[0] * (1.0 - rho * rho).sqrt()).max(1e-12 * sd[0]);
        for (&y, p) in x2.xs().iter().zip(marginal) {
            let m = mean[0] + rho * sd[0] / sd[1] * (y - mean[1]);
            ad.extend(
                normal_cell_masses(x1.xs(), m, cond_sd)
                    .into_iter()
                    .map(|q| q * p * df),
            );
        }
    }
    ADSheet2D {
        step,
        t,
        x1,
        x2,
        ad,
    }
}

/// Zeroes negative entries and scales the rest so the total is unchanged.
fn clamp_keeping_mass(mut ad: Vec<f64>) -> Vec<f64> {
    if ad.iter().all(|&a| a >= 0.0) {
        return ad;
    }
    let total: f64 = ad.iter().sum();
    let positive: f64 = ad.iter().filter(|&&a| a > 0.0).sum();
    let scale = if total > 0.0 { total / positive } else { 1.0 };
    for a in &mut ad {
        *a = if *a > 0.0 { *a * scale } else { 0.0 };
    }
    ad
}

#[inline]
fn lerp_row(axis: &Axis, row: &[f64], x: f64) -> f64 {
    if row.len() == 1 {
        return row[0];
    }
    let x = axis.clamp(x);
    let i = axis.locate(x);
    let xs = axis.xs();
    let u = (x - xs[i]) / (xs[i + 1] - xs[i]);
    row[i] + u * (row[i + 1] - row[i])
}

/// One explicit Fokker–Planck step of equity (local vol `vols` on the equity nodes)
/// against Hull–White rates `r = x2 + φ`.
///
/// Each target node reads its nine neighbours at `x1 ± Σ(x1)·√(9/4·dt)` and
/// `x2 ± σr·√(9/4·dt)` from the interpolated current sheet, which makes the centre
/// weight `1/9 - r·dt`. The weights are the central-difference Euler discretization of
/// the discounting, drift, mean-reversion, both diffusion and the cross terms.
///
/// Negative results from the cross-term corners are zeroed and the remaining entries
/// rescaled to the step's total.
pub fn fp_step_2d(
    current: &ADSheet2D,
    vols: &[f64],
    hw: &HullWhiteParams,
    rates: StepRates,
    dt: f64,
    method: InterpMethod,
) -> Result<ADSheet2D> {
    let (ax1, ax2) = (&current.x1, &current.x2);
    let (n1, n2) = (ax1.len(), ax2.len());
    if vols.len() != n1 {
        return Err(Error::LengthMismatch {
            what: format!("{} vols for {} equity nodes", vols.len(), n1),
        });
    }
    let step = current.step + 1;
    let lattice = Lattice2D::new(ax1.clone(), ax2.clone(), current.ad.clone())?;
    let sheet = CubicLinear::new(lattice, method)?;
    let (lo1, hi1, lo2, hi2) = (ax1.first(), ax1.last(), ax2.first(), ax2.last());
    let read = |a: f64, b: f64| {
        if a < lo1 || a > hi1 || b < lo2 || b > hi2 {
            0.0
        } else {
            sheet.eval(a, b)
        }
    };

    let scale = (2.25 * dt).sqrt();
    let rated = hw.sigma_r > 0.0 && n2 > 1;
    let h2 = hw.sigma_r * scale;
    let StepRates { shift, carry } = rates;

    let next: Vec<f64> = (0..n1 * n2)
        .into_par_iter()
        .with_min_len(256)
        .map(|node| {
            let (i, j) = (node % n1, node / n1);
            let (x, y) = (ax1.xs()[i], ax2.xs()[j]);
            let s0 = vols[i];
            let h1 = s0 * scale;
            let (xp, xm) = (x + h1, x - h1);
            let (sp, sm) = (lerp_row(ax1, vols, xp), lerp_row(ax1, vols, xm));
            let drift = |s: f64| y + shift - carry - 0.5 * s * s;
            let a = dt / (h1 * h1);
            let r = y + shift;

            let mut q = [0.0; 9];
            let mut at = [(x, y); 9];
            q[0] = 1.0 - dt * r - s0 * s0 * a;
            q[1] = 0.5 * sp * sp * a - drift(sp) * dt / (2.0 * h1);
            q[2] = 0.5 * sm * sm * a + drift(sm) * dt / (2.0 * h1);
            at[1] = (xp, y);
            at[2] = (xm, y);
            let used = if rated {
                let b = dt / (h2 * h2);
                let diff = 0.5 * hw.sigma_r * hw.sigma_r * b;
                q[0] -= hw.sigma_r * hw.sigma_r * b;
                q[3] = diff + hw.k * (y + h2) * dt / (2.0 * h2);
                q[4] = diff - hw.k * (y - h2) * dt / (2.0 * h2);
                at[3] = (x, y + h2);
                at[4] = (x, y - h2);
                let cross = hw.rho_sr * hw.sigma_r * dt / (4.0 * h1 * h2);
                q[5] = cross * sp;
                q[6] = cross * sm;
                q[7] = -cross * sp;
                q[8] = -cross * sm;
                at[5] = (xp, y + h2);
                at[6] = (xm, y - h2);
                at[7] = (xp, y - h2);
                at[8] = (xm, y + h2);
                9
            } else {
                3
            };
            if let Some(w) = q[..used].iter().find(|w| !(w.abs() <= MAX_WEIGHT)) {
                return Err(Error::Unstable {
                    step,
                    node,
                    detail: format!("stencil weight {w:.3} exceeds {MAX_WEIGHT}; reduce dt"),
                });
            }
            let mut v = q[0] * current.ad[node];
            for k in 1..used {
                v += q[k] * read(at[k].0, at[k].1);
            }
            if !v.is_finite() {
                return Err(Error::NonFinite { step, node });
            }
            Ok(v)
        })
        .collect::<Result<_>>()?;
    let next = clamp_keeping_mass(next);

    Ok(ADSheet2D {
        step,
        t: current.t + dt,
        x1: ax1.clone(),
        x2: ax2.clone(),
        ad: next,
    })
}
