use super::forward::{binormal_sheet, fp_step_2d, ADSheet2D, StepRates};
use crate::engine1d::StateAxis;
use crate::error::{Error, Result};
use crate::hybrid::{calibrate_hw_shift, HullWhiteParams, HybridGeometry};
use crate::interp::InterpMethod;
use crate::market::{DupireTerms, ImpliedVol, LocalVolSurface};
use serde::{Deserialize, Serialize};

/// Default Vega, as a fraction of spot, below which the local vol is left unadjusted.
pub const VEGA_CUTOFF: f64 = 1e-6;

/// Adjusted local vol on every equity node of a rectangular grid, steps `0..N`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjustedVolField {
    pub dt: f64,
    pub equity: StateAxis,
    pub vols: Vec<Vec<f64>>,
}

impl AdjustedVolField {
    pub fn steps(&self) -> usize {
        self.vols.len()
    }

    #[inline]
    pub fn vol(&self, step: usize, i: usize) -> f64 {
        self.vols[step][i]
    }

    pub fn row(&self, step: usize) -> &[f64] {
        &self.vols[step]
    }
}

/// Everything produced by the forward calibration.
#[derive(Debug, Clone)]
pub struct GlvCalibration {
    pub field: AdjustedVolField,
    /// Rate shifts `φ` per step.
    pub shifts: Vec<f64>,
    /// Arrow–Debreu mass at steps `1..N`.
    pub masses: Vec<f64>,
    /// Sheets at steps `1..N` when requested.
    pub sheets: Vec<ADSheet2D>,
}

/// Source of the `K·f·P(S>K)` term that offsets the rate expectation in the adjustment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DigitalSource {
    /// `-Vega·K·f(0,t)·∂σ/∂K + K·P(0,t)·f(0,t)·N(d2)` from the implied-vol surface.
    Market,
    /// `K·r̄·E[D·1(S>K)]` from the same sheet, with `r̄ = E[r·D]/E[D]` the sheet's mean
    /// short rate. Vanishes identically under deterministic rates.
    #[default]
    Lattice,
}

/// Adjustment factor for each strike in `terms`, which must sit on the sheet's equity
/// nodes, starting from `-K·E[r·D·1(S>K)]`.
///
/// Expectations are running sums from the top equity node down, counting the strike's
/// own node with weight one half.
pub fn adj_factor_row(
    sheet: &ADSheet2D,
    terms: &[DupireTerms],
    short_rates: &[f64],
    digital: DigitalSource,
) -> Vec<f64> {
    let n1 = sheet.x1.len();
    let mut rated = vec![0.0; n1];
    let mut plain = vec![0.0; n1];
    for (chunk, &r) in sheet.ad.chunks(n1).zip(short_rates) {
        for ((o, p), a) in rated.iter_mut().zip(plain.iter_mut()).zip(chunk) {
            *o += r * a;
            *p += a;
        }
    }
    let mean_rate = rated.iter().sum::<f64>() / plain.iter().sum::<f64>();
    let above = |row: &[f64]| {
        let mut out = vec![0.0; row.len()];
        let mut suffix = 0.0;
        for i in (0..row.len()).rev() {
            out[i] = suffix + 0.5 * row[i];
            suffix += row[i];
        }
        out
    };
    let (rated, plain) = (above(&rated), above(&plain));
    terms
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let k = d.strike;
            let offset = match digital {
                DigitalSource::Market => {
                    k * d.fwd_rate * (d.df * d.prob_itm() - d.vega * d.d_sigma_dk)
                }
                DigitalSource::Lattice => k * mean_rate * plain[i],
            };
            offset - k * rated[i]
        })
        .collect()
}

/// `Σadj = Σ·√(1 + AdjFactor/Nume)`, clamped to the surface bounds; the plain local vol
/// is kept where Vega is below `vega_cutoff·spot`.
pub fn adjusted_vol<S: ImpliedVol>(
    lv: &LocalVolSurface<S>,
    terms: &DupireTerms,
    adj_factor: f64,
    vega_cutoff: f64,
) -> f64 {
    let base = lv.from_terms(terms);
    if terms.vega < vega_cutoff * lv.surface().spot() || !(terms.nume > 0.0) {
        return base;
    }
    let ratio = 1.0 + adj_factor / terms.nume;
    if !ratio.is_finite() {
        return base;
    }
    if ratio <= 0.0 {
        return lv.floor();
    }
    lv.clamp(base * ratio.sqrt(), terms.t)
}

/// Knobs of the forward calibration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlvOptions {
    /// Interpolation of the Arrow–Debreu sheet along the equity axis.
    pub method: InterpMethod,
    pub digital: DigitalSource,
    /// Vega threshold as a fraction of spot.
    pub vega_cutoff: f64,
    pub keep_sheets: bool,
}

impl Default for GlvOptions {
    fn default() -> Self {
        Self {
            method: InterpMethod::Akima,
            digital: DigitalSource::Lattice,
            vega_cutoff: VEGA_CUTOFF,
            keep_sheets: false,
        }
    }
}

/// Forward calibration of the adjusted local vol on a rectangular hybrid geometry.
///
/// Starts from the joint normal one step in, then alternates: the Arrow–Debreu sheet at
/// `t` gives the adjusted vols at `t`, which drive the step to `t + dt`. The curve is
/// taken from `lv`.
pub fn calibrate_glv<S: ImpliedVol>(
    geom: &HybridGeometry,
    lv: &LocalVolSurface<S>,
    hw: &HullWhiteParams,
    opts: GlvOptions,
) -> Result<GlvCalibration> {
    hw.validate()?;
    if !geom.equity.is_rectangular() || !geom.second.is_rectangular() {
        return Err(Error::Config(
            "the forward calibration needs a rectangular geometry".into(),
        ));
    }
    if geom.equity.node_count(0) != 1 || geom.second.node_count(0) != 1 {
        return Err(Error::Config(
            "the grid must start from a single root node".into(),
        ));
    }
    let curve = lv.curve();
    let (dt, n) = (geom.dt, geom.steps);
    let shifts = calibrate_hw_shift(geom, curve, hw)?;
    let carry = |s: usize| {
        (curve.integrated_rate(geom.time(s + 1)) - curve.integrated_rate(geom.time(s))) / dt
    };
    let spot = geom.spot;

    let sigma0 = lv.local_vol(spot, 0.0);
    let mut vols = vec![vec![sigma0]];
    let mut masses = Vec::with_capacity(n.saturating_sub(1));
    let mut sheets = Vec::new();
    if n == 1 {
        return Ok(GlvCalibration {
            field: AdjustedVolField {
                dt,
                equity: geom.equity.clone(),
                vols,
            },
            shifts,
            masses,
            sheets,
        });
    }

    let x1 = geom.equity.axis(1);
    let x2 = geom.second.axis(1);
    let mean1 = (shifts[0] - carry(0) - 0.5 * sigma0 * sigma0) * dt;
    let mut sheet = binormal_sheet(
        x1.clone(),
        x2.clone(),
        [mean1, 0.0],
        [sigma0 * dt.sqrt(), hw.sigma_r * dt.sqrt()],
        hw.rho_sr,
        (-shifts[0] * dt).exp(),
        1,
        dt,
    );

    for step in 1..n {
        let t = geom.time(step);
        let fwd = lv.forward(t);
        let terms: Vec<DupireTerms> = x1
            .xs()
            .iter()
            .map(|&x| lv.terms(fwd * x.exp(), t))
            .collect();
        let phi = 0.5 * (shifts[step - 1] + shifts[step]);
        let rates: Vec<f64> = x2.xs().iter().map(|&y| y + phi).collect();
        let adj = adj_factor_row(&sheet, &terms, &rates, opts.digital);
        let row: Vec<f64> = terms
            .iter()
            .zip(&adj)
            .map(|(d, &a)| adjusted_vol(lv, d, a, opts.vega_cutoff))
            .collect();
        masses.push(sheet.mass());
        if step + 1 < n {
            let rates = StepRates {
                shift: shifts[step],
                carry: carry(step),
            };
            let next = fp_step_2d(&sheet, &row, hw, rates, dt, opts.method)?;
            let done = std::mem::replace(&mut sheet, next);
            if opts.keep_sheets {
                sheets.push(done);
            }
        } else if opts.keep_sheets {
            sheets.push(sheet.clone());
        }
        vols.push(row);
    }

    Ok(GlvCalibration {
        field: AdjustedVolField {
            dt,
            equity: geom.equity.clone(),
            vols,
        },
        shifts,
        masses,
        sheets,
    })
}
