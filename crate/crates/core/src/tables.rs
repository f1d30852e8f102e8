//! Regeneration of the published result tables.

use crate::engine1d::{build_geometry_1d, price_backward_1d, LocalVolDiffusion};
use crate::engine_nd::{
    build_geometry_2d, build_geometry_3d, price_backward_2d, price_backward_3d,
};
use crate::error::{Error, Result};
use crate::glv::{build_glv_geometry, calibrate_glv, price_glv, GlvOptions};
use crate::hybrid::{build_heston_geometry, build_hw_geometry, price_heston, price_hybrid_hw};
use crate::interp::InterpMethod;
use crate::market::{
    bs_implied_vol, hw_adjusted_vol, presets, ImpliedVol, LocalVolSurface, OptionKind, SSVISurface,
    YieldCurve,
};
use crate::mc::{mc_price_heston, mc_price_lv, McConfig, McEstimate};
use crate::payoff::{MultiPayoff, Payoff};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableId {
    Lv1dCalib,
    Basket2d,
    Basket3d,
    HwAdj,
    Heston,
    GlvCalib,
}

impl TableId {
    pub const ALL: [TableId; 6] = [
        TableId::Lv1dCalib,
        TableId::Basket2d,
        TableId::Basket3d,
        TableId::HwAdj,
        TableId::Heston,
        TableId::GlvCalib,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TableId::Lv1dCalib => "lv1d_calib",
            TableId::Basket2d => "basket2d",
            TableId::Basket3d => "basket3d",
            TableId::HwAdj => "hw_adj",
            TableId::Heston => "heston",
            TableId::GlvCalib => "glv_calib",
        }
    }

    /// Whether the table has Monte Carlo companion columns.
    pub fn has_mc(self) -> bool {
        matches!(
            self,
            TableId::Basket2d | TableId::Basket3d | TableId::Heston
        )
    }
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TableId::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| {
                let ids: Vec<_> = TableId::ALL.iter().map(|t| t.name()).collect();
                Error::Config(format!(
                    "unknown table id `{s}` (expected one of {})",
                    ids.join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Steps {
    Fixed(usize),
    PerYear(usize),
}

impl Steps {
    pub fn for_maturity(self, t: f64) -> usize {
        match self {
            Steps::Fixed(n) => n,
            Steps::PerYear(n) => ((n as f64 * t).round() as usize).max(1),
        }
    }
}

/// Settings a table is computed with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableSpec {
    pub id: TableId,
    pub grid_finess: Vec<f64>,
    pub steps: Steps,
    pub strikes: Vec<f64>,
    pub maturities: Vec<f64>,
    /// Pairwise correlation of the multi-asset tables.
    pub correlation: Option<f64>,
    pub method: InterpMethod,
}

const LV1D_STRIKES: [f64; 12] = [
    50.0, 60.0, 70.0, 80.0, 90.0, 100.0, 110.0, 120.0, 130.0, 140.0, 150.0, 200.0,
];
const LV1D_MATURITIES: [f64; 6] = [0.25, 0.5, 1.0, 2.0, 3.0, 5.0];

/// Cells of the one-factor calibration table that carry a value: strike row, first
/// and last maturity column.
const LV1D_POPULATED: [(usize, usize); 12] = [
    (3, 5),
    (2, 5),
    (1, 5),
    (0, 5),
    (0, 5),
    (0, 5),
    (0, 5),
    (0, 5),
    (1, 5),
    (2, 5),
    (3, 5),
    (4, 5),
];

impl TableSpec {
    pub fn defaults(id: TableId) -> Self {
        let k3 = vec![80.0, 100.0, 120.0];
        match id {
            TableId::Lv1dCalib => Self {
                id,
                grid_finess: vec![0.5],
                steps: Steps::Fixed(100),
                strikes: LV1D_STRIKES.to_vec(),
                maturities: LV1D_MATURITIES.to_vec(),
                correlation: None,
                method: InterpMethod::Stineman,
            },
            TableId::Basket2d => Self {
                id,
                grid_finess: vec![0.5, 0.5],
                steps: Steps::Fixed(12),
                strikes: k3,
                maturities: vec![1.0],
                correlation: Some(0.5),
                method: InterpMethod::Bicubic,
            },
            TableId::Basket3d => Self {
                id,
                grid_finess: vec![0.2; 3],
                steps: Steps::Fixed(12),
                strikes: k3,
                maturities: vec![1.0],
                correlation: Some(0.5),
                method: InterpMethod::Trilinear,
            },
            TableId::HwAdj => Self {
                id,
                grid_finess: vec![0.5, 0.5],
                steps: Steps::Fixed(50),
                strikes: vec![90.0, 100.0, 110.0],
                maturities: vec![0.5, 1.0, 3.0],
                correlation: None,
                method: InterpMethod::Stineman,
            },
            TableId::Heston => Self {
                id,
                grid_finess: vec![1.0, 1.0],
                steps: Steps::Fixed(50),
                strikes: vec![90.0, 100.0, 110.0],
                maturities: vec![1.0],
                correlation: None,
                method: InterpMethod::Stineman,
            },
            TableId::GlvCalib => Self {
                id,
                grid_finess: vec![0.33, 0.5],
                steps: Steps::PerYear(52),
                strikes: vec![70.0, 80.0, 90.0, 100.0, 110.0, 120.0, 130.0],
                maturities: vec![1.0, 2.0, 3.0, 5.0],
                correlation: None,
                method: InterpMethod::Stineman,
            },
        }
    }

    /// Whether a (strike, maturity) cell is part of the table.
    pub fn is_populated(&self, strike_idx: usize, maturity_idx: usize) -> bool {
        if self.id != TableId::Lv1dCalib
            || self.strikes != LV1D_STRIKES
            || self.maturities != LV1D_MATURITIES
        {
            return true;
        }
        let (lo, hi) = LV1D_POPULATED[strike_idx];
        (lo..=hi).contains(&maturity_idx)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TableOptions {
    pub with_mc: bool,
    pub mc: McConfig,
    /// Overrides the default pairwise correlation.
    pub correlation: Option<f64>,
}

/// How cells are displayed: vol differences in percent or premiums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Unit {
    VolDiff,
    Premium,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub strike: f64,
    pub values: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub id: TableId,
    pub unit: Unit,
    pub columns: Vec<String>,
    pub rows: Vec<TableRow>,
}

impl Table {
    pub fn get(&self, strike: f64, column: &str) -> Option<f64> {
        let c = self.columns.iter().position(|n| n == column)?;
        self.rows.iter().find(|r| r.strike == strike)?.values[c]
    }

    pub fn max_abs(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|r| r.values.iter().flatten())
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Display-rounded columns, each followed by its full-precision companion.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("strike");
        for c in &self.columns {
            let _ = write!(out, ",{c},{c}_full");
        }
        out.push('\n');
        for r in &self.rows {
            let _ = write!(out, "{}", r.strike);
            for v in &r.values {
                match v {
                    Some(v) => {
                        let _ = write!(out, ",{},{v:e}", self.display(*v));
                    }
                    None => out.push_str(",,"),
                }
            }
            out.push('\n');
        }
        out
    }

    fn display(&self, v: f64) -> String {
        let s = match self.unit {
            Unit::VolDiff => format!("{:.2}%", 100.0 * v),
            Unit::Premium => format!("{v:.2}"),
        };
        match s.strip_prefix('-') {
            Some(rest) if rest.chars().all(|c| matches!(c, '0' | '.' | '%')) => rest.to_string(),
            _ => s,
        }
    }
}

/// Computes a table with its default settings.
pub fn build_table(id: TableId, opts: &TableOptions) -> Result<Table> {
    build_table_with(&TableSpec::defaults(id), opts)
}

pub fn build_table_with(spec: &TableSpec, opts: &TableOptions) -> Result<Table> {
    if opts.with_mc {
        opts.mc.validate()?;
    }
    match spec.id {
        TableId::Lv1dCalib => lv1d_calib(spec),
        TableId::Basket2d | TableId::Basket3d => baskets(spec, opts),
        TableId::HwAdj => hw_adj(spec),
        TableId::Heston => heston(spec, opts),
        TableId::GlvCalib => glv_calib(spec),
    }
}

fn maturity_columns(spec: &TableSpec) -> Vec<String> {
    spec.maturities.iter().map(|t| format!("T={t}")).collect()
}

fn implied_gap(
    premium: f64,
    spot: f64,
    k: f64,
    t: f64,
    curve: &YieldCurve,
    target: f64,
) -> Result<f64> {
    let df = curve.discount(t);
    Ok(bs_implied_vol(premium, spot / df, k, t, df, OptionKind::Call)? - target)
}

/// Grid-implied minus market vol over a strike by maturity grid; `price` maps a
/// maturity index to a pricer of strikes.
fn vol_grid(
    spec: &TableSpec,
    mut price: impl FnMut(usize, &[f64]) -> Result<Vec<(f64, f64)>>,
) -> Result<Table> {
    let mut rows: Vec<TableRow> = spec
        .strikes
        .iter()
        .map(|&k| TableRow {
            strike: k,
            values: vec![None; spec.maturities.len()],
        })
        .collect();
    for j in 0..spec.maturities.len() {
        let strikes: Vec<f64> = (0..spec.strikes.len())
            .filter(|&i| spec.is_populated(i, j))
            .map(|i| spec.strikes[i])
            .collect();
        if strikes.is_empty() {
            continue;
        }
        for (k, gap) in price(j, &strikes)? {
            let row = rows
                .iter_mut()
                .find(|r| r.strike == k)
                .expect("priced strike is a row");
            row.values[j] = Some(gap);
        }
    }
    Ok(Table {
        id: spec.id,
        unit: Unit::VolDiff,
        columns: maturity_columns(spec),
        rows,
    })
}

fn lv1d_calib(spec: &TableSpec) -> Result<Table> {
    let s = presets::asset1();
    let curve = YieldCurve::zero();
    let d = LocalVolDiffusion::new(LocalVolSurface::new(s, curve));
    vol_grid(spec, |j, strikes| {
        let t = spec.maturities[j];
        let g = build_geometry_1d(&s, t, spec.steps.for_maturity(t), spec.grid_finess[0])?;
        strikes
            .iter()
            .map(|&k| {
                let v =
                    price_backward_1d(&g, &d, &Payoff::call(k), &curve, spec.method, false)?.value;
                Ok((k, implied_gap(v, s.spot, k, t, &curve, s.vol(k, t))?))
            })
            .collect()
    })
}

fn hw_adj(spec: &TableSpec) -> Result<Table> {
    let curve = presets::appendix_curve();
    let hw = presets::hw_default();
    let (spot, vol) = (presets::SPOT, 0.2);
    vol_grid(spec, |j, strikes| {
        let t = spec.maturities[j];
        let g = build_hw_geometry(vol, &hw, spot, t, spec.steps.for_maturity(t), grid2(spec)?)?;
        let exact = hw_adjusted_vol(vol, hw.sigma_r, hw.k, hw.rho_sr, t);
        strikes
            .iter()
            .map(|&k| {
                let v = price_hybrid_hw(&g, &curve, &hw, vol, &Payoff::call(k), spec.method)?;
                Ok((k, implied_gap(v, spot, k, t, &curve, exact)?))
            })
            .collect()
    })
}

fn glv_calib(spec: &TableSpec) -> Result<Table> {
    let s = presets::asset1();
    let curve = presets::appendix_curve();
    let hw = presets::hw_default();
    let lv = LocalVolSurface::new(s, curve);
    vol_grid(spec, |j, strikes| {
        let t = spec.maturities[j];
        let g = build_glv_geometry(&s, &hw, t, spec.steps.for_maturity(t), grid2(spec)?)?;
        let cal = calibrate_glv(&g, &lv, &hw, GlvOptions::default())?;
        strikes
            .iter()
            .map(|&k| {
                let v = price_glv(&g, &cal.field, &curve, &hw, &Payoff::call(k), spec.method)?;
                Ok((k, implied_gap(v, s.spot, k, t, &curve, s.vol(k, t))?))
            })
            .collect()
    })
}

fn grid2(spec: &TableSpec) -> Result<[f64; 2]> {
    match spec.grid_finess[..] {
        [a, b] => Ok([a, b]),
        _ => Err(Error::Config(format!(
            "{}: grid_finess needs two entries",
            spec.id.name()
        ))),
    }
}

/// Premium table: one grid column per product, each preceded by its MC oracle and
/// standard error when requested.
fn premium_table(
    spec: &TableSpec,
    opts: &TableOptions,
    products: &[&str],
    mut grid: impl FnMut(usize, f64) -> Result<f64>,
    mut mc: impl FnMut(usize, f64) -> Result<McEstimate>,
) -> Result<Table> {
    let mut columns = Vec::new();
    for p in products {
        if opts.with_mc {
            columns.push(format!("mc_{p}"));
            columns.push(format!("mc_{p}_stderr"));
        }
        columns.push(format!("grid_{p}"));
    }
    let mut rows = Vec::new();
    for &k in &spec.strikes {
        let mut values = Vec::new();
        for p in 0..products.len() {
            if opts.with_mc {
                let e = mc(p, k)?;
                values.push(Some(e.value));
                values.push(Some(e.stderr));
            }
            values.push(Some(grid(p, k)?));
        }
        rows.push(TableRow { strike: k, values });
    }
    Ok(Table {
        id: spec.id,
        unit: Unit::Premium,
        columns,
        rows,
    })
}

/// Payoff of a multi-asset product column; spreads are struck at `100 - K` so the
/// rows run from in- to out-of-the-money like the other products.
pub fn product_payoff(product: &str, dims: usize, k: f64) -> MultiPayoff {
    match product {
        "basket" => MultiPayoff::basket(vec![1.0 / dims as f64; dims], k),
        "best" => MultiPayoff::best_of(k),
        "spread" => MultiPayoff::spread(presets::SPOT - k),
        other => panic!("unknown product `{other}`"),
    }
}

fn baskets(spec: &TableSpec, opts: &TableOptions) -> Result<Table> {
    let curve = YieldCurve::zero();
    let rho = opts.correlation.or(spec.correlation).unwrap_or(0.5);
    let t = spec.maturities[0];
    let n = spec.steps.for_maturity(t);
    let surfaces: Vec<SSVISurface> = match spec.id {
        TableId::Basket2d => vec![presets::asset1(), presets::asset2()],
        _ => vec![presets::asset1(), presets::asset2(), presets::asset3()],
    };
    let dims = surfaces.len();
    let lvs: Vec<_> = surfaces
        .iter()
        .map(|s| LocalVolDiffusion::new(LocalVolSurface::new(*s, curve)))
        .collect();
    let refs: Vec<_> = lvs.iter().collect();
    let spots = vec![presets::SPOT; dims];
    let corr = vec![rho; if dims == 2 { 1 } else { 3 }];
    let products: &[&str] = if dims == 2 {
        &["basket", "best", "spread"]
    } else {
        &["basket", "best"]
    };
    let gf = &spec.grid_finess;
    if gf.len() != dims {
        return Err(Error::Config(format!(
            "{}: grid_finess needs {dims} entries",
            spec.id.name()
        )));
    }
    let geom = if dims == 2 {
        build_geometry_2d([&surfaces[0], &surfaces[1]], rho, t, n, [gf[0], gf[1]])?
    } else {
        build_geometry_3d(
            [&surfaces[0], &surfaces[1], &surfaces[2]],
            [rho; 3],
            t,
            n,
            [gf[0], gf[1], gf[2]],
        )?
    };
    premium_table(
        spec,
        opts,
        products,
        |p, k| {
            let payoff = product_payoff(products[p], dims, k);
            if dims == 2 {
                price_backward_2d(&geom, [&lvs[0], &lvs[1]], &payoff, &curve, spec.method)
            } else {
                price_backward_3d(&geom, [&lvs[0], &lvs[1], &lvs[2]], &payoff, &curve)
            }
        },
        |p, k| {
            mc_price_lv(
                &spots,
                &refs,
                &corr,
                &curve,
                &product_payoff(products[p], dims, k),
                t,
                &opts.mc,
            )
        },
    )
}

fn heston(spec: &TableSpec, opts: &TableOptions) -> Result<Table> {
    let curve = YieldCurve::zero();
    let h = presets::heston_default();
    let t = spec.maturities[0];
    let g = build_heston_geometry(
        &h,
        presets::SPOT,
        t,
        spec.steps.for_maturity(t),
        grid2(spec)?,
    )?;
    premium_table(
        spec,
        opts,
        &["call"],
        |_, k| price_heston(&g, &h, &curve, &Payoff::call(k), spec.method),
        |_, k| mc_price_heston(&h, presets::SPOT, &curve, &Payoff::call(k), t, &opts.mc),
    )
}
