//! TOML job description for a single pricing run.
//!
//! ```toml
//! model = "lv1d"
//! maturity = 1.0
//! steps = 100
//! grid_finess = [0.5]
//!
//! [market]
//! assets = ["asset1"]
//!
//! [payoff]
//! kind = "call"
//! strike = 100.0
//! ```

use crate::engine1d::{build_geometry_1d, check_grid_finess, price_backward_1d, LocalVolDiffusion};
use crate::engine_nd::{
    build_geometry_2d, build_geometry_3d, check_correlation, cholesky3, price_backward_2d,
    price_backward_3d,
};
use crate::error::{Error, Result};
use crate::glv::{build_glv_geometry, calibrate_glv, price_glv, DigitalSource, GlvOptions};
use crate::hybrid::{
    build_heston_geometry, build_hw_geometry, price_heston, price_hybrid_hw, HestonParams,
    HullWhiteParams,
};
use crate::interp::InterpMethod;
use crate::market::{
    bs_implied_vol, presets, LocalVolSurface, OptionKind, SSVISurface, YieldCurve,
};
use crate::mc::{mc_price_heston, mc_price_hybrid_hw, mc_price_lv, McConfig, McEstimate};
use crate::payoff::{MultiPayoff, Payoff};
use serde::{Deserialize, Serialize};
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Lv1d,
    Lv2d,
    Lv3d,
    HwHybrid,
    Heston,
    Glv,
    McLv1d,
    McLv2d,
    McLv3d,
    McHwHybrid,
    McHeston,
}

impl Model {
    pub const ALL: [Model; 11] = [
        Model::Lv1d,
        Model::Lv2d,
        Model::Lv3d,
        Model::HwHybrid,
        Model::Heston,
        Model::Glv,
        Model::McLv1d,
        Model::McLv2d,
        Model::McLv3d,
        Model::McHwHybrid,
        Model::McHeston,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Model::Lv1d => "lv1d",
            Model::Lv2d => "lv2d",
            Model::Lv3d => "lv3d",
            Model::HwHybrid => "hw_hybrid",
            Model::Heston => "heston",
            Model::Glv => "glv",
            Model::McLv1d => "mc_lv1d",
            Model::McLv2d => "mc_lv2d",
            Model::McLv3d => "mc_lv3d",
            Model::McHwHybrid => "mc_hw_hybrid",
            Model::McHeston => "mc_heston",
        }
    }

    pub fn is_mc(self) -> bool {
        matches!(
            self,
            Model::McLv1d | Model::McLv2d | Model::McLv3d | Model::McHwHybrid | Model::McHeston
        )
    }

    /// Number of grid axes (and `grid_finess` entries) of the grid model.
    pub fn grid_dims(self) -> usize {
        match self {
            Model::Lv1d | Model::McLv1d => 1,
            Model::Lv3d | Model::McLv3d => 3,
            _ => 2,
        }
    }

    /// Number of local-vol surfaces the model reads.
    pub fn assets(self) -> usize {
        match self {
            Model::Lv1d | Model::McLv1d | Model::Glv => 1,
            Model::Lv2d | Model::McLv2d => 2,
            Model::Lv3d | Model::McLv3d => 3,
            Model::HwHybrid | Model::McHwHybrid | Model::Heston | Model::McHeston => 0,
        }
    }

    fn uses_rates_by_default(self) -> bool {
        matches!(self, Model::HwHybrid | Model::McHwHybrid | Model::Glv)
    }

    fn default_method(self) -> InterpMethod {
        match self.grid_dims() {
            3 => InterpMethod::Trilinear,
            2 if self.assets() == 2 => InterpMethod::Bicubic,
            _ => InterpMethod::Stineman,
        }
    }
}

/// A preset name or an inline parameter table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SurfaceRef {
    Preset(String),
    Inline(SSVISurface),
}

impl SurfaceRef {
    pub fn resolve(&self) -> Result<SSVISurface> {
        match self {
            SurfaceRef::Preset(name) => presets::surface(name).ok_or_else(|| {
                Error::Config(format!("market.assets: unknown surface preset `{name}`"))
            }),
            SurfaceRef::Inline(s) => {
                s.validate()?;
                Ok(*s)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CurveRef {
    Preset(String),
    Inline(YieldCurve),
}

impl CurveRef {
    pub fn resolve(&self) -> Result<YieldCurve> {
        match self {
            CurveRef::Preset(name) => presets::curve(name).ok_or_else(|| {
                Error::Config(format!("market.curve: unknown curve preset `{name}`"))
            }),
            CurveRef::Inline(c) => {
                c.validate()?;
                Ok(*c)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarketConfig {
    #[serde(default)]
    pub assets: Vec<SurfaceRef>,
    /// Defaults to `appendix` for the rate hybrids and `zero` otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<CurveRef>,
    /// Pairwise correlations: `[rho12]` in 2D, `[rho12, rho13, rho23]` in 3D.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub correlations: Vec<f64>,
    #[serde(default = "default_spot")]
    pub spot: f64,
    /// Constant equity vol of the Hull–White hybrid.
    #[serde(default = "default_equity_vol")]
    pub equity_vol: f64,
    #[serde(default = "presets::hw_default")]
    pub hull_white: HullWhiteParams,
    #[serde(default = "presets::heston_default")]
    pub heston: HestonParams,
}

fn default_spot() -> f64 {
    presets::SPOT
}

fn default_equity_vol() -> f64 {
    0.2
}

impl Default for MarketConfig {
    fn default() -> Self {
        Self {
            assets: Vec::new(),
            curve: None,
            correlations: Vec::new(),
            spot: default_spot(),
            equity_vol: default_equity_vol(),
            hull_white: presets::hw_default(),
            heston: presets::heston_default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PayoffKind {
    Call,
    Put,
    Basket,
    #[serde(rename = "bestof")]
    BestOf,
    Spread,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PayoffConfig {
    pub kind: PayoffKind,
    /// For spreads the payoff is `max(S1 - S2 - strike, 0)`.
    pub strike: f64,
    /// Basket weights; equal weights when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl PayoffConfig {
    fn single(&self) -> Result<(Payoff, OptionKind)> {
        match self.kind {
            PayoffKind::Call => Ok((Payoff::call(self.strike), OptionKind::Call)),
            PayoffKind::Put => Ok((Payoff::put(self.strike), OptionKind::Put)),
            _ => Err(Error::Config(format!(
                "payoff.kind: `{}` needs several assets; single-asset models take call or put",
                self.kind_name()
            ))),
        }
    }

    fn multi(&self, dims: usize) -> Result<MultiPayoff> {
        match self.kind {
            PayoffKind::Basket => {
                let w = self.weights.clone().unwrap_or_else(|| vec![1.0 / dims as f64; dims]);
                if w.len() != dims {
                    return Err(Error::Config(format!(
                        "payoff.weights: expected {dims} weights, got {}",
                        w.len()
                    )));
                }
                Ok(MultiPayoff::basket(w, self.strike))
            }
            PayoffKind::BestOf => Ok(MultiPayoff::best_of(self.strike)),
            PayoffKind::Spread if dims == 2 => Ok(MultiPayoff::spread(self.strike)),
            PayoffKind::Spread => Err(Error::Config("payoff.kind: spread needs exactly two assets".into())),
            _ => Err(Error::Config(format!(
                "payoff.kind: `{}` is single-asset; multi-asset models take basket, bestof or spread",
                self.kind_name()
            ))),
        }
    }

    fn kind_name(&self) -> &'static str {
        match self.kind {
            PayoffKind::Call => "call",
            PayoffKind::Put => "put",
            PayoffKind::Basket => "basket",
            PayoffKind::BestOf => "bestof",
            PayoffKind::Spread => "spread",
        }
    }
}

/// GLV calibration settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GlvConfig {
    pub digital: DigitalSource,
    /// Vega threshold as a fraction of spot.
    pub vega_cutoff: f64,
    /// Interpolation of the Arrow–Debreu sheet.
    pub forward_method: InterpMethod,
}

impl Default for GlvConfig {
    fn default() -> Self {
        let o = GlvOptions::default();
        Self {
            digital: o.digital,
            vega_cutoff: o.vega_cutoff,
            forward_method: o.method,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PricingConfig {
    pub model: Model,
    pub maturity: f64,
    /// Grid time steps; ignored by the Monte Carlo models.
    #[serde(default = "default_steps")]
    pub steps: usize,
    /// One entry per grid axis.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub grid_finess: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<InterpMethod>,
    #[serde(default)]
    pub market: MarketConfig,
    pub payoff: PayoffConfig,
    #[serde(default)]
    pub mc: McConfig,
    #[serde(default)]
    pub glv: GlvConfig,
}

fn default_steps() -> usize {
    100
}

/// Grid size at maturity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridStats {
    pub steps: usize,
    pub nodes: Vec<usize>,
}

/// One value of a dumped sheet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SheetRow {
    pub step: usize,
    pub node: usize,
    pub state: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceReport {
    pub model: Model,
    pub price: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub implied_vol: Option<f64>,
    pub wall_time_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridStats>,
    #[serde(skip)]
    pub sheets: Option<Vec<SheetRow>>,
}

impl PricingConfig {
    /// Parses and validates a TOML document.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn curve(&self) -> Result<YieldCurve> {
        match &self.market.curve {
            Some(c) => c.resolve(),
            None if self.model.uses_rates_by_default() => Ok(presets::appendix_curve()),
            None => Ok(YieldCurve::zero()),
        }
    }

    pub fn method(&self) -> InterpMethod {
        self.method.unwrap_or_else(|| self.model.default_method())
    }

    fn surfaces(&self) -> Result<Vec<SSVISurface>> {
        self.market.assets.iter().map(SurfaceRef::resolve).collect()
    }

    /// Checks every field without pricing anything.
    pub fn validate(&self) -> Result<()> {
        let m = self.model;
        if !(self.maturity > 0.0 && self.maturity.is_finite()) {
            return Err(Error::param("maturity", self.maturity, "must be positive"));
        }
        if !m.is_mc() {
            if self.steps == 0 {
                return Err(Error::param("steps", 0.0, "need at least one time step"));
            }
            if self.grid_finess.len() != m.grid_dims() {
                return Err(Error::Config(format!(
                    "grid_finess: `{}` needs {} entries, got {}",
                    m.name(),
                    m.grid_dims(),
                    self.grid_finess.len()
                )));
            }
            for &gf in &self.grid_finess {
                check_grid_finess("grid_finess", gf)?;
            }
            let method = self.method();
            let ok = match (m.grid_dims(), m.assets()) {
                (1, _) | (2, 0) | (2, 1) => method.is_1d(),
                (2, _) => matches!(method, InterpMethod::Bicubic | InterpMethod::Keys),
                _ => method == InterpMethod::Trilinear,
            };
            if !ok {
                return Err(Error::Config(format!(
                    "method: `{}` cannot be used by model `{}`",
                    method.name(),
                    m.name()
                )));
            }
        } else {
            self.mc.validate()?;
        }
        if !(self.market.spot > 0.0 && self.market.spot.is_finite()) {
            return Err(Error::param(
                "market.spot",
                self.market.spot,
                "must be positive",
            ));
        }
        let n = m.assets();
        if self.market.assets.len() != n {
            return Err(Error::Config(format!(
                "market.assets: `{}` needs {n} surfaces, got {}",
                m.name(),
                self.market.assets.len()
            )));
        }
        self.surfaces()?;
        self.curve()?;
        let pairs = match n {
            2 => 1,
            3 => 3,
            _ => 0,
        };
        if self.market.correlations.len() != pairs {
            return Err(Error::Config(format!(
                "market.correlations: `{}` needs {pairs} entries, got {}",
                m.name(),
                self.market.correlations.len()
            )));
        }
        for &rho in &self.market.correlations {
            check_correlation("market.correlations", rho)?;
        }
        if let [a, b, c] = self.market.correlations[..] {
            cholesky3(a, b, c)?;
        }
        match m {
            Model::HwHybrid | Model::McHwHybrid | Model::Glv => {
                self.market.hull_white.validate()?
            }
            Model::Heston | Model::McHeston => self.market.heston.validate()?,
            _ => {}
        }
        if matches!(m, Model::HwHybrid | Model::McHwHybrid) && !(self.market.equity_vol > 0.0) {
            return Err(Error::param(
                "market.equity_vol",
                self.market.equity_vol,
                "must be positive",
            ));
        }
        if m == Model::Glv && !(self.glv.vega_cutoff >= 0.0) {
            return Err(Error::param(
                "glv.vega_cutoff",
                self.glv.vega_cutoff,
                "must be non-negative",
            ));
        }
        if !(self.payoff.strike.is_finite()) {
            return Err(Error::param(
                "payoff.strike",
                self.payoff.strike,
                "must be finite",
            ));
        }
        if n >= 2 {
            self.payoff.multi(n)?;
        } else {
            self.payoff.single()?;
        }
        Ok(())
    }

    /// Prices the job; `keep_sheets` records the lv1d value sheets or the GLV
    /// equity-marginal Arrow–Debreu sheets.
    pub fn run(&self, keep_sheets: bool) -> Result<PriceReport> {
        self.validate()?;
        if keep_sheets && !matches!(self.model, Model::Lv1d | Model::Glv) {
            return Err(Error::Config(format!(
                "sheets can only be dumped for lv1d and glv, not `{}`",
                self.model.name()
            )));
        }
        let start = Instant::now();
        let curve = self.curve()?;
        let surfaces = self.surfaces()?;
        let lvs: Vec<_> = surfaces
            .iter()
            .map(|s| LocalVolDiffusion::new(LocalVolSurface::new(*s, curve)))
            .collect();
        let gf = &self.grid_finess;
        let (t, n, method) = (self.maturity, self.steps, self.method());
        let m = &self.market;
        let mut report = PriceReport {
            model: self.model,
            price: f64::NAN,
            stderr: None,
            implied_vol: None,
            wall_time_s: 0.0,
            grid: None,
            sheets: None,
        };
        let mc = |est: McEstimate, report: &mut PriceReport| {
            report.price = est.value;
            report.stderr = Some(est.stderr);
        };
        match self.model {
            Model::Lv1d => {
                let g = build_geometry_1d(&surfaces[0], t, n, gf[0])?;
                let (payoff, _) = self.payoff.single()?;
                let r = price_backward_1d(&g, &lvs[0], &payoff, &curve, method, keep_sheets)?;
                report.price = r.value;
                report.grid = Some(GridStats {
                    steps: n,
                    nodes: vec![g.node_count(n)],
                });
                report.sheets = r.sheets.map(|sheets| {
                    sheets
                        .iter()
                        .flat_map(|s| {
                            s.xs.iter()
                                .zip(&s.values)
                                .enumerate()
                                .map(move |(i, (&x, &v))| SheetRow {
                                    step: s.step,
                                    node: i,
                                    state: x,
                                    value: v,
                                })
                        })
                        .collect()
                });
            }
            Model::Lv2d => {
                let g = build_geometry_2d(
                    [&surfaces[0], &surfaces[1]],
                    m.correlations[0],
                    t,
                    n,
                    [gf[0], gf[1]],
                )?;
                let payoff = self.payoff.multi(2)?;
                report.price = price_backward_2d(&g, [&lvs[0], &lvs[1]], &payoff, &curve, method)?;
                report.grid = Some(nd_stats(&g.axes, n));
            }
            Model::Lv3d => {
                let c = [m.correlations[0], m.correlations[1], m.correlations[2]];
                let g = build_geometry_3d(
                    [&surfaces[0], &surfaces[1], &surfaces[2]],
                    c,
                    t,
                    n,
                    [gf[0], gf[1], gf[2]],
                )?;
                let payoff = self.payoff.multi(3)?;
                report.price = price_backward_3d(&g, [&lvs[0], &lvs[1], &lvs[2]], &payoff, &curve)?;
                report.grid = Some(nd_stats(&g.axes, n));
            }
            Model::HwHybrid => {
                let g =
                    build_hw_geometry(m.equity_vol, &m.hull_white, m.spot, t, n, [gf[0], gf[1]])?;
                let (payoff, _) = self.payoff.single()?;
                report.price =
                    price_hybrid_hw(&g, &curve, &m.hull_white, m.equity_vol, &payoff, method)?;
                report.grid = Some(nd_stats(&[g.equity, g.second], n));
            }
            Model::Heston => {
                let g = build_heston_geometry(&m.heston, m.spot, t, n, [gf[0], gf[1]])?;
                let (payoff, _) = self.payoff.single()?;
                report.price = price_heston(&g, &m.heston, &curve, &payoff, method)?;
                report.grid = Some(nd_stats(&[g.equity, g.second], n));
            }
            Model::Glv => {
                let g = build_glv_geometry(&surfaces[0], &m.hull_white, t, n, [gf[0], gf[1]])?;
                let opts = GlvOptions {
                    method: self.glv.forward_method,
                    digital: self.glv.digital,
                    vega_cutoff: self.glv.vega_cutoff,
                    keep_sheets,
                };
                let cal = calibrate_glv(&g, lvs[0].surface(), &m.hull_white, opts)?;
                let (payoff, _) = self.payoff.single()?;
                report.price = price_glv(&g, &cal.field, &curve, &m.hull_white, &payoff, method)?;
                report.sheets = keep_sheets.then(|| {
                    cal.sheets
                        .iter()
                        .flat_map(|s| {
                            let xs = s.x1.xs().to_vec();
                            s.equity_marginal()
                                .into_iter()
                                .enumerate()
                                .map(move |(i, v)| SheetRow {
                                    step: s.step,
                                    node: i,
                                    state: xs[i],
                                    value: v,
                                })
                        })
                        .collect()
                });
                report.grid = Some(nd_stats(&[g.equity, g.second], n));
            }
            Model::McLv1d | Model::McLv2d | Model::McLv3d => {
                let spots: Vec<f64> = surfaces.iter().map(|s| s.spot).collect();
                let refs: Vec<_> = lvs.iter().collect();
                let payoff = if spots.len() == 1 {
                    let (p, _) = self.payoff.single()?;
                    MultiPayoff::from_fn(p.label().to_string(), move |s| p.terminal(0.0, s[0]))
                        .nonnegative()
                } else {
                    self.payoff.multi(spots.len())?
                };
                let est =
                    mc_price_lv(&spots, &refs, &m.correlations, &curve, &payoff, t, &self.mc)?;
                mc(est, &mut report);
            }
            Model::McHwHybrid => {
                let (payoff, _) = self.payoff.single()?;
                let est = mc_price_hybrid_hw(
                    &curve,
                    &m.hull_white,
                    m.equity_vol,
                    m.spot,
                    &payoff,
                    t,
                    &self.mc,
                )?;
                mc(est, &mut report);
            }
            Model::McHeston => {
                let (payoff, _) = self.payoff.single()?;
                let est = mc_price_heston(&m.heston, m.spot, &curve, &payoff, t, &self.mc)?;
                mc(est, &mut report);
            }
        }
        if self.model.assets() < 2 {
            let spot = surfaces.first().map_or(m.spot, |s| s.spot);
            let (_, kind) = self.payoff.single()?;
            let df = curve.discount(t);
            report.implied_vol =
                bs_implied_vol(report.price, spot / df, self.payoff.strike, t, df, kind).ok();
        }
        report.wall_time_s = start.elapsed().as_secs_f64();
        Ok(report)
    }

    /// A valid example job for every model.
    pub fn examples() -> Vec<PricingConfig> {
        Model::ALL.iter().map(|&m| Self::example(m)).collect()
    }

    pub fn example(model: Model) -> PricingConfig {
        let assets = |names: &[&str]| {
            names
                .iter()
                .map(|n| SurfaceRef::Preset(n.to_string()))
                .collect()
        };
        let call = PayoffConfig {
            kind: PayoffKind::Call,
            strike: 100.0,
            weights: None,
        };
        let basket = PayoffConfig {
            kind: PayoffKind::Basket,
            strike: 100.0,
            weights: None,
        };
        let (steps, grid_finess, market, payoff) = match model {
            Model::Lv1d | Model::McLv1d => (
                100,
                vec![0.5],
                MarketConfig {
                    assets: assets(&["asset1"]),
                    ..Default::default()
                },
                call,
            ),
            Model::Lv2d | Model::McLv2d => (
                12,
                vec![0.5, 0.5],
                MarketConfig {
                    assets: assets(&["asset1", "asset2"]),
                    correlations: vec![0.5],
                    ..Default::default()
                },
                basket,
            ),
            Model::Lv3d | Model::McLv3d => (
                12,
                vec![0.2, 0.2, 0.2],
                MarketConfig {
                    assets: assets(&["asset1", "asset2", "asset3"]),
                    correlations: vec![0.5; 3],
                    ..Default::default()
                },
                basket,
            ),
            Model::HwHybrid | Model::McHwHybrid => {
                (50, vec![0.5, 0.5], MarketConfig::default(), call)
            }
            Model::Heston | Model::McHeston => (50, vec![1.0, 1.0], MarketConfig::default(), call),
            Model::Glv => (
                52,
                vec![0.33, 0.5],
                MarketConfig {
                    assets: assets(&["asset1"]),
                    ..Default::default()
                },
                call,
            ),
        };
        let mc_model = model.is_mc();
        PricingConfig {
            model,
            maturity: 1.0,
            steps,
            grid_finess: if mc_model { Vec::new() } else { grid_finess },
            method: None,
            market,
            payoff,
            mc: McConfig::default(),
            glv: GlvConfig::default(),
        }
    }
}

fn nd_stats(axes: &[crate::engine1d::StateAxis], steps: usize) -> GridStats {
    GridStats {
        steps,
        nodes: axes.iter().map(|a| a.node_count(steps)).collect(),
    }
}
