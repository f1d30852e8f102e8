use super::curve::YieldCurve;
use super::ssvi::{ImpliedVol, SSVISurface};
use crate::error::{Error, Result};
use crate::normal::{cdf, pdf};

/// Maturities below this are evaluated at this value.
pub const LV_MIN_TIME: f64 = 1e-6;

const STRIKE_BUMP: f64 = 1e-4;
const TIME_BUMP: f64 = 1e-4;

/// Intermediate quantities of the implied-vol form of Dupire's formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DupireTerms {
    pub strike: f64,
    pub t: f64,
    pub forward: f64,
    pub df: f64,
    pub fwd_rate: f64,
    pub sigma: f64,
    pub d_sigma_dt: f64,
    pub d_sigma_dk: f64,
    pub d2_sigma_dk2: f64,
    pub d1: f64,
    pub d2: f64,
    pub vega: f64,
    pub nume: f64,
    pub deno: f64,
}

impl DupireTerms {
    /// `N(d2)`.
    pub fn prob_itm(&self) -> f64 {
        cdf(self.d2)
    }

    /// `Nume` and `Deno` with the common Vega factor divided out, so the ratio
    /// survives where Vega underflows.
    pub fn reduced_ratio(&self) -> (f64, f64) {
        let (k, t, s) = (self.strike, self.t, self.sigma);
        let num = s * s + 2.0 * t * s * (self.d_sigma_dt + self.fwd_rate * k * self.d_sigma_dk);
        let sqrt_t = t.sqrt();
        let lin = 1.0 + k * self.d1 * sqrt_t * self.d_sigma_dk;
        let den = lin * lin
            + k * k
                * t
                * s
                * (self.d2_sigma_dk2 - self.d1 * sqrt_t * self.d_sigma_dk * self.d_sigma_dk);
        (num, den)
    }
}

/// Dupire local volatility derived from an implied-vol surface and a yield curve.
#[derive(Debug, Clone)]
pub struct LocalVolSurface<S = SSVISurface> {
    surface: S,
    curve: YieldCurve,
    floor: f64,
    cap_multiple: f64,
}

impl<S: ImpliedVol> LocalVolSurface<S> {
    pub fn new(surface: S, curve: YieldCurve) -> Self {
        Self {
            surface,
            curve,
            floor: 1e-4,
            cap_multiple: 5.0,
        }
    }

    /// Overrides the output floor and the cap expressed as a multiple of the ATM vol.
    pub fn with_bounds(mut self, floor: f64, cap_multiple: f64) -> Result<Self> {
        if !(floor > 0.0) {
            return Err(Error::param("floor", floor, "must be positive"));
        }
        if !(cap_multiple > 0.0) {
            return Err(Error::param(
                "cap_multiple",
                cap_multiple,
                "must be positive",
            ));
        }
        self.floor = floor;
        self.cap_multiple = cap_multiple;
        Ok(self)
    }

    pub fn surface(&self) -> &S {
        &self.surface
    }

    pub fn curve(&self) -> &YieldCurve {
        &self.curve
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn cap(&self, t: f64) -> f64 {
        (self.cap_multiple * self.surface.atm_vol(t.max(LV_MIN_TIME)))
            .max(self.floor * (1.0 + 1e-12))
    }

    pub fn clamp(&self, vol: f64, t: f64) -> f64 {
        vol.clamp(self.floor, self.cap(t))
    }

    pub fn forward(&self, t: f64) -> f64 {
        self.surface.spot() * self.curve.integrated_rate(t).exp()
    }

    pub fn terms(&self, k: f64, t: f64) -> DupireTerms {
        let t = t.max(LV_MIN_TIME);
        let s = &self.surface;
        let sigma = s.vol(k, t);

        let hk = STRIKE_BUMP * k;
        let up = s.vol(k + hk, t);
        let dn = s.vol(k - hk, t);
        let d_sigma_dk = (up - dn) / (2.0 * hk);
        let d2_sigma_dk2 = (up - 2.0 * sigma + dn) / (hk * hk);
        let d_sigma_dt = if t > TIME_BUMP {
            (s.vol(k, t + TIME_BUMP) - s.vol(k, t - TIME_BUMP)) / (2.0 * TIME_BUMP)
        } else {
            (s.vol(k, t + TIME_BUMP) - sigma) / TIME_BUMP
        };

        let forward = self.forward(t);
        let df = self.curve.discount(t);
        let fwd_rate = self.curve.inst_forward(t);
        let sqrt_t = t.sqrt();
        let sd = sigma * sqrt_t;
        let d1 = ((forward / k).ln() + 0.5 * sd * sd) / sd;
        let d2 = d1 - sd;
        let vega = k * df * sqrt_t * pdf(d2);

        let nume = vega * (sigma / (2.0 * t) + d_sigma_dt + fwd_rate * k * d_sigma_dk);
        let lin = 1.0 + k * d1 * sqrt_t * d_sigma_dk;
        let bracket =
            lin * lin + k * k * t * sigma * (d2_sigma_dk2 - d1 * sqrt_t * d_sigma_dk * d_sigma_dk);
        let deno = vega / (2.0 * t * sigma) * bracket;

        DupireTerms {
            strike: k,
            t,
            forward,
            df,
            fwd_rate,
            sigma,
            d_sigma_dt,
            d_sigma_dk,
            d2_sigma_dk2,
            d1,
            d2,
            vega,
            nume,
            deno,
        }
    }

    /// Clamped local vol at strike `k`; a non-positive numerator gives the floor and a
    /// non-positive denominator the cap.
    pub fn local_vol(&self, k: f64, t: f64) -> f64 {
        let terms = self.terms(k, t);
        self.from_terms(&terms)
    }

    pub fn from_terms(&self, terms: &DupireTerms) -> f64 {
        let t = terms.t;
        let (num, den) = terms.reduced_ratio();
        if den <= 0.0 || !den.is_finite() {
            return self.cap(t);
        }
        if num <= 0.0 || !num.is_finite() {
            return self.floor;
        }
        self.clamp((num / den).sqrt(), t)
    }

    pub fn dupire_local_vol(&self, k: f64, t: f64) -> Result<f64> {
        if !(k > 0.0) {
            return Err(Error::Domain(format!(
                "local vol at non-positive strike {k}"
            )));
        }
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("local vol at negative time {t}")));
        }
        Ok(self.local_vol(k, t))
    }

    /// Local vol at log-forward-moneyness `x = ln(S/F(t))`.
    pub fn local_vol_at_state(&self, x: f64, t: f64) -> f64 {
        self.local_vol(self.forward(t.max(LV_MIN_TIME)) * x.exp(), t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market::{black_price, presets, OptionKind};

    #[test]
    fn flat_smile_fixed_point() {
        let flat = SSVISurface::new(100.0, 0.30, 0.30, 5.0, 0.8, 0.0, 0.392).unwrap();
        let lv = LocalVolSurface::new(flat, presets::appendix_curve());
        for k in [50.0, 80.0, 100.0, 130.0, 200.0] {
            for t in [1e-7, 0.01, 0.5, 1.0, 3.0] {
                let v = lv.dupire_local_vol(k, t).unwrap();
                assert!((v - 0.30).abs() < 1e-6, "k={k} t={t} v={v}");
            }
        }
    }

    #[test]
    fn wing_hits_cap() {
        let lv = LocalVolSurface::new(presets::asset1(), YieldCurve::zero());
        assert_eq!(lv.dupire_local_vol(20.0, 0.05).unwrap(), lv.cap(0.05));
        let far = lv.dupire_local_vol(500.0, 1.0).unwrap();
        assert!(far.is_finite() && far > lv.floor() && far <= lv.cap(1.0));
    }

    #[test]
    fn custom_bounds_clamp() {
        let lv = LocalVolSurface::new(presets::asset1(), YieldCurve::zero())
            .with_bounds(1e-4, 0.5)
            .unwrap();
        assert_eq!(lv.dupire_local_vol(500.0, 1.0).unwrap(), 0.125);
        assert!(LocalVolSurface::new(presets::asset1(), YieldCurve::zero())
            .with_bounds(0.0, 5.0)
            .is_err());
    }

    #[test]
    fn atm_matches_dupire_from_call_prices() {
        let s = presets::asset1();
        let lv = LocalVolSurface::new(s, YieldCurve::zero());
        let call =
            |k: f64, t: f64| black_price(100.0, k, t, s.vol_unchecked(k, t), 1.0, OptionKind::Call);
        let (k, t) = (100.0, 1.0);
        let (hk, ht) = (0.5, 1e-3);
        let dc_dt = (call(k, t + ht) - call(k, t - ht)) / (2.0 * ht);
        let d2c_dk2 = (call(k + hk, t) - 2.0 * call(k, t) + call(k - hk, t)) / (hk * hk);
        let brute = (2.0 * dc_dt / (k * k * d2c_dk2)).sqrt();
        let v = lv.dupire_local_vol(k, t).unwrap();
        assert!(v > 0.0 && v < lv.cap(t));
        assert!((v - brute).abs() < 1e-3, "{v} vs {brute}");
    }

    #[test]
    fn numerator_matches_nume_formula() {
        let lv = LocalVolSurface::new(presets::asset1(), presets::appendix_curve());
        let d = lv.terms(90.0, 2.0);
        let vega = 90.0 * d.df * 2f64.sqrt() * pdf(d.d2);
        assert!((d.vega - vega).abs() < 1e-12);
        let nume = vega * (d.sigma / 4.0 + d.d_sigma_dt + d.fwd_rate * 90.0 * d.d_sigma_dk);
        assert!((d.nume - nume).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        let lv = LocalVolSurface::new(presets::asset1(), YieldCurve::zero());
        assert!(lv.dupire_local_vol(0.0, 1.0).is_err());
        assert!(lv.dupire_local_vol(100.0, -1.0).is_err());
    }
}
