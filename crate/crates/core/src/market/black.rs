use crate::error::{Error, Result};
use crate::normal::{cdf, pdf};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OptionKind {
    #[default]
    Call,
    Put,
}

/// Inputs to the Black formula on a forward.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BSQuote {
    pub forward: f64,
    pub strike: f64,
    pub maturity: f64,
    pub vol: f64,
    pub df: f64,
}

impl BSQuote {
    pub fn d1_d2(&self) -> (f64, f64) {
        let sd = self.vol * self.maturity.sqrt();
        let d1 = ((self.forward / self.strike).ln() + 0.5 * sd * sd) / sd;
        (d1, d1 - sd)
    }

    pub fn price(&self, kind: OptionKind) -> f64 {
        black_price(
            self.forward,
            self.strike,
            self.maturity,
            self.vol,
            self.df,
            kind,
        )
    }

    /// `∂price/∂vol`.
    pub fn vega(&self) -> f64 {
        let sd = self.vol * self.maturity.sqrt();
        if !(sd > 0.0) {
            return 0.0;
        }
        let (_, d2) = self.d1_d2();
        self.df * self.strike * self.maturity.sqrt() * pdf(d2)
    }
}

pub fn black_price(
    forward: f64,
    strike: f64,
    maturity: f64,
    vol: f64,
    df: f64,
    kind: OptionKind,
) -> f64 {
    let sd = vol * maturity.max(0.0).sqrt();
    if !(sd > 0.0) {
        let intrinsic = match kind {
            OptionKind::Call => (forward - strike).max(0.0),
            OptionKind::Put => (strike - forward).max(0.0),
        };
        return df * intrinsic;
    }
    let d1 = ((forward / strike).ln() + 0.5 * sd * sd) / sd;
    let d2 = d1 - sd;
    match kind {
        OptionKind::Call => df * (forward * cdf(d1) - strike * cdf(d2)),
        OptionKind::Put => df * (strike * cdf(-d2) - forward * cdf(-d1)),
    }
}

/// Black implied vol by Newton iteration inside a shrinking bisection bracket.
pub fn bs_implied_vol(
    premium: f64,
    forward: f64,
    strike: f64,
    maturity: f64,
    df: f64,
    kind: OptionKind,
) -> Result<f64> {
    if !(forward > 0.0 && strike > 0.0 && maturity > 0.0 && df > 0.0) {
        return Err(Error::Domain(format!(
            "implied vol needs positive forward, strike, maturity and discount (got {forward}, {strike}, {maturity}, {df})"
        )));
    }
    let (lower, upper) = match kind {
        OptionKind::Call => (df * (forward - strike).max(0.0), df * forward),
        OptionKind::Put => (df * (strike - forward).max(0.0), df * strike),
    };
    let slack = 1e-14 * forward * df;
    if !(premium >= lower - slack && premium < upper) {
        return Err(Error::PremiumOutOfBounds {
            premium,
            lower,
            upper,
        });
    }
    // price the out-of-the-money side to avoid subtracting the intrinsic value
    let (kind, premium) = match kind {
        OptionKind::Call if strike < forward => {
            (OptionKind::Put, premium - df * (forward - strike))
        }
        OptionKind::Put if strike > forward => {
            (OptionKind::Call, premium - df * (strike - forward))
        }
        k => (k, premium),
    };
    if premium <= 0.0 {
        return Ok(0.0);
    }
    let price = |v: f64| black_price(forward, strike, maturity, v, df, kind);
    let mut lo = 0.0;
    let mut hi = 1.0;
    while price(hi) < premium {
        lo = hi;
        hi *= 2.0;
        if hi > 1e3 {
            return Err(Error::PremiumOutOfBounds {
                premium,
                lower,
                upper,
            });
        }
    }
    let sqrt_t = maturity.sqrt();
    let mut v = (2.0 * std::f64::consts::PI / maturity).sqrt() * premium / (df * forward);
    if !(v > lo && v < hi) {
        v = 0.5 * (lo + hi);
    }
    for _ in 0..200 {
        let diff = price(v) - premium;
        if diff == 0.0 {
            return Ok(v);
        }
        if diff > 0.0 {
            hi = v;
        } else {
            lo = v;
        }
        let q = BSQuote {
            forward,
            strike,
            maturity,
            vol: v,
            df,
        };
        let (d1, _) = q.d1_d2();
        let vega = df * forward * sqrt_t * pdf(d1);
        let mut next = v - diff / vega;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - v).abs() <= 1e-15 * v.max(1e-3) || hi - lo <= 1e-15 {
            return Ok(next);
        }
        v = next;
    }
    Ok(v)
}
