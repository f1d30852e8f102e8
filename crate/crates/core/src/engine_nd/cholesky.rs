use crate::error::{Error, Result};

/// Radicands down to this value are treated as zero.
const PSD_TOL: f64 = -1e-12;

/// Lower-triangular factor of a 3×3 correlation matrix:
/// rows `(1,0,0)`, `(a,b,0)`, `(c,d,e)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cholesky3 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
}

pub fn cholesky3(r12: f64, r13: f64, r23: f64) -> Result<Cholesky3> {
    for (name, r) in [("r12", r12), ("r13", r13), ("r23", r23)] {
        if !(r.abs() <= 1.0) {
            return Err(Error::param(name, r, "correlation must lie in [-1, 1]"));
        }
    }
    let b2 = 1.0 - r12 * r12;
    if b2 < 1e-5 {
        return Err(Error::DegenerateCorrelation(format!(
            "|r12| = {} leaves no independent second factor",
            r12.abs()
        )));
    }
    let b = b2.sqrt();
    let d = (r23 - r13 * r12) / b;
    let e2 = 1.0 - r13 * r13 - d * d;
    if e2 < PSD_TOL {
        return Err(Error::NotPositiveSemiDefinite(format!(
            "r12={r12}, r13={r13}, r23={r23} (residual variance {e2:.3e})"
        )));
    }
    Ok(Cholesky3 {
        a: r12,
        b,
        c: r13,
        d,
        e: e2.max(0.0).sqrt(),
    })
}

/// Checks a 2×2 correlation.
pub fn check_correlation(name: &'static str, rho: f64) -> Result<()> {
    if !(rho.abs() <= 1.0) {
        return Err(Error::NotPositiveSemiDefinite(format!(
            "{name} = {rho} outside [-1, 1]"
        )));
    }
    if rho.abs() == 1.0 {
        log::warn!("{name} = {rho}: one stencil direction collapses");
    }
    Ok(())
}
