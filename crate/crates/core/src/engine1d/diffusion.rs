use crate::market::{ImpliedVol, LocalVolSurface};

/// `dX = μ(X,t) dt + σ(X,t) dW`.
pub trait Diffusion1D: Sync {
    /// `(μ, σ)` at state `x` and time `t`.
    fn coefficients(&self, x: f64, t: f64) -> (f64, f64);

    /// Coefficients for a whole slice; override when a batch is cheaper.
    fn fill_coefficients(&self, xs: &[f64], t: f64, mu: &mut [f64], sigma: &mut [f64]) {
        for ((x, m), s) in xs.iter().zip(mu.iter_mut()).zip(sigma.iter_mut()) {
            (*m, *s) = self.coefficients(*x, t);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantDiffusion {
    pub mu: f64,
    pub sigma: f64,
}

impl ConstantDiffusion {
    /// Log-forward dynamics of a constant-vol asset: `μ = -σ²/2`.
    pub fn lognormal(sigma: f64) -> Self {
        Self {
            mu: -0.5 * sigma * sigma,
            sigma,
        }
    }
}

impl Diffusion1D for ConstantDiffusion {
    fn coefficients(&self, _x: f64, _t: f64) -> (f64, f64) {
        (self.mu, self.sigma)
    }
}

pub struct FnDiffusion<F>(pub F);

impl<F: Fn(f64, f64) -> (f64, f64) + Sync> Diffusion1D for FnDiffusion<F> {
    fn coefficients(&self, x: f64, t: f64) -> (f64, f64) {
        (self.0)(x, t)
    }
}

/// Local-vol dynamics of `x = ln(S/F(t))`: `μ = -Σ²/2`, `σ = Σ(F(t)eˣ, t)`.
pub struct LocalVolDiffusion<S> {
    lv: LocalVolSurface<S>,
}

impl<S: ImpliedVol> LocalVolDiffusion<S> {
    pub fn new(lv: LocalVolSurface<S>) -> Self {
        Self { lv }
    }

    pub fn surface(&self) -> &LocalVolSurface<S> {
        &self.lv
    }
}

impl<S: ImpliedVol> Diffusion1D for LocalVolDiffusion<S> {
    fn coefficients(&self, x: f64, t: f64) -> (f64, f64) {
        let sigma = self.lv.local_vol_at_state(x, t);
        (-0.5 * sigma * sigma, sigma)
    }

    fn fill_coefficients(&self, xs: &[f64], t: f64, mu: &mut [f64], sigma: &mut [f64]) {
        let fwd = self.lv.forward(t.max(crate::market::LV_MIN_TIME));
        for ((x, m), s) in xs.iter().zip(mu.iter_mut()).zip(sigma.iter_mut()) {
            let v = self.lv.local_vol(fwd * x.exp(), t);
            *s = v;
            *m = -0.5 * v * v;
        }
    }
}
