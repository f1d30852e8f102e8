//! Equal-weight stencils whose increments match the diffusion's first two moments.

use crate::engine_nd::Cholesky3;

/// Three equiprobable increments `μdt + {+1, 0, -1}·σ√(3/2·dt)`.
#[inline]
pub fn trinomial(mu: f64, sigma: f64, dt: f64) -> [f64; 3] {
    let h = sigma * (1.5 * dt).sqrt();
    let m = mu * dt;
    [m + h, m, m - h]
}

/// Spreads of the two-factor five-point stencil: `(co-move, counter-move)` factors
/// `√(5/4·(1±ρ)·dt)`.
#[inline]
pub fn five_point_factors(rho: f64, dt: f64) -> (f64, f64) {
    (
        (1.25 * (1.0 + rho) * dt).sqrt(),
        (1.25 * (1.0 - rho) * dt).sqrt(),
    )
}

/// Five equiprobable joint increments: centre, up-up, up-down, down-up, down-down.
#[inline]
pub fn five_point(mu: [f64; 2], sigma: [f64; 2], rho: f64, dt: f64) -> [[f64; 2]; 5] {
    let (co, counter) = five_point_factors(rho, dt);
    let m = [mu[0] * dt, mu[1] * dt];
    [
        [m[0], m[1]],
        [m[0] + sigma[0] * co, m[1] + sigma[1] * co],
        [m[0] + sigma[0] * counter, m[1] - sigma[1] * counter],
        [m[0] - sigma[0] * counter, m[1] + sigma[1] * counter],
        [m[0] - sigma[0] * co, m[1] - sigma[1] * co],
    ]
}

/// Unit-variance directions of the nine-point stencil (centre first), before scaling by
/// `σᵢ√(9/8·dt)`.
pub fn nine_point_directions(ch: &Cholesky3) -> [[f64; 3]; 9] {
    let Cholesky3 { a, b, c, d, e } = *ch;
    let half = [
        [1.0, a + b, c + d + e],
        [1.0, a + b, c + d - e],
        [1.0, a - b, c - d + e],
        [1.0, a - b, c - d - e],
    ];
    let mut out = [[0.0; 3]; 9];
    for (k, row) in half.iter().enumerate() {
        out[1 + k] = *row;
        out[5 + k] = [-row[0], -row[1], -row[2]];
    }
    out
}

/// Nine equiprobable joint increments.
pub fn nine_point(mu: [f64; 3], sigma: [f64; 3], ch: &Cholesky3, dt: f64) -> [[f64; 3]; 9] {
    let scale = (1.125 * dt).sqrt();
    let dirs = nine_point_directions(ch);
    let mut out = [[0.0; 3]; 9];
    for (o, d) in out.iter_mut().zip(dirs.iter()) {
        for i in 0..3 {
            o[i] = mu[i] * dt + d[i] * sigma[i] * scale;
        }
    }
    out
}
