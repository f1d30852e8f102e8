use super::decay_ratio;

/// Black vol of an equity with constant vol `sigma_s` under Hull–White rates.
pub fn hw_adjusted_vol(sigma_s: f64, sigma_r: f64, k: f64, rho_sr: f64, t: f64) -> f64 {
    let g1 = decay_ratio(k * t);
    let g2 = decay_ratio(2.0 * k * t);
    // 1 - g1 and 1 + g2 - 2 g1 both vanish as kt -> 0; expand there to keep precision
    let kt = k * t;
    let (a, b) = if kt.abs() < 1e-4 {
        (kt / 2.0 - kt * kt / 6.0, kt * kt / 3.0 - kt * kt * kt / 4.0)
    } else {
        (1.0 - g1, 1.0 + g2 - 2.0 * g1)
    };
    let var = sigma_s * sigma_s
        + 2.0 / k * sigma_s * sigma_r * rho_sr * a
        + sigma_r * sigma_r / (k * k) * b;
    var.max(0.0).sqrt()
}
