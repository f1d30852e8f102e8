//! Monte Carlo oracle: correlated Euler paths under local vol, Heston and the
//! Hull–White hybrid.
//!
//! Each path pair draws from its own ChaCha stream keyed by the seed and the pair
//! index, and partial sums are reduced in chunk order, so estimates do not depend on
//! the thread count.

mod heston;
mod hw;
mod lv;

pub use heston::mc_price_heston;
pub use hw::mc_price_hybrid_hw;
pub use lv::mc_price_lv;

use crate::error::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Path pairs per parallel work unit.
const CHUNK: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct McConfig {
    pub paths: usize,
    pub steps_per_year: usize,
    pub seed: u64,
    pub antithetic: bool,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            paths: 500_000,
            steps_per_year: 100,
            seed: 20_240_601,
            antithetic: true,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.paths < 2 {
            return Err(Error::param(
                "paths",
                self.paths as f64,
                "need at least two paths",
            ));
        }
        if self.antithetic && self.paths % 2 != 0 {
            return Err(Error::param(
                "paths",
                self.paths as f64,
                "must be even with antithetic sampling",
            ));
        }
        if self.steps_per_year == 0 {
            return Err(Error::param("steps_per_year", 0.0, "must be positive"));
        }
        Ok(())
    }

    /// Euler steps for a horizon `t`.
    pub fn steps_for(&self, t: f64) -> usize {
        ((self.steps_per_year as f64 * t).ceil() as usize).max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: f64,
    pub stderr: f64,
    pub paths: usize,
}

impl McEstimate {
    /// `|value - x|` in standard errors.
    pub fn z_score(&self, x: f64) -> f64 {
        if self.stderr == 0.0 {
            if self.value == x {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.value - x).abs() / self.stderr
        }
    }
}

/// Draws `normals` standard normals per path and averages `sample(z)` over the
/// configured paths, mirroring `z` for antithetic pairs.
pub(crate) fn run_paths<F>(cfg: &McConfig, normals: usize, sample: F) -> Result<McEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    cfg.validate()?;
    let units = if cfg.antithetic {
        cfg.paths / 2
    } else {
        cfg.paths
    };
    let chunks = units.div_ceil(CHUNK);
    let partials: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut z = vec![0.0; normals];
            let (mut sum, mut sq) = (0.0, 0.0);
            for unit in c * CHUNK..((c + 1) * CHUNK).min(units) {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(unit as u64);
                for v in z.iter_mut() {
                    *v = StandardNormal.sample(&mut rng);
                }
                let mut y = sample(&z);
                if cfg.antithetic {
                    z.iter_mut().for_each(|v| *v = -*v);
                    y = 0.5 * (y + sample(&z));
                }
                sum += y;
                sq += y * y;
            }
            (sum, sq)
        })
        .collect();
    let (sum, sq) = partials
        .iter()
        .fold((0.0, 0.0), |(a, b), (s, q)| (a + s, b + q));
    let n = units as f64;
    let mean = sum / n;
    if !mean.is_finite() {
        return Err(Error::NonFinite { step: 0, node: 0 });
    }
    let var = ((sq / n - mean * mean) * n / (n - 1.0).max(1.0)).max(0.0);
    Ok(McEstimate {
        value: mean,
        stderr: (var / n).sqrt(),
        paths: cfg.paths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(McConfig::default().validate().is_ok());
        assert!(McConfig {
            paths: 1,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(McConfig {
            paths: 11,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(McConfig {
            paths: 11,
            antithetic: false,
            ..Default::default()
        }
        .validate()
        .is_ok());
        assert_eq!(McConfig::default().steps_for(1.0), 100);
        assert_eq!(McConfig::default().steps_for(0.001), 1);
    }

    #[test]
    fn normal_moments() {
        let cfg = McConfig {
            paths: 200_000,
            antithetic: false,
            ..Default::default()
        };
        let m = run_paths(&cfg, 1, |z| z[0]).unwrap();
        assert!(m.value.abs() < 4.0 * m.stderr);
        let v = run_paths(&cfg, 1, |z| z[0] * z[0]).unwrap();
        assert!(v.z_score(1.0) < 4.0);
    }

    #[test]
    fn antithetic_cancels_odd_functions() {
        let cfg = McConfig {
            paths: 1000,
            ..Default::default()
        };
        let m = run_paths(&cfg, 3, |z| z[0] + 2.0 * z[2]).unwrap();
        assert_eq!(m.value, 0.0);
        assert_eq!(m.stderr, 0.0);
    }

    #[test]
    fn identical_across_thread_counts() {
        let cfg = McConfig {
            paths: 50_000,
            ..Default::default()
        };
        let f = |z: &[f64]| (z[0] + 0.3 * z[1]).exp();
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let a = one.install(|| run_paths(&cfg, 2, f)).unwrap();
        let b = four.install(|| run_paths(&cfg, 2, f)).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
    }
}
