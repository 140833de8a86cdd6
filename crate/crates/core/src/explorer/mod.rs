//! Seeded sampling experiments: Schoenberg surveillance, identity sweeps
//! and a multistart search for non-trivial CA polynomials.
//!
//! Trial `t` of a run seeded with `s` draws from its own ChaCha8 stream
//! `(s, t)`, so results do not depend on scheduling.

mod nelder_mead;
mod schoenberg;
mod search;
mod sweep;

pub use nelder_mead::{nelder_mead, NmOutcome, SimplexParams};
pub use schoenberg::{schoenberg_experiment, EqualityCase, SchoenbergRow, SchoenbergSummary};
pub use search::{
    ca_objective, ca_search, rationalize, search_restart, CandidateBundle, Classification, RestartSummary,
    SearchConfig, SearchResult,
};
pub use sweep::{identity_sweep, SweepRow};

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::poly::RootMultiset;

/// Generator for trial `t` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, t: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(t);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Distribution {
    UniformUnitDisk,
    Gaussian,
    RealInterval,
}

impl Distribution {
    pub const ALL: [Distribution; 3] = [
        Distribution::UniformUnitDisk,
        Distribution::Gaussian,
        Distribution::RealInterval,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Distribution::UniformUnitDisk => "uniform-unit-disk",
            Distribution::Gaussian => "gaussian",
            Distribution::RealInterval => "real-interval",
        }
    }

    /// One root: uniform on `|z| <= 1`, standard complex normal, or
    /// uniform on `[-1, 1]`.
    pub fn draw<R: Rng>(self, rng: &mut R) -> Complex64 {
        match self {
            Distribution::UniformUnitDisk => {
                let r = rng.random::<f64>().sqrt();
                let th = std::f64::consts::TAU * rng.random::<f64>();
                Complex64::from_polar(r, th)
            }
            Distribution::Gaussian => Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)),
            Distribution::RealInterval => Complex64::new(rng.random_range(-1.0..=1.0), 0.0),
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Distribution::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| Error::Parse { token: s.to_string() })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub degree: usize,
    pub trials: usize,
    pub seed: u64,
    pub distribution: Distribution,
}

impl SampleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.degree < 2 {
            return domain("sample degree must be at least 2");
        }
        if self.trials == 0 {
            return domain("trials must be positive");
        }
        Ok(())
    }
}

/// Roots of trial `t`.
pub fn sample_trial(cfg: &SampleConfig, t: usize) -> RootMultiset<Complex64> {
    let mut rng = trial_rng(cfg.seed, t as u64);
    let roots: Vec<Complex64> = (0..cfg.degree).map(|_| cfg.distribution.draw(&mut rng)).collect();
    RootMultiset::from_list(&roots)
}

/// All trials in index order.
pub fn sample_roots(cfg: &SampleConfig) -> Result<Vec<RootMultiset<Complex64>>> {
    cfg.validate()?;
    Ok((0..cfg.trials).into_par_iter().map(|t| sample_trial(cfg, t)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_contract() {
        let cfg = SampleConfig {
            degree: 4,
            trials: 3,
            seed: 11,
            distribution: Distribution::UniformUnitDisk,
        };
        let a = sample_roots(&cfg).unwrap();
        assert_eq!(a, sample_roots(&cfg).unwrap());
        assert_eq!(a.len(), 3);
        for rs in &a {
            assert_eq!(rs.degree(), 4);
            assert!(rs.distinct().all(|z| z.norm() <= 1.0));
        }
        assert_eq!(a[2], sample_trial(&cfg, 2));
        let other = sample_roots(&SampleConfig { seed: 12, ..cfg }).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn real_interval_is_real() {
        let cfg = SampleConfig {
            degree: 6,
            trials: 20,
            seed: 3,
            distribution: Distribution::RealInterval,
        };
        for rs in sample_roots(&cfg).unwrap() {
            assert!(rs.distinct().all(|z| z.im == 0.0 && z.re.abs() <= 1.0));
        }
    }

    #[test]
    fn distribution_names_round_trip() {
        for d in Distribution::ALL {
            assert_eq!(d.name().parse::<Distribution>().unwrap(), d);
        }
        assert!("uniform".parse::<Distribution>().is_err());
    }
}
