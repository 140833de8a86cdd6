use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{trial_rng, Distribution};
use crate::error::{domain, Error, Result};
use crate::goncharov::NodeSequence;
use crate::identities::{
    hoppe_log_derivative, laguerre_check, moment_identity, newton_like_aggregate, sz_nagy_check, viete_check,
    IdentityId, IdentityReport, MomentParams, SubcentroidChoice,
};
use crate::numeric::Tolerance;
use crate::poly::{Poly, RootMultiset};

/// Redraws allowed when a sample misses the identity's hypotheses.
const MAX_ATTEMPTS: u64 = 64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub identity_id: IdentityId,
    pub trial: usize,
    pub degree: usize,
    pub seed: u64,
    pub residual: f64,
    pub scale: f64,
    pub passed: bool,
}

/// `trials` float samples satisfying the hypotheses of `id`, degrees
/// `3..=max_degree`.
///
/// Trial `t` draws from stream `t · MAX_ATTEMPTS + attempt`.
pub fn identity_sweep(
    id: IdentityId,
    trials: usize,
    seed: u64,
    max_degree: usize,
    tol: &Tolerance,
) -> Result<Vec<SweepRow>> {
    if max_degree < 4 {
        return domain("max_degree must be at least 4");
    }
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut last = None;
            for attempt in 0..MAX_ATTEMPTS {
                let mut rng = trial_rng(seed, t as u64 * MAX_ATTEMPTS + attempt);
                let degree = rng.random_range(3..=max_degree);
                match trial(id, degree, &mut rng, tol) {
                    Ok((rep, degree)) => {
                        return Ok(SweepRow {
                            identity_id: id,
                            trial: t,
                            degree,
                            seed,
                            residual: rep.residual,
                            scale: rep.scale,
                            passed: rep.passed,
                        })
                    }
                    Err(e @ Error::Domain(_)) => last = Some(e),
                    Err(e) => return Err(e),
                }
            }
            Err(last.expect("at least one attempt"))
        })
        .collect()
}

fn disk(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> Vec<Complex64> {
    (0..n).map(|_| Distribution::UniformUnitDisk.draw(rng) * radius).collect()
}

/// `n` reals in `[-2, 2)` pairwise more than `0.05` apart.
fn distinct_reals(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    let mut xs: Vec<f64> = Vec::with_capacity(n);
    while xs.len() < n {
        let x = rng.random_range(-2.0..2.0);
        if xs.iter().all(|y| (x - y).abs() > 0.05) {
            xs.push(x);
        }
    }
    xs.into_iter().map(|x| Complex64::new(x, 0.0)).collect()
}

/// The report and the actual degree of the sampled polynomial.
fn trial(id: IdentityId, n: usize, rng: &mut ChaCha8Rng, tol: &Tolerance) -> Result<(IdentityReport, usize)> {
    let z = disk(rng, 1, 2.0)[0];
    let rep = match id {
        IdentityId::Eq19 => {
            let mut nodes = disk(rng, n, 2.0);
            nodes[0] = Complex64::new(0.0, 0.0);
            let k = rng.random_range(1..=4);
            newton_like_aggregate(&NodeSequence::new(nodes)?, &disk(rng, k, 2.0), tol)
        }
        IdentityId::Eq20 => {
            let k = rng.random_range(2..n);
            let others = disk(rng, k - 1, 2.0);
            let mults: Vec<usize> = (0..k).map(|_| rng.random_range(1..=3)).collect();
            let rest: usize = mults[1..].iter().sum();
            let weighted: Complex64 = others.iter().zip(&mults[1..]).map(|(l, r)| l * *r as f64).sum();
            let shared = weighted / rest as f64;
            let mut entries = vec![(shared, mults[0])];
            entries.extend(others.into_iter().zip(mults[1..].iter().copied()));
            let rs = RootMultiset::new(entries)?;
            return Ok((viete_check(&rs, &shared, tol)?, rs.degree()));
        }
        IdentityId::Eq21 => {
            let f = Poly::from_roots(&disk(rng, n, 2.0));
            let m = rng.random_range(1..=n - 2);
            let choice = SubcentroidChoice::BOTH[rng.random_range(0..2)];
            let r = sz_nagy_check(&f, m, &z, choice, tol)?;
            let worse = if r.left_middle.residual / r.left_middle.scale.max(f64::MIN_POSITIVE)
                >= r.left_right.residual / r.left_right.scale.max(f64::MIN_POSITIVE)
            {
                r.left_middle.clone()
            } else {
                r.left_right.clone()
            };
            Ok(IdentityReport {
                passed: r.passed(),
                ..worse
            })
        }
        IdentityId::Eq22 | IdentityId::Eq24 | IdentityId::Eq25 => {
            let f = Poly::from_roots(&disk(rng, n, 2.0));
            moment_identity(&f, id, MomentParams::default(), tol)
        }
        IdentityId::Eq26 | IdentityId::Eq27 | IdentityId::Eq28 => {
            let dir = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::PI));
            let roots: Vec<Complex64> = distinct_reals(rng, n).into_iter().map(|x| dir * x).collect();
            moment_identity(&Poly::from_roots(&roots), id, MomentParams::default(), tol)
        }
        IdentityId::Eq30 => {
            let f = Poly::from_roots(&disk(rng, n, 2.0));
            let m = rng.random_range(1..n);
            moment_identity(&f, id, MomentParams { m, s: 0 }, tol)
        }
        IdentityId::Eq31 => {
            let f = Poly::from_roots(&disk(rng, n, 1.0));
            let m = rng.random_range(0..=5);
            let w = Complex64::from_polar(rng.random_range(1.2..2.0), rng.random_range(0.0..std::f64::consts::TAU));
            hoppe_log_derivative(&f, m, &w, tol)
        }
        IdentityId::Eq33 => {
            let f = Poly::from_roots(&distinct_reals(rng, n));
            laguerre_check(&f, &Complex64::new(rng.random_range(-2.5..2.5), 0.0), tol)
        }
        IdentityId::Eq34 => {
            let f = Poly::from_roots(&distinct_reals(rng, n));
            let s = rng.random_range(2..n);
            let m = rng.random_range(0..n - s);
            moment_identity(&f, id, MomentParams { m, s }, tol)
        }
    };
    Ok((rep?, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_identity_sweeps() {
        let tol = Tolerance::new(0.0, 1e-9).unwrap();
        for id in IdentityId::ALL {
            let rows = identity_sweep(id, 20, 1, 8, &tol).unwrap();
            assert_eq!(rows.len(), 20);
            for r in &rows {
                assert!(r.passed, "{r:?}");
            }
        }
    }

    #[test]
    fn sweeps_are_deterministic() {
        let tol = Tolerance::default();
        let a = identity_sweep(IdentityId::Eq25, 30, 4, 8, &tol).unwrap();
        assert_eq!(a, identity_sweep(IdentityId::Eq25, 30, 4, 8, &tol).unwrap());
    }
}
