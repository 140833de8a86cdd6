use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{nelder_mead, trial_rng, Distribution, SimplexParams};
use crate::ca::{ca_check, Mode, Verdict};
use crate::error::{domain, Result};
use crate::numeric::{GaussianRational, Scalar, Tolerance};
use crate::poly::{roots_numeric, Poly, RootMultiset};

/// Edge of the polishing simplex after rescaling to `max|root| = 1`.
const POLISH_EDGE: f64 = 0.01;
/// Denominator cap for candidate rationalisation.
const MAX_DENOMINATOR: i64 = 10_000;
const RECORD_EVERY: usize = 25;
/// Restart edge as a fraction of the current largest root modulus.
const RELATIVE_EDGE: f64 = 0.3;
/// Iterations per main-run pass, per parameter.
const PASS_FACTOR: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub degree: usize,
    pub restarts: usize,
    pub max_iterations: usize,
    pub objective_tolerance: f64,
    pub dispersion_threshold: f64,
    pub simplex: SimplexParams,
    pub seed: u64,
}

impl SearchConfig {
    pub fn new(degree: usize, restarts: usize, seed: u64) -> Self {
        SearchConfig {
            degree,
            restarts,
            max_iterations: 10_000,
            objective_tolerance: 1e-10,
            dispersion_threshold: 1e-6,
            simplex: SimplexParams::default(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree < 2 {
            return domain("search degree must be at least 2");
        }
        if self.restarts == 0 || self.max_iterations == 0 {
            return domain("restarts and max_iterations must be positive");
        }
        if !(self.objective_tolerance > 0.0 && self.dispersion_threshold > 0.0) {
            return domain("search tolerances must be positive");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    TrivialBasin,
    Candidate,
    NonConverged,
}

impl Classification {
    fn of(objective: f64, dispersion: f64, cfg: &SearchConfig) -> Self {
        match (objective < cfg.objective_tolerance, dispersion > cfg.dispersion_threshold) {
            (true, false) => Classification::TrivialBasin,
            (true, true) => Classification::Candidate,
            (false, _) => Classification::NonConverged,
        }
    }
}

/// One restart. `history` is the best-so-far objective of the main run;
/// `polish_history` that of the unit-scale polish, when one ran.
///
/// A main run stopped by the iteration cap is `NonConverged`. A converged
/// run whose roots did not collapse is rescaled to `max|root| = 1` and
/// polished; `objective` and `dispersion` then refer to the polished roots.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RestartSummary {
    pub restart: usize,
    pub start_objective: f64,
    pub iterations: usize,
    pub converged: bool,
    pub raw_objective: f64,
    pub objective: f64,
    pub dispersion: f64,
    pub classification: Classification,
    pub roots: Vec<Scalar>,
    pub history: Vec<f64>,
    pub polish_history: Vec<f64>,
    /// Exact verdict of the rationalised roots (candidates only).
    pub confirmation: Option<Verdict>,
}

/// Everything needed to replay a candidate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CandidateBundle {
    pub seed: u64,
    pub restart: usize,
    pub degree: usize,
    pub objective: f64,
    pub roots: Vec<Scalar>,
    pub confirmation: Option<Verdict>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchResult {
    pub config: SearchConfig,
    pub best_objective: f64,
    pub argmin_roots: Vec<Scalar>,
    pub dispersion: f64,
    pub classification: Classification,
    pub trivial_basin_count: usize,
    pub candidate_count: usize,
    pub non_converged_count: usize,
    pub candidates: Vec<CandidateBundle>,
    pub trace: Vec<RestartSummary>,
}

/// `Σ_{j=1..n-1} min_w |f(w)|² / (1 + max|a_k|)²` over the roots `w` of
/// `f^{(j)}`, with `f` monic on `roots`.
///
/// `f(w)` is evaluated as `Π (w - λ)`. A root repeated more than `j` times
/// in the input is itself a root of `f^{(j)}`, so trivial inputs give
/// exactly `0`.
pub fn ca_objective(roots: &[Complex64]) -> f64 {
    let n = roots.len();
    if n < 2 {
        return 0.0;
    }
    if roots.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return f64::INFINITY;
    }
    let rho = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if rho == 0.0 {
        return 0.0;
    }
    let rs = RootMultiset::from_list(roots);
    let scale = (1.0 + Poly::from_roots(roots).max_coeff_modulus()).powi(2);
    let unit: Vec<Complex64> = roots.iter().map(|z| z / rho).collect();
    let g = Poly::from_roots(&unit);
    let value_sq = |w: Complex64| roots.iter().map(|l| (w - l).norm_sqr()).product::<f64>();

    let mut total = 0.0;
    for j in 1..n {
        if rs.entries().iter().any(|(_, r)| *r > j) {
            continue;
        }
        let ws = match roots_numeric(&g.derivative(j)) {
            Ok(d) => d.roots,
            Err(_) => return f64::INFINITY,
        };
        total += ws.iter().map(|w| value_sq(w * rho)).fold(f64::INFINITY, f64::min);
    }
    total / scale
}

/// Max pairwise distance.
fn dispersion(roots: &[Complex64]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, a) in roots.iter().enumerate() {
        for b in &roots[i + 1..] {
            d = d.max((a - b).norm());
        }
    }
    d
}

/// `[0, x_0 + i x_1, x_2 + i x_3, …]`
fn unpack(x: &[f64]) -> Vec<Complex64> {
    std::iter::once(Complex64::new(0.0, 0.0))
        .chain(x.chunks(2).map(|c| Complex64::new(c[0], c[1])))
        .collect()
}

fn pack(roots: &[Complex64]) -> Vec<f64> {
    roots[1..].iter().flat_map(|z| [z.re - roots[0].re, z.im - roots[0].im]).collect()
}

fn to_unit(roots: &[Complex64]) -> Vec<Complex64> {
    let rho = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if rho == 0.0 {
        return roots.to_vec();
    }
    roots.iter().map(|z| z / rho).collect()
}

/// Best rational approximation with denominator at most `max_den`, from the
/// continued-fraction convergents of `x`.
pub fn rationalize(x: f64, max_den: i64) -> (i64, i64) {
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i64;
        let (h2, k2) = (a.saturating_mul(h1).saturating_add(h0), a.saturating_mul(k1).saturating_add(k0));
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a as f64;
        if frac.abs() < 1e-12 {
            break;
        }
        r = 1.0 / frac;
    }
    if k1 == 0 {
        (x.round() as i64, 1)
    } else {
        (h1, k1)
    }
}

fn confirm(roots: &[Complex64]) -> Option<Verdict> {
    let q = |v: f64| {
        let (p, d) = rationalize(v, MAX_DENOMINATOR);
        BigRational::new(BigInt::from(p), BigInt::from(d))
    };
    let exact: Vec<GaussianRational> = roots.iter().map(|z| GaussianRational::new(q(z.re), q(z.im))).collect();
    ca_check(&Poly::from_roots(&exact), Mode::Exact, &Tolerance::default())
        .ok()
        .map(|r| r.verdict)
}

/// Restart `restart`; `start` overrides the random initial roots (the
/// first root is shifted to `0`).
pub fn search_restart(cfg: &SearchConfig, restart: usize, start: Option<&[Complex64]>) -> RestartSummary {
    let n = cfg.degree;
    let x0 = match start {
        Some(s) => pack(s),
        None => {
            let mut rng = trial_rng(cfg.seed, restart as u64);
            let roots: Vec<Complex64> = std::iter::once(Complex64::new(0.0, 0.0))
                .chain((1..n).map(|_| Distribution::UniformUnitDisk.draw(&mut rng)))
                .collect();
            pack(&roots)
        }
    };
    let objective = |x: &[f64]| ca_objective(&unpack(x));
    let start_objective = objective(&x0);
    let xtol = cfg.dispersion_threshold * 1e-3;

    // Simplices stall once the roots are much smaller than the edge, so the
    // main run restarts from its best point with an edge relative to the
    // current root scale.
    let mut x = x0;
    let mut fx = start_objective;
    let mut history = Vec::new();
    let mut iterations = 0;
    let mut edge = cfg.simplex.edge;
    let converged = loop {
        let params = SimplexParams { edge, ..cfg.simplex };
        let pass = (PASS_FACTOR * x.len()).min(cfg.max_iterations - iterations);
        let out = nelder_mead(objective, &x, &params, pass, xtol, RECORD_EVERY);
        iterations += out.iterations;
        for &v in &out.history {
            if history.last().is_none_or(|&l| v < l) {
                history.push(v);
            }
        }
        x = out.x;
        fx = fx.min(out.fx);
        let roots = unpack(&x);
        let scale = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let collapsed = dispersion(&roots) <= cfg.dispersion_threshold;
        if fx == 0.0 || (out.converged && collapsed) {
            break true;
        }
        if iterations >= cfg.max_iterations {
            break out.converged;
        }
        edge = RELATIVE_EDGE * scale;
    };
    if history.last() != Some(&fx) {
        history.push(fx);
    }
    let raw = unpack(&x);
    let raw_dispersion = dispersion(&raw);

    let (roots, objective_value, polish_history) = if !converged || raw_dispersion <= cfg.dispersion_threshold {
        (raw, fx, Vec::new())
    } else {
        let unit = to_unit(&raw);
        let polish_params = SimplexParams {
            edge: POLISH_EDGE,
            ..cfg.simplex
        };
        let scaled = |x: &[f64]| ca_objective(&to_unit(&unpack(x)));
        let polish = nelder_mead(scaled, &pack(&unit), &polish_params, cfg.max_iterations, 1e-12, RECORD_EVERY);
        let polished = to_unit(&unpack(&polish.x));
        let v = ca_objective(&polished);
        (polished, v, polish.history)
    };
    let disp = dispersion(&roots);
    let classification = if converged {
        Classification::of(objective_value, disp, cfg)
    } else {
        Classification::NonConverged
    };
    let confirmation = (classification == Classification::Candidate).then(|| confirm(&roots)).flatten();
    RestartSummary {
        restart,
        start_objective,
        iterations,
        converged,
        raw_objective: fx,
        objective: objective_value,
        dispersion: disp,
        classification,
        roots: roots.into_iter().map(Scalar::Float).collect(),
        history,
        polish_history,
        confirmation,
    }
}

/// Multistart search over `λ_2..λ_n` with `λ_1 = 0`.
pub fn ca_search(cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    let trace: Vec<RestartSummary> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| search_restart(cfg, r, None))
        .collect();
    let best = trace
        .iter()
        .min_by(|a, b| a.objective.total_cmp(&b.objective))
        .expect("at least one restart");
    let count = |c: Classification| trace.iter().filter(|r| r.classification == c).count();
    let candidates = trace
        .iter()
        .filter(|r| r.classification == Classification::Candidate)
        .map(|r| CandidateBundle {
            seed: cfg.seed,
            restart: r.restart,
            degree: cfg.degree,
            objective: r.objective,
            roots: r.roots.clone(),
            confirmation: r.confirmation,
        })
        .collect();
    Ok(SearchResult {
        config: *cfg,
        best_objective: best.objective,
        argmin_roots: best.roots.clone(),
        dispersion: best.dispersion,
        classification: best.classification,
        trivial_basin_count: count(Classification::TrivialBasin),
        candidate_count: count(Classification::Candidate),
        non_converged_count: count(Classification::NonConverged),
        candidates,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn objective_examples() {
        assert_eq!(ca_objective(&[c(0.0, 0.0), c(1.0, 0.0)]), 1.0 / 16.0 / 4.0);
        for n in 2..=12 {
            assert_eq!(ca_objective(&vec![c(0.3, -1.7); n]), 0.0);
        }
        assert!(ca_objective(&[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)]) > 0.0);
    }

    #[test]
    fn rationalize_examples() {
        assert_eq!(rationalize(0.5, 100), (1, 2));
        assert_eq!(rationalize(-0.75, 100), (-3, 4));
        assert_eq!(rationalize(std::f64::consts::PI, 1000), (355, 113));
        assert_eq!(rationalize(3.0, 10), (3, 1));
        assert_eq!(rationalize(1.0 / 3.0 + 1e-9, 10_000), (1, 3));
    }

    #[test]
    fn trivial_start_converges_immediately() {
        let cfg = SearchConfig::new(5, 1, 0);
        let r = search_restart(&cfg, 0, Some(&vec![c(0.0, 0.0); 5]));
        assert_eq!(r.objective, 0.0);
        assert_eq!(r.iterations, 0);
        assert_eq!(r.classification, Classification::TrivialBasin);
    }

    #[test]
    fn small_search_is_deterministic_and_trivial() {
        let cfg = SearchConfig::new(4, 4, 7);
        let a = ca_search(&cfg).unwrap();
        assert_eq!(a, ca_search(&cfg).unwrap());
        assert_eq!(a.candidate_count, 0);
        for r in &a.trace {
            assert!(r.history.windows(2).all(|w| w[1] <= w[0]));
        }
    }
}
