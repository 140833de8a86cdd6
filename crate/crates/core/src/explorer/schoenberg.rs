use rayon::prelude::*;
use serde::Serialize;

use super::{sample_trial, SampleConfig};
use crate::error::Result;
use crate::identities::schoenberg_gap_of_roots;
use crate::numeric::Tolerance;

/// Gaps below `-GAP_BAND` are violations; `|gap| <= GAP_BAND` are equality cases.
pub const GAP_BAND: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchoenbergRow {
    pub trial: usize,
    pub seed: u64,
    pub degree: usize,
    pub gap: f64,
    pub scale: f64,
    pub collinear_through_origin: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EqualityCase {
    pub trial: usize,
    pub gap: f64,
    pub collinear_through_origin: bool,
}

/// Reduction over all trials, merged in trial order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchoenbergSummary {
    pub config: SampleConfig,
    pub min_gap: f64,
    /// Trial index of `min_gap`; regenerate with `sample_trial(config, t)`.
    pub min_gap_trial: usize,
    pub violation_count: usize,
    pub violations: Vec<usize>,
    pub equality_count: usize,
    pub equality_cases: Vec<EqualityCase>,
    /// Every equality case lies on a line through the origin.
    pub equality_all_collinear: bool,
}

/// Schoenberg gap of every sampled root set.
pub fn schoenberg_experiment(cfg: &SampleConfig) -> Result<(SchoenbergSummary, Vec<SchoenbergRow>)> {
    cfg.validate()?;
    let tol = Tolerance::new(GAP_BAND, GAP_BAND)?;
    let rows: Vec<SchoenbergRow> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let rs = sample_trial(cfg, t);
            let g = schoenberg_gap_of_roots(&rs, &tol)?;
            Ok(SchoenbergRow {
                trial: t,
                seed: cfg.seed,
                degree: g.degree,
                gap: g.gap,
                scale: g.scale,
                collinear_through_origin: g.rectilinearity.collinear_through_origin,
            })
        })
        .collect::<Result<_>>()?;

    let (mut min_gap, mut min_gap_trial) = (f64::INFINITY, 0);
    let mut violations = Vec::new();
    let mut equality_cases = Vec::new();
    for r in &rows {
        if r.gap < min_gap {
            min_gap = r.gap;
            min_gap_trial = r.trial;
        }
        if r.gap < -GAP_BAND {
            violations.push(r.trial);
        } else if r.gap <= GAP_BAND {
            equality_cases.push(EqualityCase {
                trial: r.trial,
                gap: r.gap,
                collinear_through_origin: r.collinear_through_origin,
            });
        }
    }
    let summary = SchoenbergSummary {
        config: *cfg,
        min_gap,
        min_gap_trial,
        violation_count: violations.len(),
        violations,
        equality_count: equality_cases.len(),
        equality_all_collinear: equality_cases.iter().all(|e| e.collinear_through_origin),
        equality_cases,
    };
    Ok((summary, rows))
}
