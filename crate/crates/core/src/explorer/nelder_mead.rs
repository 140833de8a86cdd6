use serde::{Deserialize, Serialize};

/// Reflection, expansion, contraction and shrink coefficients plus the
/// edge of the initial axis-aligned simplex.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplexParams {
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    pub edge: f64,
}

impl Default for SimplexParams {
    fn default() -> Self {
        SimplexParams {
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            edge: 0.3,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NmOutcome {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iterations: usize,
    /// Best value so far, sampled every `record_every` iterations and at exit.
    pub history: Vec<f64>,
    /// Stopped on simplex diameter rather than the iteration cap.
    pub converged: bool,
}

/// Derivative-free minimisation; stops when the simplex diameter drops to
/// `xtol`, the best value reaches `0`, or after `max_iter` iterations.
pub fn nelder_mead(
    f: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    p: &SimplexParams,
    max_iter: usize,
    xtol: f64,
    record_every: usize,
) -> NmOutcome {
    let d = x0.len();
    let mut pts: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..d {
        let mut v = x0.to_vec();
        v[i] += p.edge;
        pts.push(v);
    }
    let mut vals: Vec<f64> = pts.iter().map(|x| f(x)).collect();
    let mut history = Vec::new();
    let mut iterations = 0;
    let mut converged = false;

    let lerp = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> { a.iter().zip(b).map(|(a, b)| a + t * (b - a)).collect() };

    loop {
        let mut order: Vec<usize> = (0..=d).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        pts = order.iter().map(|&i| pts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();

        if record_every > 0 && iterations % record_every == 0 {
            history.push(vals[0]);
        }
        let diameter = pts[1..]
            .iter()
            .map(|x| x.iter().zip(&pts[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if diameter <= xtol || vals[0] == 0.0 {
            converged = true;
            break;
        }
        if iterations >= max_iter {
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; d];
        for x in &pts[..d] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / d as f64;
            }
        }
        let worst = pts[d].clone();
        let xr = lerp(&centroid, &worst, -p.reflection);
        let fr = f(&xr);
        if fr < vals[0] {
            let xe = lerp(&centroid, &worst, -p.reflection * p.expansion);
            let fe = f(&xe);
            if fe < fr {
                pts[d] = xe;
                vals[d] = fe;
            } else {
                pts[d] = xr;
                vals[d] = fr;
            }
            continue;
        }
        if fr < vals[d - 1] {
            pts[d] = xr;
            vals[d] = fr;
            continue;
        }
        let (xc, fc) = if fr < vals[d] {
            let xc = lerp(&centroid, &xr, p.contraction);
            let fc = f(&xc);
            (xc, fc)
        } else {
            let xc = lerp(&centroid, &worst, p.contraction);
            let fc = f(&xc);
            (xc, fc)
        };
        if fc < vals[d].min(fr) {
            pts[d] = xc;
            vals[d] = fc;
            continue;
        }
        let best = pts[0].clone();
        for i in 1..=d {
            pts[i] = lerp(&best, &pts[i], p.shrink);
            vals[i] = f(&pts[i]);
        }
    }
    if history.last() != Some(&vals[0]) {
        history.push(vals[0]);
    }
    NmOutcome {
        x: pts[0].clone(),
        fx: vals[0],
        iterations,
        history,
        converged,
    }
}
