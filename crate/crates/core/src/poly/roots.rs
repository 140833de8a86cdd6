//! Numeric root extraction: Aberth–Ehrlich with a companion-matrix fallback.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::Poly;
use crate::error::{domain, Error, Result};
use crate::numeric::Field;

const MAX_ITERATIONS: usize = 200;
/// Offset of the initial-guess circle, √2 − 1 radians.
const ROTATION: f64 = std::f64::consts::SQRT_2 - 1.0;
const RESIDUAL_FACTOR: f64 = 1e-10;

/// Roots `ξ_j^{(m)}` of the `m`-th derivative, repeats allowed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivativeRootSet {
    pub order: usize,
    pub roots: Vec<Complex64>,
}

/// All `deg f` complex roots of `f`.
///
/// Deterministic: guesses sit on a circle around the root centroid whose
/// radius is the Cauchy bound of the centred polynomial, rotated by a
/// fixed angle. Exactly vanishing low-order coefficients are deflated
/// first, so `z^k` factors yield exact zeros.
pub fn roots_numeric<T: Field>(f: &Poly<T>) -> Result<DerivativeRootSet> {
    match f.degree() {
        None | Some(0) => domain("root extraction needs degree >= 1"),
        Some(_) => Ok(DerivativeRootSet {
            order: 0,
            roots: find_roots(&f.to_c64())?,
        }),
    }
}

/// Roots of `f^{(m)}`; empty when `f^{(m)}` is a nonzero constant.
pub fn derivative_roots<T: Field>(f: &Poly<T>, m: usize) -> Result<DerivativeRootSet> {
    let d = f.derivative(m);
    let roots = match d.degree() {
        None => return domain(format!("derivative of order {m} vanishes identically")),
        Some(0) => Vec::new(),
        Some(_) => find_roots(&d.to_c64())?,
    };
    Ok(DerivativeRootSet { order: m, roots })
}

fn find_roots(f: &Poly<Complex64>) -> Result<Vec<Complex64>> {
    let c = f.coeffs();
    let n = c.len() - 1;
    let max_c = f.max_coeff_modulus();
    if !c.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return domain("non-finite coefficient");
    }
    if c[n].norm() <= 1e-14 * max_c {
        return domain("leading coefficient is numerically negligible");
    }
    let zeros = c.iter().take_while(|z| **z == Complex64::new(0.0, 0.0)).count();
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    let rest = &c[zeros..];
    let monic: Vec<Complex64> = rest.iter().map(|z| z / rest[rest.len() - 1]).collect();
    match monic.len() - 1 {
        0 => return Ok(roots),
        1 => {
            roots.push(-monic[0]);
            return Ok(roots);
        }
        _ => {}
    }

    let accept = |zs: &[Complex64]| worst_residual(c, max_c, zs);
    let (guess, _) = aberth(&monic);
    let worst = accept(&guess);
    if worst <= RESIDUAL_FACTOR {
        roots.extend(guess);
        return Ok(roots);
    }
    let fallback = companion_roots(&monic);
    let worst_fallback = accept(&fallback);
    if worst_fallback <= RESIDUAL_FACTOR {
        roots.extend(fallback);
        return Ok(roots);
    }
    Err(Error::NoConvergence {
        worst_residual: worst.min(worst_fallback),
    })
}

/// Largest `|f(z)| / ((1 + max|c|) · max(1,|z|)^n)` over the candidates.
fn worst_residual(c: &[Complex64], max_c: f64, zs: &[Complex64]) -> f64 {
    let n = (c.len() - 1) as i32;
    zs.iter()
        .map(|z| {
            let v = horner(c, *z).0.norm();
            v / ((1.0 + max_c) * z.norm().max(1.0).powi(n))
        })
        .fold(0.0, f64::max)
}

/// `(p(z), p'(z), Σ|a_k||z|^k)`
fn horner(a: &[Complex64], z: Complex64) -> (Complex64, Complex64, f64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut bound = 0.0;
    let r = z.norm();
    for c in a.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
        bound = bound * r + c.norm();
    }
    (p, dp, bound)
}

fn aberth(a: &[Complex64]) -> (Vec<Complex64>, bool) {
    let n = a.len() - 1;
    let centre = -a[n - 1] / n as f64;
    let shifted = taylor_shift(a, centre);
    let radius = 1.0 + shifted[..n].iter().map(|z| z.norm()).fold(0.0, f64::max);

    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / n as f64 + ROTATION;
            centre + Complex64::from_polar(radius, theta)
        })
        .collect();
    let mut done = vec![false; n];
    let eps = f64::EPSILON;

    for _ in 0..MAX_ITERATIONS {
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp, bound) = horner(a, z[i]);
            if p.norm() <= 4.0 * n as f64 * eps * bound {
                done[i] = true;
                continue;
            }
            let newton = if dp.norm() == 0.0 {
                // flat spot: nudge outward
                Complex64::new(eps.sqrt() * (1.0 + z[i].norm()), 0.0)
            } else {
                p / dp
            };
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let step = newton / (Complex64::new(1.0, 0.0) - newton * repulsion);
            if !(step.re.is_finite() && step.im.is_finite()) {
                continue;
            }
            z[i] -= step;
            if step.norm() <= 2.0 * eps * z[i].norm() {
                done[i] = true;
            }
        }
        if done.iter().all(|&d| d) {
            polish(a, &mut z);
            return (z, true);
        }
    }
    (z, false)
}

/// One Aberth correction per root after acceptance; the stopping test fires
/// as soon as `|p|` reaches the rounding floor, before the last full step.
fn polish(a: &[Complex64], z: &mut [Complex64]) {
    let one = Complex64::new(1.0, 0.0);
    for i in 0..z.len() {
        let (p, dp, _) = horner(a, z[i]);
        if p.norm() == 0.0 || dp.norm() == 0.0 {
            continue;
        }
        let newton = p / dp;
        let repulsion: Complex64 = (0..z.len())
            .filter(|&j| j != i && z[j] != z[i])
            .map(|j| (z[i] - z[j]).inv())
            .sum();
        let step = newton / (one - newton * repulsion);
        if step.re.is_finite() && step.im.is_finite() {
            z[i] -= step;
        }
    }
}

/// Coefficients of `p(w + s)`.
fn taylor_shift(a: &[Complex64], s: Complex64) -> Vec<Complex64> {
    let mut b = a.to_vec();
    let n = b.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = b[j + 1] * s;
            b[j] += t;
        }
    }
    b
}

fn companion_roots(a: &[Complex64]) -> Vec<Complex64> {
    let n = a.len() - 1;
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -a[i];
    }
    let schur = m.schur();
    let eig: Vec<Complex64> = match schur.eigenvalues() {
        Some(v) => v.iter().copied().collect(),
        None => {
            let (_, t) = schur.unpack();
            (0..n).map(|i| t[(i, i)]).collect()
        }
    };
    eig.into_iter()
        .map(|mut z| {
            for _ in 0..3 {
                let (p, dp, _) = horner(a, z);
                if dp.norm() == 0.0 {
                    break;
                }
                let next = z - p / dp;
                if !(next.re.is_finite() && next.im.is_finite()) {
                    break;
                }
                z = next;
            }
            z
        })
        .collect()
}
