use num_complex::Complex64;
use serde::Serialize;

use super::{is_trivial, shared_roots, Mode};
use crate::error::{domain, Result};
use crate::identities::{moment_identity, rectilinearity, IdentityId, IdentityReport, MomentParams};
use crate::numeric::{Field, Scalar, Tolerance};
use crate::poly::{root_multiset, roots_numeric, Poly, RootMultiset, DEFAULT_CLUSTER_TOL};

/// Which triviality criterion [`triviality_check`] applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Triviality {
    /// Roots on one line through the origin; trivial iff `f = a zⁿ`.
    Prop7,
    /// Roots share their real part.
    Prop8Vertical,
    /// Roots share their imaginary part.
    Prop8Horizontal,
}

fn root_list<T: Field>(f: &Poly<T>) -> Result<Vec<Complex64>> {
    if T::EXACT {
        Ok(root_multiset(f, &DEFAULT_CLUSTER_TOL)?.flatten())
    } else {
        Ok(roots_numeric(f)?.roots)
    }
}

/// Whether `f^{(n-2)}` has a double root (at `0` for [`Triviality::Prop7`]).
///
/// The answer is cross-checked against a direct triviality test.
///
/// # Panics
///
/// If the criterion and the direct test disagree.
pub fn triviality_check<T: Field>(f: &Poly<T>, criterion: Triviality, tol: &Tolerance) -> Result<bool> {
    let n = match f.degree() {
        Some(n) if n >= 2 => n,
        _ => return domain("polynomial degree must be at least 2"),
    };
    let roots = root_list(f)?;
    let reach = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
    let hypothesis = match criterion {
        Triviality::Prop7 => rectilinearity(&roots, tol).collinear_through_origin,
        Triviality::Prop8Vertical => roots.iter().all(|r| tol.accepts((r.re - roots[0].re).abs(), reach, 0.0)),
        Triviality::Prop8Horizontal => roots.iter().all(|r| tol.accepts((r.im - roots[0].im).abs(), reach, 0.0)),
    };
    if !hypothesis {
        return domain(match criterion {
            Triviality::Prop7 => "hypothesis failed: roots are not collinear through the origin",
            Triviality::Prop8Vertical => "hypothesis failed: roots are not on one vertical line",
            Triviality::Prop8Horizontal => "hypothesis failed: roots are not on one horizontal line",
        });
    }

    let q = f.derivative(n - 2);
    let (a, b, c) = (q.coeff(2), q.coeff(1), q.coeff(0));
    let am = a.modulus();
    let double = match criterion {
        Triviality::Prop7 if T::EXACT => b.is_zero() && c.is_zero(),
        Triviality::Prop7 => {
            tol.accepts(b.modulus(), am * reach, 0.0) && tol.accepts(c.modulus(), am * reach * reach, 0.0)
        }
        _ => {
            let disc = b.clone() * b.clone() - T::from_i64(4) * a.clone() * c.clone();
            if T::EXACT {
                disc.is_zero()
            } else {
                tol.accepts(disc.modulus(), b.modulus().powi(2), 4.0 * am * c.modulus())
            }
        }
    };

    let direct = is_trivial(f, tol)?
        && match criterion {
            Triviality::Prop7 => {
                let shift = f.coeff(n - 1) / f.leading().cloned().expect("nonzero");
                if T::EXACT {
                    shift.is_zero()
                } else {
                    tol.accepts(shift.modulus(), reach, 0.0)
                }
            }
            _ => true,
        };
    assert_eq!(
        double, direct,
        "triviality criterion {criterion:?} contradicts the direct test"
    );
    Ok(double)
}

/// Outcome of the disk-exclusion test around `λ₁`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiskExclusionReport {
    pub mu: f64,
    pub lambda1: Scalar,
    /// Every `λ_j ≠ λ₁` lies in `{|z - λ₁ - 1| <= μ}`.
    pub all_inside: bool,
    pub lower_bound_value: f64,
    /// `|Σ_{j≥2} r_j (λ_j - λ₁)|`
    pub viete_modulus: f64,
    pub contradiction: bool,
}

/// `t e^{1-t}` with `t = (1-μ)/(2μ) · ln((1+μ)/(1-μ))`.
pub fn prop6_constant(mu: f64) -> Result<f64> {
    if !(mu > 0.0 && mu < 1.0) {
        return domain(format!("mu = {mu} outside (0, 1)"));
    }
    let t = (1.0 - mu) / mu * mu.atanh();
    Ok(t * (1.0 - t).exp())
}

/// `prop6_constant(μ) · Π_{j≥2} |λ_j - λ₁|^{r_j/(n-r₁)}` and the disk test.
pub fn prop6_bound<T: Field>(
    mu: f64,
    roots: &RootMultiset<T>,
    lambda1: &T,
    tol: &Tolerance,
) -> Result<DiskExclusionReport> {
    let constant = prop6_constant(mu)?;
    let entries = roots.entries();
    let Some(i1) = entries.iter().position(|(l, _)| l == lambda1) else {
        return domain("lambda1 is not one of the distinct roots");
    };
    let rest = roots.degree() - entries[i1].1;
    if rest == 0 {
        return domain("needs a second distinct root");
    }
    let l1 = lambda1.to_c64();
    let mut log_prod = 0.0;
    let mut all_inside = true;
    let mut sum = T::zero();
    let mut sum_scale = 0.0;
    for (j, (l, r)) in entries.iter().enumerate() {
        if j == i1 {
            continue;
        }
        let diff = l.clone() - lambda1.clone();
        let dist = diff.modulus();
        if dist == 0.0 {
            return domain("a second root coincides with lambda1");
        }
        log_prod += *r as f64 / rest as f64 * dist.ln();
        all_inside &= (l.to_c64() - l1 - 1.0).norm() <= mu;
        sum = sum + T::from_i64(*r as i64) * diff;
        sum_scale += *r as f64 * dist;
    }
    let viete_zero = if T::EXACT {
        sum.is_zero()
    } else {
        tol.accepts(sum.modulus(), sum_scale, 0.0)
    };
    Ok(DiskExclusionReport {
        mu,
        lambda1: lambda1.to_scalar(),
        all_inside,
        lower_bound_value: constant * log_prod.exp(),
        viete_modulus: sum.modulus(),
        contradiction: all_inside && viete_zero,
    })
}

/// Second moments of `f^{(m)}` and `f^{(m+s)}` roots with shared roots removed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prop9Report {
    pub m: usize,
    pub s: usize,
    /// `Σ ξ^{(m)²}` over the kept roots.
    pub lhs_sum: f64,
    /// `Σ ξ^{(m+s)²}` over the kept roots.
    pub rhs_sum: f64,
    /// Representatives of `C_m ∩ C_{m+s}`; one copy is dropped from each
    /// side per representative.
    pub excluded: Vec<Scalar>,
    pub satisfied: bool,
    /// Unfiltered moment identity for the same `(m, s)`.
    pub eq34: IdentityReport,
}

/// Real-root moment inequality between orders `m` and `m + s`.
pub fn prop9_report<T: Field>(f: &Poly<T>, m: usize, s: usize, tol: &Tolerance) -> Result<Prop9Report> {
    let n = match f.degree() {
        Some(n) if n >= 3 => n,
        _ => return domain("polynomial degree must be at least 3"),
    };
    if !f.has_real_coeffs() {
        return domain("hypothesis failed: f must be real-rooted");
    }
    let roots = root_list(f)?;
    let reach = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
    if roots.iter().any(|r| r.im.abs() > DEFAULT_CLUSTER_TOL.absolute * reach) {
        return domain("hypothesis failed: f must be real-rooted");
    }
    let cluster = if T::EXACT { *tol } else { DEFAULT_CLUSTER_TOL };
    let r = root_multiset(f, &cluster)?.max_multiplicity();
    if m + 1 < r {
        return domain(format!("hypothesis failed: r - 1 <= m (r = {r}, m = {m})"));
    }
    if s < 2 {
        return domain(format!("hypothesis failed: 2 <= s (s = {s})"));
    }
    if s + r > n {
        return domain(format!("hypothesis failed: s <= n - r (s = {s}, n - r = {})", n - r));
    }
    if m + s + 1 > n {
        return domain(format!("hypothesis failed: m <= n - s - 1 (m = {m}, s = {s}, n = {n})"));
    }

    let mode = Mode::natural::<T>();
    let shared = |j: usize| -> Result<Vec<Complex64>> {
        if j == 0 {
            Ok(root_multiset(f, &cluster)?.distinct().copied().collect())
        } else {
            shared_roots(f, j, mode, tol)
        }
    };
    let (cm, cms) = (shared(m)?, shared(m + s)?);
    let mut xm = root_list(&f.derivative(m))?;
    let mut xms = root_list(&f.derivative(m + s))?;
    let near = 1e-6 * reach;
    let excluded: Vec<Complex64> = cm
        .into_iter()
        .filter(|x| cms.iter().any(|y| (x - y).norm() <= near))
        .collect();
    for x in &excluded {
        remove_nearest(&mut xm, *x);
        remove_nearest(&mut xms, *x);
    }
    let lhs_sum: f64 = xm.iter().map(|x| x.re * x.re).sum();
    let rhs_sum: f64 = xms.iter().map(|x| x.re * x.re).sum();
    let eq34 = moment_identity(f, IdentityId::Eq34, MomentParams { m, s }, tol)?;
    Ok(Prop9Report {
        m,
        s,
        lhs_sum,
        rhs_sum,
        excluded: excluded.into_iter().map(Scalar::Float).collect(),
        satisfied: lhs_sum >= rhs_sum - (tol.absolute + tol.relative * (lhs_sum + rhs_sum)),
        eq34,
    })
}

fn remove_nearest(v: &mut Vec<Complex64>, x: Complex64) {
    let best = v
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - x).norm().total_cmp(&(b.1 - x).norm()))
        .map(|(i, _)| i);
    if let Some(i) = best {
        v.swap_remove(i);
    }
}
