use num_complex::Complex64;
use serde::Serialize;

use super::{degree_at_least, distinct_data, power_sums, rectilinearity, shifted_sq, IdentityId, IdentityReport};
use crate::error::{domain, Error, Result};
use crate::numeric::{Field, Scalar, Tolerance};
use crate::poly::{roots_numeric, Poly};

/// Centroid `z_{n-1}` (root of `f^{(n-1)}`) and the two roots `z_{n-2}` of
/// the quadratic `f^{(n-2)}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CentroidData {
    pub centroid: Scalar,
    /// `(z_{n-1} - z_{n-2})²`, the same for both roots of `f^{(n-2)}`.
    pub gap_sq: Scalar,
    /// Sorted by `(re, im)`.
    pub subcentroid_roots: [Complex64; 2],
}

/// Which root of `f^{(n-2)}` plays `z_{n-2}`; roots are ordered by `(re, im)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubcentroidChoice {
    First,
    Second,
}

impl SubcentroidChoice {
    pub const BOTH: [SubcentroidChoice; 2] = [SubcentroidChoice::First, SubcentroidChoice::Second];

    fn index(self) -> usize {
        match self {
            SubcentroidChoice::First => 0,
            SubcentroidChoice::Second => 1,
        }
    }
}

struct Centre<T> {
    n: usize,
    c: T,
    gap_sq: T,
    sub: [Complex64; 2],
}

fn centre<T: Field>(f: &Poly<T>) -> Result<Centre<T>> {
    let n = degree_at_least(f, 2)?;
    let a = f.coeffs();
    let c = -(a[n - 1].clone() / (T::from_i64(n as i64) * a[n].clone()));
    let q = f.derivative(n - 2);
    let (qa, qb, qc) = (q.coeff(2), q.coeff(1), q.coeff(0));
    let gap_sq = (qb.clone() * qb - T::from_i64(4) * qa.clone() * qc) / (T::from_i64(4) * qa.clone() * qa);
    let mut sub = roots_numeric(&q)?.roots;
    sub.sort_by(|x, y| (x.re, x.im).partial_cmp(&(y.re, y.im)).expect("finite roots"));
    Ok(Centre {
        n,
        c,
        gap_sq,
        sub: [sub[0], sub[1]],
    })
}

/// Centroid data; checks that every derivative's root mean equals the
/// centroid (exactly on the exact path).
pub fn centroid<T: Field>(f: &Poly<T>, tol: &Tolerance) -> Result<CentroidData> {
    let cd = centre(f)?;
    for m in 1..cd.n {
        let p = power_sums(&f.derivative(m))?;
        let mean = p.sum / T::from_i64((cd.n - m) as i64);
        let ok = if T::EXACT {
            mean == cd.c
        } else {
            mean.approx_eq(&cd.c, tol)
        };
        if !ok {
            return Err(Error::Consistency(format!(
                "mean of the roots of derivative {m} misses the centroid"
            )));
        }
    }
    Ok(CentroidData {
        centroid: cd.c.to_scalar(),
        gap_sq: cd.gap_sq.to_scalar(),
        subcentroid_roots: cd.sub,
    })
}

/// The three expressions of the Sz.-Nagy identity and their pairwise checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SzNagyReport {
    pub m: usize,
    pub left: Scalar,
    pub middle: Scalar,
    pub right: Scalar,
    pub left_middle: IdentityReport,
    pub left_right: IdentityReport,
}

impl SzNagyReport {
    pub fn passed(&self) -> bool {
        self.left_middle.passed && self.left_right.passed
    }
}

/// `(z_{n-1} - z_{n-2})²`
/// `= [Σ r_j (λ_j - z)² - n (z_{n-1} - z)²] / (n(n-1))`
/// `= [Σ (ξ^{(m)} - z)² - (n-m)(z_{n-1} - z)²] / ((n-m)(n-m-1))`.
///
/// On the float path the left side uses the chosen numeric root of
/// `f^{(n-2)}`; on the exact path it is the discriminant form, identical
/// for both roots.
pub fn sz_nagy_check<T: Field>(
    f: &Poly<T>,
    m: usize,
    z: &T,
    choice: SubcentroidChoice,
    tol: &Tolerance,
) -> Result<SzNagyReport> {
    let cd = centre(f)?;
    let n = cd.n;
    if m < 1 || m + 2 > n {
        return domain(format!("order m = {m} outside 1..=n-2 = {}", n as isize - 2));
    }
    let sym = (cd.c.to_c64() - cd.sub[0]).powi(2) - (cd.c.to_c64() - cd.sub[1]).powi(2);
    let sub_scale = cd.sub[0].norm_sqr() + cd.sub[1].norm_sqr() + cd.c.to_c64().norm_sqr();
    if !tol.accepts(sym.norm(), 0.0, sub_scale) {
        return Err(Error::Consistency("roots of f^(n-2) are not symmetric about the centroid".into()));
    }
    let left = if T::EXACT {
        cd.gap_sq.clone()
    } else {
        T::from_c64((cd.c.to_c64() - cd.sub[choice.index()]).powi(2))
    };

    let pf = power_sums(f)?;
    let pm = power_sums(&f.derivative(m))?;
    let cz = cd.c.clone() - z.clone();
    let cz2 = cz.clone() * cz;
    let nn = T::from_i64(n as i64);
    let nm = T::from_i64((n - m) as i64);
    let middle = (shifted_sq(&pf, z) - nn.clone() * cz2.clone()) / (nn.clone() * T::from_i64(n as i64 - 1));
    let right = (shifted_sq(&pm, z) - nm.clone() * cz2.clone()) / (nm * T::from_i64((n - m - 1) as i64));

    let zc = z.to_c64();
    let czm = cz2.modulus();
    let spread = |roots: &[Complex64]| roots.iter().map(|r| (r - zc).norm_sqr()).sum::<f64>();
    let s_mid = (spread(&pf.roots) + n as f64 * czm) / (n * (n - 1)) as f64;
    let s_right = (spread(&pm.roots) + (n - m) as f64 * czm) / ((n - m) * (n - m - 1)) as f64;
    let s_left = left.modulus();

    let lm = IdentityReport::compare(IdentityId::Eq21, left.clone(), middle.clone(), s_left + s_mid, tol);
    let lr = IdentityReport::compare(IdentityId::Eq21, left.clone(), right.clone(), s_left + s_right, tol);
    Ok(SzNagyReport {
        m,
        left: left.to_scalar(),
        middle: middle.to_scalar(),
        right: right.to_scalar(),
        left_middle: lm,
        left_right: lr,
    })
}

/// Extra indices for [`moment_identity`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MomentParams {
    pub m: usize,
    pub s: usize,
}

/// Second-moment identities derived from the Sz.-Nagy family.
///
/// `d = z_{n-1} - z_{n-2}`, `c = z_{n-1}`, `ξ^{(m)}` roots of `f^{(m)}`,
/// `ξ̂` roots of `(log f)'`, `λ_j` distinct roots, `w` all roots.
///
/// * `EQ22`: `Σ ξ^{(1)²} = (n-2)/n · Σ w² + c²`
/// * `EQ24`: `Σ λ_j = Σ ξ̂ + c`
/// * `EQ25`: `Σ ξ̂² = Σ λ_j² - 2(n-1) d² - c²`
/// * `EQ26`: `Σ |ξ^{(1)}|² = (n-2)/n · Σ |w|² + |c|²` (rectilinear roots)
/// * `EQ27`: `Σ |ξ̂|² = Σ |λ_j|² - 2(n-1)(|c| - |z_{n-2}|)² - |c|²`, `z_{n-2}` on the side of `c`
/// * `EQ28`: as `EQ27` with `|c| + |z_{n-2}|`, `z_{n-2}` opposite to `c`
/// * `EQ30`: `Σ ξ^{(m)²} = Σ w² - m(2n-m-1) d² - m c²` (simple roots)
/// * `EQ34`: `Σ ξ^{(m)²} - Σ ξ^{(m+s)²} = s(2(n-m)-s-1) d² + s c²`
pub fn moment_identity<T: Field>(
    f: &Poly<T>,
    kind: IdentityId,
    params: MomentParams,
    tol: &Tolerance,
) -> Result<IdentityReport> {
    let cd = centre(f)?;
    let n = cd.n;
    let c = cd.c.clone();
    let c2 = c.clone() * c.clone();
    let cm2 = c2.modulus();
    let d2 = cd.gap_sq.clone();
    let int = |k: i64| T::from_i64(k);
    let ni = n as i64;
    match kind {
        IdentityId::Eq22 => {
            let p1 = power_sums(&f.derivative(1))?;
            let p0 = power_sums(f)?;
            let rhs = int(ni - 2) * p0.sum_sq.clone() / int(ni) + c2;
            let scale = p1.abs_sq + (n - 2) as f64 / n as f64 * p0.abs_sq + cm2;
            Ok(IdentityReport::compare(kind, p1.sum_sq, rhs, scale, tol))
        }
        IdentityId::Eq24 | IdentityId::Eq25 => {
            let dd = distinct_data(f, tol)?;
            if dd.squarefree.degree().unwrap_or(0) < 2 {
                return domain("needs at least two distinct roots");
            }
            let lam = power_sums(&dd.squarefree)?;
            let hat = power_sums(&dd.log_numerator)?;
            if kind == IdentityId::Eq24 {
                let scale = abs_sum(&lam.roots) + abs_sum(&hat.roots) + c.modulus();
                return Ok(IdentityReport::compare(kind, lam.sum, hat.sum + c, scale, tol));
            }
            let rhs = lam.sum_sq.clone() - int(2 * (ni - 1)) * d2.clone() - c2;
            let scale = hat.abs_sq + lam.abs_sq + 2.0 * (n - 1) as f64 * d2.modulus() + cm2;
            Ok(IdentityReport::compare(kind, hat.sum_sq, rhs, scale, tol))
        }
        IdentityId::Eq26 | IdentityId::Eq27 | IdentityId::Eq28 => {
            let rect = rectilinear_roots(f, tol)?;
            let cf = c.to_c64();
            // On the real (imaginary) axis |w|² = w² (-w²), and both side
            // choices give (|c| ∓ |z_{n-2}|)² = (c - z_{n-2})², so exact
            // input stays exact.
            let axis = axis_sign(rect);
            if let (true, Some(sgn)) = (T::EXACT, axis) {
                let sgn = int(sgn);
                let (lhs, rhs, scale) = if kind == IdentityId::Eq26 {
                    let p1 = power_sums(&f.derivative(1))?;
                    let p0 = power_sums(f)?;
                    let rhs = sgn.clone() * (int(ni - 2) * p0.sum_sq / int(ni) + c2);
                    (sgn * p1.sum_sq, rhs, p1.abs_sq + p0.abs_sq + cm2)
                } else {
                    side_root(&cd.sub, cf, rect, kind == IdentityId::Eq27, tol)?;
                    let dd = distinct_data(f, tol)?;
                    let lam = power_sums(&dd.squarefree)?;
                    let hat = power_sums(&dd.log_numerator)?;
                    let k = int(2 * (ni - 1));
                    let rhs = sgn.clone() * (lam.sum_sq - k.clone() * d2.clone() - c2);
                    let scale = hat.abs_sq + lam.abs_sq + k.modulus() * d2.modulus() + cm2;
                    (sgn * hat.sum_sq, rhs, scale)
                };
                return Ok(IdentityReport::compare(kind, lhs, rhs, scale, tol));
            }
            if kind == IdentityId::Eq26 {
                let p1 = power_sums(&f.derivative(1))?;
                let p0 = power_sums(f)?;
                let rhs = (n - 2) as f64 / n as f64 * p0.abs_sq + cf.norm_sqr();
                let scale = p1.abs_sq + rhs;
                return Ok(float_report(kind, p1.abs_sq, rhs, scale, tol));
            }
            let z2 = side_root(&cd.sub, cf, rect, kind == IdentityId::Eq27, tol)?;
            let dd = distinct_data(f, tol)?;
            let lam = power_sums(&dd.squarefree)?;
            let hat = power_sums(&dd.log_numerator)?;
            let gap = if kind == IdentityId::Eq27 {
                cf.norm() - z2.norm()
            } else {
                cf.norm() + z2.norm()
            };
            let corr = 2.0 * (n - 1) as f64 * gap * gap;
            let rhs = lam.abs_sq - corr - cf.norm_sqr();
            let scale = hat.abs_sq + lam.abs_sq + corr + cf.norm_sqr();
            Ok(float_report(kind, hat.abs_sq, rhs, scale, tol))
        }
        IdentityId::Eq30 => {
            let m = params.m;
            if m > n {
                return domain(format!("order m = {m} exceeds n = {n}"));
            }
            if distinct_data(f, tol)?.multiplicities.iter().any(|&r| r > 1) {
                return domain("hypothesis failed: roots of f must be simple");
            }
            let p0 = power_sums(f)?;
            let pm = power_sums(&f.derivative(m))?;
            let mi = m as i64;
            let k = int(mi * (2 * ni - mi - 1));
            let rhs = p0.sum_sq.clone() - k.clone() * d2.clone() - int(mi) * c2;
            let scale = pm.abs_sq + p0.abs_sq + k.modulus() * d2.modulus() + m as f64 * cm2;
            Ok(IdentityReport::compare(kind, pm.sum_sq, rhs, scale, tol))
        }
        IdentityId::Eq34 => {
            let MomentParams { m, s } = params;
            let r = distinct_data(f, tol)?.multiplicities.into_iter().max().unwrap_or(1);
            if m + 1 < r {
                return domain(format!("hypothesis failed: m = {m} < r - 1 = {}", r - 1));
            }
            if s < 2 {
                return domain(format!("hypothesis failed: s = {s} < 2"));
            }
            if s + r > n {
                return domain(format!("hypothesis failed: s = {s} > n - r = {}", n - r));
            }
            if m + s + 1 > n {
                return domain(format!("hypothesis failed: m = {m} > n - s - 1 = {}", n as isize - s as isize - 1));
            }
            let pm = power_sums(&f.derivative(m))?;
            let ps = power_sums(&f.derivative(m + s))?;
            let (mi, si) = (m as i64, s as i64);
            let k = int(si * (2 * (ni - mi) - si - 1));
            let rhs = k.clone() * d2.clone() + int(si) * c2;
            let scale = pm.abs_sq + ps.abs_sq + k.modulus() * d2.modulus() + s as f64 * cm2;
            Ok(IdentityReport::compare(kind, pm.sum_sq - ps.sum_sq, rhs, scale, tol))
        }
        other => domain(format!("{other} is not a moment identity")),
    }
}

fn abs_sum(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).sum()
}

fn float_report(id: IdentityId, lhs: f64, rhs: f64, scale: f64, tol: &Tolerance) -> IdentityReport {
    IdentityReport::compare(id, Complex64::new(lhs, 0.0), Complex64::new(rhs, 0.0), scale, tol)
}

/// Root-finder accuracy floor for the collinearity hypothesis; clustered
/// roots come back with off-line noise well above identity tolerances.
const LINE_FLOOR: f64 = 1e-6;

/// Direction `e^{iφ}` of the line through the origin carrying every root.
fn rectilinear_roots<T: Field>(f: &Poly<T>, tol: &Tolerance) -> Result<Complex64> {
    let roots = roots_numeric(f)?.roots;
    let r = rectilinearity(&roots, &Tolerance::new(tol.absolute, tol.relative.max(LINE_FLOOR))?);
    if !r.collinear_through_origin {
        return domain("hypothesis failed: roots are not collinear through the origin");
    }
    Ok(Complex64::from_polar(1.0, r.angle))
}

/// `1` for the real axis, `-1` for the imaginary axis, `None` otherwise.
fn axis_sign(dir: Complex64) -> Option<i64> {
    let d2 = dir * dir;
    if (d2 - 1.0).norm() < 1e-9 {
        Some(1)
    } else if (d2 + 1.0).norm() < 1e-9 {
        Some(-1)
    } else {
        None
    }
}

/// Root of `f^{(n-2)}` on the same (or opposite) side of the origin as `c`
/// along `dir`. A zero `c` or zero root sits on both sides.
fn side_root(sub: &[Complex64; 2], c: Complex64, dir: Complex64, same: bool, tol: &Tolerance) -> Result<Complex64> {
    let along = |z: Complex64| (z * dir.conj()).re;
    let small = |z: Complex64| tol.accepts(z.norm(), 0.0, 0.0);
    let tc = along(c);
    let found = sub.iter().copied().find(|&z| {
        if small(c) || small(z) {
            return true;
        }
        let tz = along(z);
        (tc * tz > 0.0) == same
    });
    match found {
        Some(z) => Ok(z),
        None => domain(if same {
            "hypothesis failed: no root of f^(n-2) on the side of the centroid"
        } else {
            "hypothesis failed: no root of f^(n-2) opposite to the centroid"
        }),
    }
}
