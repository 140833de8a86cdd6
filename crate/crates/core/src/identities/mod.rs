//! Root identities relating `f`, its derivatives and the logarithmic
//! derivative, each checked as `lhs` vs `rhs` with a residual and a scale.

mod hoppe;
mod moments;
mod misc;

pub use hoppe::{hoppe_log_derivative, RationalFn};
pub use misc::{
    laguerre_check, laguerre_hypothesis, log_deriv_numerator, log_deriv_roots, newton_like_aggregate,
    rectilinearity, schoenberg_gap, schoenberg_gap_of_roots, viete_check, RectilinearityResult, SchoenbergGap,
};
pub use moments::{centroid, moment_identity, sz_nagy_check, CentroidData, MomentParams, SubcentroidChoice, SzNagyReport};

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::numeric::{Field, Scalar, Tolerance};
use crate::poly::{roots_numeric, Poly};

/// Identity or inequality being checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IdentityId {
    Eq19,
    Eq20,
    Eq21,
    Eq22,
    Eq24,
    Eq25,
    Eq26,
    Eq27,
    Eq28,
    Eq30,
    Eq31,
    Eq33,
    Eq34,
}

impl IdentityId {
    pub const ALL: [IdentityId; 13] = [
        IdentityId::Eq19,
        IdentityId::Eq20,
        IdentityId::Eq21,
        IdentityId::Eq22,
        IdentityId::Eq24,
        IdentityId::Eq25,
        IdentityId::Eq26,
        IdentityId::Eq27,
        IdentityId::Eq28,
        IdentityId::Eq30,
        IdentityId::Eq31,
        IdentityId::Eq33,
        IdentityId::Eq34,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            IdentityId::Eq19 => "EQ19",
            IdentityId::Eq20 => "EQ20",
            IdentityId::Eq21 => "EQ21",
            IdentityId::Eq22 => "EQ22",
            IdentityId::Eq24 => "EQ24",
            IdentityId::Eq25 => "EQ25",
            IdentityId::Eq26 => "EQ26",
            IdentityId::Eq27 => "EQ27",
            IdentityId::Eq28 => "EQ28",
            IdentityId::Eq30 => "EQ30",
            IdentityId::Eq31 => "EQ31",
            IdentityId::Eq33 => "EQ33",
            IdentityId::Eq34 => "EQ34",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse { token: s.to_string() })
    }
}

impl Serialize for IdentityId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

/// `residual = |lhs - rhs|`. Exact pairs pass only on equality; otherwise
/// `residual <= tol.absolute + tol.relative * scale`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub identity_id: IdentityId,
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub residual: f64,
    pub scale: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl IdentityReport {
    pub fn compare<T: Field>(id: IdentityId, lhs: T, rhs: T, scale: f64, tol: &Tolerance) -> Self {
        let residual = (lhs.clone() - rhs.clone()).modulus();
        let passed = if T::EXACT {
            lhs == rhs
        } else {
            residual <= tol.absolute + tol.relative * scale
        };
        IdentityReport {
            identity_id: id,
            lhs: lhs.to_scalar(),
            rhs: rhs.to_scalar(),
            residual,
            scale,
            passed,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// First two power sums of the roots of `g` with `Σ|ξ|²` for scaling.
///
/// Exact input uses Newton's identities on the coefficients, so `sum` and
/// `sum_sq` are exact; float input sums the numeric roots.
#[derive(Clone, Debug)]
pub(crate) struct PowerSums<T> {
    pub count: usize,
    pub sum: T,
    pub sum_sq: T,
    pub abs_sq: f64,
    pub roots: Vec<Complex64>,
}

pub(crate) fn power_sums<T: Field>(g: &Poly<T>) -> Result<PowerSums<T>> {
    let n = match g.degree() {
        None => return domain("power sums of the zero polynomial"),
        Some(n) => n,
    };
    if n == 0 {
        return Ok(PowerSums {
            count: 0,
            sum: T::zero(),
            sum_sq: T::zero(),
            abs_sq: 0.0,
            roots: Vec::new(),
        });
    }
    let roots = roots_numeric(g)?.roots;
    let abs_sq = roots.iter().map(|r| r.norm_sqr()).sum();
    let (sum, sum_sq) = if T::EXACT {
        let a = g.coeffs();
        let e1 = -(a[n - 1].clone() / a[n].clone());
        let e2 = if n >= 2 { a[n - 2].clone() / a[n].clone() } else { T::zero() };
        (e1.clone(), e1.clone() * e1 - T::from_i64(2) * e2)
    } else {
        roots.iter().fold((T::zero(), T::zero()), |(s, q), r| {
            (s + T::from_c64(*r), q + T::from_c64(r * r))
        })
    };
    Ok(PowerSums {
        count: n,
        sum,
        sum_sq,
        abs_sq,
        roots,
    })
}

/// `Σ (ξ - z)²` from power sums.
pub(crate) fn shifted_sq<T: Field>(p: &PowerSums<T>, z: &T) -> T {
    p.sum_sq.clone() - T::from_i64(2) * z.clone() * p.sum.clone() + T::from_i64(p.count as i64) * z.clone() * z.clone()
}

pub(crate) fn degree_at_least<T: Field>(f: &Poly<T>, min: usize) -> Result<usize> {
    match f.degree() {
        Some(n) if n >= min => Ok(n),
        _ => domain(format!("polynomial degree must be at least {min}")),
    }
}

/// Distinct roots with multiplicities; exact when the coefficients are.
///
/// Exact input yields `Q = f / (lead · gcd(f, f'))` (monic, squarefree) and
/// the log-derivative numerator `N = f' / (lead · gcd(f, f'))`. Float input
/// clusters the numeric roots at `tol` and builds `Q`, `N` from the clusters.
pub(crate) struct DistinctData<T> {
    pub squarefree: Poly<T>,
    pub log_numerator: Poly<T>,
    pub multiplicities: Vec<usize>,
}

pub(crate) fn distinct_data<T: Field>(f: &Poly<T>, tol: &Tolerance) -> Result<DistinctData<T>> {
    degree_at_least(f, 1)?;
    if T::EXACT {
        let lead = f.leading().cloned().expect("nonzero");
        let df = f.derivative(1);
        let g = crate::poly::euclid_gcd(f, &df)?;
        let inv_lead = T::one() / lead;
        let squarefree = f.exact_div(&g)?.scale(&inv_lead);
        let log_numerator = df.exact_div(&g)?.scale(&inv_lead);
        let multiplicities = crate::poly::squarefree_decomposition(f)?
            .into_iter()
            .flat_map(|(a, m)| std::iter::repeat_n(m, a.degree().unwrap_or(0)))
            .collect();
        return Ok(DistinctData {
            squarefree,
            log_numerator,
            multiplicities,
        });
    }
    let rs = crate::poly::root_multiset(f, tol)?;
    let distinct: Vec<T> = rs.distinct().map(|r| T::from_c64(*r)).collect();
    let rs_t = crate::poly::RootMultiset::new(
        distinct.iter().cloned().zip(rs.entries().iter().map(|(_, m)| *m)).collect(),
    )?;
    Ok(DistinctData {
        squarefree: Poly::from_roots(&distinct),
        log_numerator: log_deriv_numerator(&rs_t)?,
        multiplicities: rs.entries().iter().map(|(_, m)| *m).collect(),
    })
}
