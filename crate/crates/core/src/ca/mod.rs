//! Root sharing between `f` and its derivatives.

mod props;

pub use props::{prop6_bound, prop6_constant, prop9_report, triviality_check, DiskExclusionReport, Prop9Report, Triviality};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::numeric::{Field, Scalar, Tolerance};
use crate::poly::{euclid_gcd, root_multiset, roots_numeric, squarefree_decomposition, Poly, DEFAULT_CLUSTER_TOL};

/// A numeric root `w` of `f^{(j)}` also counts as a root of `f` when
/// `|f(w)| <= SHARED_RESIDUAL · Σ|a_k||w|^k`. This catches multiple roots
/// whose numeric copies split far beyond any distance tolerance.
pub const SHARED_RESIDUAL: f64 = 1e-11;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Numeric,
}

impl Mode {
    /// `Exact` for exact coefficient types.
    pub fn natural<T: Field>() -> Mode {
        if T::EXACT {
            Mode::Exact
        } else {
            Mode::Numeric
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "trivial")]
    Trivial,
    #[serde(rename = "non_CA")]
    NonCa,
    #[serde(rename = "CA_candidate")]
    CaCandidate,
}

/// `B_j`, `C_j ⊆ B_j` and `n_j = |C_j|` for one order `j`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderRecord {
    pub order: usize,
    pub derivative_roots: Vec<Scalar>,
    pub shared: Vec<Scalar>,
    pub shared_count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CAReport {
    pub degree: usize,
    pub method: Mode,
    pub verdict: Verdict,
    pub orders: Vec<OrderRecord>,
    /// Multiplicities of the distinct roots of `f`.
    pub multiplicities: Vec<usize>,
    /// `Some(m)` when every root has multiplicity `m` and `k >= 2`; then
    /// `f^{(m)}` provably shares no root with `f`.
    pub equal_multiplicity_order: Option<usize>,
}

fn c64(v: Vec<Complex64>) -> Vec<Scalar> {
    v.into_iter().map(Scalar::Float).collect()
}

fn check_order<T: Field>(f: &Poly<T>, j: usize) -> Result<usize> {
    let n = match f.degree() {
        Some(n) if n >= 2 => n,
        _ => return domain("polynomial degree must be at least 2"),
    };
    if j < 1 || j >= n {
        return domain(format!("order j = {j} outside 1..={}", n - 1));
    }
    Ok(n)
}

/// Distinct roots shared by `f` and `f^{(j)}`.
///
/// Exact mode extracts them from `gcd(f, f^{(j)})`. Numeric mode keeps the
/// roots `w` of `f^{(j)}` that lie within `tol.absolute · (1 + max|root|)`
/// of a root of `f`, or that pass the [`SHARED_RESIDUAL`] test.
pub fn shared_roots<T: Field>(f: &Poly<T>, j: usize, mode: Mode, tol: &Tolerance) -> Result<Vec<Complex64>> {
    check_order(f, j)?;
    let d = f.derivative(j);
    match mode {
        Mode::Exact => {
            if !T::EXACT {
                return Err(Error::Type("exact shared roots need exact coefficients".into()));
            }
            let g = euclid_gcd(f, &d)?;
            if g.degree().unwrap_or(0) == 0 {
                return Ok(Vec::new());
            }
            Ok(root_multiset(&g, &DEFAULT_CLUSTER_TOL)?.distinct().copied().collect())
        }
        Mode::Numeric => {
            let fr = roots_numeric(f)?.roots;
            let dr = roots_numeric(&d)?.roots;
            Ok(numeric_shared(&f.to_c64(), &fr, &dr, tol))
        }
    }
}

fn numeric_shared(f: &Poly<Complex64>, fr: &[Complex64], dr: &[Complex64], tol: &Tolerance) -> Vec<Complex64> {
    let reach = tol.absolute * (1.0 + fr.iter().chain(dr).map(|z| z.norm()).fold(0.0, f64::max));
    dr.iter()
        .copied()
        .filter(|w| fr.iter().any(|r| (r - w).norm() < reach) || evaluation_shared(f, *w))
        .collect()
}

fn evaluation_shared(f: &Poly<Complex64>, w: Complex64) -> bool {
    let r = w.norm();
    let bound = f.coeffs().iter().rev().fold(0.0, |acc, c| acc * r + c.norm());
    f.eval(&w).norm() <= SHARED_RESIDUAL * bound
}

/// Whether `f = a (z - b)^n`: exactly via the squarefree decomposition, or
/// numerically by comparing coefficients with `lead (z - centroid)^n`.
pub fn is_trivial<T: Field>(f: &Poly<T>, tol: &Tolerance) -> Result<bool> {
    let n = match f.degree() {
        Some(n) if n >= 1 => n,
        _ => return domain("polynomial degree must be at least 1"),
    };
    if T::EXACT {
        let parts = squarefree_decomposition(f)?;
        return Ok(parts.len() == 1 && parts[0].0.degree() == Some(1));
    }
    let lead = f.leading().cloned().expect("nonzero");
    let c = -(f.coeff(n - 1) / (T::from_i64(n as i64) * lead.clone()));
    let model = Poly::from_roots(&vec![c; n]).scale(&lead);
    let scale = f.max_coeff_modulus();
    Ok((0..=n).all(|k| tol.accepts((f.coeff(k) - model.coeff(k)).modulus(), scale, 0.0)))
}

/// Full root-sharing report for orders `1..n-1`.
pub fn ca_check<T: Field>(f: &Poly<T>, mode: Mode, tol: &Tolerance) -> Result<CAReport> {
    let n = check_order(f, 1)?;
    if mode == Mode::Exact && !T::EXACT {
        return Err(Error::Type("exact CA check needs exact coefficients".into()));
    }
    let multiplicities: Vec<usize> = match mode {
        Mode::Exact => root_multiset(f, tol)?.entries().iter().map(|(_, m)| *m).collect(),
        Mode::Numeric => root_multiset(f, &DEFAULT_CLUSTER_TOL)?.entries().iter().map(|(_, m)| *m).collect(),
    };
    let trivial = is_trivial(f, tol)?;
    let fr = roots_numeric(f)?.roots;
    let ff = f.to_c64();

    let mut orders = Vec::with_capacity(n - 1);
    for j in 1..n {
        let d = f.derivative(j);
        let (b, c) = match mode {
            Mode::Exact => {
                let b = root_multiset(&d, tol)?.flatten();
                (b, shared_roots(f, j, mode, tol)?)
            }
            Mode::Numeric => {
                let b = roots_numeric(&d)?.roots;
                let c = numeric_shared(&ff, &fr, &b, tol);
                (b, c)
            }
        };
        orders.push(OrderRecord {
            order: j,
            shared_count: c.len(),
            derivative_roots: c64(b),
            shared: c64(c),
        });
    }

    let all_shared = orders.iter().all(|o| o.shared_count > 0);
    let verdict = if trivial {
        Verdict::Trivial
    } else if all_shared {
        Verdict::CaCandidate
    } else {
        Verdict::NonCa
    };

    let equal_multiplicity_order = match multiplicities.as_slice() {
        [first, rest @ ..] if !rest.is_empty() && rest.iter().all(|m| m == first) => Some(*first),
        _ => None,
    };
    if mode == Mode::Exact {
        if let Some(m) = equal_multiplicity_order {
            if orders[m - 1].shared_count > 0 {
                return Err(Error::Consistency(format!(
                    "equal multiplicities {m} but f^({m}) shares a root with f"
                )));
            }
        }
        if verdict == Verdict::CaCandidate && multiplicities.iter().all(|&m| m < 2) {
            return Err(Error::Consistency("candidate without a multiple root".into()));
        }
    }
    Ok(CAReport {
        degree: n,
        method: mode,
        verdict,
        orders,
        multiplicities,
        equal_multiplicity_order,
    })
}
