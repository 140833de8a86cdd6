use num_complex::Complex64;
use serde::Serialize;

use super::{degree_at_least, IdentityId, IdentityReport};
use crate::error::{domain, Result};
use crate::goncharov::{goncharov_recurrence, levinson_h, LevinsonMethod, NodeSequence};
use crate::numeric::{binomial, Field, Tolerance};
use crate::poly::{
    derivative_roots, root_multiset, roots_numeric, squarefree_decomposition, Poly, RootMultiset, DEFAULT_CLUSTER_TOL,
};

/// Whether points lie on one line through the origin.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RectilinearityResult {
    pub collinear_through_origin: bool,
    /// `φ ∈ [0, π)`
    pub angle: f64,
    /// Sign of each point along `e^{iφ}`; zero points get `+1`.
    pub sign_vector: Vec<i8>,
}

/// Least-squares direction `φ = ½ arg Σ p²`; a point is on the line when
/// its distance to it is within `tol` of `|p|`.
pub fn rectilinearity(points: &[Complex64], tol: &Tolerance) -> RectilinearityResult {
    let s: Complex64 = points.iter().map(|p| p * p).sum();
    let mut angle = 0.5 * s.arg();
    if angle < 0.0 {
        angle += std::f64::consts::PI;
    }
    if angle >= std::f64::consts::PI {
        angle -= std::f64::consts::PI;
    }
    let rot = Complex64::from_polar(1.0, -angle);
    let mut collinear = true;
    let mut signs = Vec::with_capacity(points.len());
    for p in points {
        let w = p * rot;
        if !tol.accepts(w.im.abs(), p.norm(), 0.0) {
            collinear = false;
        }
        signs.push(if w.re < 0.0 { -1 } else { 1 });
    }
    RectilinearityResult {
        collinear_through_origin: collinear,
        angle,
        sign_vector: signs,
    }
}

/// `Σ_j r_j Π_{i≠j} (z - λ_i)`, the numerator of `(log f)'` over distinct roots.
pub fn log_deriv_numerator<T: Field>(roots: &RootMultiset<T>) -> Result<Poly<T>> {
    let e = roots.entries();
    if e.is_empty() {
        return domain("log-derivative needs at least one root");
    }
    let mut acc = Poly::zero();
    for (j, (_, r)) in e.iter().enumerate() {
        let others: Vec<T> = e
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != j)
            .map(|(_, (l, _))| l.clone())
            .collect();
        acc = &acc + &Poly::from_roots(&others).scale(&T::from_i64(*r as i64));
    }
    Ok(acc)
}

/// The `k - 1` zeros of `(log f)'`.
pub fn log_deriv_roots<T: Field>(roots: &RootMultiset<T>) -> Result<Vec<Complex64>> {
    let num = log_deriv_numerator(roots)?;
    if num.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    Ok(roots_numeric(&num)?.roots)
}

/// `Σ_j G_n(w_j) = Σ_k C(n,k) p_k H_{n-k}(z_k, …, z_{n-1})` with
/// `p_k = Σ_j w_j^k`; requires `z_0 = 0`.
pub fn newton_like_aggregate<T: Field>(
    nodes: &NodeSequence<T>,
    points: &[T],
    tol: &Tolerance,
) -> Result<IdentityReport> {
    if !nodes.nodes()[0].is_zero() {
        return domain("first node must be exactly zero");
    }
    if points.is_empty() {
        return domain("need at least one point");
    }
    let n = nodes.degree();
    let g = goncharov_recurrence(nodes);
    let mut lhs = T::zero();
    let mut scale = 0.0;
    for w in points {
        let v = g.eval(w);
        scale += v.modulus();
        lhs = lhs + v;
    }
    let mut rhs = T::zero();
    for k in 1..=n {
        let pk = points.iter().fold(T::zero(), |a, w| a + w.powi(k));
        let term = T::from_bigint(&binomial(n, k)) * pk * levinson_h(&nodes.nodes()[k..], LevinsonMethod::DetBinomial);
        scale += term.modulus();
        rhs = rhs + term;
    }
    Ok(IdentityReport::compare(IdentityId::Eq19, lhs, rhs, scale, tol))
}

/// `Σ_{j≥2} r_j (λ_j - λ_1) = 0` when `λ_1` is the centroid.
pub fn viete_check<T: Field>(roots: &RootMultiset<T>, shared: &T, tol: &Tolerance) -> Result<IdentityReport> {
    let same = |a: &T, b: &T| if T::EXACT { a == b } else { a.approx_eq(b, tol) };
    if !roots.distinct().any(|l| same(l, shared)) {
        return domain("hypothesis failed: shared value is not a root");
    }
    let n = roots.degree();
    let mean = roots
        .entries()
        .iter()
        .fold(T::zero(), |a, (l, r)| a + l.clone() * T::from_i64(*r as i64))
        / T::from_i64(n as i64);
    if !same(&mean, shared) {
        return domain("hypothesis failed: shared value is not the centroid");
    }
    let mut sum = T::zero();
    let mut scale = 0.0;
    for (l, r) in roots.entries() {
        if same(l, shared) {
            continue;
        }
        let t = T::from_i64(*r as i64) * (l.clone() - shared.clone());
        scale += t.modulus();
        sum = sum + t;
    }
    Ok(IdentityReport::compare(IdentityId::Eq20, sum, T::zero(), scale, tol))
}

/// Whether `f` is squarefree with only real roots (the Laguerre hypothesis).
///
/// Numeric roots count as real, and as distinct, at the clustering scale
/// relative to the largest root modulus.
pub fn laguerre_hypothesis<T: Field>(f: &Poly<T>) -> Result<bool> {
    let n = degree_at_least(f, 1)?;
    if T::EXACT {
        if squarefree_decomposition(f)?.iter().any(|(_, m)| *m > 1) {
            return Ok(false);
        }
    }
    let roots = roots_numeric(f)?.roots;
    let sep = DEFAULT_CLUSTER_TOL.absolute * roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
    if roots.iter().any(|r| r.im.abs() > sep) {
        return Ok(false);
    }
    if !T::EXACT {
        let mut re: Vec<f64> = roots.iter().map(|r| r.re).collect();
        re.sort_by(f64::total_cmp);
        if re.windows(2).any(|w| w[1] - w[0] <= sep) {
            return Ok(false);
        }
    }
    Ok(n >= 1)
}

/// `f'(x)² - f(x) f''(x)`, positive for squarefree real-rooted `f`.
///
/// `lhs = f'(x)²`, `rhs = f(x) f''(x)`. Passing requires `lhs > rhs` when
/// the hypothesis holds; otherwise the report is informational and passes.
pub fn laguerre_check<T: Field>(f: &Poly<T>, x: &T, tol: &Tolerance) -> Result<IdentityReport> {
    if !f.has_real_coeffs() {
        return domain("hypothesis failed: coefficients must be real");
    }
    if !x.is_real() {
        return domain("evaluation point must be real");
    }
    let d1 = f.derivative(1).eval(x);
    let lhs = d1.clone() * d1;
    let rhs = f.eval(x) * f.derivative(2).eval(x);
    let value = (lhs.clone() - rhs.clone()).to_c64().re;
    let hyp = laguerre_hypothesis(f)?;
    let scale = lhs.modulus() + rhs.modulus();
    let mut rep = IdentityReport::compare(IdentityId::Eq33, lhs, rhs, scale, tol);
    rep.residual = value.abs();
    if hyp {
        rep.passed = value > 0.0;
        Ok(rep)
    } else {
        rep.passed = true;
        Ok(rep.with_note(format!("hypothesis does not hold; value {value:e} is informational")))
    }
}

/// Conjecture-1 gap `(n-2)/n Σ r|λ|² + |c|² - Σ|ξ^{(1)}|²`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchoenbergGap {
    pub degree: usize,
    pub gap: f64,
    pub scale: f64,
    pub rectilinearity: RectilinearityResult,
}

/// Exact input takes both root lists through the squarefree decomposition,
/// so multiple roots do not split numerically.
pub fn schoenberg_gap<T: Field>(f: &Poly<T>, tol: &Tolerance) -> Result<SchoenbergGap> {
    degree_at_least(f, 2)?;
    let roots = all_roots(f)?;
    let xi = all_roots(&f.derivative(1))?;
    Ok(gap_from(&roots, &xi, tol))
}

/// Gap for a known root list; `f'` roots are still found numerically.
pub fn schoenberg_gap_of_roots<T: Field>(roots: &RootMultiset<T>, tol: &Tolerance) -> Result<SchoenbergGap> {
    let w: Vec<Complex64> = roots.flatten().iter().map(Field::to_c64).collect();
    if w.len() < 2 {
        return domain("polynomial degree must be at least 2");
    }
    let xi = derivative_roots(&Poly::from_roots(&w), 1)?.roots;
    Ok(gap_from(&w, &xi, tol))
}

fn all_roots<T: Field>(f: &Poly<T>) -> Result<Vec<Complex64>> {
    if f.degree() == Some(0) {
        return Ok(Vec::new());
    }
    if T::EXACT {
        Ok(root_multiset(f, &DEFAULT_CLUSTER_TOL)?.flatten())
    } else {
        Ok(roots_numeric(f)?.roots)
    }
}

fn gap_from(roots: &[Complex64], xi: &[Complex64], tol: &Tolerance) -> SchoenbergGap {
    let n = roots.len();
    let c: Complex64 = roots.iter().sum::<Complex64>() / n as f64;
    let lam: f64 = roots.iter().map(|r| r.norm_sqr()).sum();
    let der: f64 = xi.iter().map(|r| r.norm_sqr()).sum();
    let rhs = (n - 2) as f64 / n as f64 * lam + c.norm_sqr();
    let mut pts = roots.to_vec();
    pts.extend_from_slice(xi);
    SchoenbergGap {
        degree: n,
        gap: rhs - der,
        scale: rhs + der,
        rectilinearity: rectilinearity(&pts, tol),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::GaussianRational as Q;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    #[test]
    fn rectilinearity_examples() {
        let tol = Tolerance::default();
        let r = rectilinearity(&[c(1.0, 0.0), c(-2.0, 0.0), c(3.0, 0.0)], &tol);
        assert!(r.collinear_through_origin);
        assert_eq!(r.angle, 0.0);
        assert_eq!(r.sign_vector, vec![1, -1, 1]);

        let r = rectilinearity(&[c(0.0, 1.0), c(0.0, -2.0)], &tol);
        assert!(r.collinear_through_origin);
        assert!((r.angle - std::f64::consts::FRAC_PI_2).abs() < 1e-15);

        assert!(!rectilinearity(&[c(1.0, 0.0), c(0.0, 1.0)], &tol).collinear_through_origin);
    }

    #[test]
    fn log_derivative_examples() {
        let single = RootMultiset::new(vec![(q(7), 4)]).unwrap();
        assert!(log_deriv_roots(&single).unwrap().is_empty());

        let simple = RootMultiset::from_list(&[q(0), q(1), q(-1)]);
        let mut r = log_deriv_roots(&simple).unwrap();
        r.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((r[0] - c(-1.0 / 3f64.sqrt(), 0.0)).norm() < 1e-12);

        let dbl = RootMultiset::from_list(&[q(0), q(0), q(3)]);
        assert_eq!(log_deriv_numerator(&dbl).unwrap(), Poly::new(vec![q(-6), q(3)]));
        assert!((log_deriv_roots(&dbl).unwrap()[0] - c(2.0, 0.0)).norm() < 1e-12);

        let empty: RootMultiset<Q> = RootMultiset::new(vec![]).unwrap();
        assert!(log_deriv_roots(&empty).is_err());
    }

    #[test]
    fn viete_examples() {
        let tol = Tolerance::default();
        let rs = RootMultiset::new(vec![(q(0), 2), (q(3), 1), (q(-3), 1)]).unwrap();
        let r = viete_check(&rs, &q(0), &tol).unwrap();
        assert!(r.passed && r.residual == 0.0);

        let rs = RootMultiset::new(vec![(q(5), 4)]).unwrap();
        assert!(viete_check(&rs, &q(5), &tol).unwrap().passed);

        let rs = RootMultiset::new(vec![(q(0), 2), (q(1), 1), (q(2), 1)]).unwrap();
        let e = viete_check(&rs, &q(0), &tol).unwrap_err();
        assert!(e.to_string().contains("centroid"));
        assert!(viete_check(&rs, &q(9), &tol).unwrap_err().to_string().contains("not a root"));
    }

    #[test]
    fn newton_like_examples() {
        let tol = Tolerance::default();
        let ns = NodeSequence::new(vec![q(0), Q::ratio(1, 2), q(-2), q(3)]).unwrap();
        let r = newton_like_aggregate(&ns, &[q(5)], &tol).unwrap();
        assert!(r.passed);
        assert_eq!(r.lhs, goncharov_recurrence(&ns).eval(&q(5)).to_scalar());
        let r = newton_like_aggregate(&ns, &[q(1), Q::complex((1, 2), (3, 1)), q(-4)], &tol).unwrap();
        assert!(r.passed && r.residual == 0.0);
        let bad = NodeSequence::new(vec![q(1), q(0)]).unwrap();
        assert!(newton_like_aggregate(&bad, &[q(1)], &tol).is_err());
    }

    #[test]
    fn laguerre_examples() {
        let tol = Tolerance::default();
        let f = Poly::new(vec![q(-1), q(0), q(1)]);
        let r = laguerre_check(&f, &q(0), &tol).unwrap();
        assert!(r.passed);
        assert_eq!(r.residual, 2.0);

        let sq = Poly::from_roots(&[q(2), q(2)]);
        let r = laguerre_check(&sq, &q(2), &tol).unwrap();
        assert_eq!(r.residual, 0.0);
        assert!(r.note.is_some());

        let f = Poly::new(vec![q(1), q(0), q(1)]);
        let r = laguerre_check(&f, &q(0), &tol).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (q(0).to_scalar(), q(2).to_scalar()));
        assert!(r.note.is_some());

        let cpx = Poly::new(vec![Q::i(), q(1)]);
        assert!(laguerre_check(&cpx, &q(0), &tol).is_err());
    }

    #[test]
    fn schoenberg_examples() {
        let tol = Tolerance::new(1e-9, 1e-9).unwrap();
        let g = schoenberg_gap(&Poly::from_roots(&vec![Q::complex((1, 2), (1, 3)); 4]), &tol).unwrap();
        assert!(g.gap.abs() < 1e-9);
        let g = schoenberg_gap(&Poly::from_roots(&[q(0), q(1), q(-1)]), &tol).unwrap();
        assert!(g.gap.abs() < 1e-12);
        assert!(g.rectilinearity.collinear_through_origin);
        let g = schoenberg_gap(&Poly::new(vec![q(1), q(0), q(1)]), &tol).unwrap();
        assert!(g.gap.abs() < 1e-12);
        assert!(g.rectilinearity.collinear_through_origin);
        assert!(schoenberg_gap(&Poly::new(vec![q(1), q(1)]), &tol).is_err());
    }
}
