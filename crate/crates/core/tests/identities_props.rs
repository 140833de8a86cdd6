mod common;

use casalvero::identities::*;
use casalvero::numeric::{Field, GaussianRational as Q, Tolerance};
use casalvero::poly::Poly;
use common::{small_c64, small_q};
use num_complex::Complex64;
use num_traits::Zero;
use proptest::collection::vec;
use proptest::prelude::*;

fn tol() -> Tolerance {
    Tolerance::new(0.0, 1e-9).unwrap()
}

fn float_poly(max: usize) -> impl Strategy<Value = Poly<Complex64>> {
    vec(small_c64(), 3..=max).prop_map(|r| Poly::from_roots(&r))
}

fn int_roots(min: usize, max: usize) -> impl Strategy<Value = Vec<Q>> {
    vec((-6i64..=6).prop_map(Q::from_i64), min..=max)
}

fn distinct_reals(min: usize, max: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::sample::subsequence((-40i32..=40).collect::<Vec<_>>(), min..=max)
        .prop_map(|v| v.into_iter().map(|k| k as f64 / 10.0).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn sz_nagy_float(f in float_poly(10), z in small_c64()) {
        let n = f.degree().unwrap();
        for m in 1..=n - 2 {
            for ch in SubcentroidChoice::BOTH {
                let r = sz_nagy_check(&f, m, &z, ch, &tol()).unwrap();
                prop_assert!(r.passed(), "{r:?}");
            }
        }
    }

    #[test]
    fn sz_nagy_exact(roots in int_roots(3, 8), z in small_q()) {
        let f = Poly::from_roots(&roots);
        let n = roots.len();
        for m in 1..=n - 2 {
            let r = sz_nagy_check(&f, m, &z, SubcentroidChoice::First, &tol()).unwrap();
            prop_assert!(r.passed());
            prop_assert_eq!(r.left_middle.residual, 0.0);
            prop_assert_eq!(r.left_right.residual, 0.0);
        }
    }

    #[test]
    fn eq22_and_eq30_float(f in float_poly(9)) {
        let p = MomentParams::default();
        prop_assert!(moment_identity(&f, IdentityId::Eq22, p, &tol()).unwrap().passed);
        let n = f.degree().unwrap();
        for m in 0..=n {
            let r = moment_identity(&f, IdentityId::Eq30, MomentParams { m, s: 0 }, &tol()).unwrap();
            prop_assert!(r.passed, "m={m} {r:?}");
        }
    }

    #[test]
    fn eq24_eq25_float(f in float_poly(8)) {
        for kind in [IdentityId::Eq24, IdentityId::Eq25] {
            let r = moment_identity(&f, kind, MomentParams::default(), &tol()).unwrap();
            prop_assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn moment_family_exact(roots in int_roots(3, 8)) {
        let f = Poly::from_roots(&roots);
        let n = roots.len();
        let rs = casalvero::poly::RootMultiset::from_list(&roots);
        let r = rs.max_multiplicity();
        prop_assert!(moment_identity(&f, IdentityId::Eq22, MomentParams::default(), &tol()).unwrap().passed);
        if rs.distinct_count() >= 2 {
            for kind in [IdentityId::Eq24, IdentityId::Eq25] {
                let rep = moment_identity(&f, kind, MomentParams::default(), &tol()).unwrap();
                prop_assert!(rep.passed && rep.residual == 0.0, "{rep:?}");
            }
        }
        for m in (r - 1)..n {
            for s in 2..=n.saturating_sub(r) {
                if m + s < n {
                    let rep = moment_identity(&f, IdentityId::Eq34, MomentParams { m, s }, &tol()).unwrap();
                    prop_assert!(rep.passed);
                }
            }
        }
    }

    #[test]
    fn moduli_identities_on_lines(xs in distinct_reals(3, 8), phi in 0.0f64..std::f64::consts::PI) {
        let dir = Complex64::from_polar(1.0, phi);
        let f = Poly::from_roots(&xs.iter().map(|x| dir * x).collect::<Vec<_>>());
        let t = tol();
        prop_assert!(moment_identity(&f, IdentityId::Eq26, MomentParams::default(), &t).unwrap().passed);
        prop_assert!(moment_identity(&f, IdentityId::Eq27, MomentParams::default(), &t).unwrap().passed);
        match moment_identity(&f, IdentityId::Eq28, MomentParams::default(), &t) {
            Ok(r) => prop_assert!(r.passed, "{r:?}"),
            Err(e) => prop_assert!(e.to_string().contains("opposite")),
        }
    }

    #[test]
    fn eq28_with_negated_subcentroid(xs in distinct_reals(3, 8), phi in 0.0f64..std::f64::consts::PI) {
        // shift so the centroid sits between the two roots of f^(n-2)
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let dir = Complex64::from_polar(1.0, phi);
        let f = Poly::from_roots(&xs.iter().map(|x| dir * (x - mean + 1e-3)).collect::<Vec<_>>());
        let r = moment_identity(&f, IdentityId::Eq28, MomentParams::default(), &tol()).unwrap();
        prop_assert!(r.passed, "{r:?}");
    }

    #[test]
    fn laguerre_on_real_rooted(xs in distinct_reals(2, 8), at in vec(-5.0f64..5.0, 20)) {
        let f = Poly::from_roots(&xs.iter().map(|x| Complex64::new(*x, 0.0)).collect::<Vec<_>>());
        prop_assert!(laguerre_hypothesis(&f).unwrap());
        for x in at {
            let r = laguerre_check(&f, &Complex64::new(x, 0.0), &Tolerance::default()).unwrap();
            prop_assert!(r.passed && r.note.is_none());
        }
    }

    #[test]
    fn schoenberg_equality_on_real_lines(xs in vec(-3.0f64..3.0, 2..=8), phi in 0.0f64..std::f64::consts::PI) {
        let dir = Complex64::from_polar(1.0, phi);
        let rs = casalvero::poly::RootMultiset::from_list(&xs.iter().map(|x| dir * x).collect::<Vec<_>>());
        let g = schoenberg_gap_of_roots(&rs, &Tolerance::new(1e-9, 1e-9).unwrap()).unwrap();
        prop_assert!(g.gap.abs() <= 1e-9 * (1.0 + g.scale), "{g:?}");
        prop_assert!(g.rectilinearity.collinear_through_origin);
    }

    #[test]
    fn newton_like_exact(tail in vec(small_q(), 0..8), points in vec(small_q(), 1..4)) {
        let mut nodes = vec![Q::from_i64(0)];
        nodes.extend(tail);
        let ns = casalvero::goncharov::NodeSequence::new(nodes).unwrap();
        let r = newton_like_aggregate(&ns, &points, &tol()).unwrap();
        prop_assert!(r.passed && r.residual == 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn hoppe_exact(coeffs in vec((-4i64..=4, 1i64..=3), 2..=7), m in 0usize..=5, z in small_q()) {
        let f = Poly::new(coeffs.iter().map(|&(a, b)| Q::ratio(a, b)).collect());
        prop_assume!(f.degree().unwrap_or(0) >= 1 && !f.eval(&z).is_zero());
        let r = hoppe_log_derivative(&f, m, &z, &tol()).unwrap();
        prop_assert!(r.passed, "{r:?}");
    }
}

#[test]
fn hoppe_float_agrees() {
    let f: Poly<Complex64> = Poly::from_roots(&[Complex64::new(0.3, 1.0), Complex64::new(-1.0, 0.2), Complex64::new(2.0, 0.0)]);
    for m in 0..=5 {
        let r = hoppe_log_derivative(&f, m, &Complex64::new(0.5, -0.5), &Tolerance::new(0.0, 1e-10).unwrap()).unwrap();
        assert!(r.passed, "{r:?}");
    }
}

#[test]
fn centroid_means_on_random_floats() {
    let f: Poly<Complex64> = Poly::from_roots(&[
        Complex64::new(0.3, 1.0),
        Complex64::new(-1.0, 0.2),
        Complex64::new(2.0, 0.0),
        Complex64::new(0.1, -0.7),
        Complex64::new(-0.4, 0.4),
    ]);
    let cd = centroid(&f, &Tolerance::new(1e-9, 0.0).unwrap()).unwrap();
    let c = casalvero::numeric::to_float(&cd.centroid).unwrap();
    assert!((c - Complex64::new(0.2, 0.18)).norm() < 1e-12);
}
