#![allow(dead_code)]

use casalvero::numeric::{Field, GaussianRational as Q};
use num_complex::Complex64;
use num_traits::Zero;
use proptest::prelude::*;

/// Small Gaussian rationals; the imaginary part is zero about half the time.
pub fn small_q() -> impl Strategy<Value = Q> {
    (-9i64..=9, 1i64..=6, -9i64..=9, 1i64..=6, any::<bool>()).prop_map(|(a, b, c, d, real)| {
        if real {
            Q::ratio(a, b)
        } else {
            Q::complex((a, b), (c, d))
        }
    })
}

pub fn nonzero_q() -> impl Strategy<Value = Q> {
    small_q().prop_filter("nonzero", |q| !q.is_zero())
}

pub fn small_c64() -> impl Strategy<Value = Complex64> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| Complex64::new(re, im))
}

/// Cofactor expansion along the first row.
pub fn laplace_det<T: Field>(m: &[Vec<T>]) -> T {
    let n = m.len();
    if n == 0 {
        return T::one();
    }
    let mut acc = T::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<T>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = m[0][j].clone() * laplace_det(&minor);
        acc = if j % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}
