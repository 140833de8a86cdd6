use num_traits::ToPrimitive;

use super::NodeSequence;
use crate::numeric::{factorial, Field};

/// Multinomial-sum bound on `|G_n(z)|`.
///
/// Sums `n! / (k_0! … k_{n-1}!) · Π_s d_s^{k_s}` over `k_s <= s + 1 - (k_0 + … + k_{s-1})`
/// for `s <= n-2`, with `k_{n-1}` taking the remainder, where
/// `d_s = |z_{n-2-s} - z_{n-1-s}|` and `z_{-1} = z`.
pub fn bound_tight<T: Field>(nodes: &NodeSequence<T>, z: &T) -> f64 {
    let zs = nodes.nodes();
    let n = zs.len();
    let at = |k: isize| if k < 0 { z.clone() } else { zs[k as usize].clone() };
    let d: Vec<f64> = (0..n as isize)
        .map(|s| (at(n as isize - 2 - s) - at(n as isize - 1 - s)).modulus())
        .collect();
    let fact: Vec<f64> = (0..=n)
        .map(|k| factorial(k).to_f64().unwrap_or(f64::INFINITY))
        .collect();

    fn walk(s: usize, used: usize, weight: f64, d: &[f64], fact: &[f64], total: &mut f64) {
        let n = d.len();
        if s + 1 == n {
            let k = n - used;
            *total += fact[n] * weight * d[s].powi(k as i32) / fact[k];
            return;
        }
        for k in 0..=(s + 1 - used) {
            let w = weight * d[s].powi(k as i32) / fact[k];
            walk(s + 1, used + k, w, d, fact, total);
        }
    }

    let mut total = 0.0;
    walk(0, 0, 1.0, &d, &fact, &mut total);
    total
}

/// `(|z - z_0| + Σ_{s=0..n-2} |z_{s+1} - z_s|)^n`.
pub fn bound_classical<T: Field>(nodes: &NodeSequence<T>, z: &T) -> f64 {
    let zs = nodes.nodes();
    let path: f64 = zs.windows(2).map(|w| (w[1].clone() - w[0].clone()).modulus()).sum();
    ((z.clone() - zs[0].clone()).modulus() + path).powi(zs.len() as i32)
}
