use crate::error::{domain, Result};
use crate::numeric::Field;

/// Upper Hessenberg matrix with unit first subdiagonal.
///
/// Only the upper triangle is stored: `upper[i]` holds columns `i..size`.
#[derive(Clone, Debug, PartialEq)]
pub struct HessenbergMatrix<T> {
    upper: Vec<Vec<T>>,
}

impl<T: Field> HessenbergMatrix<T> {
    pub fn new(upper: Vec<Vec<T>>) -> Result<Self> {
        let s = upper.len();
        for (i, row) in upper.iter().enumerate() {
            if row.len() != s - i {
                return domain(format!("row {i} must hold {} upper entries", s - i));
            }
        }
        Ok(HessenbergMatrix { upper })
    }

    /// Fills `(i, j)` for `j >= i` from `entry`.
    pub fn from_fn(size: usize, mut entry: impl FnMut(usize, usize) -> T) -> Self {
        let upper = (0..size)
            .map(|i| (i..size).map(|j| entry(i, j)).collect())
            .collect();
        HessenbergMatrix { upper }
    }

    pub fn size(&self) -> usize {
        self.upper.len()
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        if j >= i {
            self.upper[i][j - i].clone()
        } else if i == j + 1 {
            T::one()
        } else {
            T::zero()
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let s = self.size();
        (0..s).map(|i| (0..s).map(|j| self.get(i, j)).collect()).collect()
    }
}

/// Determinant via leading principal minors:
/// `p_k = Σ_{i=1..k} (-1)^{k-i} M[i,k] p_{i-1}`, `p_0 = 1`.
pub fn hessenberg_det<T: Field>(m: &HessenbergMatrix<T>) -> T {
    let s = m.size();
    let mut p: Vec<T> = Vec::with_capacity(s + 1);
    p.push(T::one());
    for k in 1..=s {
        let mut acc = T::zero();
        for i in 1..=k {
            let term = m.get(i - 1, k - 1) * p[i - 1].clone();
            acc = if (k - i) % 2 == 0 { acc + term } else { acc - term };
        }
        p.push(acc);
    }
    p.pop().unwrap_or_else(T::one)
}
