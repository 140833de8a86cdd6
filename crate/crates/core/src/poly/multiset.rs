use num_complex::Complex64;
use serde::Serialize;

use super::{roots_numeric, squarefree_decomposition, Poly};
use crate::error::{domain, Result};
use crate::numeric::{Field, Scalar, Tolerance};

/// Default distance at which numerically split roots are merged.
pub const DEFAULT_CLUSTER_TOL: Tolerance = Tolerance {
    absolute: 1e-7,
    relative: 0.0,
};

/// Distinct roots `λ_j` with multiplicities `r_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootMultiset<T> {
    entries: Vec<(T, usize)>,
}

impl<T: Field> RootMultiset<T> {
    /// Rejects zero multiplicities and repeated roots.
    pub fn new(entries: Vec<(T, usize)>) -> Result<Self> {
        if entries.iter().any(|(_, r)| *r == 0) {
            return domain("multiplicities must be positive");
        }
        for i in 0..entries.len() {
            for j in 0..i {
                if entries[i].0 == entries[j].0 {
                    return domain("distinct roots listed twice");
                }
            }
        }
        Ok(RootMultiset { entries })
    }

    /// Groups an explicit root list by exact equality.
    pub fn from_list(roots: &[T]) -> Self {
        let mut entries: Vec<(T, usize)> = Vec::new();
        for r in roots {
            match entries.iter_mut().find(|(v, _)| v == r) {
                Some((_, m)) => *m += 1,
                None => entries.push((r.clone(), 1)),
            }
        }
        RootMultiset { entries }
    }

    pub fn entries(&self) -> &[(T, usize)] {
        &self.entries
    }

    /// `n = Σ r_j`
    pub fn degree(&self) -> usize {
        self.entries.iter().map(|(_, r)| r).sum()
    }

    /// `k`, the number of distinct roots.
    pub fn distinct_count(&self) -> usize {
        self.entries.len()
    }

    /// `r = max_j r_j`
    pub fn max_multiplicity(&self) -> usize {
        self.entries.iter().map(|(_, r)| *r).max().unwrap_or(0)
    }

    pub fn distinct(&self) -> impl Iterator<Item = &T> {
        self.entries.iter().map(|(v, _)| v)
    }

    /// Every root repeated according to multiplicity.
    pub fn flatten(&self) -> Vec<T> {
        self.entries
            .iter()
            .flat_map(|(v, r)| std::iter::repeat_n(v.clone(), *r))
            .collect()
    }

    /// Monic `Π (z - λ_j)^{r_j}`.
    pub fn to_poly(&self) -> Poly<T> {
        Poly::from_roots(&self.flatten())
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> RootMultiset<U> {
        RootMultiset {
            entries: self.entries.iter().map(|(v, r)| (f(v), *r)).collect(),
        }
    }

    pub fn to_c64(&self) -> RootMultiset<Complex64> {
        self.map(|v| v.to_c64())
    }

    pub fn is_squarefree(&self) -> bool {
        self.entries.iter().all(|(_, r)| *r == 1)
    }
}

#[derive(Serialize)]
struct Entry {
    root: Scalar,
    multiplicity: usize,
}

impl<T: Field> Serialize for RootMultiset<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<Entry> = self
            .entries
            .iter()
            .map(|(root, r)| Entry {
                root: root.to_scalar(),
                multiplicity: *r,
            })
            .collect();
        v.serialize(s)
    }
}

/// Single-linkage clustering; roots closer than `tol` (chained) merge and
/// are represented by their mean. Exact scalars only merge when equal.
pub fn cluster_roots<T: Field>(roots: &[T], tol: &Tolerance) -> RootMultiset<T> {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in 0..i {
            if roots[i].approx_eq(&roots[j], tol) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut order: Vec<usize> = Vec::new();
    let mut sums: Vec<(T, usize)> = Vec::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        match order.iter().position(|&r| r == root) {
            Some(k) => {
                sums[k].0 = sums[k].0.clone() + roots[i].clone();
                sums[k].1 += 1;
            }
            None => {
                order.push(root);
                sums.push((roots[i].clone(), 1));
            }
        }
    }
    let entries = sums
        .into_iter()
        .map(|(s, m)| (s / T::from_i64(m as i64), m))
        .collect();
    RootMultiset { entries }
}

/// Distinct roots of `f` with multiplicities.
///
/// Exact input goes through the squarefree decomposition, so multiplicities
/// are exact and each distinct root is extracted from a squarefree factor.
/// Float input is clustered at `tol`.
pub fn root_multiset<T: Field>(f: &Poly<T>, tol: &Tolerance) -> Result<RootMultiset<Complex64>> {
    if T::EXACT {
        let mut entries = Vec::new();
        for (factor, mult) in squarefree_decomposition(f)? {
            for r in roots_numeric(&factor)?.roots {
                entries.push((r, mult));
            }
        }
        return Ok(RootMultiset { entries });
    }
    Ok(cluster_roots(&roots_numeric(f)?.roots, tol))
}
