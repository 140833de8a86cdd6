//! Abel–Goncharov polynomials `G_n(z; z_0, …, z_{n-1})` and Levinson values
//! `H_m(a_1, …, a_m)`.
//!
//! `G_n` is the monic polynomial of degree `n` with `G_n^{(j)}(z_j) = 0` for
//! every `j < n`. Three constructions are provided and are required to agree
//! exactly over `GaussianRational`.

mod bounds;
mod hessenberg;

pub use bounds::{bound_classical, bound_tight};
pub use hessenberg::{hessenberg_det, HessenbergMatrix};

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::numeric::{binomial, factorial, pascal, Field, Scalar};
use crate::poly::Poly;

/// Interpolation nodes `z_0, …, z_{n-1}`; node `k` pairs with the `k`-th
/// derivative.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeSequence<T> {
    nodes: Vec<T>,
}

impl<T: Field> NodeSequence<T> {
    pub fn new(nodes: Vec<T>) -> Result<Self> {
        if nodes.is_empty() {
            return domain("node sequence must hold at least one node");
        }
        Ok(NodeSequence { nodes })
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    /// `n`, the degree of the associated `G_n`.
    pub fn degree(&self) -> usize {
        self.nodes.len()
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> NodeSequence<U> {
        NodeSequence {
            nodes: self.nodes.iter().map(f).collect(),
        }
    }

    /// Nodes `α z_k + β`.
    pub fn affine(&self, alpha: &T, beta: &T) -> Self {
        self.map(|z| alpha.clone() * z.clone() + beta.clone())
    }
}

impl<T: Field> Serialize for NodeSequence<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            nodes: Vec<Scalar>,
        }
        Wire {
            nodes: self.nodes.iter().map(Field::to_scalar).collect(),
        }
        .serialize(s)
    }
}

/// Indices `1 <= i_1 < … < i_s <= n-1` of the nonzero nodes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportPattern {
    n: usize,
    indices: Vec<usize>,
}

impl SupportPattern {
    pub fn new(n: usize, indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return domain("support pattern needs s >= 1");
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return domain("support indices must be strictly increasing");
        }
        if indices[0] < 1 || indices[indices.len() - 1] >= n {
            return domain(format!("support indices must lie in 1..={}", n.saturating_sub(1)));
        }
        Ok(SupportPattern { n, indices })
    }

    /// Pattern of the nonzero nodes among `z_1, …, z_{n-1}`.
    pub fn of_nodes<T: Field>(nodes: &NodeSequence<T>) -> Result<Self> {
        let idx = (1..nodes.degree())
            .filter(|&k| !nodes.nodes[k].is_zero())
            .collect();
        SupportPattern::new(nodes.degree(), idx)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// `s`
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Construction route for `H_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LevinsonMethod {
    /// Nested antiderivatives.
    Integral,
    /// Unit-subdiagonal determinant with `a^k / k!` entries.
    DetFactorial,
    /// Unit-subdiagonal determinant with binomial entries.
    DetBinomial,
}

impl LevinsonMethod {
    pub const ALL: [LevinsonMethod; 3] = [
        LevinsonMethod::Integral,
        LevinsonMethod::DetFactorial,
        LevinsonMethod::DetBinomial,
    ];
}

fn big<T: Field>(v: &num_bigint::BigInt) -> T {
    T::from_bigint(v)
}

/// `H_m(a_1, …, a_m)`; `H_0 = 1`.
pub fn levinson_h<T: Field>(a: &[T], method: LevinsonMethod) -> T {
    let m = a.len();
    if m == 0 {
        return T::one();
    }
    let sign = |v: T| if m % 2 == 0 { v } else { -v };
    match method {
        LevinsonMethod::Integral => {
            let mut p = Poly::one();
            for ai in a[1..].iter().rev() {
                p = p.antiderivative_from(ai);
            }
            let f = p.antiderivative_from(&a[0]);
            f.eval(&T::zero()) * big(&factorial(m))
        }
        LevinsonMethod::DetFactorial => {
            let inv_fact: Vec<T> = (0..=m).map(|k| T::one() / big(&factorial(k))).collect();
            let mat = HessenbergMatrix::from_fn(m, |i, j| {
                let e = j + 1 - i;
                a[i].powi(e) * inv_fact[e].clone()
            });
            sign(hessenberg_det(&mat) * big(&factorial(m)))
        }
        LevinsonMethod::DetBinomial => {
            let c = pascal(m);
            let mat = HessenbergMatrix::from_fn(m, |i, j| big::<T>(&c[j + 1][i]) * a[i].powi(j + 1 - i));
            sign(hessenberg_det(&mat))
        }
    }
}

/// `H_{m+1}(z, tail…)` as a polynomial in `z`, by interpolation at `0..=m+1`.
pub fn levinson_h_in_first<T: Field>(tail: &[T], method: LevinsonMethod) -> Poly<T> {
    let deg = tail.len() + 1;
    let xs: Vec<T> = (0..=deg as i64).map(T::from_i64).collect();
    let ys: Vec<T> = xs
        .iter()
        .map(|x| {
            let mut args = Vec::with_capacity(deg);
            args.push(x.clone());
            args.extend_from_slice(tail);
            levinson_h(&args, method)
        })
        .collect();
    Poly::interpolate(&xs, &ys).expect("integer abscissae are distinct")
}

/// `G_0, …, G_n` for the nodes, by the defining recurrence.
fn recurrence_family<T: Field>(z: &[T]) -> Vec<Poly<T>> {
    let n = z.len();
    let c = pascal(n);
    let mut g: Vec<Poly<T>> = Vec::with_capacity(n + 1);
    g.push(Poly::one());
    for m in 1..=n {
        let mut acc = Poly::monomial(T::one(), m);
        for (k, gk) in g.iter().enumerate() {
            let w = big::<T>(&c[m][k]) * z[k].powi(m - k);
            if !w.is_zero() {
                acc = &acc - &gk.scale(&w);
            }
        }
        g.push(acc);
    }
    g
}

/// `G_n = z^n - Σ_{k<n} C(n,k) z_k^{n-k} G_k`.
pub fn goncharov_recurrence<T: Field>(nodes: &NodeSequence<T>) -> Poly<T> {
    recurrence_family(nodes.nodes()).pop().expect("family is non-empty")
}

/// `n!` times the chain `∫_{z_0} ∫_{z_1} … ∫_{z_{n-1}} 1`.
pub fn goncharov_integral<T: Field>(nodes: &NodeSequence<T>) -> Poly<T> {
    let mut p = Poly::one();
    for zk in nodes.nodes().iter().rev() {
        p = p.antiderivative_from(zk);
    }
    p.scale(&big(&factorial(nodes.degree())))
}

/// `G_n = Σ_{k=1..n} (z^k - z_0^k) C(n,k) H_{n-k}(z_k, …, z_{n-1})`.
pub fn goncharov_levinson<T: Field>(nodes: &NodeSequence<T>, method: LevinsonMethod) -> Poly<T> {
    let z = nodes.nodes();
    let n = z.len();
    let mut acc = Poly::zero();
    for k in 1..=n {
        let w = big::<T>(&binomial(n, k)) * levinson_h(&z[k..], method);
        let term = Poly::monomial(T::one(), k) - Poly::constant(z[0].powi(k));
        acc = &acc + &term.scale(&w);
    }
    acc
}

/// `Σ_{k=1..n} C(n,k) z^k H_{n-k}(z_k, …, z_{n-1})`; requires `z_0 = 0`.
pub fn goncharov_expand<T: Field>(nodes: &NodeSequence<T>, method: LevinsonMethod) -> Result<Poly<T>> {
    require_zero_base(nodes)?;
    Ok(goncharov_levinson(nodes, method))
}

fn require_zero_base<T: Field>(nodes: &NodeSequence<T>) -> Result<()> {
    if nodes.nodes()[0].is_zero() {
        Ok(())
    } else {
        domain("first node must be exactly zero")
    }
}

/// Binomial Hessenberg matrix in `(z, z_1, …, z_{n-1})`; its determinant is
/// `(-1)^n H_n(z, z_1, …, z_{n-1})`.
pub fn full_matrix<T: Field>(nodes: &NodeSequence<T>, z: &T) -> Result<HessenbergMatrix<T>> {
    require_zero_base(nodes)?;
    let n = nodes.degree();
    let c = pascal(n);
    let a = |i: usize| if i == 0 { z.clone() } else { nodes.nodes()[i].clone() };
    Ok(HessenbergMatrix::from_fn(n, |i, j| big::<T>(&c[j + 1][i]) * a(i).powi(j + 1 - i)))
}

/// Determinant of [`full_matrix`].
pub fn full_det<T: Field>(nodes: &NodeSequence<T>, z: &T) -> Result<T> {
    Ok(hessenberg_det(&full_matrix(nodes, z)?))
}

/// [`full_det`] as a polynomial in `z`, interpolated at `0..=n`.
pub fn full_det_polynomial<T: Field>(nodes: &NodeSequence<T>) -> Result<Poly<T>> {
    let xs: Vec<T> = (0..=nodes.degree() as i64).map(T::from_i64).collect();
    let ys = xs.iter().map(|x| full_det(nodes, x)).collect::<Result<Vec<T>>>()?;
    Poly::interpolate(&xs, &ys)
}

/// `(s+1) × (s+1)` matrix on the support `i_1 < … < i_s`, `i_{s+1} = n`:
/// row 0 is `z^{i_{c+1} - i_1}`, row `r >= 1` is
/// `C(i_{c+1}, i_r) z_{i_r}^{i_{c+1} - i_r}`.
pub fn compressed_matrix<T: Field>(
    nodes: &NodeSequence<T>,
    pattern: &SupportPattern,
    z: &T,
) -> Result<HessenbergMatrix<T>> {
    let n = nodes.degree();
    if pattern.n() != n {
        return Err(Error::Consistency(format!(
            "pattern is for degree {}, nodes have degree {n}",
            pattern.n()
        )));
    }
    if !nodes.nodes()[0].is_zero() {
        return Err(Error::Consistency("first node must be zero".into()));
    }
    for k in 1..n {
        if !pattern.indices().contains(&k) && !nodes.nodes()[k].is_zero() {
            return Err(Error::Consistency(format!("node {k} is nonzero but off the pattern")));
        }
    }
    if z.is_zero() {
        return domain("compressed determinant needs z != 0");
    }
    let mut idx = pattern.indices().to_vec();
    idx.push(n);
    let i1 = idx[0];
    Ok(HessenbergMatrix::from_fn(idx.len(), |r, c| {
        if r == 0 {
            z.powi(idx[c] - i1)
        } else {
            let ir = idx[r - 1];
            big::<T>(&binomial(idx[c], ir)) * nodes.nodes()[ir].powi(idx[c] - ir)
        }
    }))
}

/// Determinant of [`compressed_matrix`]; equals `(-1)^s z^{-i_1} G_n(z)`.
pub fn compressed_det<T: Field>(nodes: &NodeSequence<T>, pattern: &SupportPattern, z: &T) -> Result<T> {
    Ok(hessenberg_det(&compressed_matrix(nodes, pattern, z)?))
}

/// `(C(n, i_1) - 1) z^{n - i_1}`, the single-support compressed determinant
/// at `z = z_{i_1}`.
pub fn s1_nonvanishing<T: Field>(n: usize, i1: usize, z: &T) -> Result<T> {
    if i1 < 1 || i1 >= n {
        return domain("need 1 <= i1 < n");
    }
    if z.is_zero() {
        return domain("need z != 0");
    }
    Ok((big::<T>(&binomial(n, i1)) - T::one()) * z.powi(n - i1))
}
