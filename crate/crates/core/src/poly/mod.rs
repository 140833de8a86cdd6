//! Dense univariate polynomials over a [`Field`].
//!
//! Coefficients are stored in ascending order (`coeffs[k]` multiplies `z^k`).
//! The descending `a_0 z^n + ... + a_n` layout only appears at the JSON
//! boundary, see [`Poly::from_descending`].

mod multiset;
mod roots;

pub use multiset::{cluster_roots, root_multiset, RootMultiset, DEFAULT_CLUSTER_TOL};
pub use roots::{derivative_roots, roots_numeric, DerivativeRootSet};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{domain, Error, Result};
use crate::numeric::{Field, GaussianRational};

#[derive(Clone, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Field> Poly<T> {
    /// Builds from ascending coefficients, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Builds from the descending layout `a_0 z^n + a_1 z^{n-1} + ... + a_n`.
    pub fn from_descending(mut coeffs: Vec<T>) -> Self {
        coeffs.reverse();
        Self::new(coeffs)
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `c z^k`
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// The identity polynomial `z`.
    pub fn identity() -> Self {
        Self::monomial(T::one(), 1)
    }

    /// Monic `Π (z - r)`.
    pub fn from_roots(roots: &[T]) -> Self {
        roots.iter().fold(Self::one(), |acc, r| {
            acc.mul_linear(r)
        })
    }

    /// `self · (z - r)`
    fn mul_linear(&self, r: &T) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let n = self.coeffs.len();
        let mut out = vec![T::zero(); n + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k + 1] = out[k + 1].clone() + c.clone();
            out[k] = out[k].clone() - c.clone() * r.clone();
        }
        Self::new(out)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lead) => {
                let inv = T::one() / lead.clone();
                self.scale(&inv)
            }
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Horner evaluation, highest coefficient first.
    pub fn eval(&self, z: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * z.clone() + c.clone())
    }

    /// The `m`-th formal derivative.
    pub fn derivative(&self, m: usize) -> Self {
        if m == 0 {
            return self.clone();
        }
        if self.coeffs.len() <= m {
            return Self::zero();
        }
        let coeffs = (m..self.coeffs.len())
            .map(|k| {
                // falling factorial k (k-1) ... (k-m+1)
                let ff = ((k - m + 1)..=k).try_fold(1i64, |acc, j| acc.checked_mul(j as i64));
                let ff = match ff {
                    Some(v) => T::from_i64(v),
                    None => T::from_bigint(
                        &((k - m + 1)..=k).map(num_bigint::BigInt::from).product(),
                    ),
                };
                self.coeffs[k].clone() * ff
            })
            .collect();
        Self::new(coeffs)
    }

    /// The antiderivative `F` with `F(a) = 0`, i.e. `∫_a^z f`.
    pub fn antiderivative_from(&self, a: &T) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(T::zero());
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.clone() / T::from_i64(k as i64 + 1));
        }
        let mut f = Self::new(coeffs);
        let at_a = f.eval(a);
        f.coeffs[0] = -at_a;
        Self::new(f.coeffs)
    }

    /// `f(αz + β)`, expanded.
    pub fn affine_compose(&self, alpha: &T, beta: &T) -> Result<Self> {
        if alpha.is_zero() {
            return domain("affine_compose needs a nonzero scale factor");
        }
        let inner = Poly::new(vec![beta.clone(), alpha.clone()]);
        Ok(self
            .coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * &inner) + &Self::constant(c.clone())))
    }

    /// Euclidean division; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = match divisor.degree() {
            None => return domain("polynomial division by zero"),
            Some(d) => d,
        };
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() / lead.clone();
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * d.clone();
            }
            // exact cancellation of the leading term
            rem[k + dd] = T::zero();
            quot[k] = c;
        }
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Division that must leave no remainder.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::Consistency("non-zero remainder in exact division".into()));
        }
        Ok(q)
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Lossy conversion to binary64 coefficients.
    pub fn to_c64(&self) -> Poly<Complex64> {
        self.map(|c| c.to_c64())
    }

    /// Largest coefficient modulus.
    pub fn max_coeff_modulus(&self) -> f64 {
        self.coeffs.iter().map(|c| c.modulus()).fold(0.0, f64::max)
    }

    pub fn has_real_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_real())
    }

    /// Newton divided-difference interpolation through `(xs[i], ys[i])`.
    pub fn interpolate(xs: &[T], ys: &[T]) -> Result<Self> {
        if xs.len() != ys.len() || xs.is_empty() {
            return domain("interpolation needs equally many (>= 1) abscissae and values");
        }
        let n = xs.len();
        let mut table = ys.to_vec();
        for level in 1..n {
            for i in (level..n).rev() {
                let dx = xs[i].clone() - xs[i - level].clone();
                if dx.is_zero() {
                    return domain("interpolation abscissae must be distinct");
                }
                table[i] = (table[i].clone() - table[i - 1].clone()) / dx;
            }
        }
        let mut p = Self::constant(table[n - 1].clone());
        for i in (0..n - 1).rev() {
            p = &p.mul_linear(&xs[i]) + &Self::constant(table[i].clone());
        }
        Ok(p)
    }
}

/// Euclid over a field; the result is monic. Only meaningful for exact `T`.
pub(crate) fn euclid_gcd<T: Field>(f: &Poly<T>, g: &Poly<T>) -> Result<Poly<T>> {
    if f.is_zero() && g.is_zero() {
        return domain("gcd of two zero polynomials is undefined");
    }
    let mut a = f.monic();
    let mut b = g.monic();
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b)?;
        a = b;
        b = r.monic();
    }
    Ok(a.monic())
}

/// Monic GCD over Q(i).
pub fn exact_gcd(f: &Poly<GaussianRational>, g: &Poly<GaussianRational>) -> Result<Poly<GaussianRational>> {
    euclid_gcd(f, g)
}

/// Yun's squarefree decomposition: `f = lead · Π a_i^i` with each `a_i`
/// monic, squarefree and pairwise coprime. Returns `(a_i, i)` for the
/// non-constant factors. Requires exact arithmetic.
pub fn squarefree_decomposition<T: Field>(f: &Poly<T>) -> Result<Vec<(Poly<T>, usize)>> {
    if !T::EXACT {
        return Err(Error::Type("squarefree decomposition needs exact coefficients".into()));
    }
    let deg = match f.degree() {
        None => return domain("squarefree decomposition of the zero polynomial"),
        Some(d) => d,
    };
    let mut out = Vec::new();
    if deg == 0 {
        return Ok(out);
    }
    let f = f.monic();
    let df = f.derivative(1);
    let a0 = euclid_gcd(&f, &df)?;
    let mut b = f.exact_div(&a0)?;
    let mut c = df.exact_div(&a0)?;
    let mut d = &c - &b.derivative(1);
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = euclid_gcd(&b, &d)?;
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        b = b.exact_div(&a)?;
        c = d.exact_div(&a)?;
        d = &c - &b.derivative(1);
        i += 1;
    }
    Ok(out)
}

impl<T: Field> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl<T: Field> Zero for Poly<T> {
    fn zero() -> Self {
        Poly::zero()
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<T: Field> One for Poly<T> {
    fn one() -> Self {
        Poly::one()
    }
}

impl<T: Field> Add<&Poly<T>> for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Field> Sub<&Poly<T>> for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Field> Mul<&Poly<T>> for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Field> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! by_value {
    ($tr:ident, $m:ident) => {
        impl<T: Field> $tr for Poly<T> {
            type Output = Poly<T>;
            fn $m(self, rhs: Poly<T>) -> Poly<T> {
                (&self).$m(&rhs)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);

impl<T: Field> Neg for Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        -&self
    }
}
