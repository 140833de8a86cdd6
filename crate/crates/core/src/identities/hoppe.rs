use super::{IdentityId, IdentityReport};
use crate::error::{domain, Result};
use crate::numeric::{binomial, Field, Tolerance};
use crate::poly::Poly;

/// `num / den` kept as a raw pair; common factors are never cancelled.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFn<T: Field> {
    pub num: Poly<T>,
    pub den: Poly<T>,
}

impl<T: Field> RationalFn<T> {
    /// `(p/q)' = (p'q - pq') / q²`
    pub fn derivative(&self) -> Self {
        RationalFn {
            num: &(&self.num.derivative(1) * &self.den) - &(&self.num * &self.den.derivative(1)),
            den: &self.den * &self.den,
        }
    }

    pub fn eval(&self, z: &T) -> Result<T> {
        let d = self.den.eval(z);
        if d.is_zero() {
            return domain("rational function has a pole here");
        }
        Ok(self.num.eval(z) / d)
    }
}

/// `(f'/f)^{(m)}(z)` against
/// `Σ_{j=0..m} (-1)^j/(j+1) · C(m+1, j+1) · (f^{j+1})^{(m+1)}(z) / f(z)^{j+1}`.
pub fn hoppe_log_derivative<T: Field>(f: &Poly<T>, m: usize, z: &T, tol: &Tolerance) -> Result<IdentityReport> {
    let fz = f.eval(z);
    let pole = if T::EXACT {
        fz.is_zero()
    } else {
        tol.accepts(fz.modulus(), 0.0, f.max_coeff_modulus())
    };
    if pole {
        return domain("f(z) = 0: the logarithmic derivative has a pole");
    }

    let (lhs, rhs, scale) = if T::EXACT {
        by_rational_functions(f, m, z, &fz)?
    } else {
        by_taylor_series(f, m, z, &fz)
    };
    Ok(IdentityReport::compare(IdentityId::Eq31, lhs, rhs, scale, tol))
}

/// Exact route: `m` quotient-rule steps against powers of `f`.
///
/// `(f'/f)^{(k)} = P_k / f^{k+1}` with `P_{k+1} = P_k' f - (k+1) P_k f'`.
fn by_rational_functions<T: Field>(f: &Poly<T>, m: usize, z: &T, fz: &T) -> Result<(T, T, f64)> {
    let df = f.derivative(1);
    let mut p = df.clone();
    for k in 0..m {
        p = &(&p.derivative(1) * f) - &(&p * &df).scale(&T::from_i64(k as i64 + 1));
    }
    let r = RationalFn {
        num: p,
        den: f.pow(m + 1),
    };
    let lhs = r.eval(z)?;
    let mut rhs = T::zero();
    let mut scale = lhs.modulus();
    let mut fp = Poly::one();
    let mut fzp = T::one();
    for j in 0..=m {
        fp = &fp * f;
        fzp = fzp * fz.clone();
        let w = T::from_bigint(&binomial(m + 1, j + 1)) / T::from_i64(j as i64 + 1);
        let term = w * fp.derivative(m + 1).eval(z) / fzp.clone();
        scale += term.modulus();
        rhs = if j % 2 == 0 { rhs + term } else { rhs - term };
    }
    Ok((lhs, rhs, scale))
}

/// Float route through Taylor coefficients at `z`: the left side from the
/// series quotient `f'(z+h)/f(z+h)`, the right side from truncated powers of
/// `u(h) = f(z+h)/f(z)`. Avoids the degree blow-up of the exact route.
fn by_taylor_series<T: Field>(f: &Poly<T>, m: usize, z: &T, fz: &T) -> (T, T, f64) {
    let order = m + 1;
    let mut taylor = Vec::with_capacity(order + 1);
    let mut fact = T::one();
    for k in 0..=order {
        if k > 0 {
            fact = fact * T::from_i64(k as i64);
        }
        taylor.push(f.derivative(k).eval(z) / fact.clone());
    }
    let u: Vec<T> = taylor.iter().map(|t| t.clone() / fz.clone()).collect();
    let du: Vec<T> = (0..order).map(|k| u[k + 1].clone() * T::from_i64(k as i64 + 1)).collect();

    // q = du / u as a series; u[0] = 1
    let mut q: Vec<T> = Vec::with_capacity(order);
    for k in 0..order {
        let mut c = du[k].clone();
        for i in 1..=k {
            c = c - u[i].clone() * q[k - i].clone();
        }
        q.push(c);
    }
    let m_fact = fact.clone() / T::from_i64(order as i64);
    let lhs = q[m].clone() * m_fact;

    let mut rhs = T::zero();
    let mut scale = lhs.modulus();
    let mut power = vec![T::one()];
    for j in 0..=m {
        power = truncated_mul(&power, &u, order);
        let coeff = power.get(order).cloned().unwrap_or_else(T::zero);
        let w = T::from_bigint(&binomial(m + 1, j + 1)) / T::from_i64(j as i64 + 1);
        let term = w * coeff * fact.clone();
        scale += term.modulus();
        rhs = if j % 2 == 0 { rhs + term } else { rhs - term };
    }
    (lhs, rhs, scale)
}

fn truncated_mul<T: Field>(a: &[T], b: &[T], order: usize) -> Vec<T> {
    let len = (a.len() + b.len() - 1).min(order + 1);
    let mut out = vec![T::zero(); len];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j < len {
                out[i + j] = out[i + j].clone() + x.clone() * y.clone();
            }
        }
    }
    out
}
