//! Scalar fields.
//!
//! Every algorithm in the crate is generic over [`Field`]. Two families
//! implement it: [`GaussianRational`] (exact arithmetic in Q(i), arbitrary
//! precision) and `Complex<F>` for `F = f32 | f64`. Mixing the two is a
//! compile-time error; the tagged [`Scalar`] is used only at I/O boundaries,
//! where mixed operations are rejected at runtime.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Absolute/relative comparison band.
///
/// `a ≈ b` iff `|a - b| <= absolute + relative * max(|a|, |b|)`. This is
/// reflexive and symmetric but not transitive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub absolute: f64,
    pub relative: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            absolute: 1e-10,
            relative: 1e-10,
        }
    }
}

impl Tolerance {
    pub fn new(absolute: f64, relative: f64) -> Result<Self> {
        if !(absolute >= 0.0 && relative >= 0.0 && absolute.is_finite() && relative.is_finite()) {
            return Err(Error::Domain(format!(
                "tolerance components must be finite and non-negative (got {absolute}, {relative})"
            )));
        }
        Ok(Tolerance { absolute, relative })
    }

    /// Purely absolute band.
    pub fn absolute(absolute: f64) -> Self {
        Tolerance {
            absolute,
            relative: 0.0,
        }
    }

    /// Whether a difference of size `diff` between values of magnitude
    /// `mag_a`, `mag_b` is inside the band.
    pub fn accepts(&self, diff: f64, mag_a: f64, mag_b: f64) -> bool {
        diff <= self.absolute + self.relative * mag_a.max(mag_b)
    }
}

/// Coefficient field shared by every polynomial algorithm.
pub trait Field:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// True when arithmetic never rounds.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn from_bigint(v: &BigInt) -> Self;

    /// Conversion from a binary64 pair. Exact for `GaussianRational`
    /// (every finite double is dyadic).
    fn from_c64(z: Complex64) -> Self;

    /// Nearest binary64 pair. Saturates to infinity on overflow; use
    /// [`to_float`] for the checked version.
    fn to_c64(&self) -> Complex64;

    fn conj(&self) -> Self;

    fn is_real(&self) -> bool;

    fn approx_eq(&self, other: &Self, tol: &Tolerance) -> bool;

    fn to_scalar(&self) -> Scalar;

    fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }

    fn powi(&self, k: usize) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            k >>= 1;
            if k > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

/// Exact element of Q(i).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussianRational {
            re,
            im: BigRational::zero(),
        }
    }

    /// `num/den + 0i`. Panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(num.into(), den.into()))
    }

    pub fn complex(re: (i64, i64), im: (i64, i64)) -> Self {
        GaussianRational {
            re: BigRational::new(re.0.into(), re.1.into()),
            im: BigRational::new(im.0.into(), im.1.into()),
        }
    }

    pub fn i() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    /// |z|², exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return None;
        }
        Some(GaussianRational {
            re: &self.re / &n,
            im: -&self.im / &n,
        })
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", render_rational(&self.re))
        } else {
            write!(
                f,
                "({},{})",
                render_rational(&self.re),
                render_rational(&self.im)
            )
        }
    }
}

impl FromStr for GaussianRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match parse_scalar(s)? {
            Scalar::Exact(q) => Ok(q),
            Scalar::Float(_) => Err(Error::Type(format!("`{s}` is not an exact literal"))),
        }
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        GaussianRational::real(BigRational::one())
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational::real(&self.re * &rhs.re);
        }
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: &GaussianRational) -> GaussianRational {
        if rhs.im.is_zero() {
            assert!(!rhs.re.is_zero(), "division by zero in Q(i)");
            return GaussianRational {
                re: &self.re / &rhs.re,
                im: &self.im / &rhs.re,
            };
        }
        // multiply by the conjugate
        let n = rhs.norm_sqr();
        GaussianRational {
            re: (&self.re * &rhs.re + &self.im * &rhs.im) / &n,
            im: (&self.im * &rhs.re - &self.re * &rhs.im) / &n,
        }
    }
}

macro_rules! forward_by_value {
    ($tr:ident, $m:ident) => {
        impl $tr for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_by_value!(Add, add);
forward_by_value!(Sub, sub);
forward_by_value!(Mul, mul);
forward_by_value!(Div, div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -self.re,
            im: -self.im,
        }
    }
}

fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

impl Field for GaussianRational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        GaussianRational::real(BigRational::from_integer(v.into()))
    }

    fn from_bigint(v: &BigInt) -> Self {
        GaussianRational::real(BigRational::from_integer(v.clone()))
    }

    fn from_c64(z: Complex64) -> Self {
        let conv = |x: f64| BigRational::from_float(x).expect("finite binary64");
        GaussianRational {
            re: conv(z.re),
            im: conv(z.im),
        }
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    fn approx_eq(&self, other: &Self, _tol: &Tolerance) -> bool {
        self == other
    }

    fn to_scalar(&self) -> Scalar {
        Scalar::Exact(self.clone())
    }
}

impl<F> Field for Complex<F>
where
    F: Float + fmt::Debug + Send + Sync + 'static,
{
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        Complex::new(F::from(v).unwrap_or_else(F::nan), F::zero())
    }

    fn from_bigint(v: &BigInt) -> Self {
        let x = v.to_f64().unwrap_or(f64::INFINITY);
        Complex::new(F::from(x).unwrap_or_else(F::infinity), F::zero())
    }

    fn from_c64(z: Complex64) -> Self {
        Complex::new(
            F::from(z.re).unwrap_or_else(F::nan),
            F::from(z.im).unwrap_or_else(F::nan),
        )
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn is_real(&self) -> bool {
        self.im == F::zero()
    }

    fn approx_eq(&self, other: &Self, tol: &Tolerance) -> bool {
        let a = self.to_c64();
        let b = other.to_c64();
        tol.accepts((a - b).norm(), a.norm(), b.norm())
    }

    fn to_scalar(&self) -> Scalar {
        Scalar::Float(self.to_c64())
    }
}

/// A value read from or written to the outside world: either exact or
/// binary64. Arithmetic across the two tags is refused.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(GaussianRational),
    Float(Complex64),
}

impl Scalar {
    /// Validated floating constructor; NaN and infinities are refused.
    pub fn float(re: f64, im: f64) -> Result<Self> {
        if !(re.is_finite() && im.is_finite()) {
            return Err(Error::Domain(format!("non-finite complex value ({re}, {im})")));
        }
        Ok(Scalar::Float(Complex64::new(re, im)))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&GaussianRational> {
        match self {
            Scalar::Exact(q) => Some(q),
            Scalar::Float(_) => None,
        }
    }

    fn binary(
        &self,
        rhs: &Scalar,
        op: &str,
        fq: impl Fn(&GaussianRational, &GaussianRational) -> Option<GaussianRational>,
        ff: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Scalar> {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => fq(a, b)
                .map(Scalar::Exact)
                .ok_or_else(|| Error::Domain("division by zero".into())),
            (Scalar::Float(a), Scalar::Float(b)) => {
                let v = ff(*a, *b);
                Scalar::float(v.re, v.im)
            }
            _ => Err(Error::Type(format!(
                "`{op}` between exact and float scalars; convert explicitly with to_float"
            ))),
        }
    }

    pub fn try_add(&self, rhs: &Scalar) -> Result<Scalar> {
        self.binary(rhs, "+", |a, b| Some(a + b), |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &Scalar) -> Result<Scalar> {
        self.binary(rhs, "-", |a, b| Some(a - b), |a, b| a - b)
    }

    pub fn try_mul(&self, rhs: &Scalar) -> Result<Scalar> {
        self.binary(rhs, "*", |a, b| Some(a * b), |a, b| a * b)
    }

    pub fn try_div(&self, rhs: &Scalar) -> Result<Scalar> {
        self.binary(
            rhs,
            "/",
            |a, b| (!b.is_zero()).then(|| a / b),
            |a, b| a / b,
        )
    }

    pub fn modulus(&self) -> f64 {
        match self {
            Scalar::Exact(q) => q.modulus(),
            Scalar::Float(z) => z.norm(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => write!(f, "{q}"),
            Scalar::Float(z) if z.im == 0.0 => write!(f, "{}", render_f64(z.re)),
            Scalar::Float(z) => write!(f, "({},{})", render_f64(z.re), render_f64(z.im)),
        }
    }
}

/// Canonical text of a rational: `p` or `p/q`.
pub fn render_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// 17 significant digits, always with a mantissa point so that the text
/// re-parses as a decimal (float) literal.
pub fn render_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Nearest binary64 pair; idempotent on floats.
pub fn to_float(x: &Scalar) -> Result<Complex64> {
    match x {
        Scalar::Float(z) => Ok(*z),
        Scalar::Exact(q) => {
            let z = q.to_c64();
            if z.re.is_finite() && z.im.is_finite() {
                Ok(z)
            } else {
                Err(Error::Overflow(format!("{q} does not fit into binary64")))
            }
        }
    }
}

/// Exact pairs compare by identity; anything involving a float uses the
/// tolerance band.
pub fn approx_eq(a: &Scalar, b: &Scalar, tol: &Tolerance) -> bool {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => x == y,
        _ => match (to_float(a), to_float(b)) {
            (Ok(x), Ok(y)) => tol.accepts((x - y).norm(), x.norm(), y.norm()),
            _ => false,
        },
    }
}

enum Literal {
    Exact(BigRational),
    Float(f64),
}

fn parse_integer(tok: &str) -> Result<BigInt> {
    let digits = tok.strip_prefix(['-', '+']).unwrap_or(tok);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse {
            token: tok.to_string(),
        });
    }
    BigInt::from_str(tok.strip_prefix('+').unwrap_or(tok)).map_err(|_| Error::Parse {
        token: tok.to_string(),
    })
}

fn parse_real(tok: &str) -> Result<Literal> {
    let tok = tok.trim();
    if let Some((num, den)) = tok.split_once('/') {
        let num = parse_integer(num.trim())?;
        let den_tok = den.trim();
        if den_tok.starts_with(['-', '+']) {
            return Err(Error::Parse {
                token: den_tok.to_string(),
            });
        }
        let den = parse_integer(den_tok)?;
        if den.is_zero() {
            return Err(Error::Domain(format!("zero denominator in `{tok}`")));
        }
        return Ok(Literal::Exact(BigRational::new(num, den)));
    }
    if let Ok(i) = parse_integer(tok) {
        return Ok(Literal::Exact(BigRational::from_integer(i)));
    }
    let looks_decimal = !tok.is_empty()
        && tok
            .bytes()
            .all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'e' | b'E' | b'-' | b'+'))
        && tok.bytes().any(|b| b.is_ascii_digit());
    if looks_decimal {
        if let Ok(x) = tok.parse::<f64>() {
            if x.is_finite() {
                return Ok(Literal::Float(x));
            }
            return Err(Error::Overflow(format!("`{tok}` overflows binary64")));
        }
    }
    Err(Error::Parse {
        token: tok.to_string(),
    })
}

fn combine(re: Literal, im: Literal) -> Scalar {
    match (re, im) {
        (Literal::Exact(a), Literal::Exact(b)) => Scalar::Exact(GaussianRational::new(a, b)),
        (a, b) => {
            let f = |l: Literal| match l {
                Literal::Exact(q) => rational_to_f64(&q),
                Literal::Float(x) => x,
            };
            Scalar::Float(Complex64::new(f(a), f(b)))
        }
    }
}

#[derive(Deserialize)]
struct ScalarRecord {
    re: String,
    #[serde(default = "zero_text")]
    im: String,
}

fn zero_text() -> String {
    "0".to_string()
}

/// Parses `p`, `p/q`, a decimal, `(re,im)`, or `{"re": .., "im": ..}`.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let t = text.trim();
    if t.starts_with('{') {
        let rec: ScalarRecord = serde_json::from_str(t).map_err(|_| Error::Parse {
            token: t.to_string(),
        })?;
        return Ok(combine(parse_real(&rec.re)?, parse_real(&rec.im)?));
    }
    if let Some(inner) = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
        let (re, im) = inner.split_once(',').ok_or_else(|| Error::Parse {
            token: t.to_string(),
        })?;
        return Ok(combine(parse_real(re)?, parse_real(im)?));
    }
    Ok(combine(parse_real(t)?, Literal::Exact(BigRational::zero())))
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let (re, im) = match self {
            Scalar::Exact(q) => (render_rational(&q.re), render_rational(&q.im)),
            Scalar::Float(z) => (render_f64(z.re), render_f64(z.im)),
        };
        let mut st = s.serialize_struct("Scalar", 2)?;
        st.serialize_field("re", &re)?;
        st.serialize_field("im", &im)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rec = ScalarRecord::deserialize(d)?;
        let re = parse_real(&rec.re).map_err(serde::de::Error::custom)?;
        let im = parse_real(&rec.im).map_err(serde::de::Error::custom)?;
        Ok(combine(re, im))
    }
}

/// Exact binomial coefficient via Pascal's rule.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut row = vec![BigInt::zero(); k + 1];
    row[0] = BigInt::one();
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            let prev = row[j - 1].clone();
            row[j] += prev;
        }
    }
    row[k].clone()
}

/// Table `C(i, j)` for `0 <= j <= i <= n`.
pub fn pascal(n: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut row = vec![BigInt::one(); i + 1];
        for j in 1..i {
            row[j] = &rows[i - 1][j - 1] + &rows[i - 1][j];
        }
        rows.push(row);
    }
    rows
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Absolute value of a real rational as f64.
pub fn abs_f64(q: &BigRational) -> f64 {
    rational_to_f64(&q.abs())
}
