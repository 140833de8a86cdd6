//! Abel–Goncharov polynomials and machine checks around the Casas-Alvero
//! conjecture.
//!
//! Algorithms are generic over [`numeric::Field`]; the aliases below fix the
//! two scalar fields used in practice.

pub mod error;
pub mod explorer;
pub mod ca;
pub mod goncharov;
pub mod identities;
pub mod io;
pub mod numeric;
pub mod poly;

pub use error::{Error, Result};
pub use numeric::{Field, GaussianRational, Scalar, Tolerance};

/// Exact element of Q(i).
pub type Exact = numeric::GaussianRational;
/// Complex binary64.
pub type Float = num_complex::Complex64;

pub type ExactPoly = poly::Poly<Exact>;
pub type FloatPoly = poly::Poly<Float>;
pub type ExactNodes = goncharov::NodeSequence<Exact>;
pub type FloatNodes = goncharov::NodeSequence<Float>;
pub type ExactRoots = poly::RootMultiset<Exact>;
pub type FloatRoots = poly::RootMultiset<Float>;
