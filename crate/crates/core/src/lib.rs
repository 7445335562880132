//! Exact calculus of formal deformation quantization over truncated
//! parameter algebras `Q[h]/(h^{N+1})`.
//!
//! The crate is organised bottom-up:
//!
//! - [`series`]: truncated `h`-adic series with coefficients in a linear space.
//! - [`polyring`]: polynomials over `Q`, principal localizations, derivatives
//!   and the shared expression grammar.
//! - [`tpoly`]: polyvector fields and the Schouten–Nijenhuis bracket.
//! - [`dpoly`]: polydifferential operators, the Gerstenhaber bracket, the
//!   Hochschild differential, operator recognition and the Moyal generator.
//! - [`mc`]: the DG Lie layer (Maurer–Cartan equation, gauge action, BCH,
//!   twisted differential and bracket).
//! - [`deligne`]: crossed groupoids, their axiom verifier and the Deligne
//!   construction.
//! - [`deform`]: star products, formal Poisson brackets, gauge transport,
//!   inner gauge groups, localization and the geometrization verifier.

pub mod deform;
pub mod deligne;
pub mod dpoly;
pub mod error;
pub mod mc;
pub mod polyring;
pub mod random;
pub mod report;
pub mod series;
pub mod tpoly;

pub use dpoly::{MultiIndex, OpTable, PolyDiffOp};
pub use error::{Error, Result};
pub use polyring::{Ambient, LocPoly, Monomial, Poly};
pub use report::{CheckRecord, Report, Status, Witness};
pub use series::{Linear, ParameterAlgebra, Series};
pub use tpoly::PolyVec;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact rationals: the base field of every computation.
pub type Q = BigRational;

/// `n / d` as an exact rational. Panics if `d == 0`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `n!` as a rational.
pub fn factorial(n: u32) -> Q {
    let mut acc = BigInt::from(1);
    for k in 2..=n {
        acc *= k;
    }
    Q::from_integer(acc)
}
