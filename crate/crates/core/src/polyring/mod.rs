//! The coefficient algebra `C = Q[x1..xd]`, its principal localizations and
//! the shared expression grammar.

mod loc;
pub mod parse;
mod poly;

use std::fmt;

pub use loc::LocPoly;
pub use parse::{parse_expr, parse_fun, parse_op, parse_vec, Kind, Value};
pub use poly::Monomial;
pub use poly::Poly;

use crate::error::{Error, Result};
use crate::series::Algebra;

/// Shared ambient data: number of variables `d` and truncation order `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ambient {
    pub nvars: usize,
    pub order: usize,
}

impl Ambient {
    pub fn new(nvars: usize, order: usize) -> Self {
        Ambient { nvars, order }
    }
}

/// A commutative algebra of functions on which coordinate-form differential
/// operators act: `C` itself or a localization `C_s`.
pub trait FunctionRing: Algebra + fmt::Display {
    fn nvars(&self) -> usize;

    /// `mult`-fold partial derivative in variable `var` (0-based).
    fn partial(&self, var: usize, mult: u32) -> Self;

    /// Image of a polynomial in the same ring (same localization).
    fn embed(&self, p: &Poly) -> Self;

    fn same_context(&self, other: &Self) -> bool;

    /// Multiplicative inverse, or the numerator that blocks invertibility.
    fn inverse(&self) -> std::result::Result<Self, Poly>;

    fn mul_poly(&self, p: &Poly) -> Self {
        self.mul(&self.embed(p))
    }

    fn partial_multi(&self, alpha: &[u32]) -> Self {
        let mut cur = self.clone();
        for (i, &a) in alpha.iter().enumerate() {
            if a > 0 {
                cur = cur.partial(i, a);
            }
        }
        cur
    }
}

impl FunctionRing for Poly {
    fn nvars(&self) -> usize {
        Poly::nvars(self)
    }
    fn partial(&self, var: usize, mult: u32) -> Self {
        Poly::partial(self, var, mult)
    }
    fn partial_multi(&self, alpha: &[u32]) -> Self {
        Poly::partial_multi(self, alpha)
    }
    fn embed(&self, p: &Poly) -> Self {
        p.clone()
    }
    fn mul_poly(&self, p: &Poly) -> Self {
        self * p
    }
    fn same_context(&self, other: &Self) -> bool {
        self.nvars() == other.nvars()
    }
    fn inverse(&self) -> std::result::Result<Self, Poly> {
        match self.as_constant() {
            Some(c) if !num_traits::Zero::is_zero(&c) => Ok(Poly::constant(self.nvars(), crate::qi(1) / c)),
            _ => Err(self.clone()),
        }
    }
}

/// Render `Σ coeff·atom` in the shared grammar: unit coefficients are
/// elided, single-term coefficients are juxtaposed with `*`, longer ones are
/// parenthesized.
pub(crate) fn join_terms<'a>(terms: impl IntoIterator<Item = (&'a Poly, String)>) -> String {
    let mut out = String::new();
    for (coeff, atom) in terms {
        let body = match coeff.as_constant() {
            Some(c) if num_traits::One::is_one(&c) => atom,
            Some(c) if num_traits::One::is_one(&-c.clone()) => format!("-{atom}"),
            _ if coeff.num_terms() == 1 => format!("{coeff}*{atom}"),
            _ => format!("({coeff})*{atom}"),
        };
        if out.is_empty() {
            out = body;
        } else if let Some(rest) = body.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&body);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Operation selector for [`poly_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyMode {
    Add,
    Mul,
    Neg,
}

/// Exact arithmetic with a context check. `Neg` ignores `b`.
pub fn poly_arith<F: FunctionRing>(a: &F, b: &F, mode: PolyMode) -> Result<F> {
    if a.nvars() != b.nvars() || !a.same_context(b) {
        return Err(Error::ContextMismatch(format!("`{a}` and `{b}` live in different rings")));
    }
    Ok(match mode {
        PolyMode::Add => a.add(b),
        PolyMode::Mul => a.mul(b),
        PolyMode::Neg => a.neg(),
    })
}

/// `m`-fold partial derivative in variable `i`, with `i` 1-based as in the
/// grammar.
pub fn partial_derivative<F: FunctionRing>(f: &F, i: usize, m: u32) -> Result<F> {
    if i == 0 || i > f.nvars() {
        return Err(Error::Precondition(format!(
            "variable index {i} outside 1..={}",
            f.nvars()
        )));
    }
    Ok(f.partial(i - 1, m))
}

/// Restriction `C_s → C_{st}`.
pub fn loc_restrict(f: &LocPoly, t: &Poly) -> Result<LocPoly> {
    if t.is_zero() {
        return Err(Error::Precondition("cannot localize at zero".into()));
    }
    Ok(f.restrict(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_mismatch() {
        let a = LocPoly::from_poly(Poly::var(2, 0), &Poly::var(2, 0));
        let b = LocPoly::from_poly(Poly::var(2, 0), &Poly::var(2, 1));
        assert!(matches!(poly_arith(&a, &b, PolyMode::Add), Err(Error::ContextMismatch(_))));
        assert!(poly_arith(&Poly::var(2, 0), &Poly::var(3, 0), PolyMode::Mul).is_err());
    }

    #[test]
    fn derivative_of_fraction() {
        let s = Poly::var(1, 0);
        let inv = LocPoly::s_inverse(&s);
        let d = partial_derivative(&inv, 1, 1).unwrap();
        assert_eq!(d, LocPoly::new(Poly::constant(1, crate::qi(-1)), s, 2));
        assert!(partial_derivative(&inv, 2, 1).is_err());
    }

    #[test]
    fn restrict_rejects_zero() {
        let s = Poly::var(1, 0);
        assert!(loc_restrict(&LocPoly::s_inverse(&s), &Poly::zero(1)).is_err());
    }
}
