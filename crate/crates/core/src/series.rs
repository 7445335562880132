//! Truncated parameter-algebra arithmetic.
//!
//! A [`Series`] is `v_0 + h v_1 + ... + h^N v_N` with coefficients in a
//! `Q`-linear space `V`. Every product is truncated at `h`-degree `N`, which
//! models `R_N ⊗ V` for the parameter algebra `R_N = Q[h]/(h^{N+1})`.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::{factorial, Q};

/// A `Q`-linear space whose elements know their own ambient shape
/// (number of variables, degree), so zero can be produced from any element.
pub trait Linear: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn scale(&self, c: &Q) -> Self;

    fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

/// A linear space with an associative bilinear product and a unit.
pub trait Algebra: Linear {
    fn mul(&self, other: &Self) -> Self;
    fn one_like(&self) -> Self;
}

impl Linear for Q {
    fn zero_like(&self) -> Self {
        Q::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn scale(&self, c: &Q) -> Self {
        self * c
    }
}

impl Algebra for Q {
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn one_like(&self) -> Self {
        Q::one()
    }
}

/// The truncated parameter algebra `R_N = Q[h]/(h^{N+1})` with filtered
/// basis `r_j = h^j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ParameterAlgebra {
    order: usize,
}

impl ParameterAlgebra {
    pub fn new(order: usize) -> Self {
        ParameterAlgebra { order }
    }

    /// The truncation order `N`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Basis element `r_j = h^j`, or `None` past the truncation.
    pub fn basis(&self, j: usize) -> Option<Series<Q>> {
        (j <= self.order).then(|| Series::monomial(Q::one(), j, self.order))
    }

    pub fn one(&self) -> Series<Q> {
        Series::constant(Q::one(), self.order)
    }
}

/// Which arithmetic operation [`series_arith`] performs.
#[derive(Debug, Clone, PartialEq)]
pub enum ArithMode {
    Add,
    Mul,
    Scalar(Q),
}

/// A truncated `h`-adic element `Σ_{j=0..N} h^j v_j`.
#[derive(Clone, PartialEq)]
pub struct Series<V> {
    coeffs: Vec<V>,
}

impl<V: fmt::Debug> fmt::Debug for Series<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

impl<V> Series<V> {
    /// Build from the coefficient list `v_0..v_N`. Panics on an empty list.
    pub fn new(coeffs: Vec<V>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the h^0 coefficient");
        Series { coeffs }
    }

    /// The truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, j: usize) -> &V {
        &self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[V] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<V> {
        self.coeffs
    }

    pub fn map<U>(&self, f: impl FnMut(&V) -> U) -> Series<U> {
        Series {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn try_map<U, E>(&self, f: impl FnMut(&V) -> std::result::Result<U, E>) -> std::result::Result<Series<U>, E> {
        Ok(Series {
            coeffs: self.coeffs.iter().map(f).collect::<std::result::Result<_, _>>()?,
        })
    }

    fn check_order<W>(&self, other: &Series<W>) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }
}

impl<V: Linear> Series<V> {
    pub fn zero(template: &V, order: usize) -> Self {
        Series {
            coeffs: vec![template.zero_like(); order + 1],
        }
    }

    /// `v` placed in `h`-degree zero.
    pub fn constant(v: V, order: usize) -> Self {
        Self::monomial(v, 0, order)
    }

    /// `h^j v`, or zero when `j > order`.
    pub fn monomial(v: V, j: usize, order: usize) -> Self {
        let mut coeffs = vec![v.zero_like(); order + 1];
        if j <= order {
            coeffs[j] = v;
        }
        Series { coeffs }
    }

    /// Least `j` with `v_j != 0`; `N + 1` for the zero series.
    pub fn valuation(&self) -> usize {
        self.coeffs
            .iter()
            .position(|v| !v.is_zero())
            .unwrap_or(self.coeffs.len())
    }

    /// Error unless the valuation is at least `required`.
    pub fn require_valuation(&self, required: usize) -> Result<()> {
        let got = self.valuation();
        if got < required {
            return Err(Error::Valuation { required, got });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(self.zip_with(other, |a, b| a.add(b)))
    }

    fn zip_with(&self, other: &Self, mut f: impl FnMut(&V, &V) -> V) -> Self {
        Series {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    /// Multiply by the scalar `h^shift`, discarding what falls past `N`.
    pub fn shift(&self, shift: usize) -> Self {
        let n = self.coeffs.len();
        let zero = self.coeffs[0].zero_like();
        let coeffs = (0..n)
            .map(|j| if j >= shift { self.coeffs[j - shift].clone() } else { zero.clone() })
            .collect();
        Series { coeffs }
    }

    /// Multiply by a scalar series in `R_N`.
    pub fn scale_series(&self, r: &Series<Q>) -> Self {
        self.mul_with(r, |v, c| v.scale(c))
    }

    /// Truncated Cauchy product through an arbitrary bilinear map.
    /// Panics when the truncation orders differ.
    pub fn mul_with<W: Linear, U: Linear>(&self, other: &Series<W>, mut f: impl FnMut(&V, &W) -> U) -> Series<U> {
        assert_eq!(self.order(), other.order(), "truncation orders differ");
        let n = self.order();
        let mut out: Vec<Option<U>> = vec![None; n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                let term = f(a, b);
                let slot = &mut out[i + j];
                *slot = Some(match slot.take() {
                    Some(acc) => acc.add(&term),
                    None => term,
                });
            }
        }
        let coeffs = out
            .into_iter()
            .enumerate()
            .map(|(k, c)| c.unwrap_or_else(|| f(&self.coeffs[0], &other.coeffs[k]).zero_like()))
            .collect();
        Series { coeffs }
    }

    /// Fallible version of [`Series::mul_with`].
    pub fn try_mul_with<W: Linear, U: Linear>(&self, other: &Series<W>, f: impl FnMut(&V, &W) -> U) -> Result<Series<U>> {
        self.check_order(other)?;
        Ok(self.mul_with(other, f))
    }

    /// Re-truncate at a smaller order. Panics if `order > N`.
    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot truncate upward");
        Series {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// Base change along `h ↦ Σ_{j≥1} q_j h'^j`, truncated at `new_order`.
    ///
    /// `subst[j]` is `q_j`; `subst[0]` must be zero (the map is local).
    /// The source is read as the polynomial `Σ_{j≤N} h^j v_j`, so a target
    /// order above `N` zero-extends it; the result is a ring homomorphism
    /// `R_N → R_{N'}` when `N' ≤ N`.
    pub fn reparametrize(&self, subst: &[Q], new_order: usize) -> Result<Self> {
        if subst.first().is_some_and(|c| !Zero::is_zero(c)) {
            return Err(Error::NotLocal);
        }
        let mut s = vec![Q::zero(); new_order + 1];
        for (j, c) in subst.iter().enumerate().take(new_order + 1) {
            s[j] = c.clone();
        }
        let s = Series::new(s);
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; new_order + 1];
        let mut power = Series::constant(Q::one(), new_order);
        for v in &self.coeffs {
            if power.is_zero() {
                break;
            }
            if !v.is_zero() {
                for (k, c) in power.coeffs.iter().enumerate() {
                    if !Zero::is_zero(c) {
                        out[k] = out[k].add(&v.scale(c));
                    }
                }
            }
            power = power.mul_with(&s, |a, b| a * b);
        }
        Ok(Series { coeffs: out })
    }

    /// `exp(a) = Σ a^k / k!` with respect to an arbitrary associative product.
    /// Requires valuation ≥ 1 so the sum is finite.
    pub fn exp_by(&self, one: &Self, mut mul: impl FnMut(&Self, &Self) -> Self) -> Result<Self> {
        self.require_valuation(1).map_err(|_| {
            Error::Precondition("exp needs an argument of positive valuation".into())
        })?;
        let mut acc = one.clone();
        let mut power = one.clone();
        for k in 1..=self.order() as u32 {
            power = mul(&power, self);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power.scale(&(Q::one() / factorial(k))));
        }
        Ok(acc)
    }

    /// `log(1 + b) = Σ_{k≥1} (-1)^{k+1} b^k / k` with respect to `mul`.
    pub fn log_by(&self, one: &Self, mut mul: impl FnMut(&Self, &Self) -> Self) -> Result<Self> {
        let b = self.sub(one);
        b.require_valuation(1).map_err(|_| {
            Error::Precondition("log needs an argument of the form 1 + (positive valuation)".into())
        })?;
        let mut acc = b.zero_like();
        let mut power = one.clone();
        for k in 1..=self.order() as i64 {
            power = mul(&power, &b);
            if power.is_zero() {
                break;
            }
            let c = if k % 2 == 1 { crate::q(1, k) } else { crate::q(-1, k) };
            acc = acc.add(&power.scale(&c));
        }
        Ok(acc)
    }
}

impl<V: Linear> Linear for Series<V> {
    fn zero_like(&self) -> Self {
        self.map(|v| v.zero_like())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|v| v.is_zero())
    }
    fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order(), "truncation orders differ");
        self.zip_with(other, |a, b| a.add(b))
    }
    fn scale(&self, c: &Q) -> Self {
        self.map(|v| v.scale(c))
    }
}

impl<V: Algebra> Series<V> {
    pub fn one(template: &V, order: usize) -> Self {
        Self::constant(template.one_like(), order)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.try_mul_with(other, |a, b| a.mul(b))
    }

    pub fn exp(&self) -> Result<Self> {
        let one = Self::one(&self.coeffs[0], self.order());
        self.exp_by(&one, |a, b| a.mul(b))
    }

    pub fn log(&self) -> Result<Self> {
        let one = Self::one(&self.coeffs[0], self.order());
        self.log_by(&one, |a, b| a.mul(b))
    }
}

impl<V: Algebra> Algebra for Series<V> {
    fn mul(&self, other: &Self) -> Self {
        self.mul_with(other, |a, b| a.mul(b))
    }
    fn one_like(&self) -> Self {
        Self::one(&self.coeffs[0], self.order())
    }
}

/// Componentwise addition, Cauchy product or scalar multiple.
/// `Scalar` ignores `b` apart from the order check.
pub fn series_arith<V: Algebra>(a: &Series<V>, b: &Series<V>, mode: ArithMode) -> Result<Series<V>> {
    a.check_order(b)?;
    Ok(match mode {
        ArithMode::Add => a.add(b),
        ArithMode::Mul => a.mul(b),
        ArithMode::Scalar(c) => a.scale(&c),
    })
}

impl<V: Linear + fmt::Display> fmt::Display for Series<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (j, v) in self.coeffs.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            parts.push(match j {
                0 => format!("{v}"),
                1 => format!("h*({v})"),
                _ => format!("h^{j}*({v})"),
            });
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{q, qi, Poly};

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    #[test]
    fn add_is_componentwise() {
        let a = Series::new(vec![Poly::one(2), Poly::zero(2)]);
        let b = Series::new(vec![Poly::zero(2), x(2, 0)]);
        let s = series_arith(&a, &b, ArithMode::Add).unwrap();
        assert_eq!(s, Series::new(vec![Poly::one(2), x(2, 0)]));
    }

    #[test]
    fn mul_truncates() {
        let a = Series::monomial(x(2, 0), 1, 2);
        let b = Series::monomial(x(2, 1), 1, 2);
        let p = series_arith(&a, &b, ArithMode::Mul).unwrap();
        assert_eq!(p, Series::monomial(x(2, 0).mul(&x(2, 1)), 2, 2));

        let a = Series::monomial(x(2, 0), 1, 1);
        let b = Series::monomial(x(2, 1), 1, 1);
        assert!(series_arith(&a, &b, ArithMode::Mul).unwrap().is_zero());
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let a = Series::constant(Poly::one(1), 1);
        let b = Series::constant(Poly::one(1), 2);
        assert_eq!(
            series_arith(&a, &b, ArithMode::Add),
            Err(Error::OrderMismatch { left: 1, right: 2 })
        );
    }

    #[test]
    fn valuation_examples() {
        let s = Series::new(vec![Poly::zero(1), x(1, 0), Poly::zero(1)]);
        assert_eq!(s.valuation(), 1);
        assert_eq!(Series::zero(&Poly::zero(1), 3).valuation(), 4);
        let s = Series::new(vec![Poly::one(2), Poly::zero(2), x(2, 1)]);
        assert_eq!(s.valuation(), 0);
    }

    #[test]
    fn exp_and_log() {
        let hx = Series::monomial(x(1, 0), 1, 2);
        let e = hx.exp().unwrap();
        let x2 = x(1, 0).mul(&x(1, 0)).scale(&q(1, 2));
        assert_eq!(e, Series::new(vec![Poly::one(1), x(1, 0), x2]));
        assert_eq!(e.log().unwrap(), hx);
        assert_eq!(Series::zero(&Poly::zero(1), 3).exp().unwrap(), Series::one(&Poly::zero(1), 3));
        assert!(Series::constant(x(1, 0), 2).exp().is_err());
    }

    #[test]
    fn reparametrize_examples() {
        // plain truncation
        let s = Series::new(vec![Poly::one(1), x(1, 0), x(1, 0)]);
        assert_eq!(s.reparametrize(&[qi(0), qi(1)], 1).unwrap(), s.truncate(1));
        // linearity
        let s = Series::new(vec![Poly::zero(1), x(1, 0)]);
        assert_eq!(
            s.reparametrize(&[qi(0), qi(2)], 1).unwrap(),
            Series::new(vec![Poly::zero(1), x(1, 0).scale(&qi(2))])
        );
        // (h' + h'^2)^2 = h'^2 + 2h'^3 + h'^4; only the h'^3 coefficient is asked for.
        let y = x(2, 1);
        let s = Series::new(vec![Poly::zero(2), Poly::zero(2), y.clone()]);
        let r = s.reparametrize(&[qi(0), qi(1), qi(1)], 3).unwrap();
        assert_eq!(r.coeff(2), &y);
        assert_eq!(r.coeff(3), &y.scale(&qi(2)));
        assert_eq!(s.reparametrize(&[qi(1), qi(1)], 2), Err(Error::NotLocal));
    }
}
