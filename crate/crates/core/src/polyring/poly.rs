use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::series::{Algebra, Linear};
use crate::Q;

/// Exponent vector of a monomial, ordered graded-lexicographically
/// (total degree first, then lexicographic with `x1 > x2 > ...`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    /// All monomials in `nvars` variables of total degree `≤ max_degree`,
    /// in increasing graded-lex order.
    pub fn up_to_degree(nvars: usize, max_degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; nvars];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i == cur.len() {
                out.push(Monomial(cur.clone()));
                return;
            }
            for e in 0..=left {
                cur[i] = e;
                rec(i + 1, left - e, cur, out);
            }
            cur[i] = 0;
        }
        rec(0, max_degree, &mut cur, &mut out);
        out.sort();
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial over `Q` in a fixed number of variables.
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Q>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    /// The coordinate `x_{i+1}` (indices are 0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        Self::term(Monomial::var(nvars, i), Q::one())
    }

    pub fn term(m: Monomial, c: Q) -> Self {
        let nvars = m.0.len();
        let mut terms = BTreeMap::new();
        if !Zero::is_zero(&c) {
            terms.insert(m, c);
        }
        Poly { nvars, terms }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), nvars, "monomial has the wrong number of variables");
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` if the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    /// Value at the origin (the constant coefficient).
    pub fn constant_term(&self) -> Q {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn eval(&self, point: &[Q]) -> Q {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Q) {
        if Zero::is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if Zero::is_zero(o.get()) {
                    o.remove();
                }
            }
        }
    }

    fn check_ctx(&self, other: &Poly) {
        assert_eq!(self.nvars, other.nvars, "polynomials over different variable counts");
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn mul_term(&self, m: &Monomial, c: &Q) -> Poly {
        let mut out = Poly::zero(self.nvars);
        if Zero::is_zero(c) {
            return out;
        }
        for (tm, tc) in &self.terms {
            out.terms.insert(tm.mul(m), tc * c);
        }
        out
    }

    /// `m`-fold partial derivative in variable `i` (0-based).
    pub fn partial(&self, i: usize, m: u32) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (mono, c) in &self.terms {
            let e = mono.0[i];
            if e < m {
                continue;
            }
            let mut falling = BigInt::one();
            for k in 0..m {
                falling *= e - k;
            }
            let mut nm = mono.clone();
            nm.0[i] -= m;
            out.add_term(nm, c * Q::from_integer(falling));
        }
        out
    }

    /// `∂^alpha` for a full exponent vector `alpha`.
    pub fn partial_multi(&self, alpha: &[u32]) -> Poly {
        let mut out = Poly::zero(self.nvars);
        'terms: for (mono, c) in &self.terms {
            let mut coeff = BigInt::one();
            let mut nm = mono.clone();
            for (i, &a) in alpha.iter().enumerate() {
                let e = mono.0[i];
                if e < a {
                    continue 'terms;
                }
                for k in 0..a {
                    coeff *= e - k;
                }
                nm.0[i] -= a;
            }
            out.add_term(nm, c * Q::from_integer(coeff));
        }
        out
    }

    /// Division with remainder by a single polynomial under graded-lex order.
    /// A single polynomial is a Gröbner basis of the ideal it generates, so
    /// the remainder vanishes exactly when `divisor` divides `self`.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        self.check_ctx(divisor);
        let (lm, lc) = divisor.leading_term().expect("division by zero polynomial");
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut quotient = Poly::zero(self.nvars);
        let mut remainder = Poly::zero(self.nvars);
        let mut p = self.clone();
        while let Some((m, c)) = p.leading_term() {
            let (m, c) = (m.clone(), c.clone());
            if lm.divides(&m) {
                let qm = lm.quotient_of(&m);
                let qc = &c / &lc;
                p = &p - &divisor.mul_term(&qm, &qc);
                quotient.add_term(qm, qc);
            } else {
                p.terms.remove(&m);
                remainder.add_term(m, c);
            }
        }
        (quotient, remainder)
    }

    /// `Some(self / divisor)` when the division is exact.
    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.exact_div(self).is_some()
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.check_ctx(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.check_ctx(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.check_ctx(rhs);
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Linear for Poly {
    fn zero_like(&self) -> Self {
        Poly::zero(self.nvars)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn scale(&self, c: &Q) -> Self {
        if Zero::is_zero(c) {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
}

impl Algebra for Poly {
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn one_like(&self) -> Self {
        Poly::one(self.nvars)
    }
}

/// `p` or `p/q`, the grammar's rational literal.
pub(crate) fn fmt_rational(c: &Q) -> String {
    if c.is_integer() {
        format!("{}", c.numer())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn fmt_monomial(m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("x{}", i + 1)),
            _ => parts.push(format!("x{}^{}", i + 1, e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for Poly {
    /// Terms in decreasing graded-lex order, in the shared grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            let body = if m.degree() == 0 {
                fmt_rational(&a)
            } else if a.is_one() {
                fmt_monomial(m)
            } else {
                format!("{}*{}", fmt_rational(&a), fmt_monomial(m))
            };
            match (k, neg) {
                (0, false) => out.push_str(&body),
                (0, true) => {
                    out.push('-');
                    out.push_str(&body);
                }
                (_, false) => {
                    out.push_str(" + ");
                    out.push_str(&body);
                }
                (_, true) => {
                    out.push_str(" - ");
                    out.push_str(&body);
                }
            }
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{q, qi};

    fn x(i: usize) -> Poly {
        Poly::var(2, i)
    }

    #[test]
    fn difference_of_squares() {
        let (a, b) = (x(0), x(1));
        let p = &(&a + &b) * &(&a - &b);
        assert_eq!(p, &(&a * &a) - &(&b * &b));
    }

    #[test]
    fn partials() {
        let p = &(&x(0) * &x(0)) * &x(1);
        assert_eq!(p.partial(0, 1), (&x(0) * &x(1)).scale(&qi(2)));
        assert_eq!((&x(0) * &x(1)).partial(0, 1).partial(1, 1), Poly::one(2));
        assert_eq!(p.partial_multi(&[2, 1]), Poly::constant(2, qi(2)));
        assert!(p.partial(1, 2).is_zero());
    }

    #[test]
    fn display_is_grlex_descending() {
        let p = Poly::from_terms(
            2,
            [
                (Monomial(vec![2, 1]), q(3, 2)),
                (Monomial(vec![1, 0]), qi(-1)),
                (Monomial(vec![0, 0]), qi(1)),
            ],
        );
        assert_eq!(p.to_string(), "3/2*x1^2*x2 - x1 + 1");
        assert_eq!(Poly::zero(2).to_string(), "0");
        assert_eq!((-&x(1)).to_string(), "-x2");
    }

    #[test]
    fn exact_division() {
        let s = &x(0) + &Poly::one(2);
        let f = &s * &(&x(1) * &x(1));
        assert_eq!(f.exact_div(&s), Some(&x(1) * &x(1)));
        assert!(x(1).exact_div(&s).is_none());
        assert!(Poly::constant(2, qi(3)).divides(&x(0)));
    }

    #[test]
    fn monomial_enumeration() {
        let ms = Monomial::up_to_degree(2, 3);
        assert_eq!(ms.len(), 10);
        assert_eq!(ms[0], Monomial::one(2));
        assert!(ms.windows(2).all(|w| w[0] < w[1]));
    }
}
