use std::fmt;

use crate::series::{Algebra, Linear};
use crate::Q;

use super::{FunctionRing, Poly};

/// An element `num / s^k` of the principal localization `C_s = C[s^{-1}]`.
///
/// Normal form: `s` does not divide `num` whenever `k > 0`, and zero has
/// `k = 0`. Two values are equal iff their normal forms (and `s`) agree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LocPoly {
    num: Poly,
    s: Poly,
    k: u32,
}

impl fmt::Debug for LocPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LocPoly({self} over s = {})", self.s)
    }
}

impl LocPoly {
    pub fn new(num: Poly, s: Poly, k: u32) -> Self {
        assert!(!s.is_zero(), "cannot localize at zero");
        assert_eq!(num.nvars(), s.nvars(), "numerator and s over different variable counts");
        let mut v = LocPoly { num, s, k };
        v.normalize();
        v
    }

    /// The image of `p` under `C → C_s`.
    pub fn from_poly(p: Poly, s: &Poly) -> Self {
        Self::new(p, s.clone(), 0)
    }

    /// `1 / s` in `C_s`.
    pub fn s_inverse(s: &Poly) -> Self {
        Self::new(Poly::one(s.nvars()), s.clone(), 1)
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.k = 0;
            return;
        }
        while self.k > 0 {
            match self.num.exact_div(&self.s) {
                Some(q) => {
                    self.num = q;
                    self.k -= 1;
                }
                None => break,
            }
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn s(&self) -> &Poly {
        &self.s
    }

    /// The denominator exponent `k`.
    pub fn power(&self) -> u32 {
        self.k
    }

    /// `Some(p)` if the value lies in `C`.
    pub fn as_poly(&self) -> Option<Poly> {
        (self.k == 0).then(|| self.num.clone())
    }

    fn check_ctx(&self, other: &LocPoly) {
        assert_eq!(self.s, other.s, "localizations at different elements");
    }

    fn lift(&self, k: u32) -> Poly {
        &self.num * &self.s.pow(k - self.k)
    }

    /// Restriction `C_s → C_{st}`: `f/s^k ↦ f t^k / (st)^k`.
    pub fn restrict(&self, t: &Poly) -> LocPoly {
        assert!(!t.is_zero(), "cannot localize at zero");
        let st = &self.s * t;
        LocPoly::new(&self.num * &t.pow(self.k), st, self.k)
    }
}

impl Linear for LocPoly {
    fn zero_like(&self) -> Self {
        LocPoly {
            num: Poly::zero(self.num.nvars()),
            s: self.s.clone(),
            k: 0,
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        self.check_ctx(other);
        let k = self.k.max(other.k);
        LocPoly::new(&self.lift(k) + &other.lift(k), self.s.clone(), k)
    }
    fn scale(&self, c: &Q) -> Self {
        LocPoly::new(self.num.scale(c), self.s.clone(), self.k)
    }
}

impl Algebra for LocPoly {
    fn mul(&self, other: &Self) -> Self {
        self.check_ctx(other);
        LocPoly::new(&self.num * &other.num, self.s.clone(), self.k + other.k)
    }
    fn one_like(&self) -> Self {
        LocPoly::from_poly(Poly::one(self.num.nvars()), &self.s)
    }
}

impl FunctionRing for LocPoly {
    fn nvars(&self) -> usize {
        self.num.nvars()
    }

    /// Quotient rule `∂(f/s^k) = (∂f·s − k f ∂s) / s^{k+1}`, iterated.
    fn partial(&self, var: usize, mult: u32) -> Self {
        let mut cur = self.clone();
        for _ in 0..mult {
            let df = cur.num.partial(var, 1);
            let ds = cur.s.partial(var, 1);
            let kk = crate::qi(cur.k as i64);
            let num = &(&df * &cur.s) - &(&cur.num * &ds).scale(&kk);
            cur = LocPoly::new(num, cur.s.clone(), cur.k + 1);
        }
        cur
    }

    fn embed(&self, p: &Poly) -> Self {
        LocPoly::from_poly(p.clone(), &self.s)
    }

    fn mul_poly(&self, p: &Poly) -> Self {
        LocPoly::new(&self.num * p, self.s.clone(), self.k)
    }

    fn same_context(&self, other: &Self) -> bool {
        self.s == other.s
    }

    /// `f/s^k` is a unit iff `f` divides a power of `s`; it suffices to try
    /// `s^{deg f}`, since every irreducible factor of `f` then divides `s`.
    fn inverse(&self) -> Result<Self, Poly> {
        if self.num.is_zero() {
            return Err(self.num.clone());
        }
        let deg = self.num.total_degree().unwrap_or(0);
        match self.s.pow(deg).exact_div(&self.num) {
            Some(h) => Ok(LocPoly::new(&h * &self.s.pow(self.k), self.s.clone(), deg)),
            None => Err(self.num.clone()),
        }
    }
}

impl fmt::Display for LocPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k {
            0 => write!(f, "{}", self.num),
            1 => write!(f, "({})/({})", self.num, self.s),
            k => write!(f, "({})/({})^{}", self.num, self.s, k),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qi;

    fn x(i: usize) -> Poly {
        Poly::var(2, i)
    }

    #[test]
    fn same_denominator_addition() {
        let s = &x(0) + &x(1);
        let a = LocPoly::new(x(0), s.clone(), 1);
        let b = LocPoly::new(x(1), s.clone(), 1);
        // (x1 + x2)/s = 1
        assert_eq!(a.add(&b), LocPoly::from_poly(Poly::one(2), &s));
        let s = x(1);
        let a = LocPoly::new(x(0), s.clone(), 1);
        let b = LocPoly::new(&x(0) + &Poly::one(2), s.clone(), 1);
        assert_eq!(a.add(&b), LocPoly::new(&x(0).scale(&qi(2)) + &Poly::one(2), s, 1));
    }

    #[test]
    fn normal_form_divides_out_s() {
        let s = &x(1) + &Poly::one(2);
        let v = LocPoly::new(&x(0) * &s, s.clone(), 1);
        assert_eq!(v.power(), 0);
        assert_eq!(v.numerator(), &x(0));
    }

    #[test]
    fn quotient_rule() {
        let s = x(0);
        let inv = LocPoly::s_inverse(&s);
        let d = inv.partial(0, 1);
        assert_eq!(d, LocPoly::new(Poly::constant(2, qi(-1)), s.clone(), 2));
    }

    #[test]
    fn restriction_is_functorial() {
        let s = x(0);
        let t = x(1);
        let v = LocPoly::new(x(1), s.clone(), 1);
        let r = v.restrict(&t);
        assert_eq!(r.s(), &(&s * &t));
        assert_eq!(r, LocPoly::new(&x(1) * &t, &s * &t, 1));
        let p = &x(0) + &x(1);
        assert_eq!(LocPoly::from_poly(p.clone(), &s).restrict(&t), LocPoly::from_poly(p, &(&s * &t)));
    }

    #[test]
    fn units() {
        let s = &x(0) * &x(1);
        let u = LocPoly::from_poly(x(0).scale(&qi(3)), &s);
        let inv = u.inverse().unwrap();
        assert_eq!(u.mul(&inv), u.one_like());
        let nonunit = LocPoly::from_poly(&x(0) + &Poly::one(2), &s);
        assert!(nonunit.inverse().is_err());
    }
}
