//! Polyvector fields `T_poly(C)` with the Schouten–Nijenhuis bracket.
//!
//! A polyvector of degree `p` is an element of `Λ^{p+1}_C T(C)`; degree `-1`
//! holds plain functions. Internally a term `f ∂_{i0}∧…∧∂_{ip}` is the
//! product `f θ_{i0}⋯θ_{ip}` of a coefficient with odd variables, and the
//! bracket is the odd Poisson bracket
//!
//! `[P, Q] = Σ_i (P ∂⃖/∂θ_i)(∂_i Q) − (∂_i P)(∂⃗/∂θ_i Q)`,
//!
//! which agrees with the decomposable expansion
//! `[ξ1∧…∧ξm, η1∧…∧ηn] = Σ (−1)^{i+j} [ξi, ηj] ∧ ξ1…ξ̂i…ξm ∧ η1…η̂j…ηn`
//! and with `[ξ, f] = ξ(f)` on functions.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::polyring::{join_terms, FunctionRing};
use crate::series::{Linear, Series};
use crate::{q, Poly, Q};

/// Homogeneous polyvector field of degree `p ≥ -1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyVec {
    nvars: usize,
    degree: i32,
    terms: BTreeMap<Vec<usize>, Poly>,
}

impl fmt::Debug for PolyVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyVec[{}]({self})", self.degree)
    }
}

/// Sign and index set of `θ_a θ_b`, or `None` when an index repeats.
pub(crate) fn merge(a: &[usize], b: &[usize]) -> Option<(bool, Vec<usize>)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut inversions = 0usize;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                // b[j] jumps over the remaining a's
                inversions += a.len() - i;
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => return None,
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((inversions % 2 == 1, out))
}

/// Sort an index list, tracking the permutation sign.
fn sort_signed(idx: &[usize]) -> Option<(bool, Vec<usize>)> {
    let mut v = idx.to_vec();
    let mut odd = false;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            match v[j].cmp(&v[j + 1]) {
                std::cmp::Ordering::Greater => {
                    v.swap(j, j + 1);
                    odd = !odd;
                }
                std::cmp::Ordering::Equal => return None,
                _ => {}
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((odd, v))
}

impl PolyVec {
    pub fn zero(nvars: usize, degree: i32) -> Self {
        assert!(degree >= -1, "polyvector degree below -1");
        PolyVec {
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// A function viewed as a degree `-1` polyvector.
    pub fn function(f: Poly) -> Self {
        let mut v = PolyVec::zero(f.nvars(), -1);
        v.add_term(Vec::new(), f);
        v
    }

    /// `∂_{i0} ∧ … ∧ ∂_{ip}` (0-based indices, any order).
    pub fn basis(nvars: usize, indices: &[usize]) -> Self {
        Self::from_terms(nvars, indices.len() as i32 - 1, [(indices.to_vec(), Poly::one(nvars))])
    }

    /// The coordinate vector field `∂_i`.
    pub fn coordinate(nvars: usize, i: usize) -> Self {
        Self::basis(nvars, &[i])
    }

    /// Build from `(indices, coefficient)` pairs; indices are sorted with the
    /// matching sign and repeated indices drop the term.
    pub fn from_terms(nvars: usize, degree: i32, terms: impl IntoIterator<Item = (Vec<usize>, Poly)>) -> Self {
        let mut v = PolyVec::zero(nvars, degree);
        for (idx, c) in terms {
            assert_eq!(idx.len() as i32, degree + 1, "index tuple length does not match degree");
            assert!(idx.iter().all(|&i| i < nvars), "index out of range");
            if let Some((odd, sorted)) = sort_signed(&idx) {
                v.add_term(sorted, if odd { -&c } else { c });
            }
        }
        v
    }

    fn add_term(&mut self, idx: Vec<usize>, c: Poly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(idx) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Poly)> {
        self.terms.iter()
    }

    /// The function held by a degree `-1` element.
    pub fn as_function(&self) -> Option<Poly> {
        (self.degree == -1).then(|| {
            self.terms
                .get(&Vec::new())
                .cloned()
                .unwrap_or_else(|| Poly::zero(self.nvars))
        })
    }

    /// Coefficientwise product with a function.
    pub fn mul_fn(&self, f: &Poly) -> Self {
        let mut out = PolyVec::zero(self.nvars, self.degree);
        for (idx, c) in &self.terms {
            out.add_term(idx.clone(), c * f);
        }
        out
    }

    fn wedge_raw(&self, other: &PolyVec) -> PolyVec {
        let mut out = PolyVec::zero(self.nvars, self.degree + other.degree + 1);
        for (a, f) in &self.terms {
            for (b, g) in &other.terms {
                if let Some((odd, idx)) = merge(a, b) {
                    let c = f * g;
                    out.add_term(idx, if odd { -&c } else { c });
                }
            }
        }
        out
    }

    /// Exterior product; both operands must have degree `≥ 0`.
    pub fn wedge(&self, other: &PolyVec) -> Result<PolyVec> {
        if self.degree < 0 || other.degree < 0 {
            return Err(Error::Precondition("wedge needs operands of degree >= 0".into()));
        }
        Ok(self.wedge_raw(other))
    }

    /// Schouten–Nijenhuis bracket; degree is `deg a + deg b`.
    pub fn schouten(&self, other: &PolyVec) -> PolyVec {
        assert_eq!(self.nvars, other.nvars, "polyvectors over different variable counts");
        // the bracket of two functions would land in degree -2, which is zero
        let mut out = PolyVec::zero(self.nvars, (self.degree + other.degree).max(-1));
        for (a, f) in &self.terms {
            for (b, g) in &other.terms {
                for i in 0..self.nvars {
                    // (f θ_a) ∂⃖/∂θ_i · ∂_i(g θ_b)
                    if let Some(pos) = a.iter().position(|&k| k == i) {
                        let dg = g.partial(i, 1);
                        if !dg.is_zero() {
                            let right_odd = (a.len() - 1 - pos) % 2 == 1;
                            let mut rest = a.clone();
                            rest.remove(pos);
                            if let Some((odd, idx)) = merge(&rest, b) {
                                let c = f * &dg;
                                out.add_term(idx, if odd ^ right_odd { -&c } else { c });
                            }
                        }
                    }
                    // − ∂_i(f θ_a) · ∂⃗/∂θ_i (g θ_b)
                    if let Some(pos) = b.iter().position(|&k| k == i) {
                        let df = f.partial(i, 1);
                        if !df.is_zero() {
                            let left_odd = pos % 2 == 1;
                            let mut rest = b.clone();
                            rest.remove(pos);
                            if let Some((odd, idx)) = merge(a, &rest) {
                                let c = &df * g;
                                // overall minus sign folded into the parity
                                out.add_term(idx, if odd ^ left_odd { c } else { -&c });
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Action of a vector field (degree 0) on a function: `ξ(f) = [ξ, f]`.
    pub fn apply_to<F: FunctionRing>(&self, f: &F) -> F {
        assert_eq!(self.degree, 0, "only vector fields act on functions");
        let mut acc = f.zero_like();
        for (idx, c) in &self.terms {
            acc = acc.add(&f.partial(idx[0], 1).mul_poly(c));
        }
        acc
    }

    /// `{a, b}` for a bivector, with `γ1∧γ2 ↦ ½(γ1(a)γ2(b) − γ1(b)γ2(a))`.
    pub fn pair<F: FunctionRing>(&self, a: &F, b: &F) -> F {
        assert_eq!(self.degree, 1, "only bivectors pair two functions");
        let mut acc = a.zero_like();
        let half = q(1, 2);
        for (idx, c) in &self.terms {
            let (i, j) = (idx[0], idx[1]);
            let t = a.partial(i, 1).mul(&b.partial(j, 1)).sub(&a.partial(j, 1).mul(&b.partial(i, 1)));
            acc = acc.add(&t.mul_poly(c).scale(&half));
        }
        acc
    }
}

impl Linear for PolyVec {
    fn zero_like(&self) -> Self {
        PolyVec::zero(self.nvars, self.degree)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        // zero is shared by all degrees
        if other.terms.is_empty() {
            return self.clone();
        }
        if self.terms.is_empty() {
            return other.clone();
        }
        assert_eq!(self.degree, other.degree, "adding polyvectors of different degrees");
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            out.add_term(idx.clone(), c.clone());
        }
        out
    }
    fn scale(&self, c: &Q) -> Self {
        let mut out = PolyVec::zero(self.nvars, self.degree);
        for (idx, f) in &self.terms {
            out.add_term(idx.clone(), f.scale(c));
        }
        out
    }
}

impl fmt::Display for PolyVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == -1 {
            return write!(f, "{}", self.as_function().unwrap());
        }
        let atoms = self.terms.iter().map(|(idx, c)| {
            let atom = idx
                .iter()
                .map(|i| format!("dx{}", i + 1))
                .collect::<Vec<_>>()
                .join("^");
            (c, atom)
        });
        f.write_str(&join_terms(atoms))
    }
}

/// `{c1, c2}_ω` extended `R`-bilinearly; `ω` must vanish modulo `h`.
pub fn bracket_of_functions<F: FunctionRing>(omega: &Series<PolyVec>, c1: &Series<F>, c2: &Series<F>) -> Result<Series<F>> {
    check_formal_bivector(omega)?;
    check_orders(omega.order(), &[c1.order(), c2.order()])?;
    Ok(trilinear(omega, c1, c2, |w, a, b| w.pair(a, b)))
}

/// Cyclic sum `{{c1,c2},c3} + {{c2,c3},c1} + {{c3,c1},c2}`.
pub fn jacobiator<F: FunctionRing>(omega: &Series<PolyVec>, c1: &Series<F>, c2: &Series<F>, c3: &Series<F>) -> Result<Series<F>> {
    let b = |x: &Series<F>, y: &Series<F>| bracket_of_functions(omega, x, y);
    let t1 = b(&b(c1, c2)?, c3)?;
    let t2 = b(&b(c2, c3)?, c1)?;
    let t3 = b(&b(c3, c1)?, c2)?;
    Ok(t1.add(&t2).add(&t3))
}

pub(crate) fn check_orders(expected: usize, got: &[usize]) -> Result<()> {
    match got.iter().find(|&&o| o != expected) {
        Some(&o) => Err(Error::OrderMismatch { left: expected, right: o }),
        None => Ok(()),
    }
}

pub(crate) fn check_formal_bivector(omega: &Series<PolyVec>) -> Result<()> {
    let deg = omega.coeff(0).degree();
    if deg != 1 {
        return Err(Error::DegreeMismatch { expected: 1, got: deg });
    }
    omega.require_valuation(1)
}

/// `Σ_{i+j+k=n} f(ω_i, a_j, b_k)`, truncated.
pub(crate) fn trilinear<W, A: Linear>(w: &Series<W>, a: &Series<A>, b: &Series<A>, f: impl Fn(&W, &A, &A) -> A) -> Series<A>
where
    W: Linear,
{
    assert_eq!(w.order(), a.order());
    assert_eq!(w.order(), b.order());
    let n = w.order();
    let mut out: Vec<A> = vec![a.coeff(0).zero_like(); n + 1];
    for (i, wi) in w.coeffs().iter().enumerate() {
        if wi.is_zero() {
            continue;
        }
        for (j, aj) in a.coeffs().iter().enumerate().take(n + 1 - i) {
            if aj.is_zero() {
                continue;
            }
            for (k, bk) in b.coeffs().iter().enumerate().take(n + 1 - i - j) {
                if bk.is_zero() {
                    continue;
                }
                out[i + j + k] = out[i + j + k].add(&f(wi, aj, bk));
            }
        }
    }
    Series::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{qi, Poly};

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    #[test]
    fn wedge_signs() {
        let d1 = PolyVec::coordinate(2, 0);
        let d2 = PolyVec::coordinate(2, 1);
        assert_eq!(d1.wedge(&d2).unwrap(), PolyVec::basis(2, &[0, 1]));
        assert!(d1.wedge(&d1).unwrap().is_zero());
        assert_eq!(d2.wedge(&d1).unwrap(), PolyVec::basis(2, &[0, 1]).neg());
        assert!(PolyVec::function(x(2, 0)).wedge(&d1).is_err());
    }

    #[test]
    fn bracket_examples() {
        let d1 = PolyVec::coordinate(2, 0);
        let d2 = PolyVec::coordinate(2, 1);
        let x1 = PolyVec::function(x(2, 0));
        assert_eq!(d1.schouten(&x1), PolyVec::function(Poly::one(2)));
        assert!(d1.mul_fn(&x(2, 0)).schouten(&d2).is_zero());
        let pi = PolyVec::basis(2, &[0, 1]);
        assert!(pi.schouten(&pi).is_zero());
    }

    #[test]
    fn formal_bracket_of_coordinates() {
        let omega = Series::monomial(PolyVec::basis(2, &[0, 1]), 1, 2);
        let a = Series::constant(x(2, 0), 2);
        let b = Series::constant(x(2, 1), 2);
        let br = bracket_of_functions(&omega, &a, &b).unwrap();
        assert_eq!(br, Series::monomial(Poly::constant(2, crate::q(1, 2)), 1, 2));
        assert!(bracket_of_functions(&omega, &a, &a).unwrap().is_zero());
        let zero = Series::zero(&PolyVec::zero(2, 1), 2);
        assert!(bracket_of_functions(&zero, &a, &b).unwrap().is_zero());
        let bad = Series::constant(PolyVec::basis(2, &[0, 1]), 2);
        assert!(bracket_of_functions(&bad, &a, &b).is_err());
    }

    #[test]
    fn jacobiator_vanishes_for_constant_and_linear() {
        let one = Series::constant(Poly::one(2), 1);
        let c = Series::monomial(PolyVec::basis(2, &[0, 1]).scale(&qi(3)), 1, 1);
        let lin = Series::monomial(PolyVec::basis(2, &[0, 1]).mul_fn(&x(2, 0)), 1, 1);
        for m1 in crate::Monomial::up_to_degree(2, 3) {
            for m2 in crate::Monomial::up_to_degree(2, 3) {
                let a = Series::constant(Poly::term(m1.clone(), qi(1)), 1);
                let b = Series::constant(Poly::term(m2.clone(), qi(1)), 1);
                for omega in [&c, &lin] {
                    assert!(jacobiator(omega, &a, &b, &one).unwrap().is_zero());
                }
            }
        }
    }
}
