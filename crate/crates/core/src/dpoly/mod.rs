//! Polydifferential operators in coordinate form, the Gerstenhaber bracket
//! and the (shifted) Hochschild differential.
//!
//! A degree-`p` operator takes `p + 1` arguments:
//! `(c0, …, cp) ↦ Σ f · ∂^{α0}c0 ⋯ ∂^{αp}cp`. Degree `-1` holds a function.
//!
//! Conventions: `φ∘ψ = Σ_i (−1)^{iq} φ(id^{⊗i} ⊗ ψ ⊗ id^{⊗(p−i)})`,
//! `[φ, ψ] = φ∘ψ − (−1)^{pq} ψ∘φ` and `d = [μ, −]` with `μ` the
//! multiplication. With these signs `d(ω) + ½[ω, ω] = 0` is exactly the
//! associativity of `μ + ω`.

mod moyal;
mod recognize;

use std::collections::BTreeMap;
use std::fmt;

pub use moyal::moyal_mc;
pub use recognize::{op_order, recognize_diffop, OpOrder, OpTable, Recognition};

use crate::error::{Error, Result};
use crate::polyring::{join_terms, FunctionRing};
use crate::series::{Linear, Series};
use crate::{factorial, Poly, Q};

/// Exponent vector `α` of a partial derivative `∂^α`, one entry per variable.
pub type MultiIndex = Vec<u32>;

/// Homogeneous polydifferential operator with polynomial coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyDiffOp {
    nvars: usize,
    arity: usize,
    terms: BTreeMap<Vec<MultiIndex>, Poly>,
}

impl fmt::Debug for PolyDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyDiffOp[{}]({self})", self.degree())
    }
}

/// All ways to write `alpha = e_0 + … + e_{parts-1}`, each with its
/// multinomial weight `Π_v alpha_v! / Π_{j} e_{j,v}!`.
fn leibniz_splits(alpha: &[u32], parts: usize) -> Vec<(Q, Vec<MultiIndex>)> {
    let nvars = alpha.len();
    let mut out = vec![(Q::from_integer(1.into()), vec![vec![0u32; nvars]; parts])];
    for (v, &a) in alpha.iter().enumerate() {
        if a == 0 {
            continue;
        }
        let comps = compositions(a, parts);
        let mut next = Vec::with_capacity(out.len() * comps.len());
        for (w, split) in &out {
            for comp in &comps {
                let mut weight = w * factorial(a);
                let mut s = split.clone();
                for (j, &e) in comp.iter().enumerate() {
                    weight /= factorial(e);
                    s[j][v] = e;
                }
                next.push((weight, s));
            }
        }
        out = next;
    }
    out
}

/// Weak compositions of `n` into `parts` nonnegative parts.
fn compositions(n: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in 0..=n {
        for mut rest in compositions(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn add_multi(a: &[u32], b: &[u32]) -> MultiIndex {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl PolyDiffOp {
    pub fn zero(nvars: usize, degree: i32) -> Self {
        assert!(degree >= -1, "operator degree below -1");
        PolyDiffOp {
            nvars,
            arity: (degree + 1) as usize,
            terms: BTreeMap::new(),
        }
    }

    /// A function as a degree `-1` cochain.
    pub fn function(f: Poly) -> Self {
        let mut op = PolyDiffOp::zero(f.nvars(), -1);
        op.add_term(Vec::new(), f);
        op
    }

    /// The multiplication cochain `μ(a, b) = ab`.
    pub fn mu(nvars: usize) -> Self {
        Self::atom(Poly::one(nvars), vec![vec![0; nvars], vec![0; nvars]])
    }

    pub fn identity(nvars: usize) -> Self {
        Self::atom(Poly::one(nvars), vec![vec![0; nvars]])
    }

    /// Single term `coeff · ∂^{slots[0]} ⊗ … ⊗ ∂^{slots[p]}`.
    pub fn atom(coeff: Poly, slots: Vec<MultiIndex>) -> Self {
        let nvars = coeff.nvars();
        assert!(slots.iter().all(|s| s.len() == nvars), "multi-index length mismatch");
        let mut op = PolyDiffOp {
            nvars,
            arity: slots.len(),
            terms: BTreeMap::new(),
        };
        op.add_term(slots, coeff);
        op
    }

    /// `∂_i` as a degree-0 operator (0-based `i`).
    pub fn partial(nvars: usize, i: usize) -> Self {
        let mut a = vec![0; nvars];
        a[i] = 1;
        Self::atom(Poly::one(nvars), vec![a])
    }

    pub fn from_terms(nvars: usize, degree: i32, terms: impl IntoIterator<Item = (Vec<MultiIndex>, Poly)>) -> Self {
        let mut op = PolyDiffOp::zero(nvars, degree);
        for (slots, c) in terms {
            assert_eq!(slots.len(), op.arity, "slot count does not match degree");
            op.add_term(slots, c);
        }
        op
    }

    fn add_term(&mut self, slots: Vec<MultiIndex>, c: Poly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(slots) {
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
        self.arity as i32 - 1
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<MultiIndex>, &Poly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn as_function(&self) -> Option<Poly> {
        (self.arity == 0).then(|| {
            self.terms
                .get(&Vec::new())
                .cloned()
                .unwrap_or_else(|| Poly::zero(self.nvars))
        })
    }

    pub fn mul_fn(&self, f: &Poly) -> Self {
        let mut out = self.zero_like();
        for (s, c) in &self.terms {
            out.add_term(s.clone(), c * f);
        }
        out
    }

    /// Largest `|α|` appearing in any slot.
    pub fn order(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|slots| slots.iter().map(|a| a.iter().sum::<u32>()))
            .max()
            .unwrap_or(0)
    }

    /// True iff the operator vanishes whenever some argument is `1`, i.e.
    /// no slot of any term is the identity. Functions count as normalized.
    pub fn is_normalized(&self) -> bool {
        self.terms
            .keys()
            .all(|slots| slots.iter().all(|a| a.iter().any(|&e| e > 0)))
    }

    /// Evaluate on `p + 1` arguments; degree `-1` needs [`PolyDiffOp::apply_in`].
    pub fn apply<F: FunctionRing>(&self, args: &[F]) -> Result<F> {
        match args.first() {
            Some(ctx) => self.apply_in(ctx, args),
            None => Err(Error::ArityMismatch {
                expected: self.arity,
                got: 0,
            }),
        }
    }

    /// Evaluate with an explicit ring context (needed for degree `-1`).
    pub fn apply_in<F: FunctionRing>(&self, ctx: &F, args: &[F]) -> Result<F> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: args.len(),
            });
        }
        let mut acc = ctx.zero_like();
        let mut cache: Vec<BTreeMap<&MultiIndex, F>> = vec![BTreeMap::new(); args.len()];
        for (slots, c) in &self.terms {
            let mut prod = ctx.embed(c);
            for (j, alpha) in slots.iter().enumerate() {
                let d = cache[j]
                    .entry(alpha)
                    .or_insert_with(|| args[j].partial_multi(alpha));
                prod = prod.mul(d);
                if prod.is_zero() {
                    break;
                }
            }
            acc = acc.add(&prod);
        }
        Ok(acc)
    }

    /// `φ(id^{⊗i} ⊗ ψ ⊗ id^{⊗(p−i)})` without sign, expanded by Leibniz.
    pub fn insert(&self, i: usize, psi: &PolyDiffOp) -> PolyDiffOp {
        assert!(i < self.arity, "insertion slot out of range");
        assert_eq!(self.nvars, psi.nvars, "operators over different variable counts");
        let arity = self.arity - 1 + psi.arity;
        let mut out = PolyDiffOp {
            nvars: self.nvars,
            arity,
            terms: BTreeMap::new(),
        };
        for (slots_a, f) in &self.terms {
            let splits = leibniz_splits(&slots_a[i], psi.arity + 1);
            for (slots_b, g) in &psi.terms {
                for (w, parts) in &splits {
                    let dg = g.partial_multi(&parts[0]);
                    if dg.is_zero() {
                        continue;
                    }
                    let mut slots = Vec::with_capacity(arity);
                    slots.extend_from_slice(&slots_a[..i]);
                    for (j, b) in slots_b.iter().enumerate() {
                        slots.push(add_multi(b, &parts[j + 1]));
                    }
                    slots.extend_from_slice(&slots_a[i + 1..]);
                    out.add_term(slots, (f * &dg).scale(w));
                }
            }
        }
        out
    }

    /// Gerstenhaber composition `φ∘ψ = Σ_i (−1)^{iq} φ∘_i ψ`.
    pub fn compose(&self, psi: &PolyDiffOp) -> PolyDiffOp {
        let q = psi.degree();
        // nothing lives below degree -1; a composite landing there is zero
        let mut out = PolyDiffOp::zero(self.nvars, (self.degree() + q).max(-1));
        for i in 0..self.arity {
            let term = self.insert(i, psi);
            if (i as i64 * q as i64).rem_euclid(2) == 1 {
                out = out.sub(&term);
            } else {
                out = out.add(&term);
            }
        }
        out
    }

    /// Gerstenhaber bracket `[φ, ψ] = φ∘ψ − (−1)^{pq} ψ∘φ`.
    pub fn bracket(&self, psi: &PolyDiffOp) -> PolyDiffOp {
        let sign_odd = (self.degree() as i64 * psi.degree() as i64).rem_euclid(2) == 1;
        let a = self.compose(psi);
        let b = psi.compose(self);
        if sign_odd {
            a.add(&b)
        } else {
            a.sub(&b)
        }
    }

    /// Hochschild differential `d(φ) = [μ, φ]`.
    pub fn hochschild_d(&self) -> PolyDiffOp {
        PolyDiffOp::mu(self.nvars).bracket(self)
    }

    /// Composition of degree-0 operators, `(self ∘ other)(c) = self(other(c))`.
    pub fn then_after(&self, other: &PolyDiffOp) -> PolyDiffOp {
        assert!(self.arity == 1 && other.arity == 1, "only degree-0 operators compose as maps");
        self.insert(0, other)
    }
}

impl Linear for PolyDiffOp {
    fn zero_like(&self) -> Self {
        PolyDiffOp {
            nvars: self.nvars,
            arity: self.arity,
            terms: BTreeMap::new(),
        }
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
        assert_eq!(self.arity, other.arity, "adding operators of different degrees");
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(s.clone(), c.clone());
        }
        out
    }
    fn scale(&self, c: &Q) -> Self {
        let mut out = self.zero_like();
        for (s, f) in &self.terms {
            out.add_term(s.clone(), f.scale(c));
        }
        out
    }
}

fn fmt_slot(alpha: &[u32]) -> String {
    let mut idx = Vec::new();
    for (v, &e) in alpha.iter().enumerate() {
        for _ in 0..e {
            idx.push((v + 1).to_string());
        }
    }
    idx.join(",")
}

impl fmt::Display for PolyDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arity == 0 {
            return write!(f, "{}", self.as_function().unwrap());
        }
        let atoms = self.terms.iter().map(|(slots, c)| {
            let body = slots.iter().map(|a| fmt_slot(a)).collect::<Vec<_>>().join("|");
            (c, format!("D[{body}]"))
        });
        f.write_str(&join_terms(atoms))
    }
}

/// `R`-multilinear evaluation `Σ_{k + i_0 + … + i_p = n} φ_k(a_{i_0}, …, a_{i_p})`.
pub fn apply_op<F: FunctionRing>(phi: &Series<PolyDiffOp>, ctx: &F, args: &[Series<F>]) -> Result<Series<F>> {
    let arity = phi.coeff(0).arity();
    if args.len() != arity {
        return Err(Error::ArityMismatch {
            expected: arity,
            got: args.len(),
        });
    }
    crate::tpoly::check_orders(phi.order(), &args.iter().map(Series::order).collect::<Vec<_>>())?;
    let n = phi.order();
    let mut out = vec![ctx.zero_like(); n + 1];
    let mut picks = vec![0usize; arity];
    for (k, op) in phi.coeffs().iter().enumerate() {
        if op.is_zero() {
            continue;
        }
        multilinear_rec(op, ctx, args, k, n, 0, &mut picks, &mut out)?;
    }
    Ok(Series::new(out))
}

#[allow(clippy::too_many_arguments)]
fn multilinear_rec<F: FunctionRing>(
    op: &PolyDiffOp,
    ctx: &F,
    args: &[Series<F>],
    used: usize,
    n: usize,
    slot: usize,
    picks: &mut Vec<usize>,
    out: &mut [F],
) -> Result<()> {
    if slot == args.len() {
        let vals: Vec<F> = picks.iter().zip(args).map(|(&i, a)| a.coeff(i).clone()).collect();
        let v = op.apply_in(ctx, &vals)?;
        out[used] = out[used].add(&v);
        return Ok(());
    }
    for i in 0..=(n - used) {
        if args[slot].coeff(i).is_zero() {
            continue;
        }
        picks[slot] = i;
        multilinear_rec(op, ctx, args, used + i, n, slot + 1, picks, out)?;
    }
    Ok(())
}

/// Bracket of `h`-series of operators, truncated.
pub fn series_bracket(a: &Series<PolyDiffOp>, b: &Series<PolyDiffOp>) -> Series<PolyDiffOp> {
    a.mul_with(b, |x, y| x.bracket(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::LocPoly;
    use crate::{qi, Monomial};

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    fn e(n: usize, idx: &[usize]) -> MultiIndex {
        let mut a = vec![0; n];
        for &i in idx {
            a[i] += 1;
        }
        a
    }

    #[test]
    fn apply_examples() {
        let mu = PolyDiffOp::mu(2);
        assert_eq!(mu.apply(&[x(2, 0), x(2, 1)]).unwrap(), &x(2, 0) * &x(2, 1));
        let op = PolyDiffOp::atom(Poly::one(2), vec![e(2, &[0]), e(2, &[1])]);
        assert_eq!(op.apply(&[x(2, 0), x(2, 1)]).unwrap(), Poly::one(2));
        let s = x(1, 0);
        let op = PolyDiffOp::atom(Poly::one(1), vec![e(1, &[0]), e(1, &[0])]);
        let r = op
            .apply(&[LocPoly::s_inverse(&s), LocPoly::from_poly(x(1, 0), &s)])
            .unwrap();
        assert_eq!(r, LocPoly::new(Poly::constant(1, qi(-1)), s, 2));
        assert!(op.apply(&[x(1, 0)]).is_err());
    }

    #[test]
    fn mu_bracket_vanishes() {
        let mu = PolyDiffOp::mu(2);
        assert!(mu.bracket(&mu).is_zero());
        assert!(mu.hochschild_d().is_zero());
    }

    #[test]
    fn bracket_with_function_vanishes() {
        let op = PolyDiffOp::atom(Poly::one(1), vec![e(1, &[0]), e(1, &[0])]);
        let f = PolyDiffOp::function(x(1, 0));
        let r = op.bracket(&f);
        assert_eq!(r.degree(), 0);
        // r(g) = ∂x1·∂g − ∂g·∂x1 = 0
        assert!(r.is_zero());
    }

    #[test]
    fn d_of_function_is_zero() {
        let f = PolyDiffOp::function(&x(2, 0) * &x(2, 1));
        assert!(f.hochschild_d().is_zero());
    }

    #[test]
    fn d_of_derivation_is_zero_and_of_second_order_is_not() {
        let d1 = PolyDiffOp::partial(2, 0).mul_fn(&x(2, 1));
        assert!(d1.hochschild_d().is_zero());
        let sq = PolyDiffOp::atom(Poly::one(2), vec![e(2, &[0, 0])]);
        let dsq = sq.hochschild_d();
        // d(∂²)(a, b) = ∂²a·b + a·∂²b − ∂²(ab) = −2 ∂a ∂b
        assert_eq!(dsq, PolyDiffOp::atom(Poly::constant(2, qi(-2)), vec![e(2, &[0]), e(2, &[0])]));
    }

    #[test]
    fn normalization() {
        let op = PolyDiffOp::atom(Poly::one(2), vec![e(2, &[0]), e(2, &[1])]);
        assert!(op.is_normalized());
        assert!(!PolyDiffOp::mu(2).is_normalized());
        let half = PolyDiffOp::atom(x(2, 0), vec![e(2, &[]), e(2, &[0])]);
        assert!(!half.is_normalized());
        assert!(PolyDiffOp::function(x(2, 0)).is_normalized());
    }

    #[test]
    fn composition_matches_evaluation() {
        let a = PolyDiffOp::atom(x(2, 1), vec![e(2, &[0, 0])]);
        let b = PolyDiffOp::atom(&x(2, 0) * &x(2, 0), vec![e(2, &[0, 1])]);
        let ab = a.then_after(&b);
        for m in Monomial::up_to_degree(2, 4) {
            let f = Poly::term(m, qi(1));
            let lhs = ab.apply(&[f.clone()]).unwrap();
            let rhs = a.apply(&[b.apply(&[f]).unwrap()]).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn display() {
        let op = PolyDiffOp::atom(x(2, 0), vec![e(2, &[0, 0, 1]), e(2, &[])]);
        assert_eq!(op.to_string(), "x1*D[1,1,2|]");
        assert_eq!(PolyDiffOp::mu(2).to_string(), "D[|]");
        assert_eq!(PolyDiffOp::zero(2, 1).to_string(), "0");
    }
}
