//! Black-box endomorphisms of `C` on a finite test window, the iterated
//! commutator order test and exact recognition as a differential operator.

use std::collections::BTreeMap;

use super::PolyDiffOp;
use crate::error::{Error, Result};
use crate::series::Linear;
use crate::{factorial, Monomial, Poly, Q};

/// A linear map `C → C` known by its values on every monomial of degree
/// `≤ d_test`.
#[derive(Debug, Clone, PartialEq)]
pub struct OpTable {
    nvars: usize,
    d_test: u32,
    values: BTreeMap<Monomial, Poly>,
}

impl OpTable {
    pub fn from_fn(nvars: usize, d_test: u32, mut f: impl FnMut(&Poly) -> Poly) -> Self {
        let values = Monomial::up_to_degree(nvars, d_test)
            .into_iter()
            .map(|m| {
                let v = f(&Poly::term(m.clone(), crate::qi(1)));
                (m, v)
            })
            .collect();
        OpTable { nvars, d_test, values }
    }

    /// Tabulate a degree-0 operator.
    pub fn from_op(op: &PolyDiffOp, d_test: u32) -> Result<Self> {
        if op.degree() != 0 {
            return Err(Error::DegreeMismatch {
                expected: 0,
                got: op.degree(),
            });
        }
        Ok(Self::from_fn(op.nvars(), d_test, |f| {
            op.apply(std::slice::from_ref(f)).expect("arity checked")
        }))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn d_test(&self) -> u32 {
        self.d_test
    }

    pub fn value(&self, m: &Monomial) -> Option<&Poly> {
        self.values.get(m)
    }

    /// Extend linearly; `None` when `f` leaves the test window.
    pub fn apply(&self, f: &Poly) -> Option<Poly> {
        let mut acc = Poly::zero(self.nvars);
        for (m, c) in f.terms() {
            acc = &acc + &self.values.get(m)?.scale(c);
        }
        Some(acc)
    }
}

/// Outcome of [`op_order`].
#[derive(Debug, Clone, PartialEq)]
pub enum OpOrder {
    /// Least `m` such that every `(m+1)`-fold commutator vanishes.
    Exact(u32),
    /// No `m ≤ max_order` works; `coords` and `monomial` give a nonvanishing
    /// `(max_order+1)`-fold commutator `[..[φ, x_c0]..]` evaluated at `monomial`.
    Exceeds { coords: Vec<usize>, monomial: Monomial, value: Poly },
}

/// Multisets of size `k` from `0..n`, as sorted vectors.
fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}

/// `[..[[φ, c0], c1].., cm](f)` for coordinate functions `c_j = x_{coords[j]}`.
fn iterated_commutator(phi: &OpTable, coords: &[usize], f: &Poly) -> Poly {
    let n = phi.nvars;
    let k = coords.len();
    let mut acc = Poly::zero(n);
    for mask in 0u32..(1 << k) {
        let (mut inside, mut outside) = (Poly::one(n), Poly::one(n));
        for (j, &c) in coords.iter().enumerate() {
            let x = Poly::var(n, c);
            if mask & (1 << j) != 0 {
                inside = &inside * &x;
            } else {
                outside = &outside * &x;
            }
        }
        let v = phi.apply(&(&inside * f)).expect("argument kept inside the test window");
        let term = &outside * &v;
        if (k - mask.count_ones() as usize) % 2 == 1 {
            acc = &acc - &term;
        } else {
            acc = &acc + &term;
        }
    }
    acc
}

/// Differential order of `φ` certified on the test window, by the
/// commutator criterion: `φ` has order `≤ m` iff all `(m+1)`-fold
/// commutators with multiplication operators vanish.
pub fn op_order(phi: &OpTable, max_order: u32) -> Result<OpOrder> {
    let required = max_order + 2;
    if phi.d_test < required {
        return Err(Error::InsufficientTestDegree {
            d_test: phi.d_test,
            required,
        });
    }
    let mut witness = None;
    for m in 0..=max_order {
        let k = m as usize + 1;
        let probe = Monomial::up_to_degree(phi.nvars, phi.d_test - k as u32);
        witness = multisets(phi.nvars, k).into_iter().find_map(|coords| {
            probe.iter().find_map(|mono| {
                let v = iterated_commutator(phi, &coords, &Poly::term(mono.clone(), crate::qi(1)));
                (!v.is_zero()).then(|| (coords.clone(), mono.clone(), v))
            })
        });
        if witness.is_none() {
            return Ok(OpOrder::Exact(m));
        }
    }
    let (coords, monomial, value) = witness.expect("loop ran at least once");
    Ok(OpOrder::Exceeds { coords, monomial, value })
}

/// Outcome of [`recognize_diffop`].
#[derive(Debug, Clone, PartialEq)]
pub enum Recognition {
    Operator(PolyDiffOp),
    /// The table disagrees with every candidate at `monomial`.
    Failure { monomial: Monomial, expected: Poly, got: Poly },
}

fn multi_factorial(a: &[u32]) -> Q {
    a.iter().map(|&e| factorial(e)).product()
}

/// Solve for `φ = Σ_{|α| ≤ m} f_α ∂^α` with `deg f_α ≤ coeff_degree`.
///
/// The system is triangular: `φ(x^β) = Σ_{α ≤ β} f_α β!/(β−α)! x^{β−α}`,
/// so each `f_β` is read off from `φ(x^β)` once the smaller ones are known.
/// The candidate is then checked against the whole table.
pub fn recognize_diffop(phi: &OpTable, m: u32, coeff_degree: u32) -> Result<Recognition> {
    let required = m + coeff_degree;
    if phi.d_test < required {
        return Err(Error::InsufficientTestDegree {
            d_test: phi.d_test,
            required,
        });
    }
    let n = phi.nvars;
    let mut found: BTreeMap<Monomial, Poly> = BTreeMap::new();
    for beta in Monomial::up_to_degree(n, m) {
        let mut rest = phi.value(&beta).expect("inside window").clone();
        for (alpha, f) in &found {
            if !alpha.divides(&beta) {
                continue;
            }
            let quot = alpha.quotient_of(&beta);
            let w = multi_factorial(&beta.0) / multi_factorial(&quot.0);
            rest = &rest - &f.mul_term(&quot, &w);
        }
        let f_beta = rest.scale(&(crate::qi(1) / multi_factorial(&beta.0)));
        if f_beta.total_degree().is_some_and(|d| d > coeff_degree) {
            let got = phi.value(&beta).unwrap().clone();
            let mut expected = got.clone();
            // the best bounded-degree fit drops the offending high-degree part
            for (mono, c) in f_beta.terms() {
                if mono.degree() > coeff_degree {
                    expected = &expected - &Poly::term(mono.clone(), c * multi_factorial(&beta.0));
                }
            }
            return Ok(Recognition::Failure {
                monomial: beta,
                expected,
                got,
            });
        }
        if !f_beta.is_zero() {
            found.insert(beta, f_beta);
        }
    }
    let op = PolyDiffOp::from_terms(n, 0, found.into_iter().map(|(a, f)| (vec![a.0], f)));
    for (mono, got) in &phi.values {
        let expected = op
            .apply(&[Poly::term(mono.clone(), crate::qi(1))])
            .expect("degree-0 operator");
        if &expected != got {
            return Ok(Recognition::Failure {
                monomial: mono.clone(),
                expected,
                got: got.clone(),
            });
        }
    }
    Ok(Recognition::Operator(op))
}
