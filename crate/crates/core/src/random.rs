//! Seeded generators for property tests, benchmarks and CLI sampling.
//!
//! Everything draws from a caller-supplied [`Rng`], so a seed fixes every
//! sample; [`rng`] builds the standard ChaCha8 stream.

use rand::seq::SliceRandom;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dpoly::{MultiIndex, PolyDiffOp};
use crate::series::{Linear, Series};
use crate::{q, Monomial, Poly, PolyVec, Q};

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small nonzero rational `p/q` with `|p| ≤ 3`, `q ∈ {1, 2, 3}`.
pub fn rational(r: &mut Rng) -> Q {
    let mut p = r.gen_range(-3i64..=3);
    if p == 0 {
        p = 1;
    }
    q(p, r.gen_range(1..=3))
}

/// Up to `max_terms` terms of total degree `≤ max_degree`.
pub fn poly(r: &mut Rng, nvars: usize, max_degree: u32, max_terms: usize) -> Poly {
    let monos = Monomial::up_to_degree(nvars, max_degree);
    let k = r.gen_range(0..=max_terms);
    Poly::from_terms(nvars, (0..k).map(|_| (monos.choose(r).unwrap().clone(), rational(r))))
}

pub fn nonzero_poly(r: &mut Rng, nvars: usize, max_degree: u32, max_terms: usize) -> Poly {
    loop {
        let p = poly(r, nvars, max_degree, max_terms.max(1));
        if !p.is_zero() {
            return p;
        }
    }
}

/// Series with coefficients drawn by `f` from index `min_valuation` on.
pub fn series<V: Linear>(
    r: &mut Rng,
    template: &V,
    order: usize,
    min_valuation: usize,
    mut f: impl FnMut(&mut Rng) -> V,
) -> Series<V> {
    Series::new(
        (0..=order)
            .map(|j| if j < min_valuation { template.zero_like() } else { f(r) })
            .collect(),
    )
}

pub fn poly_series(r: &mut Rng, nvars: usize, order: usize, min_valuation: usize, max_degree: u32) -> Series<Poly> {
    series(r, &Poly::zero(nvars), order, min_valuation, |r| poly(r, nvars, max_degree, 3))
}

/// Random polyvector of the given degree.
pub fn polyvec(r: &mut Rng, nvars: usize, degree: i32, max_degree: u32, max_terms: usize) -> PolyVec {
    if degree == -1 {
        return PolyVec::function(poly(r, nvars, max_degree, max_terms));
    }
    let k = degree as usize + 1;
    if k > nvars {
        return PolyVec::zero(nvars, degree);
    }
    let n = r.gen_range(0..=max_terms);
    let terms = (0..n).map(|_| {
        let mut idx: Vec<usize> = (0..nvars).collect();
        idx.shuffle(r);
        idx.truncate(k);
        (idx, poly(r, nvars, max_degree, 2))
    });
    PolyVec::from_terms(nvars, degree, terms.collect::<Vec<_>>())
}

fn multi_index(r: &mut Rng, nvars: usize, order: u32, nonempty: bool) -> MultiIndex {
    let lo = u32::from(nonempty);
    let total = r.gen_range(lo..=order.max(lo));
    let mut a = vec![0u32; nvars];
    for _ in 0..total {
        a[r.gen_range(0..nvars)] += 1;
    }
    a
}

/// Random operator of the given degree; `normalized` keeps every slot
/// nonempty.
pub fn diffop(
    r: &mut Rng,
    nvars: usize,
    degree: i32,
    max_order: u32,
    coeff_degree: u32,
    max_terms: usize,
    normalized: bool,
) -> PolyDiffOp {
    if degree == -1 {
        return PolyDiffOp::function(poly(r, nvars, coeff_degree, max_terms));
    }
    let arity = degree as usize + 1;
    let n = r.gen_range(0..=max_terms);
    let terms: Vec<(Vec<MultiIndex>, Poly)> = (0..n)
        .map(|_| {
            let slots = (0..arity).map(|_| multi_index(r, nvars, max_order, normalized)).collect();
            (slots, poly(r, nvars, coeff_degree, 2))
        })
        .collect();
    PolyDiffOp::from_terms(nvars, degree, terms)
}

/// A bivector with constant coefficients.
pub fn constant_bivector(r: &mut Rng, nvars: usize) -> PolyVec {
    let mut terms = Vec::new();
    for i in 0..nvars {
        for j in i + 1..nvars {
            if r.gen_bool(0.7) {
                terms.push((vec![i, j], Poly::constant(nvars, rational(r))));
            }
        }
    }
    PolyVec::from_terms(nvars, 1, terms)
}

/// A bivector with homogeneous linear coefficients.
pub fn linear_bivector(r: &mut Rng, nvars: usize) -> PolyVec {
    let mut terms = Vec::new();
    for i in 0..nvars {
        for j in i + 1..nvars {
            let mut lin = Vec::new();
            for k in 0..nvars {
                if r.gen_bool(0.5) {
                    lin.push((Monomial::var(nvars, k), rational(r)));
                }
            }
            let lin = Poly::from_terms(nvars, lin);
            terms.push((vec![i, j], lin));
        }
    }
    PolyVec::from_terms(nvars, 1, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_streams_repeat() {
        let a = poly(&mut rng(7), 2, 3, 4);
        let b = poly(&mut rng(7), 2, 3, 4);
        assert_eq!(a, b);
    }

    #[test]
    fn normalized_ops_are_normalized() {
        let mut r = rng(1);
        for _ in 0..20 {
            assert!(diffop(&mut r, 2, 1, 2, 1, 3, true).is_normalized());
        }
    }
}
