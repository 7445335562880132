//! The Moyal generator for a constant Poisson matrix.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{MultiIndex, PolyDiffOp};
use crate::error::{Error, Result};
use crate::series::Series;
use crate::{factorial, Poly, Q};

/// `ω = Σ_{k=1..N} h^k/k! · Σ π^{i1j1}⋯π^{ikjk} ∂_{i1⋯ik} ⊗ ∂_{j1⋯jk}`,
/// the exponential of `h π^{ij} ∂_i ⊗ ∂_j` without its constant term.
pub fn moyal_mc(pi: &[Vec<Q>], order: usize) -> Result<Series<PolyDiffOp>> {
    let d = pi.len();
    if let Some(bad) = pi.iter().position(|row| row.len() != d) {
        return Err(Error::Precondition(format!(
            "row {} of the Poisson matrix has {} entries, expected {d}",
            bad + 1,
            pi[bad].len()
        )));
    }
    for i in 0..d {
        for j in i..d {
            if pi[i][j] != -pi[j][i].clone() {
                return Err(Error::NotAntisymmetric { row: i + 1, col: j + 1 });
            }
        }
    }
    let mut first: BTreeMap<(MultiIndex, MultiIndex), Q> = BTreeMap::new();
    for (i, row) in pi.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if Zero::is_zero(c) {
                continue;
            }
            let (mut a, mut b) = (vec![0u32; d], vec![0u32; d]);
            a[i] = 1;
            b[j] = 1;
            first.insert((a, b), c.clone());
        }
    }
    let mut coeffs = vec![PolyDiffOp::zero(d, 1)];
    let mut power: BTreeMap<(MultiIndex, MultiIndex), Q> = BTreeMap::from([((vec![0; d], vec![0; d]), crate::qi(1))]);
    for k in 1..=order {
        let mut next: BTreeMap<(MultiIndex, MultiIndex), Q> = BTreeMap::new();
        for ((a, b), c) in &power {
            for ((a1, b1), c1) in &first {
                let key = (
                    a.iter().zip(a1).map(|(x, y)| x + y).collect(),
                    b.iter().zip(b1).map(|(x, y)| x + y).collect(),
                );
                *next.entry(key).or_insert_with(Q::zero) += c * c1;
            }
        }
        next.retain(|_, c| !Zero::is_zero(c));
        let kf = factorial(k as u32);
        let op = PolyDiffOp::from_terms(
            d,
            1,
            next.iter()
                .map(|((a, b), c)| (vec![a.clone(), b.clone()], Poly::constant(d, c / &kf))),
        );
        coeffs.push(op);
        power = next;
    }
    Ok(Series::new(coeffs))
}
