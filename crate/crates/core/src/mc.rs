//! The DG Lie layer over a truncated parameter algebra.
//!
//! Elements of `m ⊗ g` are `h`-series of homogeneous elements with
//! valuation `≥ 1`. The two hosts are polyvector fields (zero differential,
//! Schouten bracket) and polydifferential operators (Hochschild `d = [μ, −]`,
//! Gerstenhaber bracket), the latter optionally restricted to normalized
//! cochains.
//!
//! Gauge action. `exp(γ)` acts by
//! `ω ↦ e^{ad γ}(ω) − φ(ad γ)(dγ)` with `φ(L) = Σ L^k/(k+1)!`,
//! which is `e^{ad γ}(μ + ω) − μ` for the operator host: the transport of a
//! star product along the algebra automorphism `exp(γ)`. With this choice
//! `d_{ω'} = e^{ad γ} ∘ d_ω ∘ e^{−ad γ}`.

use std::collections::HashMap;
use std::fmt;

use crate::dpoly::PolyDiffOp;
use crate::error::{Error, Result};
use crate::polyring::Ambient;
use crate::series::{Linear, Series};
use crate::tpoly::{check_orders, PolyVec};
use crate::{factorial, q, Q};

/// A graded Lie algebra with differential, living in degrees `≥ -1`.
pub trait Dgla: Clone + PartialEq + fmt::Debug {
    type Elem: Linear + fmt::Display;

    fn ambient(&self) -> Ambient;

    fn zero(&self, degree: i32) -> Self::Elem;

    fn degree(&self, e: &Self::Elem) -> i32;

    fn d(&self, e: &Self::Elem) -> Self::Elem;

    fn bracket(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Membership test for sub-algebras (e.g. normalized cochains).
    fn contains(&self, _e: &Self::Elem) -> bool {
        true
    }

    fn name(&self) -> &'static str;

    fn order(&self) -> usize {
        self.ambient().order
    }

    fn zero_series(&self, degree: i32) -> Series<Self::Elem> {
        Series::zero(&self.zero(degree), self.order())
    }
}

/// Polyvector fields with the Schouten bracket and `d = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TPoly {
    pub ambient: Ambient,
}

impl TPoly {
    pub fn new(nvars: usize, order: usize) -> Self {
        TPoly {
            ambient: Ambient::new(nvars, order),
        }
    }
}

impl Dgla for TPoly {
    type Elem = PolyVec;

    fn ambient(&self) -> Ambient {
        self.ambient
    }
    fn zero(&self, degree: i32) -> PolyVec {
        PolyVec::zero(self.ambient.nvars, degree)
    }
    fn degree(&self, e: &PolyVec) -> i32 {
        e.degree()
    }
    fn d(&self, e: &PolyVec) -> PolyVec {
        PolyVec::zero(e.nvars(), e.degree() + 1)
    }
    fn bracket(&self, a: &PolyVec, b: &PolyVec) -> PolyVec {
        a.schouten(b)
    }
    fn name(&self) -> &'static str {
        "tpoly"
    }
}

/// Polydifferential operators; `normalized` restricts to `D^nor`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DPoly {
    pub ambient: Ambient,
    pub normalized: bool,
}

impl DPoly {
    pub fn normalized(nvars: usize, order: usize) -> Self {
        DPoly {
            ambient: Ambient::new(nvars, order),
            normalized: true,
        }
    }

    pub fn all(nvars: usize, order: usize) -> Self {
        DPoly {
            ambient: Ambient::new(nvars, order),
            normalized: false,
        }
    }
}

impl Dgla for DPoly {
    type Elem = PolyDiffOp;

    fn ambient(&self) -> Ambient {
        self.ambient
    }
    fn zero(&self, degree: i32) -> PolyDiffOp {
        PolyDiffOp::zero(self.ambient.nvars, degree)
    }
    fn degree(&self, e: &PolyDiffOp) -> i32 {
        e.degree()
    }
    fn d(&self, e: &PolyDiffOp) -> PolyDiffOp {
        e.hochschild_d()
    }
    fn bracket(&self, a: &PolyDiffOp, b: &PolyDiffOp) -> PolyDiffOp {
        a.bracket(b)
    }
    fn contains(&self, e: &PolyDiffOp) -> bool {
        !self.normalized || e.is_normalized()
    }
    fn name(&self) -> &'static str {
        if self.normalized {
            "dpoly_nor"
        } else {
            "dpoly"
        }
    }
}

pub fn series_d<G: Dgla>(g: &G, a: &Series<G::Elem>) -> Series<G::Elem> {
    a.map(|e| g.d(e))
}

pub fn series_bracket<G: Dgla>(g: &G, a: &Series<G::Elem>, b: &Series<G::Elem>) -> Series<G::Elem> {
    a.mul_with(b, |x, y| g.bracket(x, y))
}

fn check_element<G: Dgla>(g: &G, a: &Series<G::Elem>, degree: i32, min_valuation: usize) -> Result<()> {
    check_orders(g.order(), &[a.order()])?;
    let got = g.degree(a.coeff(0));
    if got != degree {
        return Err(Error::DegreeMismatch { expected: degree, got });
    }
    if let Some(bad) = a.coeffs().iter().find(|e| !g.contains(e)) {
        return Err(Error::Precondition(format!("`{bad}` lies outside the {} host", g.name())));
    }
    a.require_valuation(min_valuation)
}

/// `d(ω) + ½[ω, ω]`, truncated.
pub fn mc_defect<G: Dgla>(g: &G, omega: &Series<G::Elem>) -> Result<Series<G::Elem>> {
    check_element(g, omega, 1, 1)?;
    Ok(series_d(g, omega).add(&series_bracket(g, omega, omega).scale(&q(1, 2))))
}

/// A Maurer–Cartan element together with its host.
#[derive(Debug, Clone, PartialEq)]
pub struct MCElement<G: Dgla> {
    host: G,
    omega: Series<G::Elem>,
}

impl<G: Dgla> MCElement<G> {
    /// Checked constructor: the defect must vanish.
    pub fn new(host: G, omega: Series<G::Elem>) -> Result<Self> {
        let defect = mc_defect(&host, &omega)?;
        if let Some(j) = defect.coeffs().iter().position(|e| !e.is_zero()) {
            return Err(Error::Precondition(format!(
                "not a Maurer-Cartan element: defect at h^{j} is {}",
                defect.coeff(j)
            )));
        }
        Ok(MCElement { host, omega })
    }

    /// Skips the defect check; meant for negative tests.
    pub fn unchecked(host: G, omega: Series<G::Elem>) -> Self {
        MCElement { host, omega }
    }

    pub fn zero(host: G) -> Self {
        let omega = host.zero_series(1);
        MCElement { host, omega }
    }

    pub fn host(&self) -> &G {
        &self.host
    }

    pub fn omega(&self) -> &Series<G::Elem> {
        &self.omega
    }
}

/// `exp(γ)` in the gauge group, stored by its logarithm.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeElement<G: Dgla> {
    gamma: Series<G::Elem>,
}

impl<G: Dgla> GaugeElement<G> {
    pub fn new(host: &G, gamma: Series<G::Elem>) -> Result<Self> {
        check_element(host, &gamma, 0, 1)?;
        Ok(GaugeElement { gamma })
    }

    pub fn identity(host: &G) -> Self {
        GaugeElement {
            gamma: host.zero_series(0),
        }
    }

    pub fn gamma(&self) -> &Series<G::Elem> {
        &self.gamma
    }

    pub fn inverse(&self) -> Self {
        GaugeElement { gamma: self.gamma.neg() }
    }

    /// `self · other`, acting as `self ∘ other`.
    pub fn compose(&self, host: &G, other: &Self) -> Self {
        GaugeElement {
            gamma: bch(host, &self.gamma, &other.gamma),
        }
    }
}

/// Element of `N_ω`, stored in log coordinates `α` of degree `-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoMorphism<G: Dgla> {
    alpha: Series<G::Elem>,
}

impl<G: Dgla> TwoMorphism<G> {
    pub fn new(host: &G, alpha: Series<G::Elem>) -> Result<Self> {
        check_element(host, &alpha, -1, 1)?;
        Ok(TwoMorphism { alpha })
    }

    pub fn identity(host: &G) -> Self {
        TwoMorphism {
            alpha: host.zero_series(-1),
        }
    }

    pub fn alpha(&self) -> &Series<G::Elem> {
        &self.alpha
    }

    pub fn inverse(&self) -> Self {
        TwoMorphism { alpha: self.alpha.neg() }
    }

    /// Group law of `N_ω`: BCH over the twisted bracket.
    pub fn compose(&self, base: &MCElement<G>, other: &Self) -> Self {
        TwoMorphism {
            alpha: bch_with(&self.alpha, &other.alpha, |a, b| twisted_bracket_raw(base, a, b)),
        }
    }
}

/// `Σ_k L^k(x) · coeff(k)` for `L = ad γ`; stops once the iterate vanishes.
fn ad_series<E: Linear>(
    x: &Series<E>,
    mut ad: impl FnMut(&Series<E>) -> Series<E>,
    coeff: impl Fn(u32) -> Q,
) -> Series<E> {
    let mut acc = x.scale(&coeff(0));
    let mut cur = x.clone();
    for k in 1..=(x.order() as u32 + 1) {
        cur = ad(&cur);
        if cur.is_zero() {
            break;
        }
        acc = acc.add(&cur.scale(&coeff(k)));
    }
    acc
}

/// `e^{ad γ}(x)`.
pub fn ad_exp<G: Dgla>(g: &G, gamma: &Series<G::Elem>, x: &Series<G::Elem>) -> Series<G::Elem> {
    ad_series(x, |y| series_bracket(g, gamma, y), |k| crate::qi(1) / factorial(k))
}

/// `ω' = e^{ad γ}(ω) − φ(ad γ)(dγ)`; see the module docs for the sign.
pub fn gauge_apply<G: Dgla>(g: &G, gauge: &GaugeElement<G>, omega: &Series<G::Elem>) -> Result<Series<G::Elem>> {
    check_element(g, omega, 1, 1)?;
    let gamma = &gauge.gamma;
    let moved = ad_exp(g, gamma, omega);
    let dg = series_d(g, gamma);
    let flow = ad_series(&dg, |y| series_bracket(g, gamma, y), |k| crate::qi(1) / factorial(k + 1));
    Ok(moved.sub(&flow))
}

/// Coefficient of each bracket word in the Dynkin form of
/// `log(e^X e^Y)`, for words up to length `max_len`. `true` is `X`.
fn dynkin_coefficients(max_len: usize) -> Vec<(Vec<bool>, Q)> {
    // blocks X^r Y^s with r + s > 0; a word is a concatenation of blocks
    fn rec(word: &[bool], start: usize, blocks: usize, denom: Q, total: &mut Q) {
        if start == word.len() {
            let n = blocks as i64;
            let sign = if n % 2 == 1 { 1 } else { -1 };
            *total += crate::qi(sign) / (crate::qi(n) * denom);
            return;
        }
        let mut r = 0;
        while start + r < word.len() && word[start + r] {
            r += 1;
        }
        // r' ≤ r leading X's, then s ≥ 0 Y's
        for rr in 0..=r {
            if rr < r {
                // the block ends inside the X run; it may not contain Y's
                if rr == 0 {
                    continue;
                }
                let d = &denom * factorial(rr as u32);
                rec(word, start + rr, blocks + 1, d, total);
                continue;
            }
            let mut s = 0;
            while start + rr + s < word.len() && !word[start + rr + s] {
                s += 1;
            }
            for ss in 0..=s {
                if rr + ss == 0 {
                    continue;
                }
                let d = &denom * factorial(rr as u32) * factorial(ss as u32);
                rec(word, start + rr + ss, blocks + 1, d, total);
            }
        }
    }
    let mut out = Vec::new();
    for len in 1..=max_len {
        for bits in 0u32..(1 << len) {
            let word: Vec<bool> = (0..len).map(|i| bits & (1 << (len - 1 - i)) != 0).collect();
            // right-nested brackets ending in a repeated letter vanish
            if len >= 2 && word[len - 1] == word[len - 2] {
                continue;
            }
            let mut total = crate::qi(0);
            rec(&word, 0, 0, crate::qi(1), &mut total);
            if !num_traits::Zero::is_zero(&total) {
                out.push((word, total / crate::qi(len as i64)));
            }
        }
    }
    out
}

/// BCH product `log(e^a e^b)` for any bracket on series of valuation `≥ 1`.
/// Words longer than the truncation order vanish, so the sum is exact.
pub fn bch_with<E: Linear>(
    a: &Series<E>,
    b: &Series<E>,
    mut bracket: impl FnMut(&Series<E>, &Series<E>) -> Series<E>,
) -> Series<E> {
    let mut memo: HashMap<Vec<bool>, Series<E>> = HashMap::new();
    let mut acc = a.zero_like();
    for (word, c) in dynkin_coefficients(a.order()) {
        let value = nested(&word, a, b, &mut bracket, &mut memo);
        if !value.is_zero() {
            acc = acc.add(&value.scale(&c));
        }
    }
    acc
}

fn nested<E: Linear>(
    word: &[bool],
    a: &Series<E>,
    b: &Series<E>,
    bracket: &mut impl FnMut(&Series<E>, &Series<E>) -> Series<E>,
    memo: &mut HashMap<Vec<bool>, Series<E>>,
) -> Series<E> {
    if let Some(v) = memo.get(word) {
        return v.clone();
    }
    let head = if word[0] { a } else { b };
    let v = if word.len() == 1 {
        head.clone()
    } else {
        let tail = nested(&word[1..], a, b, bracket, memo);
        if tail.is_zero() {
            tail
        } else {
            bracket(head, &tail)
        }
    };
    memo.insert(word.to_vec(), v.clone());
    v
}

/// BCH product in the host's bracket.
pub fn bch<G: Dgla>(g: &G, a: &Series<G::Elem>, b: &Series<G::Elem>) -> Series<G::Elem> {
    bch_with(a, b, |x, y| series_bracket(g, x, y))
}

/// `d_ω(α) = d(α) + [ω, α]`.
pub fn twisted_d<G: Dgla>(mc: &MCElement<G>, alpha: &Series<G::Elem>) -> Result<Series<G::Elem>> {
    check_orders(mc.host.order(), &[alpha.order()])?;
    Ok(twisted_d_raw(mc, alpha))
}

fn twisted_d_raw<G: Dgla>(mc: &MCElement<G>, alpha: &Series<G::Elem>) -> Series<G::Elem> {
    series_d(&mc.host, alpha).add(&series_bracket(&mc.host, &mc.omega, alpha))
}

fn twisted_bracket_raw<G: Dgla>(mc: &MCElement<G>, a1: &Series<G::Elem>, a2: &Series<G::Elem>) -> Series<G::Elem> {
    series_bracket(&mc.host, &twisted_d_raw(mc, a1), a2)
}

/// `[α1, α2]_ω = [d_ω(α1), α2]` on degree `-1`.
pub fn twisted_bracket<G: Dgla>(mc: &MCElement<G>, a1: &Series<G::Elem>, a2: &Series<G::Elem>) -> Result<Series<G::Elem>> {
    check_element(&mc.host, a1, -1, 1)?;
    check_element(&mc.host, a2, -1, 1)?;
    Ok(twisted_bracket_raw(mc, a1, a2))
}

/// The DGLA laws on a triple of homogeneous series, as `(law, defect)`
/// pairs for the ones that fail: `d² = 0`, graded antisymmetry, graded
/// Jacobi and the Leibniz rule for `d`.
pub fn dgla_law_violations<G: Dgla>(
    g: &G,
    a: &Series<G::Elem>,
    b: &Series<G::Elem>,
    c: &Series<G::Elem>,
) -> Vec<(&'static str, Series<G::Elem>)> {
    let sign = |k: i32| if k.rem_euclid(2) == 0 { crate::qi(1) } else { crate::qi(-1) };
    let (p, q) = (g.degree(a.coeff(0)), g.degree(b.coeff(0)));
    let br = |x: &Series<G::Elem>, y: &Series<G::Elem>| series_bracket(g, x, y);
    let mut out = Vec::new();

    let dd = series_d(g, &series_d(g, a));
    if !dd.is_zero() {
        out.push(("d_squared", dd));
    }
    let anti = br(a, b).add(&br(b, a).scale(&sign(p * q)));
    if !anti.is_zero() {
        out.push(("antisymmetry", anti));
    }
    let jac = br(a, &br(b, c))
        .sub(&br(&br(a, b), c))
        .sub(&br(b, &br(a, c)).scale(&sign(p * q)));
    if !jac.is_zero() {
        out.push(("jacobi", jac));
    }
    let leib = series_d(g, &br(a, b))
        .sub(&br(&series_d(g, a), b))
        .sub(&br(a, &series_d(g, b)).scale(&sign(p)));
    if !leib.is_zero() {
        out.push(("leibniz", leib));
    }
    out
}

/// A degreewise map between hosts, claimed to be a DG Lie morphism.
pub trait DglaMorphism {
    type Source: Dgla;
    type Target: Dgla;

    fn source(&self) -> &Self::Source;
    fn target(&self) -> &Self::Target;
    fn apply(&self, e: &<Self::Source as Dgla>::Elem) -> <Self::Target as Dgla>::Elem;
}

/// The identity of a host.
#[derive(Debug, Clone)]
pub struct Identity<G>(pub G);

impl<G: Dgla> DglaMorphism for Identity<G> {
    type Source = G;
    type Target = G;
    fn source(&self) -> &G {
        &self.0
    }
    fn target(&self) -> &G {
        &self.0
    }
    fn apply(&self, e: &G::Elem) -> G::Elem {
        e.clone()
    }
}

/// Normalized cochains inside all differential cochains.
#[derive(Debug, Clone)]
pub struct Inclusion {
    source: DPoly,
    target: DPoly,
}

impl Inclusion {
    pub fn new(nvars: usize, order: usize) -> Self {
        Inclusion {
            source: DPoly::normalized(nvars, order),
            target: DPoly::all(nvars, order),
        }
    }
}

impl DglaMorphism for Inclusion {
    type Source = DPoly;
    type Target = DPoly;
    fn source(&self) -> &DPoly {
        &self.source
    }
    fn target(&self) -> &DPoly {
        &self.target
    }
    fn apply(&self, e: &PolyDiffOp) -> PolyDiffOp {
        e.clone()
    }
}

/// `x ↦ λx`: commutes with `d` but respects brackets only for `λ ∈ {0, 1}`.
#[derive(Debug, Clone)]
pub struct Scaling<G> {
    pub host: G,
    pub factor: Q,
}

impl<G: Dgla> DglaMorphism for Scaling<G> {
    type Source = G;
    type Target = G;
    fn source(&self) -> &G {
        &self.host
    }
    fn target(&self) -> &G {
        &self.host
    }
    fn apply(&self, e: &G::Elem) -> G::Elem {
        e.scale(&self.factor)
    }
}

/// Image of an MC element; the morphism is checked on `d(ω)` and `[ω, ω]`.
pub fn mc_pushforward<M: DglaMorphism>(
    phi: &M,
    mc: &MCElement<M::Source>,
) -> Result<MCElement<M::Target>> {
    let src = phi.source();
    if src != &mc.host {
        return Err(Error::MixedHosts);
    }
    let tgt = phi.target();
    let image = mc.omega.map(|e| phi.apply(e));
    let d_src = series_d(src, &mc.omega).map(|e| phi.apply(e));
    if d_src != series_d(tgt, &image) {
        return Err(Error::MorphismInvalid("does not commute with the differential".into()));
    }
    let br_src = series_bracket(src, &mc.omega, &mc.omega).map(|e| phi.apply(e));
    if br_src != series_bracket(tgt, &image, &image) {
        return Err(Error::MorphismInvalid("does not preserve the bracket".into()));
    }
    MCElement::new(tgt.clone(), image).map_err(|e| Error::MorphismInvalid(format!("image is not Maurer-Cartan: {e}")))
}
