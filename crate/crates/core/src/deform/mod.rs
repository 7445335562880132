//! Deformed algebras `A_ω` attached to MC elements: star products from
//! normalized cochains, formal Poisson brackets from bivectors, gauge
//! transport, inner gauge groups, star inverses and localization.
//!
//! Elements are `h`-series over `C = Q[x]` or a localization `C_s`; every
//! operation is generic over [`FunctionRing`], which is how differential
//! data extends to fractions.

mod geo;
mod groupoid;
mod local;

pub use geo::{geo_verify, GeoInput, GeoOptions};
pub use groupoid::{DefArrow, DeformationGroupoid, Geometric, Geometrize, Step};
pub use local::{cover_compat, localize_deformation, restrict_series, Localized};

use crate::dpoly::{apply_op, PolyDiffOp};
use crate::error::{Error, Result};
use crate::mc::{bch_with, gauge_apply, DPoly, Dgla, GaugeElement, MCElement, TPoly};
use crate::polyring::FunctionRing;
use crate::series::{Algebra, Linear, Series};
use crate::tpoly::{bracket_of_functions, check_orders, jacobiator, PolyVec};
use crate::{factorial, Monomial, Poly, Q};

/// Scale relating the twisted bracket on functions in the polyvector host to
/// the Poisson bracket: `[[ω, a], b] = POISSON_INNER_SCALE · {a, b}_ω`.
/// Log coordinates of `N_ω` map to those of the inner gauge group by
/// `α ↦ POISSON_INNER_SCALE · α`.
pub const POISSON_INNER_SCALE: i64 = -2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeformationKind {
    Associative,
    Poisson,
}

impl DeformationKind {
    pub fn name(self) -> &'static str {
        match self {
            DeformationKind::Associative => "associative",
            DeformationKind::Poisson => "poisson",
        }
    }
}

/// Constant series of all monomials of total degree `≤ degree`.
pub fn monomial_grid(nvars: usize, degree: u32, order: usize) -> Vec<Series<Poly>> {
    Monomial::up_to_degree(nvars, degree)
        .into_iter()
        .map(|m| Series::constant(Poly::term(m, crate::qi(1)), order))
        .collect()
}

/// `a` as a degree `-1` cochain series.
pub fn as_cochain(a: &Series<Poly>) -> Series<PolyDiffOp> {
    a.map(|f| PolyDiffOp::function(f.clone()))
}

/// `a` as a degree `-1` polyvector series.
pub fn as_polyvec(a: &Series<Poly>) -> Series<PolyVec> {
    a.map(|f| PolyVec::function(f.clone()))
}

pub fn cochain_value(a: &Series<PolyDiffOp>) -> Result<Series<Poly>> {
    a.try_map(|op| {
        op.as_function().ok_or(Error::DegreeMismatch {
            expected: -1,
            got: op.degree(),
        })
    })
}

pub fn polyvec_value(a: &Series<PolyVec>) -> Result<Series<Poly>> {
    a.try_map(|v| {
        v.as_function().ok_or(Error::DegreeMismatch {
            expected: -1,
            got: v.degree(),
        })
    })
}

/// `Σ_k L^k(a)/k!` for a nilpotent-on-series operator `L`.
fn exp_operator<F: Linear>(a: &Series<F>, mut l: impl FnMut(&Series<F>) -> Result<Series<F>>) -> Result<Series<F>> {
    let mut acc = a.clone();
    let mut cur = a.clone();
    for k in 1..=(a.order() as u32 + 1) {
        cur = l(&cur)?;
        if cur.is_zero() {
            break;
        }
        acc = acc.add(&cur.scale(&(crate::qi(1) / factorial(k))));
    }
    Ok(acc)
}

fn ctx_of<F: FunctionRing>(a: &Series<F>) -> F {
    a.coeff(0).zero_like()
}

/// `A_ω` with `c1 ⋆ c2 = c1 c2 + ω(c1, c2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AssocDeformation {
    mc: MCElement<DPoly>,
}

/// Inner gauge element `exp_⋆(α)` with its inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerGauge<F: FunctionRing> {
    pub log: Series<F>,
    pub unit: Series<F>,
    pub unit_inv: Series<F>,
}

impl AssocDeformation {
    pub fn new(mc: MCElement<DPoly>) -> Self {
        AssocDeformation { mc }
    }

    /// The Moyal deformation of a constant Poisson matrix.
    pub fn moyal(pi: &[Vec<Q>], order: usize) -> Result<Self> {
        let omega = crate::dpoly::moyal_mc(pi, order)?;
        Ok(Self::new(MCElement::new(DPoly::normalized(pi.len(), order), omega)?))
    }

    pub fn mc(&self) -> &MCElement<DPoly> {
        &self.mc
    }

    pub fn omega(&self) -> &Series<PolyDiffOp> {
        self.mc.omega()
    }

    pub fn order(&self) -> usize {
        self.mc.host().order()
    }

    pub fn nvars(&self) -> usize {
        self.mc.host().ambient().nvars
    }

    pub fn star_mul<F: FunctionRing>(&self, a: &Series<F>, b: &Series<F>) -> Result<Series<F>> {
        check_orders(self.order(), &[a.order(), b.order()])?;
        let ctx = ctx_of(a);
        if !ctx.same_context(b.coeff(0)) {
            return Err(Error::ContextMismatch("operands live in different localizations".into()));
        }
        let corr = apply_op(self.omega(), &ctx, &[a.clone(), b.clone()])?;
        Ok(a.mul(b).add(&corr))
    }

    /// `(a⋆b)⋆c − a⋆(b⋆c)`.
    pub fn assoc_defect<F: FunctionRing>(&self, a: &Series<F>, b: &Series<F>, c: &Series<F>) -> Result<Series<F>> {
        let lhs = self.star_mul(&self.star_mul(a, b)?, c)?;
        let rhs = self.star_mul(a, &self.star_mul(b, c)?)?;
        Ok(lhs.sub(&rhs))
    }

    /// `a⋆b − b⋆a`.
    pub fn commutator<F: FunctionRing>(&self, a: &Series<F>, b: &Series<F>) -> Result<Series<F>> {
        Ok(self.star_mul(a, b)?.sub(&self.star_mul(b, a)?))
    }

    pub fn one<F: FunctionRing>(&self, ctx: &F) -> Series<F> {
        Series::constant(ctx.one_like(), self.order())
    }

    /// `exp_⋆(α) = Σ α^{⋆k}/k!`.
    pub fn exp_star<F: FunctionRing>(&self, alpha: &Series<F>) -> Result<Series<F>> {
        alpha.require_valuation(1)?;
        let ctx = ctx_of(alpha);
        exp_operator(&self.one(&ctx), |x| self.star_mul(alpha, x))
    }

    /// Two-sided inverse. The augmentation `a_0` must be a unit of the base;
    /// otherwise the error names the element to localize at.
    pub fn star_inverse<F: FunctionRing>(&self, a: &Series<F>) -> Result<Series<F>> {
        let b0 = a.coeff(0).inverse().map_err(|s| Error::NotInvertible { s })?;
        let b0 = Series::constant(b0, self.order());
        // a ⋆ b0 = 1 − ε with ε ∈ m A
        let one = self.one(a.coeff(0));
        let eps = one.sub(&self.star_mul(a, &b0)?);
        let mut geom = one.clone();
        let mut power = one;
        for _ in 0..self.order() {
            power = self.star_mul(&power, &eps)?;
            if power.is_zero() {
                break;
            }
            geom = geom.add(&power);
        }
        self.star_mul(&b0, &geom)
    }

    pub fn inner_gauge<F: FunctionRing>(&self, alpha: &Series<F>) -> Result<InnerGauge<F>> {
        let unit = self.exp_star(alpha)?;
        let unit_inv = self.exp_star(&alpha.neg())?;
        Ok(InnerGauge {
            log: alpha.clone(),
            unit,
            unit_inv,
        })
    }

    /// `u ⋆ b ⋆ u⁻¹`.
    pub fn conj<F: FunctionRing>(&self, g: &InnerGauge<F>, b: &Series<F>) -> Result<Series<F>> {
        self.star_mul(&self.star_mul(&g.unit, b)?, &g.unit_inv)
    }

    /// `exp(ad_⋆ α)(b)`.
    pub fn ad_exp<F: FunctionRing>(&self, alpha: &Series<F>, b: &Series<F>) -> Result<Series<F>> {
        alpha.require_valuation(1)?;
        exp_operator(b, |x| self.commutator(alpha, x))
    }

    /// BCH of log coordinates over the twisted bracket, computed in the
    /// cochain host.
    pub fn bch_twisted(&self, a1: &Series<Poly>, a2: &Series<Poly>) -> Result<Series<Poly>> {
        a1.require_valuation(1)?;
        a2.require_valuation(1)?;
        let out = bch_with(&as_cochain(a1), &as_cochain(a2), |x, y| {
            crate::mc::twisted_bracket(&self.mc, x, y).expect("degree -1 series of valuation >= 1")
        });
        cochain_value(&out)
    }

    /// Transport along `exp(γ)`: the target deformation and the check data.
    pub fn transport(&self, gauge: &GaugeElement<DPoly>) -> Result<AssocDeformation> {
        let omega = gauge_apply(self.mc.host(), gauge, self.omega())?;
        Ok(AssocDeformation {
            mc: MCElement::unchecked(*self.mc.host(), omega),
        })
    }
}

/// `exp(γ)(a) = Σ γ^k(a)/k!` for a series of degree-0 operators.
pub fn apply_op_gauge<F: FunctionRing>(gamma: &Series<PolyDiffOp>, a: &Series<F>) -> Result<Series<F>> {
    let ctx = ctx_of(a);
    exp_operator(a, |x| apply_op(gamma, &ctx, std::slice::from_ref(x)))
}

/// `exp(γ)(a)` for a series of vector fields.
pub fn apply_vec_gauge<F: FunctionRing>(gamma: &Series<PolyVec>, a: &Series<F>) -> Result<Series<F>> {
    check_orders(gamma.order(), &[a.order()])?;
    if gamma.coeff(0).degree() != 0 {
        return Err(Error::DegreeMismatch {
            expected: 0,
            got: gamma.coeff(0).degree(),
        });
    }
    exp_operator(a, |x| Ok(gamma.mul_with(x, |v, f| v.apply_to(f))))
}

/// `A_ω` with the formal Poisson bracket of a bivector series.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonDeformation {
    mc: MCElement<TPoly>,
}

impl PoissonDeformation {
    pub fn new(mc: MCElement<TPoly>) -> Self {
        PoissonDeformation { mc }
    }

    pub fn mc(&self) -> &MCElement<TPoly> {
        &self.mc
    }

    pub fn omega(&self) -> &Series<PolyVec> {
        self.mc.omega()
    }

    pub fn order(&self) -> usize {
        self.mc.host().order()
    }

    pub fn nvars(&self) -> usize {
        self.mc.host().ambient().nvars
    }

    pub fn bracket<F: FunctionRing>(&self, a: &Series<F>, b: &Series<F>) -> Result<Series<F>> {
        bracket_of_functions(self.omega(), a, b)
    }

    /// `{a, bc} − {a, b}c − b{a, c}`.
    pub fn leibniz_defect<F: FunctionRing>(&self, a: &Series<F>, b: &Series<F>, c: &Series<F>) -> Result<Series<F>> {
        let lhs = self.bracket(a, &b.mul(c))?;
        let rhs = self.bracket(a, b)?.mul(c).add(&b.mul(&self.bracket(a, c)?));
        Ok(lhs.sub(&rhs))
    }

    pub fn jacobi_defect<F: FunctionRing>(&self, a: &Series<F>, b: &Series<F>, c: &Series<F>) -> Result<Series<F>> {
        jacobiator(self.omega(), a, b, c)
    }

    /// `exp({β, −})(b)`, the inner gauge action of `exp(β)`.
    pub fn ad_exp<F: FunctionRing>(&self, beta: &Series<F>, b: &Series<F>) -> Result<Series<F>> {
        beta.require_valuation(1)?;
        exp_operator(b, |x| self.bracket(beta, x))
    }

    /// Group law of the inner gauge group: BCH over `{−, −}_ω`.
    pub fn bch(&self, b1: &Series<Poly>, b2: &Series<Poly>) -> Result<Series<Poly>> {
        b1.require_valuation(1)?;
        b2.require_valuation(1)?;
        Ok(bch_with(b1, b2, |x, y| self.bracket(x, y).expect("orders agree")))
    }

    /// BCH of `N_ω` log coordinates over the twisted bracket.
    pub fn bch_twisted(&self, a1: &Series<Poly>, a2: &Series<Poly>) -> Result<Series<Poly>> {
        a1.require_valuation(1)?;
        a2.require_valuation(1)?;
        let out = bch_with(&as_polyvec(a1), &as_polyvec(a2), |x, y| {
            crate::mc::twisted_bracket(&self.mc, x, y).expect("degree -1 series of valuation >= 1")
        });
        polyvec_value(&out)
    }

    pub fn transport(&self, gauge: &GaugeElement<TPoly>) -> Result<PoissonDeformation> {
        let omega = gauge_apply(self.mc.host(), gauge, self.omega())?;
        Ok(PoissonDeformation {
            mc: MCElement::unchecked(*self.mc.host(), omega),
        })
    }
}

/// Either kind of deformation, for callers that dispatch at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum DeformedAlgebra {
    Assoc(AssocDeformation),
    Poisson(PoissonDeformation),
}

impl DeformedAlgebra {
    pub fn kind(&self) -> DeformationKind {
        match self {
            DeformedAlgebra::Assoc(_) => DeformationKind::Associative,
            DeformedAlgebra::Poisson(_) => DeformationKind::Poisson,
        }
    }

    pub fn nvars(&self) -> usize {
        match self {
            DeformedAlgebra::Assoc(a) => a.nvars(),
            DeformedAlgebra::Poisson(p) => p.nvars(),
        }
    }

    pub fn order(&self) -> usize {
        match self {
            DeformedAlgebra::Assoc(a) => a.order(),
            DeformedAlgebra::Poisson(p) => p.order(),
        }
    }

    pub fn star_mul<F: FunctionRing>(&self, a: &Series<F>, b: &Series<F>) -> Result<Series<F>> {
        match self {
            DeformedAlgebra::Assoc(x) => x.star_mul(a, b),
            DeformedAlgebra::Poisson(_) => Err(Error::KindMismatch("star product needs an associative deformation".into())),
        }
    }

    pub fn poisson_bracket<F: FunctionRing>(&self, a: &Series<F>, b: &Series<F>) -> Result<Series<F>> {
        match self {
            DeformedAlgebra::Poisson(x) => x.bracket(a, b),
            DeformedAlgebra::Assoc(_) => Err(Error::KindMismatch("Poisson bracket needs a Poisson deformation".into())),
        }
    }

    /// The structure map: `⋆` or `{−, −}`.
    pub fn product<F: FunctionRing>(&self, a: &Series<F>, b: &Series<F>) -> Result<Series<F>> {
        match self {
            DeformedAlgebra::Assoc(x) => x.star_mul(a, b),
            DeformedAlgebra::Poisson(x) => x.bracket(a, b),
        }
    }

    /// `augmentation(a) = a_0`.
    pub fn augmentation<F: FunctionRing>(a: &Series<F>) -> F {
        a.coeff(0).clone()
    }
}
