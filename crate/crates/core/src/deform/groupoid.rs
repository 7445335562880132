//! The crossed groupoid of deformations: objects are deformations `A_ω`,
//! 1-morphisms are gauge transformations (as maps of elements), 2-morphisms
//! at `A` are inner gauge transformations, with feedback by conjugation.
//!
//! Maps are compared by evaluation on a fixed grid, so equality of
//! 1-morphisms means "agree on every grid element".

use std::fmt;

use super::{apply_op_gauge, apply_vec_gauge, cochain_value, polyvec_value, DeformationKind, DeformedAlgebra, POISSON_INNER_SCALE};
use super::{AssocDeformation, PoissonDeformation};
use crate::deligne::{CrossedGroupoid, CrossedMorphism, DeligneInstance};
use crate::dpoly::PolyDiffOp;
use crate::error::{Error, Result};
use crate::mc::{DPoly, Dgla, MCElement, TPoly};
use crate::series::{Linear, Series};
use crate::tpoly::PolyVec;
use crate::{qi, Poly};

/// One elementary map of elements.
#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    /// `exp(γ)` for normalized differential operators `γ`.
    Diff(Series<PolyDiffOp>),
    /// `exp(γ)` for vector fields `γ`.
    Vector(Series<PolyVec>),
    /// `b ↦ u ⋆ b ⋆ u⁻¹` in the algebra at object `base`.
    Conj { base: usize, unit: Series<Poly>, unit_inv: Series<Poly> },
    /// `b ↦ exp({β, −})(b)` in the Poisson algebra at object `base`.
    Ham { base: usize, beta: Series<Poly> },
}

impl Step {
    fn inverse(&self) -> Step {
        match self {
            Step::Diff(g) => Step::Diff(g.neg()),
            Step::Vector(g) => Step::Vector(g.neg()),
            Step::Conj { base, unit, unit_inv } => Step::Conj {
                base: *base,
                unit: unit_inv.clone(),
                unit_inv: unit.clone(),
            },
            Step::Ham { base, beta } => Step::Ham {
                base: *base,
                beta: beta.neg(),
            },
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Diff(g) => write!(f, "exp({g})"),
            Step::Vector(g) => write!(f, "exp({g})"),
            Step::Conj { unit, .. } => write!(f, "conj({unit})"),
            Step::Ham { beta, .. } => write!(f, "ham({beta})"),
        }
    }
}

/// A gauge transformation `A_source → A_target`; steps apply left to right.
#[derive(Debug, Clone, PartialEq)]
pub struct DefArrow {
    pub source: usize,
    pub target: usize,
    pub steps: Vec<Step>,
}

impl fmt::Display for DefArrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.steps.is_empty() {
            return write!(f, "id");
        }
        let parts: Vec<String> = self.steps.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(" ; "))
    }
}

#[derive(Debug, Clone)]
pub struct DeformationGroupoid {
    kind: DeformationKind,
    algebras: Vec<DeformedAlgebra>,
    arrows: Vec<DefArrow>,
    samples: Vec<Vec<Series<Poly>>>,
    grid: Vec<Series<Poly>>,
}

impl DeformationGroupoid {
    pub fn kind(&self) -> DeformationKind {
        self.kind
    }

    pub fn algebra(&self, a: usize) -> &DeformedAlgebra {
        &self.algebras[a]
    }

    fn assoc(&self, a: usize) -> &AssocDeformation {
        match &self.algebras[a] {
            DeformedAlgebra::Assoc(x) => x,
            DeformedAlgebra::Poisson(_) => unreachable!("kinds are uniform within a groupoid"),
        }
    }

    fn poisson(&self, a: usize) -> &PoissonDeformation {
        match &self.algebras[a] {
            DeformedAlgebra::Poisson(x) => x,
            DeformedAlgebra::Assoc(_) => unreachable!("kinds are uniform within a groupoid"),
        }
    }

    pub fn apply_step(&self, step: &Step, b: &Series<Poly>) -> Result<Series<Poly>> {
        match step {
            Step::Diff(g) => apply_op_gauge(g, b),
            Step::Vector(g) => apply_vec_gauge(g, b),
            Step::Conj { base, unit, unit_inv } => {
                let a = self.assoc(*base);
                a.star_mul(&a.star_mul(unit, b)?, unit_inv)
            }
            Step::Ham { base, beta } => self.poisson(*base).ad_exp(beta, b),
        }
    }

    pub fn apply(&self, f: &DefArrow, b: &Series<Poly>) -> Result<Series<Poly>> {
        let mut cur = b.clone();
        for s in &f.steps {
            cur = self.apply_step(s, &cur)?;
        }
        Ok(cur)
    }

    /// Image of a Deligne log coordinate `α` at object `a`: `exp_⋆(α)` for
    /// star products, `POISSON_INNER_SCALE · α` for Poisson brackets.
    pub fn inner_from_log(&self, a: usize, alpha: &Series<Poly>) -> Result<Series<Poly>> {
        match self.kind {
            DeformationKind::Associative => self.assoc(a).exp_star(alpha),
            DeformationKind::Poisson => Ok(alpha.scale(&qi(POISSON_INNER_SCALE))),
        }
    }

    pub fn grid(&self) -> &[Series<Poly>] {
        &self.grid
    }

    /// The deformation-side image of a Deligne instance: the same objects,
    /// one gauge map per Deligne arrow and the images of its 2-morphism
    /// samples.
    pub fn from_deligne<G: Geometric>(inst: &DeligneInstance<G>, grid: Vec<Series<Poly>>) -> Result<Self> {
        let algebras: Vec<DeformedAlgebra> = inst.objects_mc().iter().map(G::algebra).collect();
        let arrows = inst
            .arrows()
            .iter()
            .map(|f| {
                Ok(DefArrow {
                    source: f.source,
                    target: f.target,
                    steps: vec![G::gauge_step(f.gauge.gamma())?],
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut out = DeformationGroupoid {
            kind: G::KIND,
            algebras,
            arrows,
            samples: Vec::new(),
            grid,
        };
        for a in 0..out.algebras.len() {
            let mut at = Vec::new();
            for x in CrossedGroupoid::group(inst, &a) {
                at.push(out.inner_from_log(a, &G::log_value(x.0.alpha())?)?);
            }
            out.samples.push(at);
        }
        Ok(out)
    }
}

impl CrossedGroupoid for DeformationGroupoid {
    type Obj = usize;
    type Mor = DefArrow;
    type Elem = Series<Poly>;

    fn objects(&self) -> Vec<usize> {
        (0..self.algebras.len()).collect()
    }
    fn hom1(&self, a: &usize, b: &usize) -> Vec<DefArrow> {
        let mut out: Vec<DefArrow> = self
            .arrows
            .iter()
            .filter(|f| f.source == *a && f.target == *b)
            .cloned()
            .collect();
        out.extend(
            self.arrows
                .iter()
                .filter(|f| f.target == *a && f.source == *b)
                .map(|f| self.inverse1(f)),
        );
        if a == b {
            out.push(self.id1(a));
        }
        out
    }
    fn source(&self, f: &DefArrow) -> usize {
        f.source
    }
    fn target(&self, f: &DefArrow) -> usize {
        f.target
    }
    fn id1(&self, a: &usize) -> DefArrow {
        DefArrow {
            source: *a,
            target: *a,
            steps: Vec::new(),
        }
    }
    fn compose1(&self, f: &DefArrow, g: &DefArrow) -> Result<DefArrow> {
        if g.target != f.source {
            return Err(Error::NonComposable(format!(
                "arrow into object {} cannot be followed by an arrow out of object {}",
                g.target, f.source
            )));
        }
        let mut steps = g.steps.clone();
        steps.extend(f.steps.iter().cloned());
        Ok(DefArrow {
            source: g.source,
            target: f.target,
            steps,
        })
    }
    fn inverse1(&self, f: &DefArrow) -> DefArrow {
        DefArrow {
            source: f.target,
            target: f.source,
            steps: f.steps.iter().rev().map(Step::inverse).collect(),
        }
    }
    fn eq1(&self, f: &DefArrow, g: &DefArrow) -> bool {
        f.source == g.source
            && f.target == g.target
            && self.grid.iter().all(|b| match (self.apply(f, b), self.apply(g, b)) {
                (Ok(x), Ok(y)) => x == y,
                _ => false,
            })
    }
    fn group(&self, a: &usize) -> Vec<Series<Poly>> {
        self.samples[*a].clone()
    }
    fn id2(&self, a: &usize) -> Series<Poly> {
        let zero = Series::zero(&Poly::zero(self.algebras[*a].nvars()), self.algebras[*a].order());
        match self.kind {
            DeformationKind::Associative => self.assoc(*a).one(zero.coeff(0)),
            DeformationKind::Poisson => zero,
        }
    }
    fn mul2(&self, a: &usize, x: &Series<Poly>, y: &Series<Poly>) -> Series<Poly> {
        match self.kind {
            DeformationKind::Associative => self.assoc(*a).star_mul(x, y).expect("orders agree"),
            DeformationKind::Poisson => self.poisson(*a).bch(x, y).expect("log coordinates have valuation >= 1"),
        }
    }
    fn inv2(&self, a: &usize, x: &Series<Poly>) -> Series<Poly> {
        match self.kind {
            DeformationKind::Associative => self.assoc(*a).star_inverse(x).expect("units of 1 + mA are invertible"),
            DeformationKind::Poisson => x.neg(),
        }
    }
    fn eq2(&self, _a: &usize, x: &Series<Poly>, y: &Series<Poly>) -> bool {
        x == y
    }
    fn twist(&self, f: &DefArrow, x: &Series<Poly>) -> Series<Poly> {
        self.apply(f, x).expect("gauge maps act on elements")
    }
    fn feedback(&self, a: &usize, x: &Series<Poly>) -> DefArrow {
        let step = match self.kind {
            DeformationKind::Associative => Step::Conj {
                base: *a,
                unit: x.clone(),
                unit_inv: self.inv2(a, x),
            },
            DeformationKind::Poisson => Step::Ham { base: *a, beta: x.clone() },
        };
        DefArrow {
            source: *a,
            target: *a,
            steps: vec![step],
        }
    }
}

/// Hosts whose MC elements define deformations.
pub trait Geometric: Dgla {
    const KIND: DeformationKind;
    fn algebra(mc: &MCElement<Self>) -> DeformedAlgebra;
    fn gauge_step(gamma: &Series<Self::Elem>) -> Result<Step>;
    /// A degree `-1` series as a series of functions.
    fn log_value(alpha: &Series<Self::Elem>) -> Result<Series<Poly>>;
}

impl Geometric for DPoly {
    const KIND: DeformationKind = DeformationKind::Associative;
    fn algebra(mc: &MCElement<Self>) -> DeformedAlgebra {
        DeformedAlgebra::Assoc(AssocDeformation::new(mc.clone()))
    }
    fn gauge_step(gamma: &Series<PolyDiffOp>) -> Result<Step> {
        Ok(Step::Diff(gamma.clone()))
    }
    fn log_value(alpha: &Series<PolyDiffOp>) -> Result<Series<Poly>> {
        cochain_value(alpha)
    }
}

impl Geometric for TPoly {
    const KIND: DeformationKind = DeformationKind::Poisson;
    fn algebra(mc: &MCElement<Self>) -> DeformedAlgebra {
        DeformedAlgebra::Poisson(PoissonDeformation::new(mc.clone()))
    }
    fn gauge_step(gamma: &Series<PolyVec>) -> Result<Step> {
        Ok(Step::Vector(gamma.clone()))
    }
    fn log_value(alpha: &Series<PolyVec>) -> Result<Series<Poly>> {
        polyvec_value(alpha)
    }
}

/// The geometrization functor from a Deligne instance to its deformation
/// groupoid: identity on objects, `exp(γ)` on 1-morphisms and
/// [`DeformationGroupoid::inner_from_log`] on 2-morphisms.
pub struct Geometrize<'a> {
    pub target: &'a DeformationGroupoid,
}

impl<G: Geometric> CrossedMorphism<DeligneInstance<G>, DeformationGroupoid> for Geometrize<'_> {
    fn obj(&self, a: &usize) -> usize {
        *a
    }
    fn map1(&self, f: &crate::deligne::GaugeArrow<G>) -> DefArrow {
        DefArrow {
            source: f.source,
            target: f.target,
            steps: vec![G::gauge_step(f.gauge.gamma()).expect("gauge series of the host")],
        }
    }
    fn map2(&self, a: &usize, x: &crate::deligne::Alpha<G>) -> Series<Poly> {
        let alpha = G::log_value(x.0.alpha()).expect("2-morphisms have degree -1");
        self.target.inner_from_log(*a, &alpha).expect("valuation >= 1")
    }
}
