//! Crossed groupoids, an axiom verifier, finite fixtures and the Deligne
//! construction.
//!
//! A crossed groupoid has objects, a groupoid `G1` of 1-morphisms, a group
//! `G2(ω)` of 2-morphisms at each object, a twisting action
//! `twist(g): G2(ω) → G2(ω')` for `g: ω → ω'` and a feedback functor
//! `D: G2(ω) → G1(ω, ω)`, subject to
//!
//! - (i) `D(twist(g)(a)) = g ∘ D(a) ∘ g⁻¹`,
//! - (ii) `twist(D(a))(b) = a b a⁻¹`.
//!
//! Infinite structures are explored on samples; a pass means "no
//! counterexample within budget".

use std::fmt;

use crate::error::{Error, Result};
use crate::mc::{ad_exp, bch_with, gauge_apply, twisted_d, Dgla, GaugeElement, MCElement, TwoMorphism};
use crate::report::{CheckRecord, Report, Witness};
use crate::series::Series;

/// Interface consumed by [`verify_crossed_axioms`].
pub trait CrossedGroupoid {
    type Obj: Clone + PartialEq + fmt::Display;
    type Mor: Clone + fmt::Display;
    type Elem: Clone + fmt::Display;

    fn objects(&self) -> Vec<Self::Obj>;

    /// 1-morphisms `a → b` (all of them, or a sample).
    fn hom1(&self, a: &Self::Obj, b: &Self::Obj) -> Vec<Self::Mor>;
    fn source(&self, f: &Self::Mor) -> Self::Obj;
    fn target(&self, f: &Self::Mor) -> Self::Obj;
    fn id1(&self, a: &Self::Obj) -> Self::Mor;
    /// `f ∘ g`: first `g`, then `f`.
    fn compose1(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor>;
    fn inverse1(&self, f: &Self::Mor) -> Self::Mor;
    fn eq1(&self, f: &Self::Mor, g: &Self::Mor) -> bool;

    /// Elements of `G2(a)` (all of them, or a sample).
    fn group(&self, a: &Self::Obj) -> Vec<Self::Elem>;
    fn id2(&self, a: &Self::Obj) -> Self::Elem;
    fn mul2(&self, a: &Self::Obj, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn inv2(&self, a: &Self::Obj, x: &Self::Elem) -> Self::Elem;
    fn eq2(&self, a: &Self::Obj, x: &Self::Elem, y: &Self::Elem) -> bool;

    fn twist(&self, f: &Self::Mor, x: &Self::Elem) -> Self::Elem;
    fn feedback(&self, a: &Self::Obj, x: &Self::Elem) -> Self::Mor;
}

/// Caps the number of tuples examined per law.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_instances: usize,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            max_instances: usize::MAX,
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_instances: 2000 }
    }
}

/// Counts instances of one law and keeps the first violation.
struct Law {
    name: &'static str,
    checked: usize,
    violations: usize,
    first: Option<Vec<Witness>>,
    cap: usize,
}

impl Law {
    fn new(name: &'static str, budget: Budget) -> Self {
        Law {
            name,
            checked: 0,
            violations: 0,
            first: None,
            cap: budget.max_instances,
        }
    }

    fn full(&self) -> bool {
        self.checked >= self.cap
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> Vec<Witness>) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.first.is_none() {
                self.first = Some(witness());
            }
        }
    }

    fn finish(self) -> CheckRecord {
        match self.first {
            None => CheckRecord::pass(self.name, format!("{} instances", self.checked)),
            Some(w) => CheckRecord::fail(
                self.name,
                format!("{} of {} instances violated; first shown", self.violations, self.checked),
                w,
            ),
        }
    }
}

fn w(label: &str, v: impl fmt::Display) -> Witness {
    Witness::new(label, v)
}

/// Run every law of a crossed groupoid on the enumerated or sampled data.
pub fn verify_crossed_axioms<G: CrossedGroupoid>(g: &G, budget: Budget) -> Report {
    let objs = g.objects();
    let mut report = Report::new("crossed-axioms");

    let mut groupoid = Law::new("groupoid_laws", budget);
    let mut group = Law::new("group_laws", budget);
    let mut twist_hom = Law::new("twist_homomorphism", budget);
    let mut twist_fun = Law::new("twist_functorial", budget);
    let mut feedback_fun = Law::new("feedback_functor", budget);
    let mut axiom_i = Law::new("axiom_i_equivariance", budget);
    let mut axiom_ii = Law::new("axiom_ii_conjugation", budget);

    // all sampled 1-morphisms, with their endpoints
    let mut mors: Vec<G::Mor> = Vec::new();
    for a in &objs {
        for b in &objs {
            mors.extend(g.hom1(a, b));
        }
    }

    for f in &mors {
        if groupoid.full() {
            break;
        }
        let (a, b) = (g.source(f), g.target(f));
        let ok_id = g.compose1(f, &g.id1(&a)).is_ok_and(|x| g.eq1(&x, f))
            && g.compose1(&g.id1(&b), f).is_ok_and(|x| g.eq1(&x, f));
        groupoid.record(ok_id, || vec![w("identity law fails for", f)]);
        let inv = g.inverse1(f);
        let ok_inv = g.compose1(&inv, f).is_ok_and(|x| g.eq1(&x, &g.id1(&a)))
            && g.compose1(f, &inv).is_ok_and(|x| g.eq1(&x, &g.id1(&b)));
        groupoid.record(ok_inv, || vec![w("inverse law fails for", f)]);
    }
    'assoc: for f in &mors {
        for h in mors.iter().filter(|h| g.target(h) == g.source(f)) {
            for k in mors.iter().filter(|k| g.target(k) == g.source(h)) {
                if groupoid.full() {
                    break 'assoc;
                }
                let lhs = g.compose1(&g.compose1(f, h).unwrap(), k).unwrap();
                let rhs = g.compose1(f, &g.compose1(h, k).unwrap()).unwrap();
                groupoid.record(g.eq1(&lhs, &rhs), || vec![w("f", f), w("g", h), w("k", k)]);
            }
        }
    }

    for a in &objs {
        let elems = g.group(a);
        let e = g.id2(a);
        for x in &elems {
            let ok = g.eq2(a, &g.mul2(a, &e, x), x)
                && g.eq2(a, &g.mul2(a, x, &e), x)
                && g.eq2(a, &g.mul2(a, x, &g.inv2(a, x)), &e);
            group.record(ok, || vec![w("object", a), w("x", x)]);
        }
        'g: for x in &elems {
            for y in &elems {
                for z in &elems {
                    if group.full() {
                        break 'g;
                    }
                    let lhs = g.mul2(a, &g.mul2(a, x, y), z);
                    let rhs = g.mul2(a, x, &g.mul2(a, y, z));
                    group.record(g.eq2(a, &lhs, &rhs), || vec![w("object", a), w("x", x), w("y", y), w("z", z)]);
                }
            }
        }
        'fb: for x in &elems {
            for y in &elems {
                if feedback_fun.full() {
                    break 'fb;
                }
                let lhs = g.feedback(a, &g.mul2(a, x, y));
                let rhs = g.compose1(&g.feedback(a, x), &g.feedback(a, y));
                feedback_fun.record(rhs.is_ok_and(|r| g.eq1(&lhs, &r)), || {
                    vec![w("object", a), w("x", x), w("y", y)]
                });
            }
        }
        // axiom (ii): twist(D(x))(y) = x y x⁻¹
        'ii: for x in &elems {
            let dx = g.feedback(a, x);
            for y in &elems {
                if axiom_ii.full() {
                    break 'ii;
                }
                let lhs = g.twist(&dx, y);
                let rhs = g.mul2(a, &g.mul2(a, x, y), &g.inv2(a, x));
                axiom_ii.record(g.eq2(a, &lhs, &rhs), || {
                    vec![w("object", a), w("a", x), w("b", y), w("twist(D(a))(b)", &lhs), w("a b a^-1", &rhs)]
                });
            }
        }
        let id = g.id1(a);
        for x in &elems {
            twist_fun.record(g.eq2(a, &g.twist(&id, x), x), || vec![w("identity twist moves", x)]);
        }
    }

    for f in &mors {
        let (a, b) = (g.source(f), g.target(f));
        let elems = g.group(&a);
        for x in &elems {
            if axiom_i.full() {
                break;
            }
            let lhs = g.feedback(&b, &g.twist(f, x));
            let rhs = g
                .compose1(&g.compose1(f, &g.feedback(&a, x)).unwrap(), &g.inverse1(f))
                .unwrap();
            axiom_i.record(g.eq1(&lhs, &rhs), || {
                vec![w("g", f), w("a", x), w("D(twist(g)(a))", &lhs), w("g D(a) g^-1", &rhs)]
            });
        }
        'th: for x in &elems {
            for y in &elems {
                if twist_hom.full() {
                    break 'th;
                }
                let lhs = g.twist(f, &g.mul2(&a, x, y));
                let rhs = g.mul2(&b, &g.twist(f, x), &g.twist(f, y));
                twist_hom.record(g.eq2(&b, &lhs, &rhs), || vec![w("g", f), w("x", x), w("y", y)]);
            }
        }
        for h in mors.iter().filter(|h| g.target(h) == a) {
            for x in g.group(&g.source(h)) {
                if twist_fun.full() {
                    break;
                }
                let fh = g.compose1(f, h).unwrap();
                let lhs = g.twist(&fh, &x);
                let rhs = g.twist(f, &g.twist(h, &x));
                twist_fun.record(g.eq2(&b, &lhs, &rhs), || vec![w("g", f), w("h", h), w("x", &x)]);
            }
        }
    }

    for law in [groupoid, group, twist_hom, twist_fun, feedback_fun, axiom_i, axiom_ii] {
        report.push(law.finish());
    }
    report
}

/// A morphism of crossed groupoids, given on objects and both morphism levels.
pub trait CrossedMorphism<G: CrossedGroupoid, H: CrossedGroupoid> {
    fn obj(&self, a: &G::Obj) -> H::Obj;
    fn map1(&self, f: &G::Mor) -> H::Mor;
    fn map2(&self, a: &G::Obj, x: &G::Elem) -> H::Elem;
}

/// Decide by enumeration whether `phi` is a morphism that is an
/// equivalence: essentially surjective, bijective on automorphism groups of
/// `G1` and on every `G2(ω)`. Needs finite, fully enumerated inputs.
pub fn check_equivalence<G, H, M>(g: &G, h: &H, phi: &M) -> Report
where
    G: CrossedGroupoid,
    H: CrossedGroupoid,
    M: CrossedMorphism<G, H>,
{
    let mut report = Report::new("equivalence");
    let objs = g.objects();
    report.push(morphism_law(g, h, phi, Budget::unlimited()).finish());

    let images: Vec<H::Obj> = objs.iter().map(|a| phi.obj(a)).collect();
    let mut ess = Law::new("essentially_surjective", Budget::unlimited());
    for b in h.objects() {
        let hit = images.iter().any(|i| !h.hom1(i, &b).is_empty());
        ess.record(hit, || vec![w("object not reached", &b)]);
    }
    report.push(ess.finish());

    let mut full = Law::new("bijective_on_g1", Budget::unlimited());
    let mut two = Law::new("bijective_on_g2", Budget::unlimited());
    for a in &objs {
        let pa = phi.obj(a);
        let src: Vec<H::Mor> = g.hom1(a, a).iter().map(|f| phi.map1(f)).collect();
        let tgt = h.hom1(&pa, &pa);
        full.record(bijective(&src, &tgt, |x, y| h.eq1(x, y)), || vec![w("object", a)]);
        let src2: Vec<H::Elem> = g.group(a).iter().map(|x| phi.map2(a, x)).collect();
        let tgt2 = h.group(&pa);
        two.record(bijective(&src2, &tgt2, |x, y| h.eq2(&pa, x, y)), || vec![w("object", a)]);
    }
    report.push(full.finish());
    report.push(two.finish());
    report
}

/// The structure-preservation law of a morphism on the sampled data of `g`.
fn morphism_law<G, H, M>(g: &G, h: &H, phi: &M, budget: Budget) -> Law
where
    G: CrossedGroupoid,
    H: CrossedGroupoid,
    M: CrossedMorphism<G, H>,
{
    let objs = g.objects();

    // morphism conditions
    let mut functor = Law::new("morphism_respects_structure", budget);
    for a in &objs {
        for b in &objs {
            for f in g.hom1(a, b) {
                for k in g.hom1(b, b) {
                    if functor.full() {
                        break;
                    }
                    let lhs = g.compose1(&k, &f).map(|c| phi.map1(&c));
                    let rhs = h.compose1(&phi.map1(&k), &phi.map1(&f));
                    let ok = matches!((&lhs, &rhs), (Ok(l), Ok(r)) if h.eq1(l, r));
                    functor.record(ok, || vec![w("f", &f), w("g", &k)]);
                }
                for x in g.group(a) {
                    let lhs = phi.map2(b, &g.twist(&f, &x));
                    let rhs = h.twist(&phi.map1(&f), &phi.map2(a, &x));
                    functor.record(h.eq2(&phi.obj(b), &lhs, &rhs), || vec![w("twist along", &f), w("x", &x)]);
                }
            }
            let ga = g.group(a);
            for x in &ga {
                let lhs = phi.map1(&g.feedback(a, x));
                let rhs = h.feedback(&phi.obj(a), &phi.map2(a, x));
                functor.record(h.eq1(&lhs, &rhs), || vec![w("feedback of", x)]);
                for y in &ga {
                    let lhs = phi.map2(a, &g.mul2(a, x, y));
                    let rhs = h.mul2(&phi.obj(a), &phi.map2(a, x), &phi.map2(a, y));
                    functor.record(h.eq2(&phi.obj(a), &lhs, &rhs), || vec![w("x", x), w("y", y)]);
                }
            }
        }
    }
    functor
}

/// Check that `phi` respects composition, twisting, feedback and the group
/// laws on the sampled data of `g`.
pub fn check_morphism<G, H, M>(g: &G, h: &H, phi: &M, budget: Budget) -> Report
where
    G: CrossedGroupoid,
    H: CrossedGroupoid,
    M: CrossedMorphism<G, H>,
{
    let mut report = Report::new("morphism");
    report.push(morphism_law(g, h, phi, budget).finish());
    report
}

/// `src` (an image list) hits every element of `tgt` exactly once.
fn bijective<T>(src: &[T], tgt: &[T], eq: impl Fn(&T, &T) -> bool) -> bool {
    src.len() == tgt.len()
        && tgt.iter().all(|t| src.iter().filter(|s| eq(s, t)).count() == 1)
}

// ---------------------------------------------------------------------------
// Finite fixtures

/// A permutation of `{0, …, n-1}` by its image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn then_after(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut out = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            out[j] = i;
        }
        Perm(out)
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Perm {
        let mut p = Self::identity(n);
        p.0.swap(a, b);
        p
    }

    pub fn is_even(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        let mut transpositions = 0;
        for start in 0..self.0.len() {
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i];
                len += 1;
            }
            if len > 0 {
                transpositions += len - 1;
            }
        }
        transpositions % 2 == 0
    }

    /// All permutations of `n` points, in lexicographic order.
    pub fn all(n: usize) -> Vec<Perm> {
        fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Perm>) {
            if cur.len() == used.len() {
                out.push(Perm(cur.clone()));
                return;
            }
            for i in 0..used.len() {
                if !used[i] {
                    used[i] = true;
                    cur.push(i);
                    rec(cur, used, out);
                    cur.pop();
                    used[i] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; n], &mut out);
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let images: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "[{}]", images.join(" "))
    }
}

/// 1-morphism of a [`GroupFixture`]: `(source, target, group element)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
    pub g: Perm,
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} by {}", self.source + 1, self.target + 1, self.g)
    }
}

/// The crossed groupoid of a group `G` with normal subgroup `N` on `k`
/// objects: `G1(a, b) = G`, `G2(a) = N`, twist by conjugation, feedback the
/// inclusion. `broken` replaces the feedback by a constant transposition.
#[derive(Debug, Clone)]
pub struct GroupFixture {
    pub objects: usize,
    pub group: Vec<Perm>,
    pub normal: Vec<Perm>,
    pub broken: bool,
}

impl GroupFixture {
    /// `S3 ⊳ A3` on `objects` objects.
    pub fn s3_a3(objects: usize) -> Self {
        let group = Perm::all(3);
        let normal = group.iter().filter(|p| p.is_even()).cloned().collect();
        GroupFixture {
            objects,
            group,
            normal,
            broken: false,
        }
    }

    /// `S3 ⊳ S3`.
    pub fn s3_s3(objects: usize) -> Self {
        let group = Perm::all(3);
        GroupFixture {
            objects,
            normal: group.clone(),
            group,
            broken: false,
        }
    }

    /// Feedback replaced by the constant map to the transposition `(1 2)`.
    pub fn broken(objects: usize) -> Self {
        GroupFixture {
            broken: true,
            ..Self::s3_a3(objects)
        }
    }

    fn n(&self) -> usize {
        self.group[0].0.len()
    }
}

impl CrossedGroupoid for GroupFixture {
    type Obj = usize;
    type Mor = Arrow;
    type Elem = Perm;

    fn objects(&self) -> Vec<usize> {
        (0..self.objects).collect()
    }
    fn hom1(&self, a: &usize, b: &usize) -> Vec<Arrow> {
        self.group
            .iter()
            .map(|g| Arrow {
                source: *a,
                target: *b,
                g: g.clone(),
            })
            .collect()
    }
    fn source(&self, f: &Arrow) -> usize {
        f.source
    }
    fn target(&self, f: &Arrow) -> usize {
        f.target
    }
    fn id1(&self, a: &usize) -> Arrow {
        Arrow {
            source: *a,
            target: *a,
            g: Perm::identity(self.n()),
        }
    }
    fn compose1(&self, f: &Arrow, g: &Arrow) -> Result<Arrow> {
        if g.target != f.source {
            return Err(Error::NonComposable(format!("{g} then {f}")));
        }
        Ok(Arrow {
            source: g.source,
            target: f.target,
            g: f.g.then_after(&g.g),
        })
    }
    fn inverse1(&self, f: &Arrow) -> Arrow {
        Arrow {
            source: f.target,
            target: f.source,
            g: f.g.inverse(),
        }
    }
    fn eq1(&self, f: &Arrow, g: &Arrow) -> bool {
        f == g
    }
    fn group(&self, _a: &usize) -> Vec<Perm> {
        self.normal.clone()
    }
    fn id2(&self, _a: &usize) -> Perm {
        Perm::identity(self.n())
    }
    fn mul2(&self, _a: &usize, x: &Perm, y: &Perm) -> Perm {
        x.then_after(y)
    }
    fn inv2(&self, _a: &usize, x: &Perm) -> Perm {
        x.inverse()
    }
    fn eq2(&self, _a: &usize, x: &Perm, y: &Perm) -> bool {
        x == y
    }
    fn twist(&self, f: &Arrow, x: &Perm) -> Perm {
        f.g.then_after(x).then_after(&f.g.inverse())
    }
    fn feedback(&self, a: &usize, x: &Perm) -> Arrow {
        let g = if self.broken {
            Perm::transposition(self.n(), 0, 1)
        } else {
            x.clone()
        };
        Arrow {
            source: *a,
            target: *a,
            g,
        }
    }
}

/// Collapse every object of one fixture onto object 0 of another, keeping
/// group elements.
#[derive(Debug, Clone, Copy)]
pub struct Collapse;

impl CrossedMorphism<GroupFixture, GroupFixture> for Collapse {
    fn obj(&self, _a: &usize) -> usize {
        0
    }
    fn map1(&self, f: &Arrow) -> Arrow {
        Arrow {
            source: 0,
            target: 0,
            g: f.g.clone(),
        }
    }
    fn map2(&self, _a: &usize, x: &Perm) -> Perm {
        x.clone()
    }
}

// ---------------------------------------------------------------------------
// Deligne construction

/// A 1-morphism of a [`DeligneInstance`]: a gauge element with endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeArrow<G: Dgla> {
    pub source: usize,
    pub target: usize,
    pub gauge: GaugeElement<G>,
}

impl<G: Dgla> fmt::Display for GaugeArrow<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.gauge.gamma())
    }
}

/// 2-morphism at an object, in log coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Alpha<G: Dgla>(pub TwoMorphism<G>);

impl<G: Dgla> fmt::Display for Alpha<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.alpha())
    }
}

/// The Deligne crossed groupoid on a finite sample of MC elements.
#[derive(Debug, Clone)]
pub struct DeligneInstance<G: Dgla> {
    host: G,
    objects: Vec<MCElement<G>>,
    arrows: Vec<GaugeArrow<G>>,
    samples: Vec<TwoMorphism<G>>,
}

/// Assemble the objects; gauge arrows and 2-morphism samples are added with
/// [`DeligneInstance::connect`] and [`DeligneInstance::with_samples`].
pub fn deligne_build<G: Dgla>(host: G, sample: Vec<MCElement<G>>) -> Result<DeligneInstance<G>> {
    if sample.iter().any(|m| m.host() != &host) {
        return Err(Error::MixedHosts);
    }
    Ok(DeligneInstance {
        host,
        objects: sample,
        arrows: Vec::new(),
        samples: Vec::new(),
    })
}

impl<G: Dgla> DeligneInstance<G> {
    pub fn host(&self) -> &G {
        &self.host
    }

    pub fn objects_mc(&self) -> &[MCElement<G>] {
        &self.objects
    }

    pub fn arrows(&self) -> &[GaugeArrow<G>] {
        &self.arrows
    }

    /// Record `g` as a 1-morphism out of object `source` if its image is
    /// among the objects; returns the target index.
    pub fn connect(&mut self, source: usize, gauge: GaugeElement<G>) -> Result<Option<usize>> {
        let omega = self
            .objects
            .get(source)
            .ok_or_else(|| Error::Precondition(format!("no object {source}")))?;
        let image = gauge_apply(&self.host, &gauge, omega.omega())?;
        let target = self.objects.iter().position(|m| m.omega() == &image);
        if let Some(target) = target {
            self.arrows.push(GaugeArrow { source, target, gauge });
        }
        Ok(target)
    }

    /// Add `g` and, if its image is new, the image as an object.
    pub fn connect_or_extend(&mut self, source: usize, gauge: GaugeElement<G>) -> Result<usize> {
        let image = gauge_apply(&self.host, &gauge, self.objects[source].omega())?;
        let target = match self.objects.iter().position(|m| m.omega() == &image) {
            Some(t) => t,
            None => {
                self.objects.push(MCElement::unchecked(self.host.clone(), image));
                self.objects.len() - 1
            }
        };
        self.arrows.push(GaugeArrow { source, target, gauge });
        Ok(target)
    }

    /// 2-morphism samples used at every object.
    pub fn with_samples(mut self, samples: Vec<TwoMorphism<G>>) -> Self {
        self.samples = samples;
        self
    }

    pub fn compose1(&self, f: &GaugeArrow<G>, g: &GaugeArrow<G>) -> Result<GaugeArrow<G>> {
        if g.target != f.source {
            return Err(Error::NonComposable(format!(
                "arrow into object {} cannot be followed by an arrow out of object {}",
                g.target, f.source
            )));
        }
        Ok(GaugeArrow {
            source: g.source,
            target: f.target,
            gauge: f.gauge.compose(&self.host, &g.gauge),
        })
    }

    /// Product in `N_ω` at object `base`.
    pub fn compose2(&self, base: usize, a: &TwoMorphism<G>, b: &TwoMorphism<G>) -> TwoMorphism<G> {
        a.compose(&self.objects[base], b)
    }

    /// `D_ω(α) = exp(d_ω α)` as an automorphism of `base`.
    pub fn feedback(&self, base: usize, a: &TwoMorphism<G>) -> GaugeArrow<G> {
        let gamma = twisted_d(&self.objects[base], a.alpha()).expect("orders agree within an instance");
        GaugeArrow {
            source: base,
            target: base,
            gauge: GaugeElement::new(&self.host, gamma).expect("twisted differential keeps degree and valuation"),
        }
    }

    /// `α ↦ e^{ad γ}(α)`.
    pub fn twist2(&self, g: &GaugeArrow<G>, a: &TwoMorphism<G>) -> TwoMorphism<G> {
        let moved = ad_exp(&self.host, g.gauge.gamma(), a.alpha());
        TwoMorphism::new(&self.host, moved).expect("conjugation keeps degree and valuation")
    }
}

impl<G: Dgla> CrossedGroupoid for DeligneInstance<G> {
    type Obj = usize;
    type Mor = GaugeArrow<G>;
    type Elem = Alpha<G>;

    fn objects(&self) -> Vec<usize> {
        (0..self.objects.len()).collect()
    }
    fn hom1(&self, a: &usize, b: &usize) -> Vec<GaugeArrow<G>> {
        let mut out: Vec<GaugeArrow<G>> = self
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
    fn source(&self, f: &GaugeArrow<G>) -> usize {
        f.source
    }
    fn target(&self, f: &GaugeArrow<G>) -> usize {
        f.target
    }
    fn id1(&self, a: &usize) -> GaugeArrow<G> {
        GaugeArrow {
            source: *a,
            target: *a,
            gauge: GaugeElement::identity(&self.host),
        }
    }
    fn compose1(&self, f: &GaugeArrow<G>, g: &GaugeArrow<G>) -> Result<GaugeArrow<G>> {
        DeligneInstance::compose1(self, f, g)
    }
    fn inverse1(&self, f: &GaugeArrow<G>) -> GaugeArrow<G> {
        GaugeArrow {
            source: f.target,
            target: f.source,
            gauge: f.gauge.inverse(),
        }
    }
    fn eq1(&self, f: &GaugeArrow<G>, g: &GaugeArrow<G>) -> bool {
        f == g
    }
    fn group(&self, _a: &usize) -> Vec<Alpha<G>> {
        self.samples.iter().cloned().map(Alpha).collect()
    }
    fn id2(&self, _a: &usize) -> Alpha<G> {
        Alpha(TwoMorphism::identity(&self.host))
    }
    fn mul2(&self, a: &usize, x: &Alpha<G>, y: &Alpha<G>) -> Alpha<G> {
        Alpha(self.compose2(*a, &x.0, &y.0))
    }
    fn inv2(&self, _a: &usize, x: &Alpha<G>) -> Alpha<G> {
        Alpha(x.0.inverse())
    }
    fn eq2(&self, _a: &usize, x: &Alpha<G>, y: &Alpha<G>) -> bool {
        x == y
    }
    fn twist(&self, f: &GaugeArrow<G>, x: &Alpha<G>) -> Alpha<G> {
        Alpha(self.twist2(f, &x.0))
    }
    fn feedback(&self, a: &usize, x: &Alpha<G>) -> GaugeArrow<G> {
        DeligneInstance::feedback(self, *a, &x.0)
    }
}

/// Product in `N_ω` on raw log coordinates.
pub fn two_product<G: Dgla>(base: &MCElement<G>, a: &Series<G::Elem>, b: &Series<G::Elem>) -> Series<G::Elem> {
    bch_with(a, b, |x, y| {
        crate::mc::twisted_bracket(base, x, y).expect("log coordinates of N_ω")
    })
}
