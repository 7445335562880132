//! End-to-end verification of geometrization: Deligne data on the DGLA side
//! against actual deformations and gauge maps.

use super::groupoid::{DeformationGroupoid, Geometric, Geometrize};
use super::local::{cover_compat, localize_deformation};
use super::{
    as_cochain, as_polyvec, cochain_value, monomial_grid, polyvec_value, AssocDeformation, DeformedAlgebra,
    PoissonDeformation, POISSON_INNER_SCALE,
};
use crate::deligne::{check_morphism, deligne_build, verify_crossed_axioms, Budget};
use crate::dpoly::PolyDiffOp;
use crate::error::Result;
use crate::mc::{mc_defect, twisted_bracket, DPoly, GaugeElement, MCElement, TPoly, TwoMorphism};
use crate::polyring::LocPoly;
use crate::random::{self, Rng};
use crate::report::{CheckRecord, Report, Witness};
use crate::series::{Algebra, Linear, Series};
use crate::tpoly::PolyVec;
use crate::{qi, Poly};

/// Budgets and localization data for [`geo_verify`].
#[derive(Debug, Clone, PartialEq)]
pub struct GeoOptions {
    /// Monomials of total degree `≤ grid_degree` form the test grid.
    pub grid_degree: u32,
    /// Pseudo-random polynomials added to the grid, and the number of
    /// random log coordinates used for inner gauges.
    pub samples: usize,
    pub seed: u64,
    /// Localization elements; `None` means `x1` and `x_d`.
    pub s: Option<Poly>,
    pub t: Option<Poly>,
    /// Cap per crossed-groupoid law.
    pub budget: Budget,
}

impl Default for GeoOptions {
    fn default() -> Self {
        GeoOptions {
            grid_degree: 3,
            samples: 2,
            seed: 0,
            s: None,
            t: None,
            budget: Budget { max_instances: 400 },
        }
    }
}

/// Input to [`geo_verify`]: an MC candidate and gauge series of its kind.
#[derive(Debug, Clone, PartialEq)]
pub enum GeoInput {
    Assoc {
        omega: Series<PolyDiffOp>,
        gauges: Vec<Series<PolyDiffOp>>,
    },
    Poisson {
        omega: Series<PolyVec>,
        gauges: Vec<Series<PolyVec>>,
    },
}

pub fn geo_verify(input: &GeoInput, opts: &GeoOptions) -> Report {
    let mut report = Report::new("geo-verify");
    let res = match input {
        GeoInput::Assoc { omega, gauges } => {
            let nvars = omega.coeff(0).nvars();
            let host = DPoly::normalized(nvars, omega.order());
            run(&mut report, host, omega, gauges, opts, AssocSide)
        }
        GeoInput::Poisson { omega, gauges } => {
            let nvars = omega.coeff(0).nvars();
            let host = TPoly::new(nvars, omega.order());
            run(&mut report, host, omega, gauges, opts, PoissonSide)
        }
    };
    if let Err(e) = res {
        report.push(CheckRecord::fail("input", e.to_string(), Vec::new()));
    }
    report
}

/// Kind-specific pieces of the pipeline.
trait Side<G: Geometric> {
    fn structure_grid(&self, a: &DeformedAlgebra, grid: &[Series<Poly>], report: &mut Report) -> Result<()>;
    fn transport(&self, a: &DeformedAlgebra, g: &GaugeElement<G>) -> Result<(DeformedAlgebra, ElementMap)>;
    fn inner(&self, a: &DeformedAlgebra, alphas: &[Series<Poly>], grid: &[Series<Poly>], report: &mut Report) -> Result<()>;
    fn localized(&self, a: &DeformedAlgebra, s: &Poly, grid: &[Series<Poly>], report: &mut Report) -> Result<()>;
    fn log_series(&self, alpha: &Series<Poly>) -> Series<G::Elem>;
}

/// An element map on function series.
type ElementMap = Box<dyn Fn(&Series<Poly>) -> Result<Series<Poly>>>;

struct AssocSide;
struct PoissonSide;

fn run<G: Geometric, S: Side<G>>(
    report: &mut Report,
    host: G,
    omega: &Series<G::Elem>,
    gauges: &[Series<G::Elem>],
    opts: &GeoOptions,
    side: S,
) -> Result<()> {
    let nvars = host.ambient().nvars;
    let order = host.order();

    // 1. Maurer–Cartan
    let defect = mc_defect(&host, omega)?;
    let mc = match MCElement::new(host.clone(), omega.clone()) {
        Ok(mc) => {
            report.push(CheckRecord::pass("mc_defect", "defect vanishes"));
            mc
        }
        Err(e) => {
            let mut w = vec![Witness::new("omega", omega)];
            if !defect.is_zero() {
                w.push(Witness::new("defect", &defect));
            }
            report.push(CheckRecord::fail("mc_defect", e.to_string(), w));
            return Ok(());
        }
    };
    let algebra = G::algebra(&mc);

    let mut r = random::rng(opts.seed);
    let mut grid = monomial_grid(nvars, opts.grid_degree, order);
    for _ in 0..opts.samples {
        grid.push(random::poly_series(&mut r, nvars, order, 0, opts.grid_degree.min(2)));
    }

    // 2. structure identities on the grid
    side.structure_grid(&algebra, &grid, report)?;

    // 3. gauge transport
    let mut elements = Vec::new();
    for (i, gamma) in gauges.iter().enumerate() {
        let name = format!("gauge_transport[{}]", i + 1);
        let g = match GaugeElement::new(&host, gamma.clone()) {
            Ok(g) => g,
            Err(e) => {
                report.push(CheckRecord::fail(name, e.to_string(), vec![Witness::new("gamma", gamma)]));
                continue;
            }
        };
        let (target, map) = side.transport(&algebra, &g)?;
        report.push(transport_record(&name, &algebra, &target, &map, &grid)?);
        elements.push(g);
    }

    // 4. inner gauges
    let alphas = log_samples(&mut r, nvars, order, opts.samples.max(2));
    side.inner(&algebra, &alphas, &grid, report)?;

    // 5. crossed groupoids and the functor between them
    let mut inst = deligne_build(host.clone(), vec![mc.clone()])?;
    for g in elements {
        inst.connect_or_extend(0, g)?;
    }
    let samples = alphas
        .iter()
        .map(|a| TwoMorphism::new(&host, side.log_series(a)))
        .collect::<Result<Vec<_>>>()?;
    let inst = inst.with_samples(samples);
    report.absorb("deligne.", verify_crossed_axioms(&inst, opts.budget));
    let small_grid = monomial_grid(nvars, opts.grid_degree.min(2), order);
    let deform = DeformationGroupoid::from_deligne(&inst, small_grid)?;
    report.absorb("deformation.", verify_crossed_axioms(&deform, opts.budget));
    report.absorb("geometrization.", check_morphism(&inst, &deform, &Geometrize { target: &deform }, opts.budget));

    // 6. localization
    let s = opts.s.clone().unwrap_or_else(|| Poly::var(nvars, 0));
    let t = opts.t.clone().unwrap_or_else(|| Poly::var(nvars, nvars - 1));
    let loc_grid = monomial_grid(nvars, opts.grid_degree.min(2), order);
    side.localized(&algebra, &s, &loc_grid, report)?;
    report.absorb("cover.", cover_compat(&algebra, &s, &t, &loc_grid)?);
    Ok(())
}

fn log_samples(r: &mut Rng, nvars: usize, order: usize, n: usize) -> Vec<Series<Poly>> {
    (0..n)
        .map(|_| {
            let mut a = random::poly_series(r, nvars, order, 1, 2);
            if a.is_zero() && order >= 1 {
                a = Series::monomial(Poly::var(nvars, 0), 1, order);
            }
            a
        })
        .collect()
}

/// `g(a ∘ b) = g(a) ∘' g(b)` and `g` preserves augmentations.
fn transport_record(
    name: &str,
    source: &DeformedAlgebra,
    target: &DeformedAlgebra,
    map: &ElementMap,
    grid: &[Series<Poly>],
) -> Result<CheckRecord> {
    let images = grid.iter().map(map).collect::<Result<Vec<_>>>()?;
    for (a, ga) in grid.iter().zip(&images) {
        if ga.coeff(0) != a.coeff(0) {
            return Ok(CheckRecord::fail(name, "augmentation not preserved", vec![Witness::new("a", a)]));
        }
    }
    let mut n = 0;
    for (a, ga) in grid.iter().zip(&images) {
        for (b, gb) in grid.iter().zip(&images) {
            n += 1;
            let lhs = map(&source.product(a, b)?)?;
            let rhs = target.product(ga, gb)?;
            if lhs != rhs {
                return Ok(CheckRecord::fail(
                    name,
                    "transport is not multiplicative",
                    vec![
                        Witness::new("a", a),
                        Witness::new("b", b),
                        Witness::new("difference", lhs.sub(&rhs)),
                    ],
                ));
            }
        }
    }
    Ok(CheckRecord::pass(name, format!("{n} pairs")))
}

/// Runs `check` on all triples of `grid`, reporting the first nonzero value.
fn triple_record(
    name: &str,
    grid: &[Series<Poly>],
    mut check: impl FnMut(&Series<Poly>, &Series<Poly>, &Series<Poly>) -> Result<Series<Poly>>,
) -> Result<CheckRecord> {
    let mut n = 0;
    for a in grid {
        for b in grid {
            for c in grid {
                n += 1;
                let v = check(a, b, c)?;
                if !v.is_zero() {
                    return Ok(CheckRecord::fail(
                        name,
                        format!("nonzero defect after {n} triples"),
                        vec![
                            Witness::new("a", a),
                            Witness::new("b", b),
                            Witness::new("c", c),
                            Witness::new("defect", &v),
                        ],
                    ));
                }
            }
        }
    }
    Ok(CheckRecord::pass(name, format!("{n} triples")))
}

fn pair_record(
    name: &str,
    xs: &[Series<Poly>],
    ys: &[Series<Poly>],
    mut check: impl FnMut(&Series<Poly>, &Series<Poly>) -> Result<Option<Series<Poly>>>,
) -> Result<CheckRecord> {
    let mut n = 0;
    for x in xs {
        for y in ys {
            n += 1;
            if let Some(diff) = check(x, y)? {
                return Ok(CheckRecord::fail(
                    name,
                    "identity fails",
                    vec![Witness::new("a", x), Witness::new("b", y), Witness::new("difference", diff)],
                ));
            }
        }
    }
    Ok(CheckRecord::pass(name, format!("{n} pairs")))
}

fn differ(lhs: Series<Poly>, rhs: Series<Poly>) -> Option<Series<Poly>> {
    (lhs != rhs).then(|| lhs.sub(&rhs))
}

fn as_assoc(a: &DeformedAlgebra) -> &AssocDeformation {
    match a {
        DeformedAlgebra::Assoc(x) => x,
        DeformedAlgebra::Poisson(_) => unreachable!("associative pipeline"),
    }
}

fn as_poisson(a: &DeformedAlgebra) -> &PoissonDeformation {
    match a {
        DeformedAlgebra::Poisson(x) => x,
        DeformedAlgebra::Assoc(_) => unreachable!("Poisson pipeline"),
    }
}

impl Side<DPoly> for AssocSide {
    fn structure_grid(&self, a: &DeformedAlgebra, grid: &[Series<Poly>], report: &mut Report) -> Result<()> {
        let a = as_assoc(a);
        report.push(triple_record("associativity_grid", grid, |x, y, z| a.assoc_defect(x, y, z))?);
        let one = a.one(&Poly::zero(a.nvars()));
        report.push(pair_record("unit_grid", grid, std::slice::from_ref(&one), |x, u| {
            Ok(differ(a.star_mul(u, x)?, x.clone()).or(differ(a.star_mul(x, u)?, x.clone())))
        })?);
        Ok(())
    }

    fn transport(&self, a: &DeformedAlgebra, g: &GaugeElement<DPoly>) -> Result<(DeformedAlgebra, ElementMap)> {
        let target = as_assoc(a).transport(g)?;
        let gamma = g.gamma().clone();
        Ok((
            DeformedAlgebra::Assoc(target),
            Box::new(move |x| super::apply_op_gauge(&gamma, x)),
        ))
    }

    fn inner(&self, a: &DeformedAlgebra, alphas: &[Series<Poly>], grid: &[Series<Poly>], report: &mut Report) -> Result<()> {
        let a = as_assoc(a);
        report.push(pair_record("twisted_bracket_realization", alphas, alphas, |x, y| {
            let tw = cochain_value(&twisted_bracket(a.mc(), &as_cochain(x), &as_cochain(y))?)?;
            Ok(differ(tw, a.commutator(x, y)?))
        })?);
        report.push(pair_record("inner_exp_homomorphism", alphas, alphas, |x, y| {
            let lhs = a.star_mul(&a.exp_star(x)?, &a.exp_star(y)?)?;
            let rhs = a.exp_star(&a.bch_twisted(x, y)?)?;
            Ok(differ(lhs, rhs))
        })?);
        report.push(pair_record("conjugation_is_exp_ad", alphas, grid, |x, b| {
            let g = a.inner_gauge(x)?;
            Ok(differ(a.conj(&g, b)?, a.ad_exp(x, b)?))
        })?);
        Ok(())
    }

    fn localized(&self, a: &DeformedAlgebra, s: &Poly, grid: &[Series<Poly>], report: &mut Report) -> Result<()> {
        let l = localize_deformation(a, s)?;
        let alg = as_assoc(a);
        let ss = l.restrict(&Series::constant(s.clone(), alg.order()));
        report.push(match alg.star_inverse(&ss) {
            Ok(inv) => {
                let one = Series::constant(ss.coeff(0).one_like(), alg.order());
                if alg.star_mul(&ss, &inv)? == one && alg.star_mul(&inv, &ss)? == one {
                    CheckRecord::pass("localized_inverse", format!("inverse of s = {s} found"))
                } else {
                    CheckRecord::fail("localized_inverse", "s ⋆ s⁻¹ ≠ 1", vec![Witness::new("s", s)])
                }
            }
            Err(e) => CheckRecord::fail("localized_inverse", e.to_string(), vec![Witness::new("s", s)]),
        });
        let fr = fractions(&l, grid);
        report.push(loc_triples("localized_associativity", &fr, |x, y, z| alg.assoc_defect(x, y, z))?);
        Ok(())
    }

    fn log_series(&self, alpha: &Series<Poly>) -> Series<PolyDiffOp> {
        as_cochain(alpha)
    }
}

impl Side<TPoly> for PoissonSide {
    fn structure_grid(&self, a: &DeformedAlgebra, grid: &[Series<Poly>], report: &mut Report) -> Result<()> {
        let p = as_poisson(a);
        report.push(triple_record("jacobi_grid", grid, |x, y, z| p.jacobi_defect(x, y, z))?);
        report.push(triple_record("leibniz_grid", grid, |x, y, z| p.leibniz_defect(x, y, z))?);
        Ok(())
    }

    fn transport(&self, a: &DeformedAlgebra, g: &GaugeElement<TPoly>) -> Result<(DeformedAlgebra, ElementMap)> {
        let target = as_poisson(a).transport(g)?;
        let gamma = g.gamma().clone();
        Ok((
            DeformedAlgebra::Poisson(target),
            Box::new(move |x| super::apply_vec_gauge(&gamma, x)),
        ))
    }

    fn inner(&self, a: &DeformedAlgebra, alphas: &[Series<Poly>], grid: &[Series<Poly>], report: &mut Report) -> Result<()> {
        let p = as_poisson(a);
        let scale = qi(POISSON_INNER_SCALE);
        report.push(pair_record("twisted_bracket_realization", alphas, alphas, |x, y| {
            let tw = polyvec_value(&twisted_bracket(p.mc(), &as_polyvec(x), &as_polyvec(y))?)?;
            Ok(differ(tw, p.bracket(x, y)?.scale(&scale)))
        })?);
        // exp of Hamiltonian flows composes by BCH of the images
        report.push(pair_record("inner_exp_homomorphism", alphas, alphas, |x, y| {
            let (bx, by) = (x.scale(&scale), y.scale(&scale));
            let prod = p.bch(&bx, &by)?;
            let image = p.bch_twisted(x, y)?.scale(&scale);
            if let Some(d) = differ(prod.clone(), image) {
                return Ok(Some(d));
            }
            for b in grid {
                let lhs = p.ad_exp(&bx, &p.ad_exp(&by, b)?)?;
                if let Some(d) = differ(lhs, p.ad_exp(&prod, b)?) {
                    return Ok(Some(d));
                }
            }
            Ok(None)
        })?);
        // the feedback exp(d_ω α) acts as the flow of the image of α
        report.push(pair_record("conjugation_is_exp_ad", alphas, grid, |x, b| {
            let flow = crate::mc::twisted_d(p.mc(), &as_polyvec(x))?;
            let lhs = super::apply_vec_gauge(&flow, b)?;
            Ok(differ(lhs, p.ad_exp(&x.scale(&scale), b)?))
        })?);
        Ok(())
    }

    fn localized(&self, a: &DeformedAlgebra, s: &Poly, grid: &[Series<Poly>], report: &mut Report) -> Result<()> {
        let l = localize_deformation(a, s)?;
        let p = as_poisson(a);
        let fr = fractions(&l, grid);
        report.push(loc_triples("localized_jacobi", &fr, |x, y, z| p.jacobi_defect(x, y, z))?);
        Ok(())
    }

    fn log_series(&self, alpha: &Series<Poly>) -> Series<PolyVec> {
        as_polyvec(alpha)
    }
}

/// Grid elements and their quotients by `s`.
fn fractions(l: &super::Localized, grid: &[Series<Poly>]) -> Vec<Series<LocPoly>> {
    let inv = l.s_power_inverse(1);
    let mut out: Vec<Series<LocPoly>> = grid.iter().map(|g| l.restrict(g)).collect();
    out.extend(grid.iter().take(4).map(|g| l.restrict(g).mul(&inv)));
    out
}

fn loc_triples(
    name: &str,
    xs: &[Series<LocPoly>],
    mut check: impl FnMut(&Series<LocPoly>, &Series<LocPoly>, &Series<LocPoly>) -> Result<Series<LocPoly>>,
) -> Result<CheckRecord> {
    let mut n = 0;
    for a in xs {
        for b in xs {
            for c in xs {
                n += 1;
                let v = check(a, b, c)?;
                if !v.is_zero() {
                    return Ok(CheckRecord::fail(
                        name,
                        "nonzero defect on fractions",
                        vec![Witness::new("a", a), Witness::new("b", b), Witness::new("c", c)],
                    ));
                }
            }
        }
    }
    Ok(CheckRecord::pass(name, format!("{n} triples")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::Dgla;
    use crate::Q;

    fn moyal_omega(order: usize) -> Series<PolyDiffOp> {
        let pi: Vec<Vec<Q>> = vec![vec![qi(0), qi(1)], vec![qi(-1), qi(0)]];
        crate::dpoly::moyal_mc(&pi, order).unwrap()
    }

    fn quick() -> GeoOptions {
        GeoOptions {
            grid_degree: 2,
            samples: 1,
            ..GeoOptions::default()
        }
    }

    #[test]
    fn zero_deformation_passes() {
        let input = GeoInput::Assoc {
            omega: DPoly::normalized(2, 2).zero_series(1),
            gauges: Vec::new(),
        };
        let r = geo_verify(&input, &quick());
        assert!(r.all_passed(), "{r:#?}");
    }

    #[test]
    fn moyal_with_gauge_passes() {
        let gamma = Series::monomial(PolyDiffOp::atom(Poly::var(2, 0), vec![vec![0, 2]]), 1, 2);
        let input = GeoInput::Assoc {
            omega: moyal_omega(2),
            gauges: vec![gamma],
        };
        let r = geo_verify(&input, &quick());
        for c in &r.checks {
            assert!(c.passed(), "{c:#?}");
        }
    }

    #[test]
    fn poisson_with_gauge_passes() {
        let pi = Series::monomial(PolyVec::basis(2, &[0, 1]).mul_fn(&Poly::var(2, 0)), 1, 2);
        let gamma = Series::monomial(PolyVec::coordinate(2, 1).mul_fn(&Poly::var(2, 0)), 1, 2);
        let input = GeoInput::Poisson {
            omega: pi,
            gauges: vec![gamma],
        };
        let r = geo_verify(&input, &quick());
        for c in &r.checks {
            assert!(c.passed(), "{c:#?}");
        }
    }

    #[test]
    fn non_mc_stops_at_first_stage() {
        let op = PolyDiffOp::atom(Poly::one(1), vec![vec![1], vec![1]]);
        let input = GeoInput::Assoc {
            omega: Series::monomial(op, 1, 2),
            gauges: Vec::new(),
        };
        let r = geo_verify(&input, &quick());
        assert_eq!(r.total(), 1);
        assert!(!r.checks[0].passed());
        assert!(r.checks[0].witness.iter().any(|w| w.label == "defect"));
    }
}
