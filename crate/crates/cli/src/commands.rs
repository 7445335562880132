//! One function per subcommand. Each turns a document into a [`Report`];
//! an `Err` is a usage problem (bad input), not a failed check.

use deformq_core::deform::{
    apply_op_gauge, apply_vec_gauge, cover_compat, geo_verify, localize_deformation, monomial_grid, AssocDeformation,
    DeformedAlgebra, GeoInput, GeoOptions, PoissonDeformation,
};
use deformq_core::deligne::{deligne_build, verify_crossed_axioms, Budget};
use deformq_core::dpoly::{moyal_mc, op_order, recognize_diffop, OpOrder, OpTable, Recognition};
use deformq_core::mc::{bch, mc_defect, DPoly, Dgla, GaugeElement, MCElement, TPoly, TwoMorphism};
use deformq_core::random;
use deformq_core::series::Algebra;
use deformq_core::{qi, CheckRecord, Error, Linear, Poly, PolyDiffOp, PolyVec, Report, Result, Series, Witness, Q};

use crate::document::Document;

/// Budgets shared by the commands.
#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub seed: u64,
    pub grid_degree: u32,
    pub samples: usize,
    pub test_degree: Option<u32>,
    pub max_order: u32,
    pub coeff_degree: u32,
    pub budget: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 0,
            grid_degree: 3,
            samples: 2,
            test_degree: None,
            max_order: 3,
            coeff_degree: 3,
            budget: 400,
        }
    }
}

fn kind_error(what: &str) -> Error {
    Error::KindMismatch(what.to_string())
}

/// `omega`, or zero when the document has none.
enum Omega {
    Assoc(Series<PolyDiffOp>),
    Poisson(Series<PolyVec>),
}

fn omega(doc: &Document) -> Result<Omega> {
    let present = doc.has("omega");
    Ok(match doc.kind {
        deformq_core::deform::DeformationKind::Associative => Omega::Assoc(if present {
            doc.op("omega", 1)?
        } else {
            DPoly::normalized(doc.nvars, doc.order).zero_series(1)
        }),
        deformq_core::deform::DeformationKind::Poisson => Omega::Poisson(if present {
            doc.vec("omega", 1)?
        } else {
            TPoly::new(doc.nvars, doc.order).zero_series(1)
        }),
    })
}

/// The deformation of `omega` without checking the MC equation.
fn algebra(doc: &Document) -> Result<DeformedAlgebra> {
    Ok(match omega(doc)? {
        Omega::Assoc(w) => DeformedAlgebra::Assoc(AssocDeformation::new(MCElement::unchecked(
            DPoly::normalized(doc.nvars, doc.order),
            w,
        ))),
        Omega::Poisson(w) => {
            DeformedAlgebra::Poisson(PoissonDeformation::new(MCElement::unchecked(TPoly::new(doc.nvars, doc.order), w)))
        }
    })
}

fn grid(doc: &Document, opts: &Options) -> Vec<Series<Poly>> {
    let mut g = monomial_grid(doc.nvars, opts.grid_degree, doc.order);
    let mut r = random::rng(opts.seed);
    for _ in 0..opts.samples {
        g.push(random::poly_series(&mut r, doc.nvars, doc.order, 0, opts.grid_degree.min(2)));
    }
    g
}

fn triples(
    name: &str,
    grid: &[Series<Poly>],
    mut f: impl FnMut(&Series<Poly>, &Series<Poly>, &Series<Poly>) -> Result<Series<Poly>>,
) -> Result<CheckRecord> {
    let mut n = 0;
    for a in grid {
        for b in grid {
            for c in grid {
                n += 1;
                let v = f(a, b, c)?;
                if !v.is_zero() {
                    return Ok(CheckRecord::fail(
                        name,
                        "nonzero defect",
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

fn defect_record<E: Linear + std::fmt::Display>(omega: &Series<E>, defect: &Series<E>) -> CheckRecord {
    match defect.coeffs().iter().position(|e| !e.is_zero()) {
        None => CheckRecord::pass("mc_defect", "d(omega) + 1/2 [omega, omega] = 0"),
        Some(j) => CheckRecord::fail(
            "mc_defect",
            format!("nonzero at h^{j}"),
            vec![Witness::new("omega", omega), Witness::new("defect", defect)],
        ),
    }
}

pub fn check_mc(doc: &Document, opts: &Options) -> Result<Report> {
    let mut r = Report::new("check-mc");
    let g = monomial_grid(doc.nvars, opts.grid_degree, doc.order);
    match omega(doc)? {
        Omega::Assoc(w) => {
            let host = DPoly::all(doc.nvars, doc.order);
            r.push(defect_record(&w, &mc_defect(&host, &w)?));
            r.push(match w.coeffs().iter().find(|c| !c.is_normalized()) {
                None => CheckRecord::pass("normalized", "every slot carries a derivative"),
                Some(c) => CheckRecord::fail("normalized", "a slot has no derivative", vec![Witness::new("term", c)]),
            });
            let a = AssocDeformation::new(MCElement::unchecked(DPoly::normalized(doc.nvars, doc.order), w));
            r.push(triples("associativity_grid", &g, |x, y, z| a.assoc_defect(x, y, z))?);
        }
        Omega::Poisson(w) => {
            let host = TPoly::new(doc.nvars, doc.order);
            r.push(defect_record(&w, &mc_defect(&host, &w)?));
            let p = PoissonDeformation::new(MCElement::unchecked(host, w));
            r.push(triples("jacobi_grid", &g, |x, y, z| p.jacobi_defect(x, y, z))?);
        }
    }
    Ok(r)
}

pub fn star_mul(doc: &Document, _opts: &Options) -> Result<Report> {
    let mut r = Report::new("star-mul");
    let DeformedAlgebra::Assoc(a) = algebra(doc)? else {
        return Err(kind_error("star-mul needs kind = associative"));
    };
    let (x, y) = (doc.fun("a")?, doc.fun("b")?);
    let p = a.star_mul(&x, &y)?;
    let aug = p.coeff(0) == &(x.coeff(0) * y.coeff(0));
    r.push(if aug {
        CheckRecord::pass("augmentation", "(a*b)_0 = a_0 b_0")
    } else {
        CheckRecord::fail("augmentation", "(a*b)_0 differs from a_0 b_0", vec![Witness::new("a", &x), Witness::new("b", &y)])
    });
    r.output("product", &p);
    Ok(r)
}

pub fn poisson(doc: &Document, opts: &Options) -> Result<Report> {
    let mut r = Report::new("poisson");
    let DeformedAlgebra::Poisson(p) = algebra(doc)? else {
        return Err(kind_error("poisson needs kind = poisson"));
    };
    let g = grid(doc, opts);
    r.push(triples("jacobi_grid", &g, |x, y, z| p.jacobi_defect(x, y, z))?);
    r.push(triples("leibniz_grid", &g, |x, y, z| p.leibniz_defect(x, y, z))?);
    if doc.has("a") && doc.has("b") {
        r.output("bracket", p.bracket(&doc.fun("a")?, &doc.fun("b")?)?);
    }
    Ok(r)
}

/// `exp(γ)` acting on functions, for the document's kind.
fn gauge_map(doc: &Document, name: &str) -> Result<GaugeSeries> {
    Ok(match doc.kind {
        deformq_core::deform::DeformationKind::Associative => GaugeSeries::Op(doc.op(name, 0)?),
        deformq_core::deform::DeformationKind::Poisson => GaugeSeries::Vec(doc.vec(name, 0)?),
    })
}

#[derive(Debug, Clone)]
enum GaugeSeries {
    Op(Series<PolyDiffOp>),
    Vec(Series<PolyVec>),
}

impl GaugeSeries {
    fn apply(&self, a: &Series<Poly>) -> Result<Series<Poly>> {
        match self {
            GaugeSeries::Op(g) => apply_op_gauge(g, a),
            GaugeSeries::Vec(g) => apply_vec_gauge(g, a),
        }
    }
}

pub fn gauge_apply(doc: &Document, opts: &Options) -> Result<Report> {
    let mut r = Report::new("gauge-apply");
    let source = algebra(doc)?;
    let gamma = gauge_map(doc, "gamma")?;
    let target = match (&source, &gamma) {
        (DeformedAlgebra::Assoc(a), GaugeSeries::Op(g)) => {
            let g = GaugeElement::new(&DPoly::normalized(doc.nvars, doc.order), g.clone())?;
            let t = a.transport(&g)?;
            r.output("omega_prime", t.omega());
            DeformedAlgebra::Assoc(t)
        }
        (DeformedAlgebra::Poisson(p), GaugeSeries::Vec(g)) => {
            let g = GaugeElement::new(&TPoly::new(doc.nvars, doc.order), g.clone())?;
            let t = p.transport(&g)?;
            r.output("omega_prime", t.omega());
            DeformedAlgebra::Poisson(t)
        }
        _ => unreachable!("gauge kind follows the document kind"),
    };
    let g = grid(doc, opts);
    let mut n = 0;
    let mut fail = None;
    'outer: for a in &g {
        for b in &g {
            n += 1;
            let lhs = gamma.apply(&source.product(a, b)?)?;
            let rhs = target.product(&gamma.apply(a)?, &gamma.apply(b)?)?;
            if lhs != rhs {
                fail = Some(vec![Witness::new("a", a), Witness::new("b", b), Witness::new("difference", lhs.sub(&rhs))]);
                break 'outer;
            }
        }
    }
    r.push(match fail {
        None => CheckRecord::pass("transport_multiplicative", format!("{n} pairs")),
        Some(w) => CheckRecord::fail("transport_multiplicative", "g(a o b) differs from g(a) o' g(b)", w),
    });
    Ok(r)
}

pub fn bch_cmd(doc: &Document, opts: &Options) -> Result<Report> {
    let mut r = Report::new("bch");
    let (g1, g2) = (gauge_map(doc, "gamma1")?, gauge_map(doc, "gamma2")?);
    let product = match (&g1, &g2) {
        (GaugeSeries::Op(a), GaugeSeries::Op(b)) => {
            let host = DPoly::normalized(doc.nvars, doc.order);
            GaugeElement::new(&host, a.clone())?;
            GaugeElement::new(&host, b.clone())?;
            let c = bch(&host, a, b);
            r.output("bch", &c);
            GaugeSeries::Op(c)
        }
        (GaugeSeries::Vec(a), GaugeSeries::Vec(b)) => {
            let host = TPoly::new(doc.nvars, doc.order);
            GaugeElement::new(&host, a.clone())?;
            GaugeElement::new(&host, b.clone())?;
            let c = bch(&host, a, b);
            r.output("bch", &c);
            GaugeSeries::Vec(c)
        }
        _ => unreachable!("both follow the document kind"),
    };
    let mut fail = None;
    let g = grid(doc, opts);
    for a in &g {
        let lhs = product.apply(a)?;
        let rhs = g1.apply(&g2.apply(a)?)?;
        if lhs != rhs {
            fail = Some(vec![Witness::new("a", a), Witness::new("difference", lhs.sub(&rhs))]);
            break;
        }
    }
    r.push(match fail {
        None => CheckRecord::pass("exp_composition", format!("{} elements", g.len())),
        Some(w) => CheckRecord::fail("exp_composition", "exp(bch) differs from exp o exp", w),
    });
    Ok(r)
}

fn log_samples(doc: &Document, opts: &Options) -> Result<Vec<Series<Poly>>> {
    let fam = doc.family("alpha");
    if !fam.is_empty() {
        return fam.iter().map(|b| doc.fun_of(b)).collect();
    }
    let mut r = random::rng(opts.seed);
    Ok((0..opts.samples.max(1))
        .map(|_| random::poly_series(&mut r, doc.nvars, doc.order, 1, 2))
        .collect())
}

pub fn deligne_verify(doc: &Document, opts: &Options) -> Result<Report> {
    let mut r = Report::new("deligne-verify");
    let budget = Budget {
        max_instances: opts.budget,
    };
    let alphas = log_samples(doc, opts)?;
    let gammas = doc.family("gamma");
    match omega(doc)? {
        Omega::Assoc(w) => {
            let host = DPoly::normalized(doc.nvars, doc.order);
            let mc = match MCElement::new(host, w.clone()) {
                Ok(mc) => mc,
                Err(_) => {
                    r.push(defect_record(&w, &mc_defect(&host, &w)?));
                    return Ok(r);
                }
            };
            let mut inst = deligne_build(host, vec![mc])?;
            for b in gammas {
                inst.connect_or_extend(0, GaugeElement::new(&host, doc.op_of(b, 0)?)?)?;
            }
            let samples = alphas
                .iter()
                .map(|a| TwoMorphism::new(&host, a.map(|f| PolyDiffOp::function(f.clone()))))
                .collect::<Result<Vec<_>>>()?;
            r.absorb("", verify_crossed_axioms(&inst.with_samples(samples), budget));
        }
        Omega::Poisson(w) => {
            let host = TPoly::new(doc.nvars, doc.order);
            let mc = match MCElement::new(host, w.clone()) {
                Ok(mc) => mc,
                Err(_) => {
                    r.push(defect_record(&w, &mc_defect(&host, &w)?));
                    return Ok(r);
                }
            };
            let mut inst = deligne_build(host, vec![mc])?;
            for b in gammas {
                inst.connect_or_extend(0, GaugeElement::new(&host, doc.vec_of(b, 0)?)?)?;
            }
            let samples = alphas
                .iter()
                .map(|a| TwoMorphism::new(&host, a.map(|f| PolyVec::function(f.clone()))))
                .collect::<Result<Vec<_>>>()?;
            r.absorb("", verify_crossed_axioms(&inst.with_samples(samples), budget));
        }
    }
    Ok(r)
}

pub fn geo(doc: &Document, opts: &Options) -> Result<Report> {
    let gammas = doc.family("gamma");
    let input = match omega(doc)? {
        Omega::Assoc(w) => GeoInput::Assoc {
            omega: w,
            gauges: gammas.iter().map(|b| doc.op_of(b, 0)).collect::<Result<_>>()?,
        },
        Omega::Poisson(w) => GeoInput::Poisson {
            omega: w,
            gauges: gammas.iter().map(|b| doc.vec_of(b, 0)).collect::<Result<_>>()?,
        },
    };
    let o = GeoOptions {
        grid_degree: opts.grid_degree,
        samples: opts.samples,
        seed: opts.seed,
        s: if doc.has("s") { Some(doc.poly("s")?) } else { None },
        t: if doc.has("t") { Some(doc.poly("t")?) } else { None },
        budget: Budget {
            max_instances: opts.budget,
        },
    };
    Ok(geo_verify(&input, &o))
}

pub fn localize(doc: &Document, opts: &Options) -> Result<Report> {
    let mut r = Report::new("localize");
    let a = algebra(doc)?;
    let s = doc.poly("s")?;
    let t = if doc.has("t") { doc.poly("t")? } else { s.clone() };
    let l = localize_deformation(&a, &s)?;
    let loc_grid = monomial_grid(doc.nvars, opts.grid_degree.min(2), doc.order);
    if let DeformedAlgebra::Assoc(alg) = &a {
        let ss = l.restrict(&Series::constant(s.clone(), doc.order));
        match alg.star_inverse(&ss) {
            Ok(inv) => {
                let one = Series::constant(ss.coeff(0).one_like(), doc.order);
                let ok = alg.star_mul(&ss, &inv)? == one && alg.star_mul(&inv, &ss)? == one;
                r.push(if ok {
                    CheckRecord::pass("s_invertible", "s * s^-1 = s^-1 * s = 1")
                } else {
                    CheckRecord::fail("s_invertible", "inverse is not two-sided", vec![Witness::new("s", &s)])
                });
                r.output("s_inverse", &inv);
            }
            Err(e) => r.push(CheckRecord::fail("s_invertible", e.to_string(), vec![Witness::new("s", &s)])),
        }
    }
    // identities on grid elements and their quotients by s
    let inv_s = l.s_power_inverse(1);
    let mut xs: Vec<_> = loc_grid.iter().map(|g| l.restrict(g)).collect();
    xs.extend(loc_grid.iter().take(4).map(|g| l.restrict(g).mul(&inv_s)));
    let mut bad = None;
    let mut n = 0;
    'outer: for x in &xs {
        for y in &xs {
            for z in &xs {
                n += 1;
                let v = match &a {
                    DeformedAlgebra::Assoc(alg) => alg.assoc_defect(x, y, z)?,
                    DeformedAlgebra::Poisson(p) => p.jacobi_defect(x, y, z)?,
                };
                if !v.is_zero() {
                    bad = Some(vec![Witness::new("a", x), Witness::new("b", y), Witness::new("c", z)]);
                    break 'outer;
                }
            }
        }
    }
    let name = match a {
        DeformedAlgebra::Assoc(_) => "localized_associativity",
        DeformedAlgebra::Poisson(_) => "localized_jacobi",
    };
    r.push(match bad {
        None => CheckRecord::pass(name, format!("{n} triples of fractions")),
        Some(w) => CheckRecord::fail(name, "nonzero defect on fractions", w),
    });
    r.absorb("cover.", cover_compat(&a, &s, &t, &loc_grid)?);
    Ok(r)
}

pub fn star_inverse(doc: &Document, _opts: &Options) -> Result<Report> {
    let mut r = Report::new("star-inverse");
    let DeformedAlgebra::Assoc(alg) = algebra(doc)? else {
        return Err(kind_error("star-inverse needs kind = associative"));
    };
    let x = doc.fun("a")?;
    match alg.star_inverse(&x) {
        Ok(inv) => {
            let one = alg.one(&Poly::zero(doc.nvars));
            let ok = alg.star_mul(&x, &inv)? == one && alg.star_mul(&inv, &x)? == one;
            r.push(if ok {
                CheckRecord::pass("two_sided", "a * b = b * a = 1")
            } else {
                CheckRecord::fail("two_sided", "inverse is one-sided", vec![Witness::new("a", &x)])
            });
            r.output("inverse", &inv);
        }
        Err(Error::NotInvertible { s }) => r.push(CheckRecord::fail(
            "invertible",
            "augmentation is not a unit; localize at s",
            vec![Witness::new("s", s)],
        )),
        Err(e) => return Err(e),
    }
    Ok(r)
}

pub fn recognize(doc: &Document, opts: &Options) -> Result<Report> {
    let mut r = Report::new("recognize-op");
    let need = (opts.max_order + 2).max(opts.max_order + opts.coeff_degree);
    let d_test = opts.test_degree.unwrap_or(need);
    let table = if doc.has("op") {
        OpTable::from_op(doc.op("op", 0)?.coeff(0), d_test)?
    } else if let Some(p) = doc.point("point")? {
        let n = doc.nvars;
        OpTable::from_fn(n, d_test, |f| Poly::constant(n, f.eval(&p)))
    } else {
        return Err(Error::Syntax {
            line: 1,
            column: 1,
            message: "recognize-op needs a binding `op` or a parameter `point`".into(),
        });
    };
    let m = match op_order(&table, opts.max_order)? {
        OpOrder::Exact(m) => {
            r.push(CheckRecord::pass("order", format!("order {m}")));
            m
        }
        OpOrder::Exceeds { coords, monomial, value } => {
            let coords: Vec<String> = coords.iter().map(|i| format!("x{}", i + 1)).collect();
            r.push(CheckRecord::fail(
                "order",
                format!("order exceeds {}; iterated commutator with {} is nonzero", opts.max_order, coords.join(", ")),
                vec![Witness::new("monomial", Poly::from_terms(doc.nvars, [(monomial, qi(1))])), Witness::new("value", value)],
            ));
            return Ok(r);
        }
    };
    match recognize_diffop(&table, m, opts.coeff_degree)? {
        Recognition::Operator(op) => {
            r.push(CheckRecord::pass("recognized", "table reproduced exactly"));
            r.output("operator", op);
        }
        Recognition::Failure { monomial, expected, got } => r.push(CheckRecord::fail(
            "recognized",
            "no operator of this order and coefficient degree reproduces the table",
            vec![
                Witness::new("monomial", Poly::from_terms(doc.nvars, [(monomial, qi(1))])),
                Witness::new("expected", expected),
                Witness::new("got", got),
            ],
        )),
    }
    Ok(r)
}

/// Parse `"0 1; -1 0"` into rows.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<Q>>> {
    text.split(';')
        .enumerate()
        .map(|(i, row)| {
            row.split_whitespace()
                .map(|e| {
                    e.parse::<Q>().map_err(|_| Error::Syntax {
                        line: 1,
                        column: 1,
                        message: format!("row {}: `{e}` is not a rational number", i + 1),
                    })
                })
                .collect()
        })
        .collect()
}

/// A document holding the Moyal product of `pi`.
pub fn moyal_document(pi: &[Vec<Q>], order: usize) -> Result<String> {
    let omega = moyal_mc(pi, order)?;
    Ok(format!(
        "grammar_version = 1\nd = {}\nN = {order}\nkind = associative\nomega : op = {}\n",
        pi.len(),
        if omega.is_zero() { "0".to_string() } else { omega.to_string() }
    ))
}
