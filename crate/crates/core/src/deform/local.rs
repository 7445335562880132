//! Principal localizations of deformations. Coordinate-form operators act
//! on fractions verbatim, so the extension of `ω` to `C_s` is the same
//! series evaluated on [`LocPoly`] arguments.

use super::{DeformationKind, DeformedAlgebra};
use crate::error::{Error, Result};
use crate::polyring::{FunctionRing, LocPoly};
use crate::report::{CheckRecord, Report, Witness};
use crate::series::Series;
use crate::Poly;

/// `A_s` together with the element `s` it inverts.
#[derive(Debug, Clone, PartialEq)]
pub struct Localized {
    algebra: DeformedAlgebra,
    s: Poly,
}

pub fn localize_deformation(a: &DeformedAlgebra, s: &Poly) -> Result<Localized> {
    if s.is_zero() {
        return Err(Error::Precondition("cannot localize at zero".into()));
    }
    if s.nvars() != a.nvars() {
        return Err(Error::ContextMismatch(format!(
            "s has {} variables, the deformation {}",
            s.nvars(),
            a.nvars()
        )));
    }
    Ok(Localized {
        algebra: a.clone(),
        s: s.clone(),
    })
}

impl Localized {
    pub fn algebra(&self) -> &DeformedAlgebra {
        &self.algebra
    }

    pub fn s(&self) -> &Poly {
        &self.s
    }

    pub fn kind(&self) -> DeformationKind {
        self.algebra.kind()
    }

    /// The restriction `A → A_s`.
    pub fn restrict(&self, a: &Series<Poly>) -> Series<LocPoly> {
        a.map(|p| LocPoly::from_poly(p.clone(), &self.s))
    }

    /// `s^{-k}` as a constant series of `A_s`.
    pub fn s_power_inverse(&self, k: u32) -> Series<LocPoly> {
        Series::constant(LocPoly::new(Poly::one(self.s.nvars()), self.s.clone(), k), self.algebra.order())
    }

    /// `⋆` or `{−, −}` on `A_s`.
    pub fn product(&self, a: &Series<LocPoly>, b: &Series<LocPoly>) -> Result<Series<LocPoly>> {
        self.check(a)?;
        self.check(b)?;
        self.algebra.product(a, b)
    }

    fn check(&self, a: &Series<LocPoly>) -> Result<()> {
        if a.coeffs().iter().all(|c| c.s() == &self.s) {
            Ok(())
        } else {
            Err(Error::ContextMismatch(format!("element is not over C_s with s = {}", self.s)))
        }
    }

    /// Further localization `A_s → A_{st}`.
    pub fn then(&self, t: &Poly) -> Result<Localized> {
        localize_deformation(&self.algebra, &(&self.s * t))
    }
}

/// The restriction `C_s → C_{st}` applied coefficientwise.
pub fn restrict_series(a: &Series<LocPoly>, t: &Poly) -> Series<LocPoly> {
    a.map(|c| c.restrict(t))
}

/// The square `A → A_s → A_{st}` versus `A → A_t → A_{ts}` on `grid`, the
/// direct restriction `A → A_{st}`, and multiplicativity of every leg.
pub fn cover_compat(a: &DeformedAlgebra, s: &Poly, t: &Poly, grid: &[Series<Poly>]) -> Result<Report> {
    let mut report = Report::new("cover-compat");
    let ls = localize_deformation(a, s)?;
    let lt = localize_deformation(a, t)?;
    let lst = ls.then(t)?;

    let mut square = None;
    let mut checked = 0usize;
    for g in grid {
        checked += 1;
        let via_s = restrict_series(&ls.restrict(g), t);
        let via_t = restrict_series(&lt.restrict(g), s);
        let direct = lst.restrict(g);
        if square.is_none() && (via_s != via_t || via_s != direct) {
            square = Some(vec![
                Witness::new("a", g),
                Witness::new("via s", &via_s),
                Witness::new("via t", &via_t),
            ]);
        }
    }
    report.push(match square {
        None => CheckRecord::pass("square_commutes", format!("{checked} elements")),
        Some(w) => CheckRecord::fail("square_commutes", "restrictions disagree", w),
    });

    // A → A_s and A → A_t on polynomial pairs
    for (name, leg) in [("restriction_s_multiplicative", &ls), ("restriction_t_multiplicative", &lt)] {
        report.push(multiplicative(name, a, leg, grid)?);
    }

    // A_s → A_{st} on fractions g/s
    let mut bad = None;
    let mut n = 0usize;
    let inv_s = ls.s_power_inverse(1);
    let fractions: Vec<Series<LocPoly>> = grid.iter().map(|g| ls.restrict(g).mul_with(&inv_s, algebra_mul)).collect();
    'outer: for x in &fractions {
        for y in &fractions {
            n += 1;
            let lhs = restrict_series(&ls.product(x, y)?, t);
            let rhs = lst.product(&restrict_series(x, t), &restrict_series(y, t))?;
            if lhs != rhs {
                bad = Some(vec![Witness::new("a", x), Witness::new("b", y)]);
                break 'outer;
            }
        }
    }
    report.push(match bad {
        None => CheckRecord::pass("restriction_st_multiplicative", format!("{n} pairs of fractions")),
        Some(w) => CheckRecord::fail("restriction_st_multiplicative", "restriction does not preserve the product", w),
    });
    Ok(report)
}

fn algebra_mul<F: FunctionRing>(x: &F, y: &F) -> F {
    crate::series::Algebra::mul(x, y)
}

fn multiplicative(name: &str, a: &DeformedAlgebra, leg: &Localized, grid: &[Series<Poly>]) -> Result<CheckRecord> {
    let mut n = 0usize;
    for x in grid {
        for y in grid {
            n += 1;
            let lhs = leg.restrict(&a.product(x, y)?);
            let rhs = leg.product(&leg.restrict(x), &leg.restrict(y))?;
            if lhs != rhs {
                return Ok(CheckRecord::fail(
                    name,
                    "restriction does not preserve the product",
                    vec![Witness::new("a", x), Witness::new("b", y)],
                ));
            }
        }
    }
    Ok(CheckRecord::pass(name, format!("{n} pairs")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deform::{monomial_grid, AssocDeformation, PoissonDeformation};
    use crate::mc::{MCElement, TPoly};
    use crate::series::Linear;
    use crate::{qi, PolyVec, Q};

    fn moyal() -> DeformedAlgebra {
        let pi: Vec<Vec<Q>> = vec![vec![qi(0), qi(1)], vec![qi(-1), qi(0)]];
        DeformedAlgebra::Assoc(AssocDeformation::moyal(&pi, 2).unwrap())
    }

    #[test]
    fn localizing_at_one_is_the_identity() {
        let a = moyal();
        let l = localize_deformation(&a, &Poly::one(2)).unwrap();
        let x = Series::constant(Poly::var(2, 0), 2);
        let y = Series::constant(Poly::var(2, 1), 2);
        let lhs = l.product(&l.restrict(&x), &l.restrict(&y)).unwrap();
        assert_eq!(lhs.map(|c| c.as_poly().unwrap()), a.product(&x, &y).unwrap());
    }

    #[test]
    fn moyal_cover() {
        let grid = monomial_grid(2, 2, 2);
        let r = cover_compat(&moyal(), &Poly::var(2, 0), &Poly::var(2, 1), &grid).unwrap();
        assert!(r.all_passed(), "{r:#?}");
        let r = cover_compat(&moyal(), &Poly::var(2, 0), &Poly::var(2, 0), &grid).unwrap();
        assert!(r.all_passed());
    }

    #[test]
    fn poisson_jacobi_on_fractions() {
        let pi = Series::monomial(PolyVec::basis(2, &[0, 1]).mul_fn(&Poly::var(2, 0)), 1, 2);
        let p = PoissonDeformation::new(MCElement::new(TPoly::new(2, 2), pi).unwrap());
        let s = Poly::var(2, 1);
        let l = localize_deformation(&DeformedAlgebra::Poisson(p.clone()), &s).unwrap();
        let inv = l.s_power_inverse(1);
        let a = l.restrict(&Series::constant(Poly::var(2, 0), 2)).mul_with(&inv, algebra_mul);
        let b = l.s_power_inverse(2);
        let c = l.restrict(&Series::constant(&Poly::var(2, 0) * &Poly::var(2, 1), 2));
        assert!(p.jacobi_defect(&a, &b, &c).unwrap().is_zero());
        assert!(!p.bracket(&a, &b).unwrap().is_zero());
    }

    #[test]
    fn rejects_zero() {
        assert!(localize_deformation(&moyal(), &Poly::zero(2)).is_err());
    }
}
