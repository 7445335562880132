use deformq_core::deform::{
    apply_op_gauge, apply_vec_gauge, localize_deformation, AssocDeformation, DeformedAlgebra, PoissonDeformation,
};
use deformq_core::dpoly::moyal_mc;
use deformq_core::mc::{bch, twisted_bracket, DPoly, GaugeElement, MCElement, TPoly};
use deformq_core::random::{self, Rng};
use deformq_core::series::Algebra;
use deformq_core::{qi, Linear, Poly, PolyDiffOp, PolyVec, Series, Q};
use proptest::prelude::*;

fn constant_matrix(r: &mut Rng, n: usize) -> Vec<Vec<Q>> {
    let mut m = vec![vec![qi(0); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let c = random::rational(r);
            m[i][j] = c.clone();
            m[j][i] = -c;
        }
    }
    m
}

fn gauge_op(r: &mut Rng, n: usize, order: usize) -> Series<PolyDiffOp> {
    random::series(r, &PolyDiffOp::zero(n, 0), order, 1, |r| random::diffop(r, n, 0, 2, 1, 2, true))
}

fn gauge_vec(r: &mut Rng, n: usize, order: usize) -> Series<PolyVec> {
    random::series(r, &PolyVec::zero(n, 0), order, 1, |r| random::polyvec(r, n, 0, 2, 2))
}

fn elem(r: &mut Rng, n: usize, order: usize) -> Series<Poly> {
    random::poly_series(r, n, order, 0, 2)
}

/// A Poisson series `h π1 + h² π2` with constant, hence commuting, terms.
fn constant_poisson(r: &mut Rng, n: usize, order: usize) -> PoissonDeformation {
    let mut cs = vec![PolyVec::zero(n, 1)];
    for _ in 1..=order {
        cs.push(random::constant_bivector(r, n));
    }
    let mc = MCElement::new(TPoly::new(n, order), Series::new(cs)).unwrap();
    PoissonDeformation::new(mc)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn moyal_is_associative_with_unit(seed in any::<u64>(), n in 2usize..=3, order in 1usize..=3) {
        let mut r = random::rng(seed);
        let a = AssocDeformation::moyal(&constant_matrix(&mut r, n), order).unwrap();
        let (x, y, z) = (elem(&mut r, n, order), elem(&mut r, n, order), elem(&mut r, n, order));
        prop_assert!(a.assoc_defect(&x, &y, &z).unwrap().is_zero());
        let one = a.one(&Poly::zero(n));
        prop_assert_eq!(a.star_mul(&one, &x).unwrap(), x.clone());
        prop_assert_eq!(a.star_mul(&x, &one).unwrap(), x.clone());
        // augmentation is multiplicative
        prop_assert_eq!(a.star_mul(&x, &y).unwrap().coeff(0).clone(), x.coeff(0) * y.coeff(0));
    }

    #[test]
    fn assoc_transport_is_multiplicative(seed in any::<u64>(), order in 1usize..=3) {
        let mut r = random::rng(seed);
        let a = AssocDeformation::moyal(&constant_matrix(&mut r, 2), order).unwrap();
        let gamma = gauge_op(&mut r, 2, order);
        let g = GaugeElement::new(&DPoly::normalized(2, order), gamma.clone()).unwrap();
        let b = a.transport(&g).unwrap();
        prop_assert!(MCElement::new(*b.mc().host(), b.omega().clone()).is_ok());
        let (x, y) = (elem(&mut r, 2, order), elem(&mut r, 2, order));
        let lhs = apply_op_gauge(&gamma, &a.star_mul(&x, &y).unwrap()).unwrap();
        let rhs = b.star_mul(&apply_op_gauge(&gamma, &x).unwrap(), &apply_op_gauge(&gamma, &y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn poisson_transport_is_a_bracket_map(seed in any::<u64>(), n in 2usize..=3, order in 1usize..=3) {
        let mut r = random::rng(seed);
        let p = constant_poisson(&mut r, n, order);
        let gamma = gauge_vec(&mut r, n, order);
        let g = GaugeElement::new(&TPoly::new(n, order), gamma.clone()).unwrap();
        let q = p.transport(&g).unwrap();
        let (x, y) = (elem(&mut r, n, order), elem(&mut r, n, order));
        let lhs = apply_vec_gauge(&gamma, &p.bracket(&x, &y).unwrap()).unwrap();
        let rhs = q.bracket(&apply_vec_gauge(&gamma, &x).unwrap(), &apply_vec_gauge(&gamma, &y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        // and multiplicative for the commutative product
        let m = apply_vec_gauge(&gamma, &x.mul(&y)).unwrap();
        prop_assert_eq!(m, apply_vec_gauge(&gamma, &x).unwrap().mul(&apply_vec_gauge(&gamma, &y).unwrap()));
    }

    #[test]
    fn bch_exponentiates_composition(seed in any::<u64>(), order in 1usize..=4) {
        let mut r = random::rng(seed);
        let host = DPoly::normalized(2, order);
        let (g1, g2) = (gauge_op(&mut r, 2, order), gauge_op(&mut r, 2, order));
        let x = elem(&mut r, 2, order);
        let lhs = apply_op_gauge(&bch(&host, &g1, &g2), &x).unwrap();
        let rhs = apply_op_gauge(&g1, &apply_op_gauge(&g2, &x).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);

        let host = TPoly::new(2, order);
        let (v1, v2) = (gauge_vec(&mut r, 2, order), gauge_vec(&mut r, 2, order));
        let lhs = apply_vec_gauge(&bch(&host, &v1, &v2), &x).unwrap();
        let rhs = apply_vec_gauge(&v1, &apply_vec_gauge(&v2, &x).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn inner_gauge_coherence(seed in any::<u64>(), order in 1usize..=3) {
        let mut r = random::rng(seed);
        let a = AssocDeformation::moyal(&constant_matrix(&mut r, 2), order).unwrap();
        let a1 = random::poly_series(&mut r, 2, order, 1, 2);
        let a2 = random::poly_series(&mut r, 2, order, 1, 2);
        let cochain = |s: &Series<Poly>| s.map(|f| PolyDiffOp::function(f.clone()));
        let tw = twisted_bracket(a.mc(), &cochain(&a1), &cochain(&a2)).unwrap();
        prop_assert_eq!(tw.map(|op| op.as_function().unwrap()), a.commutator(&a1, &a2).unwrap());
        let lhs = a.star_mul(&a.exp_star(&a1).unwrap(), &a.exp_star(&a2).unwrap()).unwrap();
        prop_assert_eq!(lhs, a.exp_star(&a.bch_twisted(&a1, &a2).unwrap()).unwrap());
        let b = elem(&mut r, 2, order);
        let g = a.inner_gauge(&a1).unwrap();
        prop_assert_eq!(a.conj(&g, &b).unwrap(), a.ad_exp(&a1, &b).unwrap());
    }

    #[test]
    fn star_inverse_is_two_sided(seed in any::<u64>(), order in 1usize..=3) {
        let mut r = random::rng(seed);
        let a = AssocDeformation::moyal(&constant_matrix(&mut r, 2), order).unwrap();
        let mut x = random::poly_series(&mut r, 2, order, 1, 2);
        let mut c = random::rational(&mut r);
        if num_traits::Zero::is_zero(&c) {
            c = qi(1);
        }
        x = x.add(&Series::constant(Poly::constant(2, c), order));
        let inv = a.star_inverse(&x).unwrap();
        let one = a.one(&Poly::zero(2));
        prop_assert_eq!(a.star_mul(&x, &inv).unwrap(), one.clone());
        prop_assert_eq!(a.star_mul(&inv, &x).unwrap(), one);
    }

    #[test]
    fn localized_element_becomes_invertible(seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let a = AssocDeformation::moyal(&constant_matrix(&mut r, 2), 2).unwrap();
        let s = random::nonzero_poly(&mut r, 2, 2, 2);
        let l = localize_deformation(&DeformedAlgebra::Assoc(a.clone()), &s).unwrap();
        let ss = l.restrict(&Series::constant(s.clone(), 2));
        let inv = a.star_inverse(&ss).unwrap();
        let one = Series::constant(ss.coeff(0).one_like(), 2);
        prop_assert_eq!(a.star_mul(&ss, &inv).unwrap(), one.clone());
        prop_assert_eq!(a.star_mul(&inv, &ss).unwrap(), one);
    }
}

#[test]
fn moyal_grid_degree_three() {
    let pi = vec![vec![qi(0), qi(1)], vec![qi(-1), qi(0)]];
    let a = AssocDeformation::new(MCElement::new(DPoly::normalized(2, 4), moyal_mc(&pi, 4).unwrap()).unwrap());
    let grid = deformq_core::deform::monomial_grid(2, 3, 4);
    for x in &grid {
        for y in &grid {
            for z in &grid {
                assert!(a.assoc_defect(x, y, z).unwrap().is_zero(), "{x} {y} {z}");
            }
        }
    }
}

/// `1 − h x` has inverse `Σ (h x)^{⋆k}`.
#[test]
fn geometric_inverse() {
    let pi = vec![vec![qi(0), qi(1)], vec![qi(-1), qi(0)]];
    let a = AssocDeformation::moyal(&pi, 3).unwrap();
    let hx = Series::monomial(Poly::var(2, 0), 1, 3);
    let one = a.one(&Poly::zero(2));
    let mut expected = one.clone();
    let mut p = one.clone();
    for _ in 0..3 {
        p = a.star_mul(&p, &hx).unwrap();
        expected = expected.add(&p);
    }
    assert_eq!(a.star_inverse(&one.sub(&hx)).unwrap(), expected);
}

#[test]
fn linear_poisson_jacobi() {
    let pi = Series::monomial(PolyVec::basis(2, &[0, 1]).mul_fn(&Poly::var(2, 0)), 1, 3);
    let p = PoissonDeformation::new(MCElement::new(TPoly::new(2, 3), pi).unwrap());
    let grid = deformq_core::deform::monomial_grid(2, 3, 3);
    for x in &grid {
        for y in &grid {
            for z in &grid {
                assert!(p.jacobi_defect(x, y, z).unwrap().is_zero());
                assert!(p.leibniz_defect(x, y, z).unwrap().is_zero());
            }
        }
    }
}
