use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use deformq_core::deform::{monomial_grid, AssocDeformation};
use deformq_core::dpoly::{moyal_mc, op_order, recognize_diffop, OpTable};
use deformq_core::mc::{bch, mc_defect, DPoly, TPoly};
use deformq_core::random;
use deformq_core::{qi, PolyDiffOp, PolyVec};

fn pi() -> Vec<Vec<deformq_core::Q>> {
    vec![vec![qi(0), qi(1)], vec![qi(-1), qi(0)]]
}

fn star(c: &mut Criterion) {
    let a = AssocDeformation::moyal(&pi(), 4).unwrap();
    let grid = monomial_grid(2, 3, 4);
    c.bench_function("moyal star product, degree 3 grid", |b| {
        b.iter(|| {
            for x in &grid {
                black_box(a.star_mul(x, &grid[grid.len() - 1]).unwrap());
            }
        })
    });
}

fn brackets(c: &mut Criterion) {
    let mut r = random::rng(0);
    let u = random::polyvec(&mut r, 3, 1, 2, 3);
    let v = random::polyvec(&mut r, 3, 1, 2, 3);
    c.bench_function("schouten bracket of bivectors, d = 3", |b| b.iter(|| black_box(u.schouten(&v))));
    let p = random::diffop(&mut r, 2, 1, 2, 2, 3, true);
    let q = random::diffop(&mut r, 2, 1, 2, 2, 3, true);
    c.bench_function("gerstenhaber bracket of bidifferential operators", |b| b.iter(|| black_box(p.bracket(&q))));
}

fn mc(c: &mut Criterion) {
    let omega = moyal_mc(&pi(), 4).unwrap();
    let host = DPoly::normalized(2, 4);
    c.bench_function("Maurer-Cartan defect of Moyal, N = 4", |b| b.iter(|| black_box(mc_defect(&host, &omega).unwrap())));
}

fn bch_series(c: &mut Criterion) {
    let mut r = random::rng(1);
    let host = DPoly::normalized(2, 4);
    let g1 = random::series(&mut r, &PolyDiffOp::zero(2, 0), 4, 1, |r| random::diffop(r, 2, 0, 2, 1, 2, true));
    let g2 = random::series(&mut r, &PolyDiffOp::zero(2, 0), 4, 1, |r| random::diffop(r, 2, 0, 2, 1, 2, true));
    c.bench_function("bch of operator gauges, N = 4", |b| b.iter(|| black_box(bch(&host, &g1, &g2))));
    let thost = TPoly::new(2, 4);
    let v1 = random::series(&mut r, &PolyVec::zero(2, 0), 4, 1, |r| random::polyvec(r, 2, 0, 2, 2));
    let v2 = random::series(&mut r, &PolyVec::zero(2, 0), 4, 1, |r| random::polyvec(r, 2, 0, 2, 2));
    c.bench_function("bch of vector field gauges, N = 4", |b| b.iter(|| black_box(bch(&thost, &v1, &v2))));
}

fn recognition(c: &mut Criterion) {
    let mut r = random::rng(2);
    let op = random::diffop(&mut r, 2, 0, 3, 3, 3, false);
    let table = OpTable::from_op(&op, 8).unwrap();
    c.bench_function("op_order then recognize, order 3", |b| {
        b.iter(|| {
            black_box(op_order(&table, 3).unwrap());
            black_box(recognize_diffop(&table, op.order(), 3).unwrap())
        })
    });
}

criterion_group!(benches, star, brackets, mc, bch_series, recognition);
criterion_main!(benches);
