use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use linham_core::catalog::{catalog_rows, integrability_certificate, verify_row};
use linham_core::liealg::{canonical_algebra, classify_abelian, coefficient_algebra, AbelianClassId, LieBasis};
use linham_core::numint::integrate_fundamental;
use linham_core::random;
use linham_core::scalars::parse_ratfunc;
use linham_core::symplectic::{motion_matrix, poisson_bracket, QuadraticHamiltonian};
use linham_core::{Mat, RatFunc};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rf(s: &str) -> RatFunc {
    parse_ratfunc(s).unwrap()
}

fn diagonal_system() -> QuadraticHamiltonian<RatFunc> {
    let m = [((0, 2), rf("1/t")), ((1, 3), rf("2/t"))].into_iter().collect();
    QuadraticHamiltonian::from_monomials(2, &m)
}

fn brackets(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    c.bench_function("poisson_bracket/ratfunc/n=2", |b| {
        b.iter_batched(
            || (random::ratfunc_quadratic(&mut rng, 2), random::ratfunc_quadratic(&mut rng, 2)),
            |(f, g)| poisson_bracket(&f, &g).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

fn classification(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut group = c.benchmark_group("classify_abelian");
    for class in [AbelianClassId::C1a, AbelianClassId::C2c, AbelianClassId::C3, AbelianClassId::C5a] {
        let t = random::constant_symplectic(&mut rng, 2, 4);
        let t_inv = t.inverse().unwrap();
        let gens: Vec<Mat<_>> =
            canonical_algebra(class, Some((2, 3)), None).iter().map(|g| &(&t * g) * &t_inv).collect();
        let basis = LieBasis::span(2, &gens).unwrap();
        group.bench_function(class.label(), |b| b.iter(|| classify_abelian(black_box(&basis)).unwrap()));
    }
    group.finish();
}

fn certificates(c: &mut Criterion) {
    let h = diagonal_system();
    c.bench_function("coefficient_algebra/diagonal", |b| {
        let m = motion_matrix(&h);
        b.iter(|| coefficient_algebra(black_box(&m)).unwrap())
    });
    c.bench_function("integrability_certificate/diagonal", |b| {
        b.iter(|| integrability_certificate(black_box(&h), 0).unwrap())
    });
    c.bench_function("verify_row/all", |b| {
        let rows = catalog_rows();
        b.iter(|| rows.iter().map(|r| verify_row(r, 0).unwrap().gradient_rank).sum::<usize>())
    });
}

fn integration(c: &mut Criterion) {
    let m = motion_matrix(&diagonal_system());
    let mut group = c.benchmark_group("rk4");
    for steps in [1_000usize, 10_000] {
        group.bench_function(format!("diagonal/{steps}"), |b| {
            b.iter(|| integrate_fundamental(black_box(&m), 1.0, 2.0, steps).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, brackets, classification, certificates, integration);
criterion_main!(benches);
