use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use kmspin_bench::fixture;
use kmspin_core::extender::{build_extended_rep, check_xmap, root_pairs};
use kmspin_core::higherspin::{random_vector, three_half_map, verify_identities, SymmetrizerContext};
use kmspin_core::weylrep::sign_multiplicity;
use kmspin_core::{build_half_spin, gammas, iterated_sum_closure, real_roots, Convention, QMatrix, Rational, Root, Space};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> QMatrix {
    QMatrix::from_fn(n, n, |_, _| Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=6)))
}

fn matmul(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in [16, 64] {
        let a = random_matrix(&mut rng, n);
        let b = random_matrix(&mut rng, n);
        c.bench_function(&format!("rational matmul {n}"), |bench| bench.iter(|| black_box(a.matmul(&b))));
    }
}

fn roots(c: &mut Criterion) {
    let (_, r) = fixture("E10");
    c.bench_function("E10 real roots to height 8", |b| b.iter(|| real_roots(&r, 8)));
    c.bench_function("E10 closure to height 8", |b| b.iter(|| iterated_sum_closure(&r, 8)));
}

fn half_spin(c: &mut Criterion) {
    let (g, _) = fixture("E10");
    c.bench_function("E10 half-spin build", |b| b.iter(|| build_half_spin(&g).unwrap()));
}

fn higher_spin(c: &mut Criterion) {
    let (g, r) = fixture("E8");
    let ctx = SymmetrizerContext::new(&r);
    let low: Vec<Root> = real_roots(&r, 3).into_iter().collect();
    let pairs = root_pairs(&r, &low);
    let domain: Vec<Root> = real_roots(&r, 6).into_iter().collect();
    let x = three_half_map(&ctx, &domain, Convention::Plain).unwrap();
    c.bench_function("E8 3/2 relation check", |b| b.iter(|| check_xmap(&x, &r, &pairs).unwrap()));

    let gs = gammas(&build_half_spin(&g).unwrap()).unwrap();
    c.bench_function("E8 3/2 sigma with Berman check", |b| {
        b.iter(|| build_extended_rep(&x, &r, &gs, &g).unwrap())
    });

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    c.bench_function("E8 identities, 10 samples", |b| {
        b.iter_batched(
            || (0..10).map(|_| (random_vector(&mut rng, ctx.k()), random_vector(&mut rng, ctx.k()))).collect::<Vec<_>>(),
            |samples| verify_identities(&ctx, &samples),
            BatchSize::SmallInput,
        )
    });
}

fn weyl(c: &mut Criterion) {
    let (_, r) = fixture("A3");
    let a = Root::simple(3, 0);
    let b = Root::simple(3, 1);
    c.bench_function("A3 Sym3 sign multiplicity", |bench| {
        bench.iter(|| sign_multiplicity(&r, Space::Sym3, &a, &b).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = matmul, roots, half_spin, higher_spin, weyl
}
criterion_main!(benches);
