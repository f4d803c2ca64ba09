use criterion::{criterion_group, criterion_main, Criterion};
use hkcalc_bench::{determinantal, quartic};
use hkcalc_core::hk::{bracket_power, en_cyclic};
use hkcalc_core::{ideal_basis, Budget};

fn bases(c: &mut Criterion) {
    let budget = Budget::default();
    let mut group = c.benchmark_group("bracket_basis");
    group.sample_size(20);
    for (name, (ring, m), n) in [("quartic", quartic(), 2), ("determinantal", determinantal(), 2)] {
        let bracket = bracket_power(&m, &ring, n).unwrap();
        let mut gens = ring.quotient().to_vec();
        gens.extend(bracket.generators.iter().cloned());
        group.bench_function(format!("{name}/n={n}"), |b| {
            b.iter(|| ideal_basis(ring.poly_ring(), &gens, &budget).unwrap())
        });
    }
    group.finish();
}

fn colengths(c: &mut Criterion) {
    let budget = Budget::default();
    let (ring, m) = quartic();
    let mut group = c.benchmark_group("colength");
    group.sample_size(10);
    group.bench_function("quartic/e_3", |b| b.iter(|| en_cyclic(&ring, &[], &m, 3, &budget).unwrap()));
    let basis = ideal_basis(
        ring.poly_ring(),
        &[ring.quotient().to_vec(), bracket_power(&m, &ring, 3).unwrap().generators].concat(),
        &budget,
    )
    .unwrap();
    group.bench_function("quartic/staircase_3", |b| b.iter(|| basis.colength()));
    group.finish();
}

criterion_group!(benches, bases, colengths);
criterion_main!(benches);
