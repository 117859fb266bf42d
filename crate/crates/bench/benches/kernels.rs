use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigUint;
use trinoperm_bench::{sample_pair, tower};
use trinoperm_core::gnq;
use trinoperm_core::hermite::power_sum_expansion;
use trinoperm_core::symbolic::{verify_identity, Identity};
use trinoperm_core::trinomial::{criterion_clause, MonomialTable, TrinomialParams};
use trinoperm_core::FieldCtx;

fn tower_arithmetic(c: &mut Criterion) {
    let ext = tower(7, 2);
    let elems: Vec<_> = ext.iter().collect();
    c.bench_function("tower mul+inv, q=49", |bench| {
        bench.iter(|| {
            elems.iter().skip(1).fold(elems[1], |acc, &x| {
                ext.mul(acc, ext.inv(black_box(x)).expect("nonzero"))
            })
        })
    });
}

fn trinomial_sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("monic trinomial sweep");
    for (p, m) in [(3u32, 2u32), (5, 2), (2, 5)] {
        let ext = tower(p, m);
        let table = MonomialTable::new(&ext);
        let f = ext.base();
        group.bench_with_input(BenchmarkId::new("bruteforce", f.q()), &f.q(), |bench, _| {
            bench.iter(|| {
                f.iter()
                    .flat_map(|a| f.iter().map(move |b| (a, b)))
                    .filter(|&(a, b)| table.verdict(&TrinomialParams::monic(a, b)).is_pp)
                    .count()
            })
        });
        group.bench_with_input(BenchmarkId::new("criterion", f.q()), &f.q(), |bench, _| {
            bench.iter(|| {
                f.iter()
                    .flat_map(|a| f.iter().map(move |b| (a, b)))
                    .filter(|&(a, b)| criterion_clause(f, a, b).is_some())
                    .count()
            })
        });
    }
    group.finish();
}

fn power_sum(c: &mut Criterion) {
    let f = FieldCtx::new(13, 1).expect("F_13");
    let (a, b) = sample_pair(&f);
    c.bench_function("power-sum expansion, q=13, alpha=6", |bench| {
        bench.iter(|| power_sum_expansion(&f, black_box(a), black_box(b), 6, 6))
    });
}

fn gnq_evaluation(c: &mut Criterion) {
    let field = FieldCtx::new(3, 4).expect("F_81");
    let q = 9;
    let n = gnq::exponent_n(q, 5, 2);
    let big = BigUint::from(200u32);
    c.bench_function("g_n recurrence over F_81, n = 9^5 - 9^2 - 1", |bench| {
        bench.iter(|| {
            for y in field.iter() {
                black_box(gnq::gnq_eval_at(&field, q, y, black_box(&n)));
            }
        })
    });
    c.bench_function("g_n coefficients, q=9, n=200", |bench| {
        bench.iter(|| gnq::gnq_coeffs(black_box(200), q, 3, gnq::DEFAULT_COEFF_BOUND))
    });
    let subfield = gnq::subfield_elements(&field, q);
    c.bench_function("g_n functional form over F_81, n=200", |bench| {
        bench.iter(|| {
            for x in field.iter() {
                black_box(gnq::gnq_eval_functional(
                    &field,
                    &subfield,
                    x,
                    black_box(&big),
                ));
            }
        })
    });
}

fn identities(c: &mut Criterion) {
    c.bench_function("discriminant factorization identity", |bench| {
        bench.iter(|| verify_identity(black_box(Identity::DiscriminantFactorization)))
    });
}

criterion_group!(
    benches,
    tower_arithmetic,
    trinomial_sweeps,
    power_sum,
    gnq_evaluation,
    identities
);
criterion_main!(benches);
