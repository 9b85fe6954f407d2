use criterion::{black_box, criterion_group, criterion_main, Criterion};
use shimura_bench::fixture;
use shimura_core::hecke::hecke_operator;
use shimura_core::spectral::char_poly_over;
use shimura_core::{run, OperatorKind};

fn pipeline(c: &mut Criterion) {
    let cfg = fixture("rational_d6_n5.cfg");
    let mut g = c.benchmark_group("pipeline");
    g.sample_size(10);
    g.bench_function("rational_d6_n5", |b| b.iter(|| run(black_box(&cfg), None).unwrap()));
    g.finish();
}

fn operators(c: &mut Criterion) {
    let out = run(&fixture("sqrt5_d31.cfg"), None).unwrap();
    let (_, p) = out.primes.iter().find(|(k, _)| *k == OperatorKind::Hecke).unwrap();
    let mut g = c.benchmark_group("hecke");
    g.sample_size(20);
    g.bench_function(format!("sqrt5_d31 norm {}", p.norm()), |b| b.iter(|| hecke_operator(&out.system, black_box(p)).unwrap()));
    g.finish();

    let out = run(&fixture("sqrt65.cfg"), None).unwrap();
    let k = out.system.field().clone();
    let m = out.operators[0].matrix.clone();
    c.bench_function("char poly 20x20", |b| b.iter(|| char_poly_over(&k, black_box(&m))));
}

criterion_group!(benches, pipeline, operators);
criterion_main!(benches);
