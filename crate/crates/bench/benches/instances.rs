use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use quosyn::goedel;
use quosyn::harness::{run_suite, GenConfig, InstanceId};
use quosyn::lambda;
use quosyn::minilisp;
use quosyn::ring;
use quosyn_bench::{arith_chain, church_power, ring_power};

fn goedel_codes(c: &mut Criterion) {
    let e = arith_chain(40);
    let code = goedel::encode(&e);
    c.bench_function("goedel/encode", |b| b.iter(|| goedel::encode(black_box(&e))));
    c.bench_function("goedel/decode", |b| b.iter(|| goedel::decode(black_box(&code))));
}

fn lambda_reduction(c: &mut Criterion) {
    let t = church_power(3);
    c.bench_function("lambda/nf", |b| b.iter(|| lambda::beta_nf(black_box(&t), lambda::DEFAULT_FUEL)));
    c.bench_function("lambda/selfinterp", |b| b.iter(|| lambda::run_self_interp(black_box(&t), lambda::DEFAULT_FUEL)));
}

fn ring_normalize(c: &mut Criterion) {
    let e = ring_power(5);
    c.bench_function("ring/normalize", |b| b.iter(|| ring::normalize(&ring::pquote(black_box(&e)))));
}

fn lisp_interp(c: &mut Criterion) {
    let e = minilisp::read("(let ((f (lambda (x) (* x x)))) (eval `(+ ,(f 3) ,(f 4))))").unwrap();
    c.bench_function("minilisp/interp", |b| b.iter(|| minilisp::interp(black_box(&e))));
}

fn suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    for instance in InstanceId::ALL {
        let cfg = GenConfig::new(instance).with_trials(100).with_seed(1);
        group.bench_function(instance.name(), |b| b.iter(|| run_suite(black_box(&cfg)).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, goedel_codes, lambda_reduction, ring_normalize, lisp_interp, suites);
criterion_main!(benches);
