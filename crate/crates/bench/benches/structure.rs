use criterion::{criterion_group, criterion_main, Criterion};

use dgk_core::diagonal::{diagonal, pair_model};
use dgk_core::double::{corners, validate_double};
use dgk_core::extension::{build_extension, decompose};
use dgk_core::fixtures;
use dgk_core::format::{emit_double, load_double};
use dgk_core::kernel::{core, kernel};
use dgk_core::words::FreeProduct;

fn validation(c: &mut Criterion) {
    for (name, d) in fixtures::all() {
        c.bench_function(&format!("validate_double/{name}"), |b| b.iter(|| validate_double(&d)));
    }
    let text = emit_double(&fixtures::cpair3());
    c.bench_function("load_double/CPAIR3", |b| b.iter(|| load_double(&text, true).unwrap()));
}

fn structure(c: &mut Criterion) {
    let ext1 = fixtures::ext1();
    c.bench_function("core/EXT1", |b| b.iter(|| core(&ext1).unwrap()));
    c.bench_function("kernel/EXT1", |b| b.iter(|| kernel(&ext1).unwrap()));
    c.bench_function("corners/EXT1", |b| b.iter(|| corners(&ext1)));
    c.bench_function("decompose/EXT1", |b| b.iter(|| decompose(&ext1).unwrap()));
    let data = decompose(&ext1).unwrap().data;
    c.bench_function("build_extension/EXT1", |b| b.iter(|| build_extension(&data).unwrap()));
}

fn diagonals(c: &mut Criterion) {
    for (name, d) in [("CPAIR3", fixtures::cpair3()), ("S3F", fixtures::s3f())] {
        c.bench_function(&format!("pair_model/{name}"), |b| b.iter(|| pair_model(&d).unwrap()));
        c.bench_function(&format!("diagonal/{name}"), |b| b.iter(|| diagonal(&d).unwrap()));
    }
    let s3f = fixtures::s3f();
    let fp = FreeProduct::of(&s3f);
    c.bench_function("reduced_words/S3F/3", |b| b.iter(|| fp.reduced_words_of_length(3)));
}

criterion_group!(benches, validation, structure, diagonals);
criterion_main!(benches);
