use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use baileykit::qseries::poch_inf;
use baileykit::{HalfExponent, MonomialSpec, Param, Series};

fn symbolic(order: i64) -> Series {
    // (-x q; q)_∞ has genuinely multivariate coefficients.
    poch_inf(&MonomialSpec::param(Param::X).neg().shift(2), HalfExponent::q(1), HalfExponent(order)).unwrap()
}

fn arithmetic(c: &mut Criterion) {
    let a = symbolic(120);
    let b = poch_inf(&MonomialSpec::q_half(1), HalfExponent::q(1), HalfExponent(120)).unwrap();
    c.bench_function("mul symbolic x q-series, q^60", |bn| bn.iter(|| black_box(&a).mul(black_box(&b))));
    c.bench_function("invert symbolic series, q^60", |bn| bn.iter(|| black_box(&a).invert().unwrap()));
    c.bench_function("(q;q)_inf to q^500", |bn| {
        bn.iter(|| poch_inf(&MonomialSpec::q_half(2), HalfExponent::q(1), HalfExponent::q(500)).unwrap())
    });
}

criterion_group!(benches, arithmetic);
criterion_main!(benches);
