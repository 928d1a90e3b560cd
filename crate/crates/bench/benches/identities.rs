use std::collections::BTreeMap;

use criterion::{criterion_group, criterion_main, Criterion};

use baileykit::partitions::theorem_1_1_check;
use baileykit::{check_identity, HalfExponent};

fn checks(c: &mut Criterion) {
    let mut g = c.benchmark_group("identities");
    g.sample_size(10);
    g.bench_function("theorem 1.1, n <= 40", |b| b.iter(|| theorem_1_1_check(40)));
    let sym: BTreeMap<String, String> = [("x".to_string(), "symbolic".to_string())].into();
    g.bench_function("thm3.2-3.5 symbolic x, q^30", |b| {
        b.iter(|| check_identity("thm3.2-3.5", &sym, Some(HalfExponent::q(30))).unwrap())
    });
    g.bench_function("eq1.3, q^60", |b| {
        b.iter(|| check_identity("eq1.3", &BTreeMap::new(), Some(HalfExponent::q(60))).unwrap())
    });
    g.finish();
}

criterion_group!(benches, checks);
criterion_main!(benches);
