//! Compares the data-parallel localization sum against the sequential
//! baseline on a fixed workload (all Chern indices of the degree-four
//! line class at one Euler characteristic).

use criterion::{criterion_group, criterion_main, Criterion};
use ptcob_core::deg1::{enumerate_deg1, tvir_character_deg1, FixedPairDeg1};
use ptcob_core::exact::{LaurentPoly, Rat, Weight};
use ptcob_core::localize::{
    chern_indices, draw_specializations, eval_character, index_contribution,
};
use ptcob_core::toric::{catalog, CurveClass, ToricThreefold};
use ptcob_core::{map_ordered, map_ordered_seq};

struct Workload {
    x: ToricThreefold,
    pairs: Vec<FixedPairDeg1>,
    spec: [Rat; 3],
    d: i64,
}

fn workload() -> Workload {
    let x = catalog("p3").unwrap();
    let beta = CurveClass(vec![1]);
    let d = x.virtual_dimension(&beta).unwrap();
    let pairs = enumerate_deg1(&x, &beta, 14).unwrap();
    let chars: Vec<LaurentPoly> = pairs
        .iter()
        .map(|p| tvir_character_deg1(&x, p).unwrap())
        .collect();
    let weights: Vec<Weight> = chars.iter().flat_map(|c| c.support().copied()).collect();
    let spec = draw_specializations(7, 1, &weights)
        .unwrap()
        .remove(0)
        .values;
    Workload { x, pairs, spec, d }
}

fn sum_contributions(w: &Workload, parallel: bool) -> Vec<Rat> {
    let indices = chern_indices(w.d);
    let per_pair = |p: &FixedPairDeg1| -> Vec<Rat> {
        let chi = tvir_character_deg1(&w.x, p).unwrap();
        let (c, e) = eval_character(&chi, w.d, &w.spec).unwrap();
        indices
            .iter()
            .map(|idx| index_contribution(&c, &e, idx))
            .collect()
    };
    let rows = if parallel {
        map_ordered(&w.pairs, per_pair)
    } else {
        map_ordered_seq(&w.pairs, per_pair)
    };
    // ordered reduction keeps the result schedule-independent
    let mut totals = vec![Rat::from_integer(0.into()); indices.len()];
    for row in rows {
        for (t, v) in totals.iter_mut().zip(row) {
            *t += v;
        }
    }
    totals
}

fn bench_localization(c: &mut Criterion) {
    let w = workload();
    let seq = sum_contributions(&w, false);
    let par = sum_contributions(&w, true);
    assert_eq!(seq, par, "parallel and sequential sums must agree");

    let mut group = c.benchmark_group("p3_line_n14_all_indices");
    group.sample_size(10);
    group.bench_function("parallel", |b| b.iter(|| sum_contributions(&w, true)));
    group.bench_function("sequential", |b| b.iter(|| sum_contributions(&w, false)));
    group.finish();
}

criterion_group!(benches, bench_localization);
criterion_main!(benches);
