use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use isgd::action::{restrict, restrict_with_inclusion, CoverageMode, ElementId, ElementSet, PartialAction};
use isgd::generators::{cyclic_group, symmetric_inverse_monoid};
use isgd::globalize::{build_globalization, build_seed_set, close_equivalence_with};
use isgd::morphism::{commuting_s_functions, SFunction};
use isgd::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn first_points(k: u32) -> ElementSet {
    (0..k).map(ElementId).collect()
}

fn closure_inputs() -> Vec<(String, PartialAction)> {
    let mut inputs = vec![("demo-x".to_string(), isgd::fixtures::demo_x())];
    for n in [3, 4] {
        let entry = symmetric_inverse_monoid(n);
        let natural = &entry.actions[0].action;
        let act = restrict(natural, &first_points(n as u32 - 1), CoverageMode::Trim).unwrap();
        inputs.push((format!("sym-inv-{n}"), act));
    }
    inputs
}

fn bench_closure(c: &mut Criterion) {
    let mut group = c.benchmark_group("close_equivalence");
    for (name, act) in closure_inputs() {
        let seeds = build_seed_set(&act);
        for (mode, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(mode, &name), &seeds, |b, seeds| {
                b.iter(|| close_equivalence_with(black_box(seeds), &act, exec))
            });
        }
    }
    group.finish();
}

fn bench_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("commuting_s_functions");
    group.sample_size(10);
    for n in [5usize, 6] {
        let entry = cyclic_group(n);
        let y = &entry.actions[0].action;
        let (x, kept) = restrict_with_inclusion(y, &first_points(2), CoverageMode::Trim).unwrap();
        let glob = build_globalization(&x).unwrap();
        let j = SFunction::new(x, y.clone(), kept).unwrap();
        let i = glob.canonical_embedding().clone();
        for (mode, exec) in MODES {
            group.bench_function(BenchmarkId::new(mode, format!("cyclic-{n}")), |b| {
                b.iter(|| commuting_s_functions(black_box(&i), &j, u64::MAX, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_closure, bench_enumeration);
criterion_main!(benches);
