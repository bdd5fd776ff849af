use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mbqc_core::cluster::{build_cluster_with, reference_input, stabilizer_sweep, Boundary, ClusterSpec};
use mbqc_core::engine::{run_prepared, PlanStep, PreparedPlan, ResourceSpec, RunMode};
use mbqc_core::mps::{assemble_state_with, BoundaryPair};
use mbqc_core::Exec;

const POLICIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn assemble(c: &mut Criterion) {
    let mut g = c.benchmark_group("assemble_state");
    let r = ResourceSpec::Su { n: 3, transpose: false }.build().unwrap();
    let k = r.site(0).clone();
    let b = BoundaryPair::standard(3);
    for (name, exec) in POLICIES {
        g.bench_function(BenchmarkId::new(name, "su3 N=4"), |bench| {
            bench.iter(|| assemble_state_with(black_box(&k), 4, &b, exec).unwrap())
        });
    }
    let spec = ClusterSpec::new(5, 2, 5, Boundary::Pbc).unwrap();
    for (name, exec) in POLICIES {
        g.bench_function(BenchmarkId::new(name, "cluster d=5 N=5"), |bench| {
            bench.iter(|| build_cluster_with(black_box(&spec), None, exec).unwrap())
        });
    }
    g.finish();
}

fn branches(c: &mut Criterion) {
    let mut g = c.benchmark_group("branch_enumeration");
    let r = ResourceSpec::Su { n: 3, transpose: false }.build().unwrap();
    let gate = |theta| PlanStep::Gate { generator: "XZ-mub:1".into(), theta, adaptive: false };
    let plan = PreparedPlan::with_resource(r, &reference_input(3), &[gate(0.3), gate(0.7), PlanStep::Wire]).unwrap();
    for (name, exec) in POLICIES {
        g.bench_function(BenchmarkId::new(name, "su3 3 steps"), |bench| {
            bench.iter(|| run_prepared(black_box(&plan), RunMode::Enumerate, exec).unwrap())
        });
    }
    g.finish();
}

fn stabilizers(c: &mut Criterion) {
    let mut g = c.benchmark_group("stabilizer_sweep");
    g.sample_size(10);
    for (name, exec) in POLICIES {
        g.bench_function(BenchmarkId::new(name, "d=2..5 N=2..4"), |bench| {
            bench.iter(|| stabilizer_sweep(&[2, 3, 4, 5], &[2, 3, 4], exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, assemble, branches, stabilizers);
criterion_main!(benches);
