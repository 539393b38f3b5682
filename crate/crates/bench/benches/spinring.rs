use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};
use spinring_core::{
    build_hamiltonian, concurrence, curve, eigh, find_critical_temperature, gibbs_state, linspace,
    partial_trace, ModelSpec, SitePair,
};

fn pair01() -> SitePair {
    SitePair::new(0, 1).unwrap()
}

fn eigensolver(c: &mut Criterion) {
    let mut group = c.benchmark_group("eigh");
    for n in [2usize, 3, 6, 8] {
        let h = build_hamiltonian(&ModelSpec::xx_ring(n, -1.0, 0.3).unwrap()).unwrap();
        group.bench_function(format!("xx_ring_{n}"), |b| b.iter(|| eigh(black_box(&h))));
    }
    group.finish();
}

fn largest_problem(c: &mut Criterion) {
    let mut group = c.benchmark_group("largest");
    group.sample_size(10);
    let spec = ModelSpec::xx_ring(10, 1.0, 0.2).unwrap();
    group.bench_function("hamiltonian_and_eigh_1024", |b| {
        b.iter_batched(
            || spec.clone(),
            |s| eigh(&build_hamiltonian(&s).unwrap()),
            BatchSize::LargeInput,
        )
    });
    group.finish();
}

fn thermal_pair(c: &mut Criterion) {
    let h = build_hamiltonian(&ModelSpec::xx_impurity_ring(3, -1.0, 2.0).unwrap()).unwrap();
    c.bench_function("gibbs_partial_trace_concurrence_3", |b| {
        b.iter(|| {
            let rho = gibbs_state(black_box(&h), 0.7).unwrap().rho;
            concurrence(&partial_trace(&rho, &[0, 2], 3).unwrap()).unwrap()
        })
    });
}

fn curves(c: &mut Criterion) {
    let taus = linspace(0.02, 3.0, 150);
    let spec = ModelSpec::xx_ring(3, -1.0, -1.5).unwrap();
    c.bench_function("curve_3_sites_150_points", |b| {
        b.iter(|| curve(black_box(&spec), pair01(), &taus))
    });
    let two = ModelSpec::xx_ring(2, 1.0, 0.0).unwrap();
    c.bench_function("critical_temperature_2_sites", |b| {
        b.iter(|| find_critical_temperature(black_box(&two), pair01(), 0.01, 5.0, 1e-8))
    });
}

criterion_group!(benches, eigensolver, largest_problem, thermal_pair, curves);
criterion_main!(benches);
