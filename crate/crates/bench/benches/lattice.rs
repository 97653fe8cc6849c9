use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use reflectice::lattice::{brute_force_wavefunction, dual_wavefunction, dwbp, wavefunction};
use reflectice::scalar::sample_param_point;
use reflectice::Kind;

fn wavefunctions(c: &mut Criterion) {
    let mut g = c.benchmark_group("wavefunction");
    for kind in [Kind::I, Kind::II] {
        for (m, n) in [(3, 1), (4, 2), (6, 3)] {
            let p = sample_param_point(1, m, n, kind, 12).unwrap();
            let x: Vec<usize> = (1..=n).map(|i| 2 * i - 1).collect();
            let id = format!("{kind}/M{m}N{n}");
            g.bench_with_input(BenchmarkId::new("streaming", &id), &p, |b, p| b.iter(|| wavefunction(kind, black_box(p), &x).unwrap()));
            let q = sample_param_point(1, m, m - n, kind, 12).unwrap();
            let holes: Vec<usize> = (1..=m).filter(|j| !x.contains(j)).collect();
            g.bench_with_input(BenchmarkId::new("dual", &id), &q, |b, q| b.iter(|| dual_wavefunction(kind, black_box(q), &holes).unwrap()));
            if m <= 4 {
                g.bench_with_input(BenchmarkId::new("kronecker", &id), &p, |b, p| b.iter(|| brute_force_wavefunction(kind, black_box(p), &x).unwrap()));
            }
        }
    }
    g.finish();
}

fn domain_wall(c: &mut Criterion) {
    let mut g = c.benchmark_group("dwbp");
    for m in [2, 4, 5] {
        let p = sample_param_point(2, m, m, Kind::I, 12).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(m), &p, |b, p| b.iter(|| dwbp(Kind::I, black_box(p)).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, wavefunctions, domain_wall);
criterion_main!(benches);
