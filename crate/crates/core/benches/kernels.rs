//! Wall-time benchmarks for the verification kernels.
//!
//! The same suite serves both build configurations: run `cargo bench` for
//! the rayon-backed loops and `cargo bench --no-default-features` for the
//! sequential fallback, then compare the saved baselines.

use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};

use anomaly_core::coarse::{build_wedge, verify_wedge_proposition, WedgeCheckOptions};
use anomaly_core::cochain::{cohomology_order, enumerate_classes, CoefficientSystem, ScalarCochain};
use anomaly_core::exactmath::Qz;
use anomaly_core::fingroup::FiniteGroup;
use anomaly_core::resolve::{resolve_anomaly, verify_resolution, ResolutionCertificate};
use anomaly_core::torus::{verify_torus, TorusParams};
use anomaly_core::twisted::{verify_definition, AnomalousActionModel};

fn cyclic(n: usize) -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::cyclic(n))
}

fn cert_z4() -> ResolutionCertificate {
    let q = cyclic(4);
    let omega = enumerate_classes(&q, 4, 3).unwrap().swap_remove(1);
    resolve_anomaly(&q, &omega, None).unwrap()
}

fn bench_resolution(c: &mut Criterion) {
    let q = cyclic(3);
    let omega = enumerate_classes(&q, 3, 3).unwrap().swap_remove(1);
    c.bench_function("resolve_anomaly_z3", |b| {
        b.iter(|| black_box(resolve_anomaly(&q, &omega, None).unwrap()))
    });
}

fn bench_certificate_verification(c: &mut Criterion) {
    let cert = cert_z4();
    c.bench_function("verify_resolution_z4_g64", |b| {
        b.iter(|| black_box(verify_resolution(&cert).all_passed()))
    });
}

fn bench_action_verification(c: &mut Criterion) {
    let model = AnomalousActionModel::with_left_translation(cert_z4()).unwrap();
    c.bench_function("verify_definition_z4_dim1024", |b| {
        b.iter(|| black_box(verify_definition(&model).all_passed()))
    });
}

fn bench_torus(c: &mut Criterion) {
    let p = TorusParams::new(4, 4, 1, 2, 3).unwrap();
    c.bench_function("verify_torus_4x4", |b| {
        b.iter(|| black_box(verify_torus(&p).all_passed()))
    });
}

fn bench_wedge(c: &mut Criterion) {
    let g = cyclic(3);
    let wedge = build_wedge(&g, 32).unwrap();
    let omega = ScalarCochain::from_fn(g.clone(), 3, 3, |t| {
        Qz::new(t[0] as i64 * ((t[1] as i64 + t[2] as i64) / 3), 3)
    })
    .unwrap();
    c.bench_function("verify_wedge_z3_L32_R8", |b| {
        b.iter(|| {
            let rep = verify_wedge_proposition(
                &wedge,
                &omega,
                &WedgeCheckOptions { propagation: 8, trials: 25, seed: 7 },
            )
            .unwrap();
            black_box(rep.all_passed())
        })
    });
}

fn bench_cohomology(c: &mut Criterion) {
    let g = cyclic(6);
    c.bench_function("h3_order_z6_level6", |b| {
        b.iter(|| black_box(cohomology_order(&g, &CoefficientSystem::QzLevel(6), 3).unwrap()))
    });
}

criterion_group!(
    kernels,
    bench_resolution,
    bench_certificate_verification,
    bench_action_verification,
    bench_torus,
    bench_wedge,
    bench_cohomology
);
criterion_main!(kernels);
