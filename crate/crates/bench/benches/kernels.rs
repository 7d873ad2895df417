use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use persistence_kernel_core::barcode1d::functorial_barcode;
use persistence_kernel_core::decomposition::{
    canonical_decomposition, primary_decomposition_module,
};
use persistence_kernel_core::fringe::module_to_fringe;
use persistence_kernel_core::linalg::{rat, RatMatrix};
use persistence_kernel_core::poset::encode;
use persistence_kernel_core::qr::qr_code;
use persistence_kernel_core::random::{
    random_box, random_downset_in, random_module, random_rmodule, rng,
};
use persistence_kernel_core::FdModule;
use rand::Rng;

fn modules(seed: u64, n: usize, side: i64, count: usize) -> Vec<FdModule> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let bx = random_box(&mut r, n, side);
            random_module(&mut r, &bx, 3)
        })
        .collect()
}

fn bench_rank(c: &mut Criterion) {
    let mut r = rng(1);
    let m = RatMatrix::new(12, 12, (0..144).map(|_| rat(r.gen_range(-9..=9))).collect()).unwrap();
    c.bench_function("rank 12x12", |b| b.iter(|| m.rank()));
}

fn bench_module_kernels(c: &mut Criterion) {
    let ms = modules(2, 2, 4, 8);
    c.bench_function("qr_code", |b| {
        b.iter(|| ms.iter().map(|m| qr_code(m).births.len()).sum::<usize>())
    });
    c.bench_function("module_to_fringe", |b| {
        b.iter(|| ms.iter().map(|m| module_to_fringe(m).unwrap()).count())
    });
    c.bench_function("encode", |b| {
        b.iter(|| ms.iter().map(|m| encode(m).unwrap()).count())
    });
    c.bench_function("primary_decomposition_module", |b| {
        b.iter(|| {
            ms.iter()
                .map(|m| primary_decomposition_module(m).unwrap().len())
                .sum::<usize>()
        })
    });
}

fn bench_downsets(c: &mut Criterion) {
    let mut r = rng(3);
    let ds: Vec<_> = (0..8).map(|_| random_downset_in(&mut r, 3, 4, 4)).collect();
    c.bench_function("canonical_decomposition", |b| {
        b.iter(|| {
            ds.iter()
                .map(|d| canonical_decomposition(d).unwrap().len())
                .sum::<usize>()
        })
    });
}

fn bench_barcode(c: &mut Criterion) {
    let mut r = rng(4);
    c.bench_function("functorial_barcode", |b| {
        b.iter_batched(
            || random_rmodule(&mut r, 6, 4),
            |m| functorial_barcode(&m).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(
    kernels,
    bench_rank,
    bench_module_kernels,
    bench_downsets,
    bench_barcode
);
criterion_main!(kernels);
