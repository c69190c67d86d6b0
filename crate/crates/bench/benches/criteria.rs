use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use hzpos::{
    adjoint_shift, all_criteria, check, scan_obstructions, seshadri_bounds, BaseDivisorClass, BlowupModel,
    DivisorClass, Position, ScanMode,
};

fn bundle(r: usize) -> (BlowupModel, DivisorClass) {
    let m: Vec<i64> = (0..r as i64).map(|i| 6 - (i % 5)).collect();
    (BlowupModel::new(2, r, Position::VeryGeneral), DivisorClass::from_i64(12, 40 + 3 * r as i64, &m))
}

fn criteria(c: &mut Criterion) {
    let mut group = c.benchmark_group("criteria");
    for r in [4, 16, 64, 256] {
        let (model, l) = bundle(r);
        group.bench_with_input(BenchmarkId::from_parameter(r), &r, |bch, _| {
            bch.iter(|| {
                for id in all_criteria(3) {
                    black_box(check(&l, &model, id).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn obstructions(c: &mut Criterion) {
    let mut group = c.benchmark_group("scan_obstructions");
    group.sample_size(20);
    for r in [3, 6, 9] {
        let (model, l) = bundle(r);
        let n = adjoint_shift(&l, &model).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(r), &r, |bch, _| {
            bch.iter(|| black_box(scan_obstructions(&n, &model, ScanMode::Va, 8, 3).unwrap()))
        });
    }
    group.finish();
}

fn seshadri(c: &mut Criterion) {
    let l = BaseDivisorClass::new(17, 95);
    c.bench_function("seshadri_bounds", |bch| bch.iter(|| black_box(seshadri_bounds(&l, 3, black_box(40)))));
}

criterion_group!(benches, criteria, obstructions, seshadri);
criterion_main!(benches);
