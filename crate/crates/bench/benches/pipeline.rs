use criterion::{black_box, criterion_group, criterion_main, Criterion};
use ricci_orbit::radial::{check_kahler_cp1, ricci};
use ricci_orbit::sweep::{coeff_positivity_interval, symbolic_iterate, DEFAULT_SIZE_LIMIT};
use ricci_orbit::volume::symplectic_volume;
use ricci_orbit::{is_positive_on_nonneg_axis, BigRational};
use ricci_orbit_bench::{family_density, family_iterate};

fn exact(c: &mut Criterion) {
    let v0 = family_density(3, 2);
    let v1 = family_iterate(3, 2, 1);
    c.bench_function("ricci k=1 at a=3/2", |b| b.iter(|| ricci(black_box(&v0))));
    c.bench_function("ricci k=2 at a=3/2", |b| b.iter(|| ricci(black_box(&v1))));
    let v2 = family_iterate(7, 4, 2);
    c.bench_function("sturm positivity deg 18", |b| {
        b.iter(|| is_positive_on_nonneg_axis(black_box(v2.num())))
    });
    c.bench_function("check_kahler_cp1 deg 18/20", |b| {
        b.iter(|| check_kahler_cp1(black_box(&v2)))
    });
}

fn symbolic(c: &mut Criterion) {
    c.bench_function("symbolic_iterate k=2", |b| {
        b.iter(|| symbolic_iterate(black_box(2), DEFAULT_SIZE_LIMIT))
    });
    let steps = symbolic_iterate(1, DEFAULT_SIZE_LIMIT).unwrap();
    let lo = BigRational::new(707107.into(), 500000.into());
    let hi = BigRational::from_integer(2.into());
    c.bench_function("coeff_positivity_interval k=1", |b| {
        b.iter(|| coeff_positivity_interval(black_box(&steps[0].numerator), &lo, &hi))
    });
}

fn volume(c: &mut Criterion) {
    let fs = family_density(2, 1);
    let v1 = family_iterate(3, 2, 1);
    c.bench_function("symplectic_volume FS", |b| {
        b.iter(|| symplectic_volume(black_box(&fs)))
    });
    c.bench_function("symplectic_volume ricci a=3/2", |b| {
        b.iter(|| symplectic_volume(black_box(&v1)))
    });
}

criterion_group!(benches, exact, symbolic, volume);
criterion_main!(benches);
