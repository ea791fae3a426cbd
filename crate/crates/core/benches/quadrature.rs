use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sfcalc_core::calculus::func_calc_with;
use sfcalc_core::hypercomplex::ImaginaryUnit;
use sfcalc_core::operator::{random, Side};
use sfcalc_core::par::Execution;
use sfcalc_core::slicefun::SliceFunction;
use sfcalc_core::spectrum::Contour;
use sfcalc_core::verify::{run_suite, SuiteConfig};
use std::hint::black_box;

fn contour_quadrature(c: &mut Criterion) {
    let mut group = c.benchmark_group("func_calc exp");
    let f = SliceFunction::exp();
    for (n, d) in [(1, 2), (2, 3), (3, 4)] {
        let t = random::paravector_operator(7, n, d, Some(1.0)).module();
        let unit = ImaginaryUnit::generator(n, 1).unwrap().to_multivector();
        let contour = Contour::circle(unit, 0.0, 2.0, 512).unwrap();
        let size = format!("n{n}_d{d}");
        for (label, exec) in [("parallel", Execution::Auto), ("sequential", Execution::Sequential)] {
            group.bench_with_input(BenchmarkId::new(label, &size), &contour, |b, contour| {
                b.iter(|| func_calc_with(&f, &t, black_box(contour), Side::Left, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn verify_suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify suite");
    group.sample_size(10);
    let cfg = SuiteConfig {
        instances: 4,
        nodes: 128,
        ..SuiteConfig::default()
    };
    for (label, exec) in [("parallel", Execution::Auto), ("sequential", Execution::Sequential)] {
        group.bench_function(label, |b| b.iter(|| run_suite(black_box(&cfg), exec).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, contour_quadrature, verify_suite);
criterion_main!(benches);
