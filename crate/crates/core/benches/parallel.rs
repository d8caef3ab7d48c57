use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use icb_core::exec;
use icb_core::fixtures::{fixture_params, three_halves_input};
use icb_core::numeric::Complex;
use icb_core::painleve::{tau_series, ModeFactor, TauSpec, TauSpecP3};
use icb_core::ramified::solve_ramified;

fn modes(c: &mut Criterion) {
    let mut g = c.benchmark_group("ramified_solve");
    g.sample_size(10);
    let ps = fixture_params();
    for (label, on) in [("sequential", false), ("parallel", true)] {
        g.bench_with_input(BenchmarkId::new(label, "rank 3/2, order 6"), &on, |b, &on| {
            exec::set_parallel(on);
            b.iter(|| solve_ramified(&three_halves_input(&ps, 6)).unwrap());
        });
    }
    g.finish();

    let mut g = c.benchmark_group("tau_p3");
    g.sample_size(10);
    let prec = 512;
    let num = |x: f64| Complex::from_f64(x, 0.0, prec);
    let spec = TauSpec::P3(TauSpecP3 {
        theta1: num(0.3),
        theta2: num(0.1),
        nu: num(0.25),
        s: num(0.5),
        n_max: 8,
        order: 3,
        prec,
        mode_factor: ModeFactor::Adjusted,
    });
    let t = num(-40.0);
    for (label, on) in [("sequential", false), ("parallel", true)] {
        g.bench_with_input(BenchmarkId::new(label, "N=8, 512 bits"), &on, |b, &on| {
            exec::set_parallel(on);
            b.iter(|| tau_series(&spec).unwrap().eval(&t).unwrap());
        });
    }
    g.finish();
    exec::set_parallel(true);
}

criterion_group!(benches, modes);
criterion_main!(benches);
