use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fisher_lie::catalogue::conservation::conservation_case;
use fisher_lie::catalogue::CaseId;
use fisher_lie::conservation::{conservation_ranges, multiplier_residual};
use fisher_lie::expr::{exp, param, t, u};
use fisher_lie::numeric::{numeric_zero_check, numeric_zero_check_serial, sample_jet_points};

fn zero_checks(c: &mut Criterion) {
    // The Case 3 residual for symbolic q is large and does not vanish.
    let case = conservation_case(CaseId::Case3).unwrap();
    let lam = exp(-param("p") * param("q") * u().pow(param("q") - 1) * t());
    let residual = multiplier_residual(&case.pde(), &lam).unwrap();
    let params = case.admissible();
    let mut g = c.benchmark_group("numeric_zero_check");
    for n in [200usize, 2000] {
        let points = sample_jet_points(n, 42, &conservation_ranges(), &params).unwrap();
        g.bench_with_input(BenchmarkId::new("parallel", n), &points, |b, p| {
            b.iter(|| numeric_zero_check(&residual, p, 1e-9))
        });
        g.bench_with_input(BenchmarkId::new("serial", n), &points, |b, p| {
            b.iter(|| numeric_zero_check_serial(&residual, p, 1e-9))
        });
    }
    g.finish();
}

criterion_group!(benches, zero_checks);
criterion_main!(benches);
