use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use affinelens::enumerate::find_cpas;
use affinelens::fixtures::random_mlp;
use affinelens::{HPolytope, Parallelism};

fn enumerate(c: &mut Criterion) {
    let domain = HPolytope::cube(2, 1.0).unwrap();
    let mut group = c.benchmark_group("find_cpas");
    group.sample_size(10);
    for widths in [vec![16], vec![8, 8], vec![12, 12]] {
        let net = random_mlp(2, &widths, 2, 0.0, 1);
        let label = format!("{widths:?}");
        for (name, p) in [
            ("sequential", Parallelism::Sequential),
            ("workers4", Parallelism::Workers(4)),
            ("workers8", Parallelism::Workers(8)),
        ] {
            group.bench_with_input(BenchmarkId::new(name, &label), &net, |b, net| {
                b.iter(|| find_cpas(net, &domain, None, p).unwrap().regions.len())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, enumerate);
criterion_main!(benches);
