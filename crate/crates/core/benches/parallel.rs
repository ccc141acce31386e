use basisdiv::oracle::fuzz::{run_campaign, FuzzConfig};
use basisdiv::oracle::{exists_semi_division_basis, Ceilings};
use basisdiv::{AlgebraPresentation, Execution, Field};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

/// ex1 plus two orthogonal idempotents over F_2: no semi-division basis, so
/// every one of the 840 unordered bases is checked.
fn no_basis_dim4() -> AlgebraPresentation {
    let f = Field::prime(2).unwrap();
    let one = f.one();
    let entries = [(0, 0, 0), (1, 1, 0), (1, 1, 1), (2, 2, 2), (3, 3, 3)]
        .into_iter()
        .map(|(i, j, k)| (i, j, k, one.clone()));
    AlgebraPresentation::from_entries(f, 4, entries).unwrap()
}

fn basis_search(c: &mut Criterion) {
    let a = no_basis_dim4();
    let ceilings = Ceilings::default();
    let mut group = c.benchmark_group("exists_semi_division_basis_f2_dim4");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| exists_semi_division_basis(black_box(&a), exec, &ceilings).unwrap())
        });
    }
    group.finish();
}

fn fuzz_campaign(c: &mut Criterion) {
    let cfg = FuzzConfig {
        field: Field::prime(2).unwrap(),
        dim: 3,
        sparsity: 0.3,
        seed: 0,
        trials: 40,
    };
    let ceilings = Ceilings::default();
    let mut group = c.benchmark_group("fuzz_campaign_f2_dim3");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| run_campaign(black_box(&cfg), exec, &ceilings).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, basis_search, fuzz_campaign);
criterion_main!(benches);
