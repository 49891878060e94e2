use criterion::{Criterion, criterion_group, criterion_main};

use qkc::kolm::qc_search;
use qkc::state::{PureState, fidelity};
use qkc::sym::SymmetricCodec;
use qkc_bench::{density_pair, product_power};

fn bench_eig(c: &mut Criterion) {
    let (rho, _) = density_pair(16, 11);
    c.bench_function("hermitian_eig_16", |b| {
        b.iter(|| rho.mat().hermitian_eig().unwrap())
    });
}

fn bench_fidelity(c: &mut Criterion) {
    let (rho, sigma) = density_pair(8, 3);
    c.bench_function("fidelity_8", |b| b.iter(|| fidelity(&rho, &sigma).unwrap()));
}

fn bench_search(c: &mut Criterion) {
    let plus = PureState::plus();
    c.bench_function("qc_search_plus_len10", |b| {
        b.iter(|| qc_search(&plus, 0.999, 10).unwrap())
    });
}

fn bench_sym_encode(c: &mut Criterion) {
    let codec = SymmetricCodec::new(2, 4).unwrap();
    let power = product_power(2, 4, 5);
    c.bench_function("sym_encode_2x4", |b| {
        b.iter(|| codec.encode_copies(&power).unwrap())
    });
}

criterion_group!(kernels, bench_eig, bench_fidelity, bench_search, bench_sym_encode);
criterion_main!(kernels);
