use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use edgelap::eigensystem::fd_oracle;
use edgelap::kernels::ihara_zeta_recip_real;
use edgelap::numerics::sym_eig;
use edgelap::Eigensystem;
use edgelap_bench::cycle;
use ndarray_stub::symmetric_test_matrix;

// A small self-contained module so the bench crate does not re-export
// matrix helpers from the library under test.
mod ndarray_stub {
    use edgelap::ndarray::Array2;

    /// Dense symmetric matrix with a known spread of eigenvalues.
    pub fn symmetric_test_matrix(n: usize) -> Array2<f64> {
        Array2::from_shape_fn((n, n), |(i, j)| {
            1.0 / (1.0 + (i as f64 - j as f64).abs()) + if i == j { i as f64 } else { 0.0 }
        })
    }
}

fn bench_assemble(c: &mut Criterion) {
    let graph = cycle(12);
    c.bench_function("assemble cycle12 to 2pi", |b| {
        b.iter(|| Eigensystem::assemble(black_box(&graph), std::f64::consts::TAU, 1e-9).unwrap())
    });
}

fn bench_oracle(c: &mut Criterion) {
    let graph = cycle(12);
    c.bench_function("fd_oracle cycle12 m=32", |b| {
        b.iter(|| fd_oracle(black_box(&graph), 32, 25).unwrap())
    });
}

fn bench_sym_eig(c: &mut Criterion) {
    let matrix = symmetric_test_matrix(200);
    c.bench_function("sym_eig 200x200", |b| {
        b.iter(|| sym_eig(black_box(&matrix), 1e-9).unwrap())
    });
}

fn bench_zeta(c: &mut Criterion) {
    let interior = cycle(12).interior();
    c.bench_function("zeta cycle12 cross-checked", |b| {
        b.iter(|| ihara_zeta_recip_real(black_box(&interior), 0.4).unwrap())
    });
}

criterion_group!(benches, bench_assemble, bench_oracle, bench_sym_eig, bench_zeta);
criterion_main!(benches);
