//! Seeded random matrices.
//!
//! All generators draw from a caller-provided RNG so results are
//! reproducible bit-for-bit given the seed.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::numerics::{c, unitary_exp, CMatrix, Complex64, Tolerance};

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R, std_dev: f64) -> f64 {
    let z: f64 = StandardNormal.sample(rng);
    z * std_dev
}

/// Entries with independent `N(0, std_dev²)` real and imaginary parts.
pub fn complex_gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, std_dev: f64) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| c(gaussian(rng, std_dev), gaussian(rng, std_dev)))
}

pub fn real_gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, std_dev: f64) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| c(gaussian(rng, std_dev), 0.0))
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize, std_dev: f64) -> CMatrix {
    complex_gaussian_matrix(rng, n, n, std_dev).hermitian_part()
}

/// `exp(A)` for a Gaussian anti-Hermitian `A`; lands anywhere in `U(n)`.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let a = complex_gaussian_matrix(rng, n, n, 1.0).anti_hermitian_part();
    unitary_exp(&a, Tolerance::default()).expect("anti-Hermitian by construction")
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<Complex64> {
    (0..len).map(|_| c(gaussian(rng, 1.0), gaussian(rng, 1.0))).collect()
}
