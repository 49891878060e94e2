//! Seeded fixtures shared by the benchmark targets.

use qkc::random::{derive_seed, random_density, random_pure};
use qkc::state::{DensityMatrix, PureState};

pub fn density_pair(dim: usize, seed: u64) -> (DensityMatrix, DensityMatrix) {
    (
        random_density(dim, dim, derive_seed(seed, 1)),
        random_density(dim, dim, derive_seed(seed, 2)),
    )
}

pub fn product_power(dim: usize, copies: usize, seed: u64) -> PureState {
    random_pure(dim, seed).tensor_power(copies)
}
