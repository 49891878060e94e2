//! Seeded generators for states, unitaries, channels, and ensembles.
//!
//! All randomness in the crate flows from a caller-supplied `u64` seed
//! through [`derive_seed`], a counter-based splitter: item `i` of any
//! sampled collection is generated from `derive_seed(seed, i)`, so results
//! never depend on iteration order, thread count, or shard layout.

use crate::matrix::{C64, ComplexMatrix};
use crate::state::{DensityMatrix, Ensemble, PureState, QuantumChannel};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Derives an independent stream seed from a master seed and a counter.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    splitmix64(master ^ splitmix64(stream))
}

/// The crate-standard RNG for a given seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_c64(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

/// Haar-random pure state: normalized complex Gaussian vector.
pub fn random_pure(dim: usize, seed: u64) -> PureState {
    let mut r = rng(seed);
    loop {
        let amps: Vec<C64> = (0..dim).map(|_| gaussian_c64(&mut r)).collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return PureState::new_unchecked(amps.into_iter().map(|a| a / norm).collect());
        }
    }
}

/// Orthonormalizes the columns of `m` in place (modified Gram-Schmidt,
/// two passes for stability). Requires rows >= cols and full column rank.
fn orthonormalize_columns(m: &mut ComplexMatrix) {
    let (rows, cols) = (m.rows(), m.cols());
    for j in 0..cols {
        for _pass in 0..2 {
            for i in 0..j {
                let mut overlap = C64::new(0.0, 0.0);
                for r in 0..rows {
                    overlap += m[(r, i)].conj() * m[(r, j)];
                }
                for r in 0..rows {
                    let sub = overlap * m[(r, i)];
                    m[(r, j)] -= sub;
                }
            }
        }
        let norm = (0..rows).map(|r| m[(r, j)].norm_sqr()).sum::<f64>().sqrt();
        for r in 0..rows {
            m[(r, j)] /= norm;
        }
    }
}

/// Haar-random unitary via QR of a complex Gaussian matrix.
pub fn random_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    let mut r = rng(seed);
    let mut m = ComplexMatrix::from_fn(dim, dim, |_, _| gaussian_c64(&mut r));
    orthonormalize_columns(&mut m);
    m
}

/// Random rank-`rank` density matrix: a weighted mixture of Haar pure
/// states with simplex-uniform weights.
pub fn random_density(dim: usize, rank: usize, seed: u64) -> DensityMatrix {
    let rank = rank.clamp(1, dim);
    let mut r = rng(derive_seed(seed, 0));
    // Exponential spacings normalize to a uniform point on the simplex.
    let mut weights: Vec<f64> = (0..rank).map(|_| -(1.0 - r.gen::<f64>()).ln()).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let mut acc = ComplexMatrix::zeros(dim, dim);
    for (i, &w) in weights.iter().enumerate() {
        let psi = random_pure(dim, derive_seed(seed, 1 + i as u64));
        let proj = psi.to_density();
        acc = acc.add(&proj.mat().scale_re(w)).expect("dims agree");
    }
    DensityMatrix::new_unchecked(acc)
}

/// Random channel with `kraus_count` Kraus operators, obtained by slicing a
/// Haar-random isometry `C^dim -> C^(dim*kraus_count)` into blocks.
pub fn random_channel(dim: usize, kraus_count: usize, seed: u64) -> QuantumChannel {
    let kraus_count = kraus_count.max(1);
    let mut r = rng(seed);
    let mut iso = ComplexMatrix::from_fn(dim * kraus_count, dim, |_, _| gaussian_c64(&mut r));
    orthonormalize_columns(&mut iso);
    let kraus: Vec<ComplexMatrix> = (0..kraus_count)
        .map(|b| ComplexMatrix::from_fn(dim, dim, |i, j| iso[(b * dim + i, j)]))
        .collect();
    QuantumChannel::new(kraus).expect("isometry blocks are complete by construction")
}

/// Random ensemble with `size` members of independently drawn rank, and
/// simplex-uniform probabilities.
pub fn random_ensemble(dim: usize, size: usize, seed: u64) -> Ensemble {
    let size = size.max(1);
    let mut r = rng(derive_seed(seed, u64::MAX));
    let mut probs: Vec<f64> = (0..size).map(|_| -(1.0 - r.gen::<f64>()).ln()).collect();
    let total: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= total;
    }
    let states: Vec<DensityMatrix> = (0..size)
        .map(|i| {
            let s = derive_seed(seed, i as u64);
            let rank = 1 + (derive_seed(s, 17) as usize) % dim;
            random_density(dim, rank, s)
        })
        .collect();
    Ensemble::new(states, probs).expect("constructed probabilities are a distribution")
}
