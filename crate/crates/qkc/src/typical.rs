//! Typical-subspace block compression for product states.
//!
//! A length-n block over a d-dimensional letter space compresses onto the
//! eigenvectors of `ρ^⊗n` whose eigenvalue p sits in the two-sided window
//! `|−(1/n)log2 p − S(ρ)| ≤ δ`. The codec is source-aware: the projector is
//! built in ρ's eigenbasis. Universality enters only through the additive
//! penalty in [`universal_length_bound`]; basis-independent coding is out of
//! scope. Block dimension `d^n` is capped at 256 so every oracle stays an
//! exact enumeration.

use crate::error::{QkcError, Result};
use crate::matrix::{C64, ComplexMatrix};
use crate::state::{DensityMatrix, PureState, entropy_bits};

/// Projected mass below which an encode is rejected outright.
const ZERO_MASS_TOL: f64 = 1e-12;
const BLOCK_DIM_LIMIT: usize = 256;

/// A fitted typical-subspace code for one (source, n, δ) triple.
///
/// Carries the rotation between the typical subspace and a
/// `code_qubits`-qubit register so codewords can be decoded later.
#[derive(Clone, Debug)]
pub struct TypicalCode {
    pub letter_dim: usize,
    pub block_len: usize,
    /// Source entropy S(ρ) in bits.
    pub entropy_bound: f64,
    pub delta: f64,
    pub projector_rank: usize,
    /// `⌈log2 projector_rank⌉`; never exceeds `⌈n(S+δ)⌉`.
    pub code_qubits: usize,
    /// Round-trip fidelity recorded at encode time: √(projected mass).
    pub achieved_fidelity: f64,
    /// tr(P ρ^⊗n): source probability trapped by the window.
    typical_mass: f64,
    /// Typical eigenvalue tuples, lexicographic; entry i is code basis i.
    tuples: Vec<Vec<usize>>,
    /// Eigenvectors of the source, columns in descending-eigenvalue order.
    letter_basis: ComplexMatrix,
}

struct Window {
    basis: ComplexMatrix,
    entropy: f64,
    tuples: Vec<Vec<usize>>,
    mass: f64,
}

fn checked_block_dim(d: usize, n: usize) -> Result<usize> {
    let dim = d.checked_pow(n as u32).unwrap_or(usize::MAX);
    if dim > BLOCK_DIM_LIMIT {
        return Err(QkcError::SizeLimit(format!(
            "block dimension {}^{} exceeds {}",
            d, n, BLOCK_DIM_LIMIT
        )));
    }
    Ok(dim)
}

/// Enumerates the δ-typical eigenvalue tuples of `rho^⊗n` in lexicographic
/// order, together with their trapped source mass.
fn typical_window(rho: &DensityMatrix, n: usize, delta: f64) -> Result<Window> {
    let d = rho.dim();
    checked_block_dim(d, n)?;
    let eig = rho.mat().hermitian_eig()?;
    let entropy = entropy_bits(&eig.values);
    let log_p: Vec<Option<f64>> =
        eig.values.iter().map(|&p| if p > 0.0 { Some(p.log2()) } else { None }).collect();

    let mut tuples = Vec::new();
    let mut mass = 0.0;
    let mut tuple = vec![0usize; n];
    'outer: loop {
        let mut log_total = 0.0;
        let mut supported = true;
        for &e in &tuple {
            match log_p[e] {
                Some(l) => log_total += l,
                None => {
                    supported = false;
                    break;
                }
            }
        }
        if supported && (-log_total / n as f64 - entropy).abs() <= delta {
            tuples.push(tuple.clone());
            mass += log_total.exp2();
        }
        // Lexicographic increment, last digit fastest.
        for i in (0..n).rev() {
            tuple[i] += 1;
            if tuple[i] < d {
                continue 'outer;
            }
            tuple[i] = 0;
        }
        break;
    }
    Ok(Window { basis: eig.vectors, entropy, tuples, mass })
}

/// Product eigenvector ⊗_j basis[:, t_j] as a block-space vector.
fn product_eigenvector(basis: &ComplexMatrix, tuple: &[usize]) -> Vec<C64> {
    let d = basis.rows();
    let mut v = vec![C64::new(1.0, 0.0)];
    for &e in tuple {
        let mut next = Vec::with_capacity(v.len() * d);
        for a in &v {
            for r in 0..d {
                next.push(a * basis[(r, e)]);
            }
        }
        v = next;
    }
    v
}

fn ceil_log2(n: usize) -> usize {
    if n <= 1 { 0 } else { (usize::BITS - (n - 1).leading_zeros()) as usize }
}

/// Projector onto the δ-typical eigenvectors of `rho^⊗n`. Requires
/// `d^n ≤ 256`; Hermitian and idempotent by construction.
pub fn typical_projector(rho: &DensityMatrix, n: usize, delta: f64) -> Result<ComplexMatrix> {
    let dim = checked_block_dim(rho.dim(), n)?;
    let window = typical_window(rho, n, delta)?;
    let mut p = ComplexMatrix::zeros(dim, dim);
    for tuple in &window.tuples {
        let v = product_eigenvector(&window.basis, tuple);
        for i in 0..dim {
            if v[i].norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..dim {
                p[(i, j)] += v[i] * v[j].conj();
            }
        }
    }
    Ok(p)
}

/// Probability mass of `rho^⊗n` inside the δ-typical window.
pub fn typical_mass(rho: &DensityMatrix, n: usize, delta: f64) -> Result<f64> {
    Ok(typical_window(rho, n, delta)?.mass)
}

/// Compresses a block of letters against a promised source state.
///
/// Projects ⊗letters onto the typical subspace of `rho_bound^⊗n`,
/// renormalizes, and rotates into `⌈log2 rank⌉` qubits. The recorded
/// fidelity √(projected mass) is exactly what a later exact decode attains.
/// Rejects blocks whose typical component has mass below 1e-12.
pub fn schumacher_encode(
    letters: &[PureState],
    rho_bound: &DensityMatrix,
    delta: f64,
) -> Result<(DensityMatrix, TypicalCode)> {
    if letters.is_empty() {
        return Err(QkcError::InvalidArgument("empty letter block".into()));
    }
    let d = rho_bound.dim();
    if letters.iter().any(|l| l.dim() != d) {
        return Err(QkcError::DimensionMismatch(format!(
            "letters must match the source dimension {}",
            d
        )));
    }
    let n = letters.len();
    checked_block_dim(d, n)?;
    let window = typical_window(rho_bound, n, delta)?;

    // ⟨e | letter_j⟩ for every eigenvector e: tuple coefficients are
    // products of these, no block-space vectors needed.
    let mut overlaps = vec![vec![C64::new(0.0, 0.0); d]; n];
    for (j, letter) in letters.iter().enumerate() {
        for e in 0..d {
            let mut ip = C64::new(0.0, 0.0);
            for r in 0..d {
                ip += window.basis[(r, e)].conj() * letter.amps()[r];
            }
            overlaps[j][e] = ip;
        }
    }
    let coeffs: Vec<C64> = window
        .tuples
        .iter()
        .map(|tuple| {
            tuple
                .iter()
                .enumerate()
                .fold(C64::new(1.0, 0.0), |acc, (j, &e)| acc * overlaps[j][e])
        })
        .collect();
    let mass: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    if mass < ZERO_MASS_TOL {
        return Err(QkcError::ZeroProjection(mass));
    }

    let rank = window.tuples.len();
    let code_qubits = ceil_log2(rank);
    let norm = mass.sqrt();
    let mut amps = vec![C64::new(0.0, 0.0); 1usize << code_qubits];
    for (i, c) in coeffs.into_iter().enumerate() {
        amps[i] = c / norm;
    }
    let codeword = PureState::new_unchecked(amps).to_density();
    let code = TypicalCode {
        letter_dim: d,
        block_len: n,
        entropy_bound: window.entropy,
        delta,
        projector_rank: rank,
        code_qubits,
        achieved_fidelity: norm,
        typical_mass: window.mass,
        tuples: window.tuples,
        letter_basis: window.basis,
    };
    Ok((codeword, code))
}

impl TypicalCode {
    /// tr(P ρ^⊗n) for the fitted window.
    pub fn typical_mass(&self) -> f64 {
        self.typical_mass
    }

    pub fn code_dim(&self) -> usize {
        1usize << self.code_qubits
    }

    pub fn block_dim(&self) -> usize {
        self.letter_dim.pow(self.block_len as u32)
    }
}

/// Inverse rotation: embeds a codeword back into `(H_d)^⊗n`.
///
/// Code-register components beyond the subspace rank carry no block-space
/// meaning and are dropped, with the result renormalized; a codeword with
/// no decodable mass falls back to the maximally mixed block state.
pub fn schumacher_decode(codeword: &DensityMatrix, code: &TypicalCode) -> Result<DensityMatrix> {
    if codeword.dim() != code.code_dim() {
        return Err(QkcError::DimensionMismatch(format!(
            "codeword dim {} vs code register {}",
            codeword.dim(),
            code.code_dim()
        )));
    }
    let dim = code.block_dim();
    let basis: Vec<Vec<C64>> = code
        .tuples
        .iter()
        .map(|t| product_eigenvector(&code.letter_basis, t))
        .collect();

    let mut out = ComplexMatrix::zeros(dim, dim);
    for (a, va) in basis.iter().enumerate() {
        for (b, vb) in basis.iter().enumerate() {
            let w = codeword.mat()[(a, b)];
            if w.norm_sqr() == 0.0 {
                continue;
            }
            for i in 0..dim {
                if va[i].norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..dim {
                    out[(i, j)] += w * va[i] * vb[j].conj();
                }
            }
        }
    }
    let trace = out.trace().re;
    if trace < ZERO_MASS_TOL {
        return Ok(DensityMatrix::maximally_mixed(dim));
    }
    DensityMatrix::new(out.scale_re(1.0 / trace))
}

/// Qubits per letter sufficient for block coding with a universal code:
/// `S + δ + d²·log2(n+1)/n`.
pub fn universal_length_bound(s: f64, delta: f64, d: usize, n: usize) -> f64 {
    s + delta + (d * d) as f64 * ((n + 1) as f64).log2() / n as f64
}

/// One row of the compression-vs-bound accounting for a letter block.
#[derive(Clone, Debug, serde::Serialize)]
pub struct EntropyBoundReport {
    pub n: usize,
    #[serde(rename = "S")]
    pub entropy: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub rank: usize,
    pub code_qubits: usize,
    /// `n ·` [`universal_length_bound`]: total qubits the universal code
    /// would spend on this block.
    pub bound_qubits: f64,
    pub fidelity: f64,
    pub meets_epsilon: bool,
}

/// Compresses the block against its own empirical average
/// `ρ = (1/n)Σ|φ_i⟩⟨φ_i|` and compares the achieved register size and
/// fidelity with the universal length bound and the target `1−ε`.
pub fn qc_entropy_bound_report(
    letters: &[PureState],
    epsilon: f64,
    delta: f64,
) -> Result<EntropyBoundReport> {
    if letters.is_empty() {
        return Err(QkcError::InvalidArgument("empty letter block".into()));
    }
    let d = letters[0].dim();
    let n = letters.len();
    let mut avg = ComplexMatrix::zeros(d, d);
    for letter in letters {
        for i in 0..d {
            for j in 0..d {
                avg[(i, j)] += letter.amps()[i] * letter.amps()[j].conj();
            }
        }
    }
    let rho = DensityMatrix::new(avg.scale_re(1.0 / n as f64))?;
    let s = rho.von_neumann_entropy();
    let (_, code) = schumacher_encode(letters, &rho, delta)?;
    let fidelity = code.achieved_fidelity;
    Ok(EntropyBoundReport {
        n,
        entropy: s,
        delta,
        epsilon,
        rank: code.projector_rank,
        code_qubits: code.code_qubits,
        bound_qubits: n as f64 * universal_length_bound(s, delta, d, n),
        fidelity,
        meets_epsilon: fidelity >= 1.0 - epsilon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use crate::state::fidelity_pure_mixed;

    fn source(p: f64) -> DensityMatrix {
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(0, 0)] = C64::new(p, 0.0);
        m[(1, 1)] = C64::new(1.0 - p, 0.0);
        DensityMatrix::new(m).unwrap()
    }

    /// Independent oracle: per-type letter cost and binomial mass for a
    /// two-level source, no shared code with the implementation.
    fn binomial_window(p: f64, n: usize, delta: f64) -> (usize, f64) {
        let s = -p * p.log2() - (1.0 - p) * (1.0 - p).log2();
        let mut rank = 0usize;
        let mut mass = 0.0;
        for j in 0..=n {
            let cost =
                (-((n - j) as f64) * p.log2() - j as f64 * (1.0 - p).log2()) / n as f64;
            if (cost - s).abs() <= delta {
                let binom: f64 = (1..=j).map(|i| (n - j + i) as f64 / i as f64).product();
                rank += binom as usize;
                mass += binom * p.powi((n - j) as i32) * (1.0 - p).powi(j as i32);
            }
        }
        (rank, mass)
    }

    #[test]
    fn pure_source_has_rank_one() {
        let rho = PureState::plus().to_density();
        let p = typical_projector(&rho, 3, 0.1).unwrap();
        assert!((p.trace().re - 1.0).abs() < 1e-9);
    }

    #[test]
    fn flat_source_traps_everything() {
        let rho = DensityMatrix::maximally_mixed(2);
        let p = typical_projector(&rho, 3, 0.0).unwrap();
        assert!(p.max_abs_diff(&ComplexMatrix::identity(8)).unwrap() < 1e-9);
        assert!((typical_mass(&rho, 3, 0.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn skewed_source_window_matches_binomial_oracle() {
        let rho = source(0.9);
        let (rank, mass) = binomial_window(0.9, 8, 0.2);
        assert_eq!(rank, 8); // only the one-excitation type is in window
        assert!((mass - 0.38263752).abs() < 1e-8);

        let p = typical_projector(&rho, 8, 0.2).unwrap();
        assert!((p.trace().re - rank as f64).abs() < 1e-9);
        assert!((typical_mass(&rho, 8, 0.2).unwrap() - mass).abs() < 1e-12);
    }

    #[test]
    fn projector_is_hermitian_idempotent_and_commutes() {
        let rho = source(0.8);
        let p = typical_projector(&rho, 4, 0.5).unwrap();
        assert!(p.max_abs_diff(&p.adjoint()).unwrap() < 1e-12);
        assert!(p.mul(&p).unwrap().max_abs_diff(&p).unwrap() < 1e-10);
        let power = rho.tensor_power(4);
        let pr = p.mul(power.mat()).unwrap();
        let rp = power.mat().mul(&p).unwrap();
        assert!(pr.max_abs_diff(&rp).unwrap() < 1e-9);
    }

    #[test]
    fn trapped_mass_grows_with_block_length() {
        // Frozen instance: p=0.8, delta=0.5 keeps types j ≤ n/4.
        let rho = source(0.8);
        let masses: Vec<f64> =
            [4, 6, 8].iter().map(|&n| typical_mass(&rho, n, 0.5).unwrap()).collect();
        assert!((masses[0] - 0.8192).abs() < 1e-10);
        assert!((masses[1] - 0.90112).abs() < 1e-10);
        assert!((masses[2] - 0.9437184).abs() < 1e-10);
        assert!(masses.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn eigenstate_letters_encode_losslessly_inside_window() {
        // All-dominant block: type cost 0.152 bits vs S=0.469, inside δ=0.4.
        let rho = source(0.9);
        let letters = vec![PureState::basis(2, 0); 4];
        let (_, code) = schumacher_encode(&letters, &rho, 0.4).unwrap();
        assert!((code.achieved_fidelity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn type_membership_decides_all_or_nothing() {
        let rho = source(0.9);
        let mut letters = vec![PureState::basis(2, 0); 7];
        letters.push(PureState::basis(2, 1));
        // (7,1) type cost 0.548 bits: inside δ=0.2, outside δ=0.05.
        let (_, code) = schumacher_encode(&letters, &rho, 0.2).unwrap();
        assert!((code.achieved_fidelity - 1.0).abs() < 1e-12);
        assert_eq!(code.code_qubits, 3);
        match schumacher_encode(&letters, &rho, 0.05) {
            Err(QkcError::ZeroProjection(m)) => assert!(m < 1e-12),
            other => panic!("expected ZeroProjection, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn recorded_fidelity_is_root_of_projected_mass() {
        let rho = source(0.85);
        let letters: Vec<PureState> =
            (0..4).map(|i| random::random_pure(2, random::derive_seed(900, i))).collect();
        let (_, code) = schumacher_encode(&letters, &rho, 0.8).unwrap();

        // Oracle: quadratic form of the projector on the product state.
        let mut product = letters[0].clone();
        for l in &letters[1..] {
            product = product.tensor(l);
        }
        let p = typical_projector(&rho, 4, 0.8).unwrap();
        let mut mass = 0.0;
        for i in 0..product.dim() {
            for j in 0..product.dim() {
                mass += (product.amps()[i].conj() * p[(i, j)] * product.amps()[j]).re;
            }
        }
        assert!((code.achieved_fidelity - mass.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn roundtrip_matches_recorded_fidelity() {
        let rho = source(0.9);
        for (letters, delta) in [
            (vec![PureState::basis(2, 0); 4], 0.4),
            (
                (0..4)
                    .map(|i| random::random_pure(2, random::derive_seed(901, i)))
                    .collect::<Vec<_>>(),
                0.9,
            ),
        ] {
            let (codeword, code) = schumacher_encode(&letters, &rho, delta).unwrap();
            let decoded = schumacher_decode(&codeword, &code).unwrap();
            let mut product = letters[0].clone();
            for l in &letters[1..] {
                product = product.tensor(l);
            }
            let f = fidelity_pure_mixed(&product, &decoded).unwrap();
            assert!(
                (f - code.achieved_fidelity).abs() < 1e-8,
                "roundtrip {} vs recorded {}",
                f,
                code.achieved_fidelity
            );
        }
    }

    #[test]
    fn perturbed_decode_obeys_composition_bound() {
        let rho = source(0.9);
        let letters: Vec<PureState> =
            (0..4).map(|i| random::random_pure(2, random::derive_seed(902, i))).collect();
        let (codeword, code) = schumacher_encode(&letters, &rho, 0.9).unwrap();
        let decoded = schumacher_decode(&codeword, &code).unwrap();
        let mut product = letters[0].clone();
        for l in &letters[1..] {
            product = product.tensor(l);
        }
        for delta_prime in [0.01, 0.05, 0.2] {
            let perturbed =
                decoded.blend(&DensityMatrix::maximally_mixed(decoded.dim()), delta_prime).unwrap();
            let f = fidelity_pure_mixed(&product, &perturbed).unwrap();
            let floor = 1.0 - 2.0 * delta_prime - 2.0 * (1.0 - code.achieved_fidelity);
            assert!(f >= floor - 1e-12, "F {} below composition floor {}", f, floor);
        }
    }

    #[test]
    fn length_bound_evaluates_and_vanishes() {
        assert!((universal_length_bound(0.0, 0.0, 2, 1) - 4.0).abs() < 1e-12);
        assert!((universal_length_bound(1.0, 0.1, 2, 8) - 2.6849625007211563).abs() < 1e-12);
        let tail = universal_length_bound(0.7, 0.05, 2, 1_000_000);
        assert!((tail - 0.75).abs() < 1e-4);
    }

    #[test]
    fn code_register_never_beats_the_window_budget() {
        for (p, n, delta) in [(0.9, 8, 0.2), (0.8, 6, 0.5), (0.7, 4, 0.3), (0.6, 8, 0.1)] {
            let rho = source(p);
            let window = typical_window(&rho, n, delta).unwrap();
            if window.tuples.is_empty() {
                continue;
            }
            let rank = window.tuples.len();
            let code_qubits = ceil_log2(rank);
            let s = window.entropy;
            assert!(
                code_qubits as f64 <= (n as f64 * (s + delta)).ceil(),
                "p={} n={} delta={}: {} qubits vs window {}",
                p,
                n,
                delta,
                code_qubits,
                (n as f64 * (s + delta)).ceil()
            );
            assert!(
                code_qubits as f64 <= (n as f64 * universal_length_bound(s, delta, 2, n)).ceil()
            );
        }
    }

    #[test]
    fn entropy_report_on_flat_and_skewed_blocks() {
        // Alternating |0>,|1>: average is I/2, nothing compresses.
        let mut letters = Vec::new();
        for i in 0..6 {
            letters.push(PureState::basis(2, i % 2));
        }
        let report = qc_entropy_bound_report(&letters, 0.1, 0.0).unwrap();
        assert!((report.entropy - 1.0).abs() < 1e-12);
        assert_eq!(report.code_qubits, 6);
        assert!(report.meets_epsilon);

        // Identical letters: zero entropy, single-basis-vector code.
        let report = qc_entropy_bound_report(&vec![PureState::plus(); 5], 0.1, 0.1).unwrap();
        assert!(report.entropy.abs() < 1e-9);
        assert_eq!(report.rank, 1);
        assert_eq!(report.code_qubits, 0);
        assert!((report.fidelity - 1.0).abs() < 1e-9);
    }

    #[test]
    fn entropy_report_skewed_block_against_oracle() {
        let mut letters = vec![PureState::basis(2, 0); 7];
        letters.push(PureState::basis(2, 1));
        // Average is diag(7/8, 1/8); its (7,1) type sits at the window
        // center (type cost = source entropy), so the block itself is
        // fully typical even though the source traps far less on average.
        let report = qc_entropy_bound_report(&letters, 0.7, 0.2).unwrap();
        let (rank, mass) = binomial_window(7.0 / 8.0, 8, 0.2);
        assert_eq!(report.rank, rank);
        assert!((report.fidelity - 1.0).abs() < 1e-9);
        let rho = source(7.0 / 8.0);
        assert!((typical_mass(&rho, 8, 0.2).unwrap() - mass).abs() < 1e-10);
        assert!(report.code_qubits as f64 <= report.bound_qubits);
        assert!(report.meets_epsilon);
    }

    #[test]
    fn oversized_blocks_are_rejected() {
        let rho = source(0.9);
        assert!(matches!(typical_projector(&rho, 9, 0.2), Err(QkcError::SizeLimit(_))));
        let letters = vec![PureState::basis(2, 0); 9];
        assert!(matches!(schumacher_encode(&letters, &rho, 0.2), Err(QkcError::SizeLimit(_))));
    }

    #[test]
    fn decode_rejects_wrong_register_and_handles_dead_codeword() {
        let rho = source(0.9);
        let letters = vec![PureState::basis(2, 0); 4];
        let (_, code) = schumacher_encode(&letters, &rho, 0.4).unwrap();
        let wrong = DensityMatrix::maximally_mixed(code.code_dim() * 2);
        assert!(schumacher_decode(&wrong, &code).is_err());
    }
}
