//! Symmetric-subspace codec for m-fold copies of a D-dimensional state.
//!
//! `X^⊗m` always lies in the symmetric subspace Sym(H_D^⊗m), whose dimension
//! is the multiset count `C(m+D-1, D-1)` — polynomial in m rather than
//! exponential. The codec rotates the symmetric component onto
//! `⌈log2 sym_dim⌉` qubits and back, optionally spending an explicit error
//! budget δ on decode. `copies_upper_bound` turns the same count into a
//! description-length bound for m copies, and `haar_average_tensor_power`
//! Monte-Carlo-averages `|X⟩⟨X|^⊗m` over Haar-random X, which converges to
//! the normalized symmetric projector.

use crate::error::{QkcError, Result};
use crate::matrix::{C64, ComplexMatrix};
use crate::random;
use crate::state::{DensityMatrix, PureState, fidelity_pure_mixed};

/// Residual above which an encode input is rejected as not symmetric.
const SYM_RESIDUAL_TOL: f64 = 1e-8;
/// Fixed allowance, in bits, for framing the two length fields carried
/// alongside a copies description (on top of ⌈log2 m⌉ + ⌈log2 l⌉).
pub const COPIES_OVERHEAD_ALLOWANCE_BITS: u32 = 2;
/// Samples per accumulation block in Monte-Carlo averages. Blocks are
/// summed internally in sample order and merged in block order, so the
/// result is bit-identical for every shard count.
const MC_BLOCK: usize = 64;

/// Sorted multiset of `m` symbols drawn from `0..alphabet`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultisetIndex {
    symbols: Vec<usize>,
    alphabet: usize,
}

impl MultisetIndex {
    /// Requires the symbols to be ascending and within the alphabet.
    pub fn new(symbols: Vec<usize>, alphabet: usize) -> Result<Self> {
        if symbols.windows(2).any(|w| w[0] > w[1]) {
            return Err(QkcError::InvalidMultiset(format!("symbols {:?} are not sorted", symbols)));
        }
        if symbols.iter().any(|&s| s >= alphabet) {
            return Err(QkcError::InvalidMultiset(format!(
                "symbols {:?} exceed alphabet size {}",
                symbols, alphabet
            )));
        }
        Ok(Self { symbols, alphabet })
    }

    /// Sorts first, then validates the range.
    pub fn from_unsorted(mut symbols: Vec<usize>, alphabet: usize) -> Result<Self> {
        symbols.sort_unstable();
        Self::new(symbols, alphabet)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    /// Occurrences of each alphabet symbol.
    pub fn counts(&self) -> Vec<usize> {
        let mut c = vec![0usize; self.alphabet];
        for &s in &self.symbols {
            c[s] += 1;
        }
        c
    }

    /// Number of distinct arrangements: m! / Π counts!.
    pub fn permutation_count(&self) -> u128 {
        let mut total: u128 = 1;
        let mut seen = 0u128;
        let mut counts = vec![0u128; self.alphabet];
        // Incremental multinomial: multiply by C(seen, count_of_symbol).
        for &s in &self.symbols {
            seen += 1;
            counts[s] += 1;
            total = total * seen / counts[s];
        }
        total
    }

    /// All distinct arrangements, in lexicographic sequence order.
    pub fn distinct_arrangements(&self) -> Vec<Vec<usize>> {
        let mut counts = self.counts();
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(self.symbols.len());
        fn rec(
            counts: &mut [usize],
            prefix: &mut Vec<usize>,
            remaining: usize,
            out: &mut Vec<Vec<usize>>,
        ) {
            if remaining == 0 {
                out.push(prefix.clone());
                return;
            }
            for s in 0..counts.len() {
                if counts[s] > 0 {
                    counts[s] -= 1;
                    prefix.push(s);
                    rec(counts, prefix, remaining - 1, out);
                    prefix.pop();
                    counts[s] += 1;
                }
            }
        }
        rec(&mut counts, &mut prefix, self.symbols.len(), &mut out);
        out
    }
}

/// Exact dimension of Sym(H_D^⊗m): the multiset count `C(m+D-1, D-1)`.
pub fn sym_dimension(d: usize, m: usize) -> Result<u128> {
    if d == 0 {
        return Err(QkcError::InvalidArgument("alphabet size 0".into()));
    }
    // C(m+d-1, m) computed with exact integer steps.
    let n = (m + d - 1) as u128;
    let k = (m as u128).min((d - 1) as u128);
    let mut c: u128 = 1;
    for i in 1..=k {
        c = c
            .checked_mul(n - k + i)
            .ok_or(QkcError::Overflow("symmetric-subspace dimension"))?
            / i;
    }
    Ok(c)
}

/// All size-`m` multisets over `0..d` in lexicographic order.
pub fn enumerate_multisets(d: usize, m: usize) -> Vec<MultisetIndex> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(m);
    fn rec(d: usize, m: usize, lo: usize, current: &mut Vec<usize>, out: &mut Vec<MultisetIndex>) {
        if current.len() == m {
            out.push(MultisetIndex { symbols: current.clone(), alphabet: d });
            return;
        }
        for s in lo..d {
            current.push(s);
            rec(d, m, s, current, out);
            current.pop();
        }
    }
    rec(d, m, 0, &mut current, &mut out);
    out
}

/// Normalized equal superposition over the distinct arrangements of a
/// multiset, as a vector in `(H_D)^⊗m` (first position most significant).
pub fn sym_basis_state(idx: &MultisetIndex) -> PureState {
    let d = idx.alphabet;
    let m = idx.len();
    let dim = d.pow(m as u32);
    let amp = 1.0 / (idx.permutation_count() as f64).sqrt();
    let mut amps = vec![C64::new(0.0, 0.0); dim];
    for arrangement in idx.distinct_arrangements() {
        let mut flat = 0usize;
        for &s in &arrangement {
            flat = flat * d + s;
        }
        amps[flat] = C64::new(amp, 0.0);
    }
    PureState::new_unchecked(amps)
}

/// Orthogonal projector onto Sym(H_D^⊗m); requires `D^m ≤ 256`.
pub fn sym_projector(d: usize, m: usize) -> Result<ComplexMatrix> {
    let dim = checked_power(d, m)?;
    let mut p = ComplexMatrix::zeros(dim, dim);
    for idx in enumerate_multisets(d, m) {
        let v = sym_basis_state(&idx);
        for i in 0..dim {
            if v.amps()[i].norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..dim {
                p[(i, j)] += v.amps()[i] * v.amps()[j].conj();
            }
        }
    }
    Ok(p)
}

fn checked_power(d: usize, m: usize) -> Result<usize> {
    let dim = d.checked_pow(m as u32).unwrap_or(usize::MAX);
    if dim > 256 {
        return Err(QkcError::SizeLimit(format!("product dimension {}^{} exceeds 256", d, m)));
    }
    Ok(dim)
}

fn ceil_log2(n: u128) -> u32 {
    if n <= 1 { 0 } else { 128 - (n - 1).leading_zeros() }
}

/// Rotation between the symmetric subspace of `(H_D)^⊗m` and a register of
/// `⌈log2 sym_dim⌉` qubits. The i-th multiset basis vector (lexicographic)
/// maps to the i-th computational basis state.
#[derive(Clone, Debug)]
pub struct SymmetricCodec {
    d: usize,
    m: usize,
    sym_dim: usize,
    code_qubits: usize,
    basis: Vec<MultisetIndex>,
    basis_states: Vec<PureState>,
}

/// Decode output: budget-blended joint state, its per-copy reductions, and
/// the amount of input mass that lay outside the code range.
#[derive(Clone, Debug)]
pub struct DecodedCopies {
    pub joint: DensityMatrix,
    pub copies: Vec<DensityMatrix>,
    /// ℓ2 mass of codeword components beyond `sym_dim`; zero for proper
    /// codewords. Decoding is best-effort when this is nonzero.
    pub improper_residual: f64,
}

impl SymmetricCodec {
    pub fn new(d: usize, m: usize) -> Result<Self> {
        checked_power(d, m)?;
        let sym_dim = sym_dimension(d, m)? as usize;
        let basis = enumerate_multisets(d, m);
        debug_assert_eq!(basis.len(), sym_dim);
        let basis_states = basis.iter().map(sym_basis_state).collect();
        Ok(Self { d, m, sym_dim, code_qubits: ceil_log2(sym_dim as u128) as usize, basis, basis_states })
    }

    pub fn letter_dim(&self) -> usize {
        self.d
    }

    pub fn copies(&self) -> usize {
        self.m
    }

    pub fn sym_dim(&self) -> usize {
        self.sym_dim
    }

    /// Qubits in the code register: `⌈log2 sym_dim⌉`.
    pub fn code_qubits(&self) -> usize {
        self.code_qubits
    }

    pub fn basis(&self) -> &[MultisetIndex] {
        &self.basis
    }

    pub fn code_dim(&self) -> usize {
        1usize << self.code_qubits
    }

    /// The rotation as an explicit `(2^q × D^m)` matrix; its adjoint times
    /// itself is the symmetric projector.
    pub fn isometry(&self) -> ComplexMatrix {
        let dim = self.d.pow(self.m as u32);
        let mut r = ComplexMatrix::zeros(self.code_dim(), dim);
        for (i, b) in self.basis_states.iter().enumerate() {
            for j in 0..dim {
                r[(i, j)] = b.amps()[j].conj();
            }
        }
        r
    }

    /// Rotates a symmetric state into the code register.
    ///
    /// Rejects inputs whose component outside Sym exceeds 1e-8 in norm.
    pub fn encode_copies(&self, psi: &PureState) -> Result<PureState> {
        let dim = self.d.pow(self.m as u32);
        if psi.dim() != dim {
            return Err(QkcError::DimensionMismatch(format!(
                "encode input dim {} vs expected {}",
                psi.dim(),
                dim
            )));
        }
        let coeffs: Vec<C64> = self
            .basis_states
            .iter()
            .map(|b| b.inner(psi).expect("dims match"))
            .collect();
        // Residual ‖ψ - Pψ‖ measured componentwise; the scalar form
        // √(1 - Σ|c|²) would sit at the machine-epsilon floor (~1e-8)
        // even for exactly symmetric inputs.
        let mut projected = vec![C64::new(0.0, 0.0); dim];
        for (c, b) in coeffs.iter().zip(&self.basis_states) {
            if c.norm_sqr() == 0.0 {
                continue;
            }
            for (p, a) in projected.iter_mut().zip(b.amps()) {
                *p += c * a;
            }
        }
        let residual: f64 = projected
            .iter()
            .zip(psi.amps())
            .map(|(p, a)| (p - a).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if residual > SYM_RESIDUAL_TOL {
            return Err(QkcError::NotSymmetric(residual));
        }
        let norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let mut amps = vec![C64::new(0.0, 0.0); self.code_dim()];
        for (i, c) in coeffs.into_iter().enumerate() {
            amps[i] = c / norm;
        }
        Ok(PureState::new_unchecked(amps))
    }

    /// Inverse rotation plus an explicit error budget.
    ///
    /// With `delta = 0` the decode is exact on proper codewords. With
    /// `delta > 0` the result is blended with the maximally mixed state at
    /// weight `delta`, so every per-copy reduction keeps fidelity at least
    /// `√(1-delta) ≥ 1-delta` to the original copy. Codeword components
    /// beyond the `sym_dim` range are dropped and flagged, never an error.
    pub fn decode_copies(&self, code: &PureState, delta: f64) -> Result<DecodedCopies> {
        if code.dim() != self.code_dim() {
            return Err(QkcError::DimensionMismatch(format!(
                "codeword dim {} vs code register {}",
                code.dim(),
                self.code_dim()
            )));
        }
        if !(0.0..=1.0).contains(&delta) {
            return Err(QkcError::InvalidArgument(format!("budget {} outside [0,1]", delta)));
        }
        let dim = self.d.pow(self.m as u32);
        let kept: f64 = code.amps()[..self.sym_dim].iter().map(|c| c.norm_sqr()).sum();
        // Summed directly over the out-of-range components so a proper
        // codeword reports exactly zero.
        let improper_residual = code.amps()[self.sym_dim..]
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt();

        let joint = if kept < 1e-12 {
            // Nothing decodable: fall back to the fully mixed state.
            DensityMatrix::maximally_mixed(dim)
        } else {
            let norm = kept.sqrt();
            let mut amps = vec![C64::new(0.0, 0.0); dim];
            for (i, basis_state) in self.basis_states.iter().enumerate() {
                let c = code.amps()[i] / norm;
                if c.norm_sqr() == 0.0 {
                    continue;
                }
                for (a, b) in amps.iter_mut().zip(basis_state.amps()) {
                    *a += c * b;
                }
            }
            let pure = PureState::new_unchecked(amps).to_density();
            pure.blend(&DensityMatrix::maximally_mixed(dim), delta)?
        };

        let dims = vec![self.d; self.m];
        let copies = (0..self.m)
            .map(|i| joint.partial_trace(&dims, &[i]))
            .collect::<Result<Vec<_>>>()?;
        Ok(DecodedCopies { joint, copies, improper_residual })
    }
}

/// Description-length bound for `m` copies of a state that fits in `l`
/// qubits, split into the subspace-index part and the bookkeeping overhead.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CopiesBound {
    /// Letter-space dimension `2^l`.
    pub letter_dim: u64,
    pub copies: u32,
    /// `log2 C(m + 2^l - 1, 2^l - 1)`: bits to index the symmetric subspace.
    pub bound_bits: f64,
    /// `⌈log2 m⌉ + ⌈log2 l⌉ +` a fixed framing allowance, reported
    /// separately from the subspace index.
    pub overhead_bits: u32,
}

/// Bits needed to describe `m` copies of an `l`-qubit state, up to the
/// reported additive overhead. Capped at `l ≤ 12`, `m ≤ 64`.
pub fn copies_upper_bound(l_qubits: u32, m: u32) -> Result<CopiesBound> {
    if l_qubits == 0 || l_qubits > 12 {
        return Err(QkcError::Overflow("copies bound: l outside 1..=12"));
    }
    if m == 0 || m > 64 {
        return Err(QkcError::Overflow("copies bound: m outside 1..=64"));
    }
    let d = 1u64 << l_qubits;
    // log2 C(m + d - 1, d - 1) = Σ_{j=1..m} log2((d - 1 + j) / j); the sum
    // form never overflows even where the binomial itself would.
    let bound_bits: f64 = (1..=m as u64)
        .map(|j| (((d - 1 + j) as f64) / j as f64).log2())
        .sum();
    let overhead_bits = ceil_log2(m as u128)
        + ceil_log2(l_qubits as u128)
        + COPIES_OVERHEAD_ALLOWANCE_BITS;
    Ok(CopiesBound { letter_dim: d, copies: m, bound_bits, overhead_bits })
}

/// Monte-Carlo average of `|X⟩⟨X|^⊗m` over Haar-random `X` in dimension
/// `d`, using `samples` draws from `seed`.
///
/// Sample `i` is generated from `derive_seed(seed, i)` and samples are
/// accumulated in fixed 64-sample blocks merged in block order, so the
/// result is bit-identical for every `shards` value. Requires `d^m ≤ 64`.
pub fn haar_average_tensor_power(
    d: usize,
    m: usize,
    samples: usize,
    seed: u64,
    shards: usize,
) -> Result<ComplexMatrix> {
    let dim = d.checked_pow(m as u32).unwrap_or(usize::MAX);
    if dim > 64 {
        return Err(QkcError::SizeLimit(format!(
            "Monte-Carlo average dimension {}^{} exceeds 64",
            d, m
        )));
    }
    if samples == 0 {
        return Err(QkcError::InvalidArgument("zero Monte-Carlo samples".into()));
    }
    let blocks = samples.div_ceil(MC_BLOCK);
    let shards = shards.clamp(1, blocks);

    let block_sum = |b: usize| -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(dim, dim);
        let lo = b * MC_BLOCK;
        let hi = ((b + 1) * MC_BLOCK).min(samples);
        for i in lo..hi {
            let x = random::random_pure(d, random::derive_seed(seed, i as u64));
            let power = x.tensor_power(m);
            for r in 0..dim {
                let a = power.amps()[r];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..dim {
                    acc[(r, c)] += a * power.amps()[c].conj();
                }
            }
        }
        acc
    };

    let mut partials: Vec<Option<ComplexMatrix>> = vec![None; blocks];
    if shards == 1 {
        for (b, slot) in partials.iter_mut().enumerate() {
            *slot = Some(block_sum(b));
        }
    } else {
        let results: Vec<Vec<(usize, ComplexMatrix)>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..shards)
                .map(|w| {
                    let block_sum = &block_sum;
                    scope.spawn(move || {
                        (w..blocks).step_by(shards).map(|b| (b, block_sum(b))).collect()
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        for worker in results {
            for (b, sum) in worker {
                partials[b] = Some(sum);
            }
        }
    }

    let mut total = ComplexMatrix::zeros(dim, dim);
    for p in partials {
        total = total.add(&p.expect("all blocks computed"))?;
    }
    Ok(total.scale_re(1.0 / samples as f64))
}

/// Outcome of the budgeted encode/decode/consume pipeline for `m` copies
/// at quality parameter `k`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CopiesPipelineReport {
    pub k: u32,
    pub m: usize,
    /// Budget spent at each of the two lossy stages: `1/(4km)`.
    pub delta: f64,
    pub per_copy_fidelity: Vec<f64>,
    pub per_copy_target: f64,
    pub total_fidelity: f64,
    pub total_target: f64,
    pub meets_budget: bool,
}

/// Runs `X^⊗m` through the codec with the two-stage budget schedule
/// `δ = 1/(4km)` (decode, then a second consumer-side blend). Each copy
/// then holds fidelity at least `1 - 1/(km)`, and the tensor product of
/// the recovered copies holds `F ≥ (1-1/(km))^m ≥ 1-1/k` to `X^⊗m`.
pub fn copies_pipeline(x: &PureState, m: usize, k: u32) -> Result<CopiesPipelineReport> {
    if k == 0 || m == 0 {
        return Err(QkcError::InvalidArgument("copies pipeline needs k ≥ 1 and m ≥ 1".into()));
    }
    let d = x.dim();
    let codec = SymmetricCodec::new(d, m)?;
    let product = x.tensor_power(m);
    let code = codec.encode_copies(&product)?;
    let delta = 1.0 / (4.0 * k as f64 * m as f64);
    let decoded = codec.decode_copies(&code, delta)?;

    let mixed = DensityMatrix::maximally_mixed(d);
    let mut per_copy_fidelity = Vec::with_capacity(m);
    let mut recovered: Option<DensityMatrix> = None;
    for copy in &decoded.copies {
        let consumed = copy.blend(&mixed, delta)?;
        per_copy_fidelity.push(fidelity_pure_mixed(x, &consumed)?);
        recovered = Some(match recovered {
            None => consumed,
            Some(acc) => acc.tensor(&consumed),
        });
    }
    let recovered = recovered.expect("m ≥ 1");
    let total_fidelity = fidelity_pure_mixed(&product, &recovered)?;

    let per_copy_target = 1.0 - 1.0 / (k as f64 * m as f64);
    let total_target = 1.0 - 1.0 / k as f64;
    let meets_budget = per_copy_fidelity.iter().all(|&f| f >= per_copy_target - 1e-12)
        && total_fidelity >= total_target - 1e-12;
    Ok(CopiesPipelineReport {
        k,
        m,
        delta,
        per_copy_fidelity,
        per_copy_target,
        total_fidelity,
        total_target,
        meets_budget,
    })
}
