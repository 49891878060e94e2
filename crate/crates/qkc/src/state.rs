//! Quantum state types and the information quantities computed on them.
//!
//! Conventions fixed here and relied on everywhere else:
//! * fidelity is the *unsquared* overlap `F(ρ,σ) = tr √(√ρ σ √ρ)`, which
//!   reduces to `|⟨φ|ψ⟩|` on pure states;
//! * entropies are in bits (log base 2) with `0·log 0 = 0`;
//! * validated constructors enforce Hermiticity/trace/norm tolerances, and
//!   `new_unchecked` variants exist for values already valid by
//!   construction.

use crate::error::{QkcError, Result};
use crate::matrix::{C64, ComplexMatrix};

const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
const EIG_FLOOR: f64 = -1e-10;
const NORM_TOL: f64 = 1e-10;
const PROB_SUM_TOL: f64 = 1e-10;
const KRAUS_COMPLETENESS_TOL: f64 = 1e-8;

/// Unit-norm state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amps: Vec<C64>,
}

impl PureState {
    /// Validates unit norm within 1e-10.
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(QkcError::InvalidState("state vector is empty".into()));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(QkcError::InvalidState(format!(
                "state vector norm {} is not 1 within {:e}",
                norm, NORM_TOL
            )));
        }
        Ok(Self { amps })
    }

    /// Caller guarantees unit norm.
    pub fn new_unchecked(amps: Vec<C64>) -> Self {
        Self { amps }
    }

    /// Computational basis state `|index⟩` in `dim` dimensions.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Self { amps }
    }

    /// `(|0⟩ + |1⟩)/√2`.
    pub fn plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self { amps: vec![C64::new(h, 0.0), C64::new(h, 0.0)] }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(QkcError::DimensionMismatch(format!(
                "inner product between dims {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        PureState { amps }
    }

    pub fn tensor_power(&self, n: usize) -> PureState {
        let mut out = PureState { amps: vec![C64::new(1.0, 0.0)] };
        for _ in 0..n {
            out = out.tensor(self);
        }
        out
    }

    pub fn to_density(&self) -> DensityMatrix {
        let d = self.dim();
        let mat = ComplexMatrix::from_fn(d, d, |i, j| self.amps[i] * self.amps[j].conj());
        DensityMatrix { dim: d, mat }
    }
}

/// Trace-one positive semidefinite operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity (1e-10), unit trace (1e-10), and an eigenvalue
    /// floor of -1e-10.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(QkcError::InvalidState(format!(
                "density matrix must be square, got {}x{}",
                mat.rows(),
                mat.cols()
            )));
        }
        let asym = mat.hermitian_asymmetry();
        if asym > HERMITIAN_TOL {
            return Err(QkcError::NotHermitian(asym));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(QkcError::InvalidState(format!(
                "trace {} is not 1 within {:e}",
                tr, TRACE_TOL
            )));
        }
        let eig = mat.hermitian_eig()?;
        if let Some(&min) = eig.values.last() {
            if min < EIG_FLOOR {
                return Err(QkcError::NotPsd(min));
            }
        }
        Ok(Self { dim: mat.rows(), mat })
    }

    /// Caller guarantees validity (e.g. output of an operation that
    /// preserves it).
    pub fn new_unchecked(mat: ComplexMatrix) -> Self {
        Self { dim: mat.rows(), mat }
    }

    pub fn pure(psi: &PureState) -> Self {
        psi.to_density()
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { dim, mat: ComplexMatrix::identity(dim).scale_re(1.0 / dim as f64) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    /// Spectrum sorted descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.mat
            .hermitian_eig()
            .expect("density matrix is Hermitian by construction")
            .values
    }

    /// `S(ρ) = -Σ λ log2 λ` over the spectrum, in bits.
    pub fn von_neumann_entropy(&self) -> f64 {
        entropy_bits(&self.eigenvalues())
    }

    /// `tr(ρ²)`; equals 1 exactly for pure states.
    pub fn purity(&self) -> f64 {
        self.mat.data().iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        (self.purity() - 1.0).abs() <= tol
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix::new_unchecked(self.mat.tensor(&other.mat))
    }

    pub fn tensor_power(&self, n: usize) -> DensityMatrix {
        let mut out = DensityMatrix::new_unchecked(ComplexMatrix::identity(1));
        for _ in 0..n {
            out = out.tensor(self);
        }
        out
    }

    /// Convex combination `(1-w)·self + w·other`.
    pub fn blend(&self, other: &DensityMatrix, w: f64) -> Result<DensityMatrix> {
        if self.dim != other.dim {
            return Err(QkcError::DimensionMismatch(format!(
                "blend between dims {} and {}",
                self.dim, other.dim
            )));
        }
        if !(0.0..=1.0).contains(&w) {
            return Err(QkcError::InvalidArgument(format!("blend weight {} outside [0,1]", w)));
        }
        let mat = self.mat.scale_re(1.0 - w).add(&other.mat.scale_re(w))?;
        Ok(DensityMatrix::new_unchecked(mat))
    }

    /// Reduced state on the listed subsystems of a `dims` factorization.
    pub fn partial_trace(&self, dims: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
        Ok(DensityMatrix::new_unchecked(self.mat.partial_trace(dims, keep)?))
    }
}

/// Finite ensemble `{(p_i, ρ_i)}`.
#[derive(Clone, Debug)]
pub struct Ensemble {
    states: Vec<DensityMatrix>,
    probs: Vec<f64>,
}

impl Ensemble {
    /// Validates matching dims, nonnegative probabilities, and unit sum
    /// within 1e-10.
    pub fn new(states: Vec<DensityMatrix>, probs: Vec<f64>) -> Result<Self> {
        if states.is_empty() || states.len() != probs.len() {
            return Err(QkcError::InvalidArgument(format!(
                "ensemble with {} states and {} probabilities",
                states.len(),
                probs.len()
            )));
        }
        let dim = states[0].dim();
        if states.iter().any(|s| s.dim() != dim) {
            return Err(QkcError::DimensionMismatch(
                "ensemble members have differing dimensions".into(),
            ));
        }
        validate_distribution(&probs)?;
        Ok(Self { states, probs })
    }

    /// Equal weights over the given states.
    pub fn uniform(states: Vec<DensityMatrix>) -> Result<Self> {
        let n = states.len();
        if n == 0 {
            return Err(QkcError::InvalidArgument("uniform ensemble over zero states".into()));
        }
        let probs = vec![1.0 / n as f64; n];
        Self::new(states, probs)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `Σ p_i ρ_i`.
    pub fn average_state(&self) -> DensityMatrix {
        let dim = self.dim();
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for (state, &p) in self.states.iter().zip(&self.probs) {
            acc = acc.add(&state.mat().scale_re(p)).expect("dims validated");
        }
        DensityMatrix::new_unchecked(acc)
    }

    /// Pushes every member through the channel, keeping probabilities.
    pub fn apply_channel(&self, channel: &QuantumChannel) -> Result<Ensemble> {
        let states = self
            .states
            .iter()
            .map(|s| apply_channel(channel, s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ensemble { states, probs: self.probs.clone() })
    }
}

/// Completely positive trace-preserving map in Kraus form.
#[derive(Clone, Debug)]
pub struct QuantumChannel {
    kraus: Vec<ComplexMatrix>,
    dim: usize,
}

impl QuantumChannel {
    /// Validates `Σ K†K = I` within 1e-8 (max entry deviation).
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(QkcError::InvalidArgument("channel with no Kraus operators".into()));
        }
        let dim = kraus[0].rows();
        if kraus.iter().any(|k| k.rows() != dim || k.cols() != dim) {
            return Err(QkcError::DimensionMismatch(
                "Kraus operators must all be square of equal dimension".into(),
            ));
        }
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for k in &kraus {
            sum = sum.add(&k.adjoint().mul(k)?)?;
        }
        let err = sum.max_abs_diff(&ComplexMatrix::identity(dim))?;
        if err > KRAUS_COMPLETENESS_TOL {
            return Err(QkcError::InvalidState(format!(
                "Kraus completeness residual {:e} exceeds {:e}",
                err, KRAUS_COMPLETENESS_TOL
            )));
        }
        Ok(Self { kraus, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }
}

fn validate_distribution(probs: &[f64]) -> Result<()> {
    if probs.is_empty() {
        return Err(QkcError::InvalidDistribution("empty distribution".into()));
    }
    if let Some(&bad) = probs.iter().find(|&&p| !(p >= -1e-12) || !p.is_finite()) {
        return Err(QkcError::InvalidDistribution(format!("probability {} is negative", bad)));
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > PROB_SUM_TOL {
        return Err(QkcError::InvalidDistribution(format!(
            "probabilities sum to {} (must be 1 within {:e})",
            sum, PROB_SUM_TOL
        )));
    }
    Ok(())
}

/// `-Σ p log2 p` over nonnegative entries; `0·log 0 = 0`.
pub fn entropy_bits(spectrum: &[f64]) -> f64 {
    spectrum
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Shannon entropy in bits of a probability vector.
pub fn shannon_entropy(probs: &[f64]) -> Result<f64> {
    validate_distribution(probs)?;
    Ok(entropy_bits(probs))
}

/// `F(ρ,σ) = tr √(√ρ σ √ρ)`, clamped into `[0,1]`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(QkcError::DimensionMismatch(format!(
            "fidelity between dims {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let root = rho.mat().psd_sqrt()?;
    let inner = root.mul(sigma.mat())?.mul(&root)?;
    let eig = inner.hermitian_eig()?;
    // √ρσ√ρ and √σρ√σ share their nonzero spectrum, so flooring roundoff
    // dust relative to the leading eigenvalue keeps F(ρ,σ) = F(σ,ρ) tight.
    let dust = eig.values.first().copied().unwrap_or(0.0).max(0.0) * 1e-15;
    let f: f64 = eig.values.iter().filter(|&&l| l > dust).map(|l| l.sqrt()).sum();
    Ok(f.clamp(0.0, 1.0))
}

/// Pure-pure fidelity `|⟨a|b⟩|`.
pub fn fidelity_pure(a: &PureState, b: &PureState) -> Result<f64> {
    Ok(a.inner(b)?.norm().clamp(0.0, 1.0))
}

/// Pure-mixed fidelity `√⟨ψ|ρ|ψ⟩`; avoids any eigendecomposition.
pub fn fidelity_pure_mixed(psi: &PureState, rho: &DensityMatrix) -> Result<f64> {
    if psi.dim() != rho.dim() {
        return Err(QkcError::DimensionMismatch(format!(
            "fidelity between dims {} and {}",
            psi.dim(),
            rho.dim()
        )));
    }
    let mut overlap = C64::new(0.0, 0.0);
    for i in 0..psi.dim() {
        let mut row = C64::new(0.0, 0.0);
        for j in 0..psi.dim() {
            row += rho.mat()[(i, j)] * psi.amps()[j];
        }
        overlap += psi.amps()[i].conj() * row;
    }
    Ok(overlap.re.max(0.0).sqrt().clamp(0.0, 1.0))
}

/// `χ(E) = S(Σ p_i ρ_i) - Σ p_i S(ρ_i)`; nonnegative up to solver noise.
pub fn holevo_chi(ensemble: &Ensemble) -> Result<f64> {
    let avg = ensemble.average_state().von_neumann_entropy();
    let members: f64 = ensemble
        .states()
        .iter()
        .zip(ensemble.probs())
        .map(|(s, &p)| p * s.von_neumann_entropy())
        .sum();
    Ok(avg - members)
}

/// `ρ ↦ Σ K ρ K†`, validated output.
pub fn apply_channel(channel: &QuantumChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if channel.dim() != rho.dim() {
        return Err(QkcError::DimensionMismatch(format!(
            "channel dim {} applied to state dim {}",
            channel.dim(),
            rho.dim()
        )));
    }
    let mut acc = ComplexMatrix::zeros(rho.dim(), rho.dim());
    for k in channel.kraus() {
        acc = acc.add(&k.mul(rho.mat())?.mul(&k.adjoint())?)?;
    }
    DensityMatrix::new(acc)
}

/// Evaluates both sides of the tensor-power identity
/// `F(ρ^⊗n, σ^⊗n) = F(ρ,σ)^n` and returns `(lhs, rhs)`.
///
/// Capped at `n ≤ 5` and a product dimension of 256.
pub fn tensor_power_fidelity_check(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    n: usize,
) -> Result<(f64, f64)> {
    if n == 0 || n > 5 {
        return Err(QkcError::SizeLimit(format!("tensor power {} outside 1..=5", n)));
    }
    let prod_dim = rho.dim().checked_pow(n as u32).unwrap_or(usize::MAX);
    if prod_dim > 256 {
        return Err(QkcError::SizeLimit(format!(
            "tensor-power dimension {}^{} exceeds 256",
            rho.dim(),
            n
        )));
    }
    let lhs = fidelity(&rho.tensor_power(n), &sigma.tensor_power(n))?;
    let rhs = fidelity(rho, sigma)?.powi(n as i32);
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;

    const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn pure_fidelity_matches_overlap_oracle() {
        let zero = PureState::basis(2, 0);
        let plus = PureState::plus();
        // Oracle: |<0|+>| = 1/sqrt(2) by hand.
        let f = fidelity_pure(&zero, &plus).unwrap();
        assert!((f - SQRT_HALF).abs() < 1e-12);

        // Full mixed-state route must agree with the pure reduction.
        let f_full = fidelity(&zero.to_density(), &plus.to_density()).unwrap();
        assert!((f_full - SQRT_HALF).abs() < 1e-10);
    }

    #[test]
    fn fidelity_mixed_vs_pure_known_value() {
        let f = fidelity(&DensityMatrix::maximally_mixed(2), &PureState::basis(2, 0).to_density())
            .unwrap();
        assert!((f - SQRT_HALF).abs() < 1e-10, "got {}", f);
        let fast =
            fidelity_pure_mixed(&PureState::basis(2, 0), &DensityMatrix::maximally_mixed(2))
                .unwrap();
        assert!((fast - f).abs() < 1e-10);
    }

    #[test]
    fn entropy_of_known_diagonal() {
        // Oracle: -0.9 log2 0.9 - 0.1 log2 0.1, evaluated independently.
        let oracle = -(0.9f64 * 0.9f64.log2() + 0.1 * 0.1f64.log2());
        let rho = DensityMatrix::new(ComplexMatrix::diag(&[0.9, 0.1])).unwrap();
        assert!((rho.von_neumann_entropy() - oracle).abs() < 1e-12);
        assert!((oracle - 0.468996).abs() < 1e-6);
    }

    #[test]
    fn chi_of_zero_plus_ensemble() {
        // Average state (|0><0| + |+><+|)/2 has eigenvalues (1 ± 1/sqrt 2)/2;
        // members are pure, so chi is the binary entropy of that spectrum.
        let hi = (1.0 + SQRT_HALF) / 2.0;
        let lo = (1.0 - SQRT_HALF) / 2.0;
        let oracle = -(hi * hi.log2() + lo * lo.log2());

        let ens = Ensemble::uniform(vec![
            PureState::basis(2, 0).to_density(),
            PureState::plus().to_density(),
        ])
        .unwrap();
        let chi = holevo_chi(&ens).unwrap();
        assert!((chi - oracle).abs() < 1e-10, "chi {} vs oracle {}", chi, oracle);
        assert!((oracle - 0.6008760366928562).abs() < 1e-12);
    }

    #[test]
    fn fidelity_is_symmetric() {
        for seed in 0..20u64 {
            let a = random::random_density(4, 3, random::derive_seed(900, seed));
            let b = random::random_density(4, 2, random::derive_seed(901, seed));
            let fab = fidelity(&a, &b).unwrap();
            let fba = fidelity(&b, &a).unwrap();
            assert!((fab - fba).abs() < 1e-9, "asymmetry {}", (fab - fba).abs());
        }
    }

    #[test]
    fn fidelity_one_iff_equal() {
        for seed in 0..10u64 {
            let a = random::random_density(3, 2, random::derive_seed(902, seed));
            assert!(fidelity(&a, &a).unwrap() >= 1.0 - 1e-10);

            // A genuinely different state must stay away from fidelity 1.
            let b = a.blend(&DensityMatrix::maximally_mixed(3), 0.05).unwrap();
            let f = fidelity(&a, &b).unwrap();
            let dist = a.mat().max_abs_diff(b.mat()).unwrap();
            if dist >= 1e-4 {
                assert!(f < 1.0 - 1e-10, "distinct states at fidelity {}", f);
            }
        }
    }

    #[test]
    fn fidelity_unitary_invariance() {
        for seed in 0..10u64 {
            let a = random::random_density(4, 2, random::derive_seed(903, seed));
            let b = random::random_density(4, 4, random::derive_seed(904, seed));
            let u = random::random_unitary(4, random::derive_seed(905, seed));
            let rot = |m: &DensityMatrix| {
                DensityMatrix::new_unchecked(u.mul(m.mat()).unwrap().mul(&u.adjoint()).unwrap())
            };
            let f0 = fidelity(&a, &b).unwrap();
            let f1 = fidelity(&rot(&a), &rot(&b)).unwrap();
            assert!((f0 - f1).abs() < 1e-9);
        }
    }

    #[test]
    fn purity_iff_zero_entropy() {
        let psi = random::random_pure(5, 77);
        let pure = psi.to_density();
        assert!(pure.is_pure(1e-9));
        assert!(pure.von_neumann_entropy() < 1e-6);

        let mixed = DensityMatrix::maximally_mixed(5);
        assert!(!mixed.is_pure(1e-9));
        assert!(mixed.von_neumann_entropy() > 1e-6);
    }

    #[test]
    fn composition_bound_on_random_triples() {
        // If F(a,b) >= 1-d1 and F(b,c) >= 1-d2 then F(a,c) >= 1-2d1-2d2.
        for seed in 0..50u64 {
            let a = random::random_density(3, 2, random::derive_seed(906, seed));
            let noise1 = random::random_density(3, 3, random::derive_seed(907, seed));
            let noise2 = random::random_density(3, 1, random::derive_seed(908, seed));
            let b = a.blend(&noise1, 0.05).unwrap();
            let c = b.blend(&noise2, 0.04).unwrap();
            let d1 = 1.0 - fidelity(&a, &b).unwrap();
            let d2 = 1.0 - fidelity(&b, &c).unwrap();
            let fac = fidelity(&a, &c).unwrap();
            assert!(
                fac >= 1.0 - 2.0 * d1 - 2.0 * d2 - 1e-9,
                "seed {}: {} < 1 - 2*{} - 2*{}",
                seed,
                fac,
                d1,
                d2
            );
        }
    }

    #[test]
    fn tensor_power_identity() {
        for seed in 0..10u64 {
            let a = random::random_density(2, 2, random::derive_seed(909, seed));
            let b = random::random_density(2, 1, random::derive_seed(910, seed));
            let (lhs, rhs) = tensor_power_fidelity_check(&a, &b, 3).unwrap();
            assert!((lhs - rhs).abs() < 1e-7, "{} vs {}", lhs, rhs);
        }
        let big = DensityMatrix::maximally_mixed(4);
        assert!(matches!(
            tensor_power_fidelity_check(&big, &big, 5),
            Err(QkcError::SizeLimit(_))
        ));
    }

    #[test]
    fn chi_bounds() {
        for seed in 0..15u64 {
            let ens = random::random_ensemble(4, 3, random::derive_seed(911, seed));
            let chi = holevo_chi(&ens).unwrap();
            assert!(chi >= -1e-9);
            assert!(chi <= (4.0f64).log2() + 1e-9);
            assert!(chi <= ens.average_state().von_neumann_entropy() + 1e-9);
        }
    }

    #[test]
    fn chi_never_increases_under_a_channel_smoke() {
        for seed in 0..25u64 {
            let ens = random::random_ensemble(3, 3, random::derive_seed(912, seed));
            let ch = random::random_channel(3, 2, random::derive_seed(913, seed));
            let before = holevo_chi(&ens).unwrap();
            let after = holevo_chi(&ens.apply_channel(&ch).unwrap()).unwrap();
            assert!(after <= before + 1e-7, "seed {}: {} > {}", seed, after, before);
        }
    }

    #[test]
    fn entropy_insensitivity_along_mixing_path() {
        // rho_k = (1 - 1/k) rho + (1/k) sigma: the entropy gap must fall
        // under 2 (dim/k) log2 k and shrink as k grows.
        let rho = random::random_density(4, 2, 4242);
        let sigma = random::random_density(4, 4, 4243);
        let s0 = rho.von_neumann_entropy();
        let mut gaps = Vec::new();
        for &k in &[2u32, 4, 8, 16, 64, 256, 1024] {
            let w = 1.0 / k as f64;
            let mixed = rho.blend(&sigma, w).unwrap();
            let gap = (mixed.von_neumann_entropy() - s0).abs();
            let bound = 2.0 * (4.0 / k as f64) * (k as f64).log2();
            assert!(gap < bound, "k={}: gap {} vs bound {}", k, gap, bound);
            gaps.push(gap);
        }
        assert!(gaps.last().unwrap() < &gaps[0]);
    }

    #[test]
    fn shannon_entropy_validates_input() {
        assert!((shannon_entropy(&[0.5, 0.5]).unwrap() - 1.0).abs() < 1e-12);
        assert!(shannon_entropy(&[0.5, 0.4]).is_err());
        assert!(shannon_entropy(&[1.2, -0.2]).is_err());
        // 0 log 0 = 0: degenerate distribution has zero entropy.
        assert_eq!(shannon_entropy(&[1.0, 0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(ComplexMatrix::diag(&[0.6, 0.4])).is_ok());
        assert!(matches!(
            DensityMatrix::new(ComplexMatrix::diag(&[0.6, 0.6])),
            Err(QkcError::InvalidState(_))
        ));
        assert!(matches!(
            DensityMatrix::new(ComplexMatrix::diag(&[1.5, -0.5])),
            Err(QkcError::NotPsd(_))
        ));
        let mut skew = ComplexMatrix::diag(&[0.5, 0.5]);
        skew[(0, 1)] = C64::new(0.1, 0.0);
        assert!(matches!(DensityMatrix::new(skew), Err(QkcError::NotHermitian(_))));
    }

    #[test]
    fn channel_validation_and_application() {
        // Depolarizing-style channel from a random isometry is complete.
        let ch = random::random_channel(2, 3, 31);
        let rho = PureState::plus().to_density();
        let out = apply_channel(&ch, &rho).unwrap();
        assert!((out.mat().trace().re - 1.0).abs() < 1e-9);

        // Broken completeness must be rejected.
        let half = ComplexMatrix::identity(2).scale_re(0.5);
        assert!(matches!(QuantumChannel::new(vec![half]), Err(QkcError::InvalidState(_))));
    }
}
