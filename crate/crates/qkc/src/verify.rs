//! Named verification suites behind the CLI.
//!
//! Every suite emits one JSON line per assertion. All randomness flows
//! from the caller's seed through the per-trial splitter and trials are
//! assembled in index order, so a suite's output is byte-identical for
//! any worker count. Anything nondeterministic (wall time) is the
//! caller's business, never part of these lines.

use serde_json::json;

use crate::error::Result;
use crate::kolm;
use crate::random;
use crate::state::{
    self, DensityMatrix, PureState, fidelity, fidelity_pure_mixed, holevo_chi,
};
use crate::sym;
use crate::typical;

/// Aggregated result of one suite run.
#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub suite: &'static str,
    /// One JSON object per assertion, in a fixed order.
    pub lines: Vec<String>,
    pub passed: usize,
    pub failed: usize,
}

impl SuiteOutcome {
    fn new(suite: &'static str) -> Self {
        Self { suite, lines: Vec::new(), passed: 0, failed: 0 }
    }

    fn record(&mut self, case: &str, pass: bool, detail: serde_json::Value) {
        self.lines.push(
            json!({"case": case, "detail": detail, "pass": pass, "suite": self.suite})
                .to_string(),
        );
        if pass {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    /// First failing assertion line, for error reporting.
    pub fn first_failure(&self) -> Option<&str> {
        self.lines.iter().find(|l| l.contains("\"pass\":false")).map(String::as_str)
    }
}

/// Runs `trials` independent closures across `shards` workers, returning
/// results in trial order regardless of the split.
fn sharded_trials<T, F>(trials: usize, shards: usize, run: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let shards = shards.clamp(1, trials.max(1));
    if shards == 1 {
        return (0..trials).map(run).collect();
    }
    let chunk = trials.div_ceil(shards);
    let mut slots: Vec<Option<T>> = (0..trials).map(|_| None).collect();
    let chunks: Vec<Vec<(usize, T)>> = std::thread::scope(|scope| {
        (0..shards)
            .map(|s| {
                let run = &run;
                scope.spawn(move || {
                    (s * chunk..((s + 1) * chunk).min(trials))
                        .map(|i| (i, run(i)))
                        .collect()
                })
            })
            .collect::<Vec<_>>()
            .into_iter()
            .map(|h| h.join().expect("suite worker panicked"))
            .collect()
    });
    for chunk in chunks {
        for (i, v) in chunk {
            slots[i] = Some(v);
        }
    }
    slots.into_iter().map(|v| v.expect("every trial ran")).collect()
}

/// Ensemble χ never increases under a completely positive
/// trace-preserving map.
pub fn run_monotonicity(seed: u64, trials: usize, shards: usize, tol: f64) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("monotonicity");
    let results = sharded_trials(trials, shards, |i| {
        let s = random::derive_seed(seed, i as u64);
        let dim = [2usize, 3, 4, 8][i % 4];
        let members = 2 + i % 3;
        let kraus = 2 + i % 2;
        let ensemble = random::random_ensemble(dim, members, random::derive_seed(s, 1));
        let channel = random::random_channel(dim, kraus, random::derive_seed(s, 2));
        let before = holevo_chi(&ensemble).expect("chi");
        let after =
            holevo_chi(&ensemble.apply_channel(&channel).expect("apply")).expect("chi");
        (dim, before, after)
    });
    for (i, (dim, before, after)) in results.into_iter().enumerate() {
        out.record(
            &format!("pair-{:04}", i),
            after <= before + tol,
            json!({"dim": dim, "chi_before": before, "chi_after": after}),
        );
    }
    Ok(out)
}

/// Two short hops keep states close: F(ρ,ρ'') ≥ 1 - 2δ₁ - 2δ₂.
pub fn run_composition(seed: u64, trials: usize, shards: usize, tol: f64) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("composition");
    let results = sharded_trials(trials, shards, |i| {
        let s = random::derive_seed(seed, i as u64);
        let dim = [2usize, 3, 4, 8][i % 4];
        let rank = 1 + i % dim.min(3);
        let a = random::random_density(dim, rank, random::derive_seed(s, 1));
        let b = random::random_density(dim, dim, random::derive_seed(s, 2));
        let c = random::random_density(dim, 1 + (i / 2) % dim, random::derive_seed(s, 3));
        let d1 = 1.0 - fidelity(&a, &b).expect("fidelity");
        let d2 = 1.0 - fidelity(&b, &c).expect("fidelity");
        let f = fidelity(&a, &c).expect("fidelity");
        (dim, d1, d2, f)
    });
    for (i, (dim, d1, d2, f)) in results.into_iter().enumerate() {
        let floor = 1.0 - 2.0 * d1 - 2.0 * d2;
        out.record(
            &format!("triple-{:04}", i),
            f >= floor - tol,
            json!({"dim": dim, "delta1": d1, "delta2": d2, "fidelity": f, "floor": floor}),
        );
    }
    Ok(out)
}

/// Fidelity of independent pairs factorizes: F(ρ⊗ρ, σ⊗σ) = F(ρ,σ)².
pub fn run_tensor_power(seed: u64, trials: usize, shards: usize, tol: f64) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("tensor-power");
    let results = sharded_trials(trials, shards, |i| {
        let s = random::derive_seed(seed, i as u64);
        let dim = [2usize, 3, 4][i % 3];
        let a = random::random_density(dim, 1 + i % dim, random::derive_seed(s, 1));
        let b = random::random_density(dim, dim, random::derive_seed(s, 2));
        let (lhs, rhs) = state::tensor_power_fidelity_check(&a, &b, 2).expect("in range");
        (dim, lhs, rhs)
    });
    for (i, (dim, lhs, rhs)) in results.into_iter().enumerate() {
        out.record(
            &format!("pair-{:04}", i),
            (lhs - rhs).abs() <= tol,
            json!({"dim": dim, "joint": lhs, "factored": rhs}),
        );
    }
    Ok(out)
}

/// Copy-register codec: dimension table, isometry, roundtrip, budget
/// pipeline for the requested `(d, m)`.
pub fn run_sym(d: usize, m: usize, seed: u64, trials: usize) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("sym");

    fn count_sorted(d: usize, m: usize, lo: usize) -> u128 {
        if m == 0 {
            return 1;
        }
        (lo..d).map(|s| count_sorted(d, m - 1, s)).sum()
    }
    let mut mismatches = 0;
    for dd in 1..=4usize {
        for mm in 0..=6usize {
            if sym::sym_dimension(dd, mm)? != count_sorted(dd, mm, 0) {
                mismatches += 1;
            }
        }
    }
    out.record("dimension-table", mismatches == 0, json!({"mismatches": mismatches}));

    let sym_dim = sym::sym_dimension(d, m)?;
    let codec = sym::SymmetricCodec::new(d, m)?;
    out.record(
        "requested-dimension",
        codec.sym_dim() as u128 == sym_dim,
        json!({"d": d, "m": m, "sym_dim": codec.sym_dim(), "code_qubits": codec.code_qubits()}),
    );

    let projector = sym::sym_projector(d, m)?;
    let gram = codec.isometry().adjoint().mul(&codec.isometry())?;
    let iso_err = gram.max_abs_diff(&projector)?;
    out.record("isometry-grammian", iso_err < 1e-9, json!({"max_err": iso_err}));

    let mut worst_roundtrip: f64 = 1.0;
    let mut worst_residual: f64 = 0.0;
    for t in 0..trials {
        let x = random::random_pure(d, random::derive_seed(seed, t as u64));
        let power = x.tensor_power(m);
        let code = codec.encode_copies(&power)?;
        let decoded = codec.decode_copies(&code, 0.0)?;
        worst_roundtrip =
            worst_roundtrip.min(fidelity_pure_mixed(&power, &decoded.joint)?);
        let projected: Vec<_> = (0..power.dim())
            .map(|r| {
                (0..power.dim())
                    .map(|cidx| projector[(r, cidx)] * power.amps()[cidx])
                    .sum::<crate::matrix::C64>()
            })
            .collect();
        let residual = projected
            .iter()
            .zip(power.amps())
            .map(|(p, a)| (p - a).norm_sqr())
            .sum::<f64>()
            .sqrt();
        worst_residual = worst_residual.max(residual);
    }
    out.record(
        "roundtrip",
        worst_roundtrip >= 1.0 - 1e-9,
        json!({"trials": trials, "worst_fidelity": worst_roundtrip}),
    );
    out.record(
        "projector-fixes-powers",
        worst_residual < 1e-9,
        json!({"trials": trials, "worst_residual": worst_residual}),
    );

    let x = random::random_pure(d, random::derive_seed(seed, 1_000_003));
    let report = sym::copies_pipeline(&x, m, 10)?;
    out.record(
        "budget-pipeline",
        report.meets_budget,
        json!({
            "k": report.k,
            "m": report.m,
            "total_fidelity": report.total_fidelity,
            "total_target": report.total_target
        }),
    );
    Ok(out)
}

/// Typical-subspace codec against its exhaustive enumeration oracles.
pub fn run_schumacher(seed: u64) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("schumacher");
    let source = |p: f64| {
        let mut mat = crate::matrix::ComplexMatrix::zeros(2, 2);
        mat[(0, 0)] = crate::matrix::C64::new(p, 0.0);
        mat[(1, 1)] = crate::matrix::C64::new(1.0 - p, 0.0);
        DensityMatrix::new(mat).expect("diagonal source")
    };

    // Exhaustive two-level window oracle, written from the binomial side.
    let binomial_window = |p: f64, n: usize, delta: f64| -> (usize, f64) {
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
    };

    let rho = source(0.9);
    let (oracle_rank, oracle_mass) = binomial_window(0.9, 8, 0.2);
    let projector = typical::typical_projector(&rho, 8, 0.2)?;
    let rank = projector.trace().re;
    let mass = typical::typical_mass(&rho, 8, 0.2)?;
    out.record(
        "window-oracle",
        (rank - oracle_rank as f64).abs() < 1e-9 && (mass - oracle_mass).abs() < 1e-10,
        json!({"rank": rank, "mass": mass, "oracle_rank": oracle_rank, "oracle_mass": oracle_mass}),
    );

    let mut letters = vec![PureState::basis(2, 0); 7];
    letters.push(PureState::basis(2, 1));
    let (_, code) = typical::schumacher_encode(&letters, &rho, 0.2)?;
    let budget = (8.0 * (code.entropy_bound + 0.2)).ceil();
    out.record(
        "register-budget",
        (code.code_qubits as f64) <= budget,
        json!({"code_qubits": code.code_qubits, "window_budget": budget}),
    );
    // The (7,1) type sits inside the window, so this block is fully typical.
    out.record(
        "fidelity-oracle",
        (code.achieved_fidelity - 1.0).abs() < 1e-8,
        json!({"achieved": code.achieved_fidelity}),
    );

    let bound = typical::universal_length_bound(1.0, 0.1, 2, 8);
    out.record(
        "length-bound-values",
        (bound - 2.6849625007211563).abs() < 1e-3
            && (typical::universal_length_bound(0.0, 0.0, 2, 1) - 4.0).abs() < 1e-12,
        json!({"bound_1_01_2_8": bound}),
    );

    let masses: Vec<f64> = [4usize, 6, 8]
        .iter()
        .map(|&n| typical::typical_mass(&source(0.8), n, 0.5))
        .collect::<Result<_>>()?;
    out.record(
        "trapped-mass-monotone",
        masses.windows(2).all(|w| w[0] < w[1])
            && (masses[0] - 0.8192).abs() < 1e-10
            && (masses[1] - 0.90112).abs() < 1e-10
            && (masses[2] - 0.9437184).abs() < 1e-10,
        json!({"masses": masses}),
    );

    let letters: Vec<PureState> =
        (0..4).map(|i| random::random_pure(2, random::derive_seed(seed, i))).collect();
    let (codeword, code) = typical::schumacher_encode(&letters, &source(0.85), 0.9)?;
    let decoded = typical::schumacher_decode(&codeword, &code)?;
    let mut product = letters[0].clone();
    for l in &letters[1..] {
        product = product.tensor(l);
    }
    let roundtrip = fidelity_pure_mixed(&product, &decoded)?;
    out.record(
        "roundtrip-matches-recorded",
        (roundtrip - code.achieved_fidelity).abs() < 1e-8,
        json!({"roundtrip": roundtrip, "recorded": code.achieved_fidelity}),
    );
    Ok(out)
}

/// Ensemble information content versus brute-forced description lengths.
pub fn run_incompressibility(
    target_fidelity: f64,
    max_len: u32,
    shards: usize,
) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("incompressibility");

    let basis4: Vec<DensityMatrix> =
        (0..4).map(|i| PureState::basis(4, i).to_density()).collect();
    let report = kolm::verify_incompressibility(&basis4, target_fidelity, max_len, shards)?;
    out.record(
        "two-qubit-basis",
        report.bound_holds == Some(true) && report.exhaustive,
        json!({
            "chi": report.chi,
            "min_lengths": report.min_lengths,
            "l_star": report.l_star,
            "counting_floor": report.counting_floor
        }),
    );

    let pair =
        vec![PureState::basis(2, 0).to_density(), PureState::basis(2, 1).to_density()];
    let report = kolm::verify_incompressibility(&pair, 0.99, max_len.min(10), shards)?;
    out.record(
        "orthogonal-qubit-pair",
        report.bound_holds == Some(true) && (report.chi - 1.0).abs() < 1e-9,
        json!({"chi": report.chi, "l_star": report.l_star}),
    );

    let same = vec![PureState::plus().to_density(); 3];
    let report = kolm::verify_incompressibility(&same, 0.99, 6, shards)?;
    out.record(
        "identical-members-vacuous",
        report.chi.abs() < 1e-9 && report.bound_holds.is_none(),
        json!({"chi": report.chi}),
    );
    Ok(out)
}

/// The pigeonhole pair, plus its partition identity across scales.
pub fn run_counting(n: u32, c: u32) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("counting");
    let check = kolm::counting_check(n, c)?;
    out.record(
        "pair",
        check.program_budget == (1u64 << (n - c)) - 1
            && check.state_demand == (1u64 << n) - (1u64 << (n - c)) + 1,
        json!({
            "n": n,
            "c": c,
            "program_budget": check.program_budget,
            "state_demand": check.state_demand,
            "degenerate": check.degenerate
        }),
    );
    let mut partition_ok = true;
    for nn in 1..=12u32 {
        for cc in 0..=nn {
            let k = kolm::counting_check(nn, cc)?;
            partition_ok &= k.program_budget + k.state_demand == 1u64 << nn;
        }
    }
    out.record("budget-demand-partition", partition_ok, json!({"scales": "n ≤ 12"}));
    Ok(out)
}

/// Minimal lengths under the two interpreters stay within the fixed
/// emulation cost of each other.
pub fn run_invariance(
    seed: u64,
    trials: usize,
    target_fidelity: f64,
    max_len: u32,
    shards: usize,
) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("invariance");
    let results = sharded_trials(trials, shards, |i| {
        let x = random::random_pure(2, random::derive_seed(seed, i as u64));
        // Workers split across targets; the searches themselves run solo.
        kolm::invariance_demo(&x, target_fidelity, max_len, 1)
    });
    for (i, report) in results.into_iter().enumerate() {
        let report = report?;
        out.record(
            &format!("target-{:02}", i),
            report.bound_holds,
            json!({
                "qc_a": report.qc_a.min_length,
                "qc_b": report.qc_b.min_length,
                "emulation_bits": report.emulation_bits,
                "vacuous": report.vacuous
            }),
        );
    }
    Ok(out)
}

/// Copy-count description costs: closed-form upper bounds, the Monte-Carlo
/// average behind the lower bound, and the two-copy anomaly.
pub fn run_copies(seed: u64, max_len: u32, shards: usize) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("copies");

    let b = sym::copies_upper_bound(1, 2)?;
    let c = sym::copies_upper_bound(2, 3)?;
    out.record(
        "upper-bound-values",
        (b.bound_bits - 3f64.log2()).abs() < 1e-12 && (c.bound_bits - 20f64.log2()).abs() < 1e-12,
        json!({"qubits1_copies2": b.bound_bits, "qubits2_copies3": c.bound_bits}),
    );

    let single = sym::haar_average_tensor_power(2, 2, 256, seed, 1)?;
    let split = sym::haar_average_tensor_power(2, 2, 256, seed, shards.max(2))?;
    out.record("haar-shard-stability", single == split, json!({"samples": 256}));

    let limit = sym::sym_projector(2, 2)?.scale_re(1.0 / 3.0);
    let entropy = DensityMatrix::new(limit)?.von_neumann_entropy();
    out.record(
        "haar-limit-entropy",
        (entropy - 3f64.log2()).abs() < 1e-9,
        json!({"entropy": entropy}),
    );

    let gap = kolm::copies_gap(&PureState::plus(), 0.99, max_len, shards)?;
    out.record(
        "anomaly-witness",
        gap.anomaly,
        json!({"qc_single": gap.qc_single.min_length, "qc_double": gap.qc_double.min_length}),
    );
    let control = kolm::copies_gap(&PureState::basis(2, 0), 0.99, max_len.min(12), shards)?;
    out.record(
        "classical-control",
        !control.anomaly,
        json!({"qc_single": control.qc_single.min_length, "qc_double": control.qc_double.min_length}),
    );
    Ok(out)
}

/// Enumerative coder roundtrips and the classical search baselines.
pub fn run_blockcode(seed: u64, trials: usize, shards: usize) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("blockcode");
    let results = sharded_trials(trials, shards, |i| {
        let len = [8usize, 12, 16, 24, 32][i % 5];
        let k = [1usize, 2, 4][i % 3];
        let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        let x = kolm::bits_of(random::derive_seed(seed, i as u64) & mask, len);
        let code = kolm::block_entropy_encode(&x, k).expect("geometry fits");
        let roundtrip =
            kolm::block_entropy_decode(&code.codeword, k, len).expect("decodes") == x;
        let within = (code.codeword.len() as f64) <= code.length_bound + 1e-9;
        (len, k, code.codeword.len(), code.length_bound, roundtrip, within)
    });
    for (i, (len, k, emitted, bound, roundtrip, within)) in results.into_iter().enumerate() {
        out.record(
            &format!("string-{:03}", i),
            roundtrip && within,
            json!({"len": len, "k": k, "emitted": emitted, "bound": bound}),
        );
    }

    let zeros = kolm::classical_kc_search(&[false; 8], 18)?;
    out.record(
        "all-zero-baseline",
        zeros.min_length.map_or(false, |l| l < 8 + 9),
        json!({"min_length": zeros.min_length}),
    );

    let x = kolm::bits_of(0b10, 2);
    let classical = kolm::classical_kc_search(&x, 16)?;
    let quantum = kolm::qc_search(&PureState::basis(4, 0b10), 1.0, 16)?;
    let never_worse = match (quantum.min_length, classical.min_length) {
        (Some(q), Some(c)) => q <= c,
        _ => false,
    };
    out.record(
        "quantum-never-worse",
        never_worse,
        json!({"classical": classical.min_length, "quantum": quantum.min_length}),
    );
    Ok(out)
}
