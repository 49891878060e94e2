//! Whole-ensemble analyses built on the program search: entropy lower
//! bounds on description length, counting arguments, cross-interpreter
//! invariance, and subadditivity spot checks.

use crate::error::{QkcError, Result};
use crate::state::{
    DensityMatrix, Ensemble, PureState, fidelity, fidelity_pure_mixed, holevo_chi,
};

use super::interp::EMULATION_COST_BITS;
use super::program::InterpreterId;
use super::search::{
    MAX_SEARCH_LEN, QcEstimate, SearchSettings, qc_conditional_search_sharded, qc_search_on,
    qc_search_sharded, search_with,
};

/// States whose supports overlap less than this count as distinguishable.
const ORTHOGONALITY_TOL: f64 = 1e-9;

/// How a uniform ensemble's information content compares with the length
/// of the programs needed to name its members.
#[derive(Clone, Debug, serde::Serialize)]
pub struct IncompressibilityReport {
    /// Holevo χ of the uniform ensemble, in bits.
    pub chi: f64,
    pub min_lengths: Vec<Option<u32>>,
    /// Worst minimal length over the ensemble.
    pub l_star: Option<u32>,
    pub pairwise_orthogonal: bool,
    /// True when orthogonality plus a target above 1/√2 make the counting
    /// argument exact: no program can serve two of the states.
    pub counting_certified: bool,
    /// Least l with `2^{l+1} - 1 ≥ M`: the certified floor on `l_star`.
    pub counting_floor: u32,
    /// `l_star ≥ counting_floor`, only asserted when certified; None means
    /// the χ comparison is informational at this finite fidelity target.
    pub bound_holds: Option<bool>,
    pub exhaustive: bool,
}

/// Brute-forces the worst minimal program length over an ensemble of
/// density-matrix targets and compares it against the ensemble's Holevo χ
/// and the exact program-counting floor. At most 16 states.
pub fn verify_incompressibility(
    states: &[DensityMatrix],
    target_fidelity: f64,
    max_len: u32,
    shards: usize,
) -> Result<IncompressibilityReport> {
    if states.is_empty() || states.len() > 16 {
        return Err(QkcError::SizeLimit(format!(
            "ensemble of {} states outside 1..=16",
            states.len()
        )));
    }
    let dim = states[0].dim();
    if states.iter().any(|s| s.dim() != dim) {
        return Err(QkcError::DimensionMismatch("mixed dimensions in the ensemble".into()));
    }
    let ensemble = Ensemble::uniform(states.to_vec())?;
    let chi = holevo_chi(&ensemble)?;

    let mut min_lengths = Vec::with_capacity(states.len());
    let mut exhaustive = true;
    for rho in states {
        let settings = SearchSettings {
            interpreter: InterpreterId::A,
            target_fidelity,
            max_len,
            shards,
        };
        let est = search_with(&settings, None, dim, |out| fidelity_pure_mixed(out, rho))?;
        exhaustive &= est.exhaustive;
        min_lengths.push(est.min_length);
    }
    // Worst case over members; any not-found member dominates the rest.
    let l_star =
        if min_lengths.iter().any(Option::is_none) { None } else { min_lengths.iter().flatten().copied().max() };

    let mut pairwise_orthogonal = true;
    'pairs: for i in 0..states.len() {
        for j in i + 1..states.len() {
            if fidelity(&states[i], &states[j])? > ORTHOGONALITY_TOL {
                pairwise_orthogonal = false;
                break 'pairs;
            }
        }
    }
    let counting_certified =
        pairwise_orthogonal && target_fidelity > std::f64::consts::FRAC_1_SQRT_2;
    let m = states.len() as u64;
    let counting_floor = (0..).find(|&l| (1u64 << (l + 1)) - 1 >= m).expect("floor exists");
    let bound_holds = counting_certified.then(|| match l_star {
        Some(l) => l >= counting_floor,
        // Nothing found within the ceiling: the floor is certainly not violated.
        None => true,
    });
    Ok(IncompressibilityReport {
        chi,
        min_lengths,
        l_star,
        pairwise_orthogonal,
        counting_certified,
        counting_floor,
        bound_holds,
        exhaustive,
    })
}

/// The pigeonhole pair at scale `(n, c)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct CountingCheck {
    /// Programs shorter than `n - c` bits: `2^{n-c} - 1`.
    pub program_budget: u64,
    /// Strings forced to complexity ≥ `n - c`: `2^n - 2^{n-c} + 1`.
    pub state_demand: u64,
    /// `n = c`: the budget is empty and the demand covers everything.
    pub degenerate: bool,
}

pub fn counting_check(n: u32, c: u32) -> Result<CountingCheck> {
    if n > 24 {
        return Err(QkcError::SizeLimit(format!("n = {} above 24", n)));
    }
    if c > n {
        return Err(QkcError::InvalidArgument(format!("c = {} exceeds n = {}", c, n)));
    }
    let short = 1u64 << (n - c);
    Ok(CountingCheck {
        program_budget: short - 1,
        state_demand: (1u64 << n) - short + 1,
        degenerate: n == c,
    })
}

/// Minimal lengths for one target under both interpreters, with the
/// emulation-prefix constant that bounds their gap.
#[derive(Clone, Debug, serde::Serialize)]
pub struct InvarianceReport {
    pub qc_a: QcEstimate,
    pub qc_b: QcEstimate,
    /// The fixed cost of running a B-program on A.
    pub emulation_bits: u32,
    /// `qc_A ≤ qc_B + emulation_bits`; vacuously true when B found nothing.
    pub bound_holds: bool,
    pub vacuous: bool,
}

/// Measures the same target under interpreters A and B. A is searched
/// `emulation_bits` deeper than B so the constructive witness — the
/// emulation prefix glued onto B's witness — is always inside A's ceiling.
pub fn invariance_demo(
    x: &PureState,
    target_fidelity: f64,
    max_len: u32,
    shards: usize,
) -> Result<InvarianceReport> {
    if max_len + EMULATION_COST_BITS > MAX_SEARCH_LEN {
        return Err(QkcError::SizeLimit(format!(
            "ceiling {} leaves no room for the {}-bit emulation prefix",
            max_len, EMULATION_COST_BITS
        )));
    }
    let qc_b = qc_search_on(InterpreterId::B, x, target_fidelity, max_len, shards)?;
    let qc_a = qc_search_on(
        InterpreterId::A,
        x,
        target_fidelity,
        max_len + EMULATION_COST_BITS,
        shards,
    )?;
    let vacuous = qc_b.min_length.is_none();
    let bound_holds = match (qc_a.min_length, qc_b.min_length) {
        (Some(a), Some(b)) => a <= b + EMULATION_COST_BITS,
        (None, Some(_)) => false, // the emulated witness should have been found
        (_, None) => true,
    };
    Ok(InvarianceReport {
        qc_a,
        qc_b,
        emulation_bits: EMULATION_COST_BITS,
        bound_holds,
        vacuous,
    })
}

/// Measured pieces of the chain bound `QC(X,Y) ≤ QC(X,X) + QC(Y|X) + O(1)`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SubadditivityReport {
    pub qc_xy: QcEstimate,
    pub qc_xx: QcEstimate,
    pub qc_y_given_x: QcEstimate,
    /// `QC(X,Y) - QC(X,X) - QC(Y|X)` when all three are finite. The
    /// additive constant is an observation, never asserted.
    pub residual: Option<i64>,
}

/// Enumerates the three quantities in the chain bound. Producing Y from X
/// may consume X, which is why the middle term is QC(X,X), not QC(X).
pub fn subadditivity_spotcheck(
    x: &PureState,
    y: &PureState,
    target_fidelity: f64,
    max_len: u32,
    shards: usize,
) -> Result<SubadditivityReport> {
    if x.dim() * y.dim() > 16 {
        return Err(QkcError::SizeLimit(format!(
            "joint dimension {} above 16",
            x.dim() * y.dim()
        )));
    }
    let qc_xy = qc_search_sharded(&x.tensor(y), target_fidelity, max_len, shards)?;
    let qc_xx = qc_search_sharded(&x.tensor(x), target_fidelity, max_len, shards)?;
    let qc_y_given_x =
        qc_conditional_search_sharded(y, Some(x), target_fidelity, max_len, shards)?;
    let residual = match (qc_xy.min_length, qc_xx.min_length, qc_y_given_x.min_length) {
        (Some(xy), Some(xx), Some(ygx)) => Some(xy as i64 - xx as i64 - ygx as i64),
        _ => None,
    };
    Ok(SubadditivityReport { qc_xy, qc_xx, qc_y_given_x, residual })
}

/// Single-copy vs two-copy minimal lengths for one target.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CopiesGapReport {
    pub qc_single: QcEstimate,
    pub qc_double: QcEstimate,
    /// Two copies cost more than one copy plus the one extra bit that
    /// doubling would cost classically.
    pub anomaly: bool,
}

/// Compares QC(X) with QC(X⊗X). A gap beyond one bit witnesses that
/// copying is not free for unknown states: the two-copy program cannot
/// just replay a one-copy description.
pub fn copies_gap(
    x: &PureState,
    target_fidelity: f64,
    max_len: u32,
    shards: usize,
) -> Result<CopiesGapReport> {
    let qc_single = qc_search_sharded(x, target_fidelity, max_len, shards)?;
    let qc_double = qc_search_sharded(&x.tensor(x), target_fidelity, max_len, shards)?;
    let anomaly = match (qc_single.min_length, qc_double.min_length) {
        (Some(s), Some(d)) => d > s + 1,
        _ => false,
    };
    Ok(CopiesGapReport { qc_single, qc_double, anomaly })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;

    #[test]
    fn orthogonal_qubit_pair_is_certified() {
        let states =
            vec![PureState::basis(2, 0).to_density(), PureState::basis(2, 1).to_density()];
        let report = verify_incompressibility(&states, 0.99, 10, 1).unwrap();
        assert!((report.chi - 1.0).abs() < 1e-9);
        assert_eq!(report.min_lengths, vec![Some(3), Some(9)]);
        assert_eq!(report.l_star, Some(9));
        assert!(report.counting_certified);
        assert_eq!(report.counting_floor, 1);
        assert_eq!(report.bound_holds, Some(true));
        assert!(report.exhaustive);
    }

    #[test]
    fn two_qubit_basis_meets_the_log_m_floor() {
        let states: Vec<DensityMatrix> =
            (0..4).map(|i| PureState::basis(4, i).to_density()).collect();
        let report = verify_incompressibility(&states, 0.75, 12, 2).unwrap();
        assert!((report.chi - 2.0).abs() < 1e-9);
        assert_eq!(report.min_lengths, vec![Some(3), Some(9), Some(9), Some(11)]);
        assert_eq!(report.l_star, Some(11));
        assert_eq!(report.counting_floor, 2);
        assert_eq!(report.bound_holds, Some(true));
    }

    #[test]
    fn identical_states_make_the_bound_vacuous() {
        let states = vec![PureState::plus().to_density(); 3];
        let report = verify_incompressibility(&states, 0.99, 10, 1).unwrap();
        assert!(report.chi.abs() < 1e-9);
        assert!(!report.pairwise_orthogonal);
        assert!(!report.counting_certified);
        assert_eq!(report.bound_holds, None);
    }

    #[test]
    fn counting_pairs_match_the_closed_form() {
        assert_eq!(
            counting_check(4, 2).unwrap(),
            CountingCheck { program_budget: 3, state_demand: 13, degenerate: false }
        );
        assert_eq!(
            counting_check(1, 0).unwrap(),
            CountingCheck { program_budget: 1, state_demand: 1, degenerate: false }
        );
        let degenerate = counting_check(3, 3).unwrap();
        assert_eq!(degenerate.program_budget, 0);
        assert_eq!(degenerate.state_demand, 8);
        assert!(degenerate.degenerate);
        assert!(counting_check(25, 0).is_err());
        assert!(counting_check(3, 4).is_err());
    }

    #[test]
    fn counting_budget_is_always_short_of_demand() {
        for n in 1..=12u32 {
            for c in 0..n {
                let check = counting_check(n, c).unwrap();
                assert!(check.program_budget < 1 << (n - c));
                assert_eq!(check.program_budget + check.state_demand, 1u64 << n);
            }
        }
    }

    #[test]
    fn invariance_holds_on_the_ground_state() {
        let report = invariance_demo(&PureState::basis(2, 0), 0.999, 10, 1).unwrap();
        assert_eq!(report.qc_a.min_length, Some(3));
        assert_eq!(report.qc_b.min_length, Some(3));
        assert!(report.bound_holds);
        assert!(!report.vacuous);
    }

    #[test]
    fn invariance_holds_on_seeded_targets() {
        for trial in 0..6u64 {
            let x = random::random_pure(2, random::derive_seed(4000, trial));
            let report = invariance_demo(&x, 0.9, 15, 4).unwrap();
            assert!(report.bound_holds, "trial {}: {:?}", trial, report);
        }
    }

    #[test]
    fn invariance_rejects_ceilings_without_prefix_room() {
        assert!(invariance_demo(&PureState::basis(2, 0), 0.9, 19, 1).is_err());
    }

    #[test]
    fn subadditivity_on_classical_ground_states() {
        let zero = PureState::basis(2, 0);
        let report = subadditivity_spotcheck(&zero, &zero, 0.999, 12, 1).unwrap();
        assert_eq!(report.qc_xy.min_length, Some(3));
        assert_eq!(report.qc_xx.min_length, Some(3));
        assert_eq!(report.qc_y_given_x.min_length, Some(3));
        assert_eq!(report.residual, Some(-3));
    }

    #[test]
    fn copies_of_an_unknown_state_cost_extra() {
        let report = copies_gap(&PureState::plus(), 0.99, 16, 2).unwrap();
        assert_eq!(report.qc_single.min_length, Some(9));
        assert_eq!(report.qc_double.min_length, Some(15));
        assert!(report.anomaly);
        // A classical target shows no such gap beyond the doubling bit.
        let report = copies_gap(&PureState::basis(2, 0), 0.99, 12, 1).unwrap();
        assert!(!report.anomaly);
    }
}
