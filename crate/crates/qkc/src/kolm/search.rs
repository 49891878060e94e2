//! Exhaustive shortest-program search.
//!
//! Programs are enumerated by length, then numerically within a length —
//! which is lexicographic order on the bits — and the first hit wins, so
//! the minimum is unique and the witness deterministic. Within a length
//! the enumeration range may be split across worker threads; each worker
//! reports the lowest hit in its sub-range and the merge takes the global
//! minimum, making the result independent of the worker count.

use crate::error::{QkcError, Result};
use crate::state::{PureState, fidelity_pure};

use super::interp::{decode, run};
use super::program::{BitString, InterpreterId, Program};

/// Hard ceiling on searched program length.
pub const MAX_SEARCH_LEN: u32 = 24;

/// Outcome of a minimal-length search at a fixed fidelity target.
///
/// `min_length = None` means no program up to the ceiling reached the
/// target; `exhaustive` is then still true — every candidate was tried.
/// `programs_evaluated` counts enumeration positions up to and including
/// the witness (all `2^l` strings of every exhausted length), a function
/// of the result alone so that worker count cannot change it.
#[derive(Clone, Debug, serde::Serialize)]
pub struct QcEstimate {
    pub target_fidelity: f64,
    pub min_length: Option<u32>,
    pub witness: Option<Program>,
    pub achieved_fidelity: Option<f64>,
    pub exhaustive: bool,
    pub search_ceiling: u32,
    pub programs_evaluated: u64,
}

impl QcEstimate {
    /// Length as a comparable number, infinite when nothing was found.
    pub fn length_or_infinite(&self) -> f64 {
        self.min_length.map_or(f64::INFINITY, f64::from)
    }
}

pub(crate) struct SearchSettings {
    pub interpreter: InterpreterId,
    pub target_fidelity: f64,
    pub max_len: u32,
    pub shards: usize,
}

/// Core enumeration: minimal program whose output scores at least the
/// target under `score`. The score callback sees only outputs of matching
/// dimension; programs that fail to decode or to stay pure are skipped.
pub(crate) fn search_with<F>(
    settings: &SearchSettings,
    aux: Option<&PureState>,
    output_dim: usize,
    score: F,
) -> Result<QcEstimate>
where
    F: Fn(&PureState) -> Result<f64> + Sync,
{
    if !(settings.target_fidelity > 0.0 && settings.target_fidelity <= 1.0) {
        return Err(QkcError::InvalidArgument(format!(
            "fidelity target {} outside (0, 1]",
            settings.target_fidelity
        )));
    }
    if settings.max_len > MAX_SEARCH_LEN {
        return Err(QkcError::SizeLimit(format!(
            "search ceiling {} above the {}-bit enumeration limit",
            settings.max_len, MAX_SEARCH_LEN
        )));
    }
    if !output_dim.is_power_of_two() {
        return Err(QkcError::InvalidState(format!(
            "target dimension {} is not a qubit register",
            output_dim
        )));
    }

    let evaluate = |value: u64, len: u32| -> Result<Option<f64>> {
        let bits = BitString::from_value(value, len as usize);
        let decoded = match decode(&bits, settings.interpreter) {
            Ok(d) => d,
            Err(_) => return Ok(None),
        };
        if 1usize << decoded.width != output_dim {
            return Ok(None);
        }
        let out = match run(&decoded, aux) {
            Ok(o) => o,
            Err(QkcError::EntangledOutput(_)) | Err(QkcError::WidthExceeded(_)) => {
                return Ok(None);
            }
            Err(e) => return Err(e),
        };
        let f = score(&out)?;
        Ok((f >= settings.target_fidelity).then_some(f))
    };

    for len in 0..=settings.max_len {
        let total = 1u64 << len;
        let shards = settings.shards.clamp(1, 64).min(total as usize) as u64;
        let chunk = total.div_ceil(shards);

        let scan = |lo: u64, hi: u64| -> Result<Option<(u64, f64)>> {
            for v in lo..hi {
                if let Some(f) = evaluate(v, len)? {
                    return Ok(Some((v, f)));
                }
            }
            Ok(None)
        };

        let hit: Option<(u64, f64)> = if shards == 1 {
            scan(0, total)?
        } else {
            let partials: Vec<Result<Option<(u64, f64)>>> = std::thread::scope(|scope| {
                (0..shards)
                    .map(|s| {
                        let scan = &scan;
                        scope.spawn(move || scan(s * chunk, ((s + 1) * chunk).min(total)))
                    })
                    .collect::<Vec<_>>()
                    .into_iter()
                    .map(|h| h.join().expect("search worker panicked"))
                    .collect()
            });
            let mut best = None;
            for p in partials {
                if let Some((v, f)) = p? {
                    best = match best {
                        Some((bv, _)) if bv <= v => best,
                        _ => Some((v, f)),
                    };
                }
            }
            best
        };

        if let Some((value, achieved)) = hit {
            let exhausted_below: u64 = (1u64 << len) - 1; // Σ_{l<len} 2^l
            return Ok(QcEstimate {
                target_fidelity: settings.target_fidelity,
                min_length: Some(len),
                witness: Some(Program::new(
                    BitString::from_value(value, len as usize),
                    settings.interpreter,
                )),
                achieved_fidelity: Some(achieved),
                exhaustive: true,
                search_ceiling: settings.max_len,
                programs_evaluated: exhausted_below + value + 1,
            });
        }
    }

    Ok(QcEstimate {
        target_fidelity: settings.target_fidelity,
        min_length: None,
        witness: None,
        achieved_fidelity: None,
        exhaustive: true,
        search_ceiling: settings.max_len,
        programs_evaluated: (1u64 << (settings.max_len + 1)) - 1,
    })
}

/// Minimal program length reproducing a pure target at the given fidelity.
pub fn qc_search(x: &PureState, target_fidelity: f64, max_len: u32) -> Result<QcEstimate> {
    qc_search_sharded(x, target_fidelity, max_len, 1)
}

pub fn qc_search_sharded(
    x: &PureState,
    target_fidelity: f64,
    max_len: u32,
    shards: usize,
) -> Result<QcEstimate> {
    let settings = SearchSettings {
        interpreter: InterpreterId::A,
        target_fidelity,
        max_len,
        shards,
    };
    search_with(&settings, None, x.dim(), |out| fidelity_pure(out, x))
}

/// Minimal program length with `y` preloaded in the auxiliary register.
/// With no auxiliary state this is exactly [`qc_search`].
pub fn qc_conditional_search(
    x: &PureState,
    y: Option<&PureState>,
    target_fidelity: f64,
    max_len: u32,
) -> Result<QcEstimate> {
    qc_conditional_search_sharded(x, y, target_fidelity, max_len, 1)
}

pub fn qc_conditional_search_sharded(
    x: &PureState,
    y: Option<&PureState>,
    target_fidelity: f64,
    max_len: u32,
    shards: usize,
) -> Result<QcEstimate> {
    let settings = SearchSettings {
        interpreter: InterpreterId::A,
        target_fidelity,
        max_len,
        shards,
    };
    search_with(&settings, y, x.dim(), |out| fidelity_pure(out, x))
}

/// [`qc_search`] under a chosen interpreter, for cross-machine comparisons.
pub fn qc_search_on(
    interpreter: InterpreterId,
    x: &PureState,
    target_fidelity: f64,
    max_len: u32,
    shards: usize,
) -> Result<QcEstimate> {
    let settings = SearchSettings { interpreter, target_fidelity, max_len, shards };
    search_with(&settings, None, x.dim(), |out| fidelity_pure(out, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::C64;
    use crate::random;

    #[test]
    fn ground_state_needs_only_the_width_field() {
        let est = qc_search(&PureState::basis(2, 0), 1.0, 6).unwrap();
        assert_eq!(est.min_length, Some(3));
        assert_eq!(est.witness.as_ref().unwrap().bits.to_string(), "000");
        assert_eq!(est.achieved_fidelity, Some(1.0));
        assert!(est.exhaustive);
        // 7 shorter strings plus the witness itself.
        assert_eq!(est.programs_evaluated, 8);
    }

    #[test]
    fn plus_state_needs_one_hadamard() {
        let est = qc_search(&PureState::plus(), 0.999, 10).unwrap();
        assert_eq!(est.min_length, Some(9));
        assert_eq!(est.witness.as_ref().unwrap().bits.to_string(), "000001000");
    }

    #[test]
    fn known_witness_caps_the_minimum() {
        // |1>: the 9-bit X-program is a witness, so the search can't exceed it.
        let est = qc_search(&PureState::basis(2, 1), 0.999, 12).unwrap();
        assert!(est.min_length.unwrap() <= 9);
        assert_eq!(est.min_length, Some(9));
    }

    #[test]
    fn two_qubit_literal_beats_gate_synthesis() {
        let est = qc_search(&PureState::basis(4, 3), 1.0, 12).unwrap();
        assert_eq!(est.min_length, Some(11)); // literal; X,X would take 15
    }

    #[test]
    fn unreachable_target_reports_not_found() {
        let theta: f64 = 0.37;
        let x = PureState::new(vec![
            C64::new(theta.cos(), 0.0),
            C64::new(theta.sin(), 0.0),
        ])
        .unwrap();
        let est = qc_search(&x, 1.0, 8).unwrap();
        assert_eq!(est.min_length, None);
        assert!(est.witness.is_none());
        assert!(est.exhaustive);
        assert_eq!(est.search_ceiling, 8);
        assert_eq!(est.programs_evaluated, (1 << 9) - 1);
    }

    #[test]
    fn shard_count_never_changes_the_estimate() {
        let x = PureState::plus().tensor(&PureState::basis(2, 1));
        let reference = qc_search_sharded(&x, 0.99, 15, 1).unwrap();
        for shards in [2, 3, 8, 64] {
            let est = qc_search_sharded(&x, 0.99, 15, shards).unwrap();
            assert_eq!(est.min_length, reference.min_length);
            assert_eq!(est.witness, reference.witness);
            assert_eq!(est.achieved_fidelity, reference.achieved_fidelity);
            assert_eq!(est.programs_evaluated, reference.programs_evaluated);
        }
    }

    #[test]
    fn conditional_with_aux_equal_to_target_is_one_swap() {
        let y = random::random_pure(2, 31);
        let est = qc_conditional_search(&y, Some(&y), 0.999, 9).unwrap();
        assert_eq!(est.min_length, Some(6)); // width field + copy-aux
        assert_eq!(est.witness.as_ref().unwrap().bits.to_string(), "000110");
    }

    #[test]
    fn conditional_without_aux_reduces_to_plain_search() {
        let x = PureState::plus();
        let plain = qc_search(&x, 0.999, 10).unwrap();
        let cond = qc_conditional_search(&x, None, 0.999, 10).unwrap();
        assert_eq!(plain.min_length, cond.min_length);
        assert_eq!(plain.witness, cond.witness);
        assert_eq!(plain.programs_evaluated, cond.programs_evaluated);
    }

    #[test]
    fn distinct_outputs_respect_the_counting_budget() {
        // Programs of length < l can serve fewer than 2^l distinguishable
        // targets above fidelity 1/√2: only 2^l - 1 strings exist, and one
        // output cannot sit that close to two orthogonal targets at once.
        let l = 8u32;
        let mut outputs: Vec<PureState> = Vec::new();
        for len in 0..l {
            for v in 0..1u64 << len {
                let bits = BitString::from_value(v, len as usize);
                let Ok(decoded) = decode(&bits, InterpreterId::A) else { continue };
                let Ok(out) = run(&decoded, None) else { continue };
                let novel = !outputs.iter().any(|seen| {
                    seen.dim() == out.dim()
                        && fidelity_pure(seen, &out).unwrap()
                            > std::f64::consts::FRAC_1_SQRT_2
                });
                if novel {
                    outputs.push(out);
                }
            }
        }
        assert!(!outputs.is_empty());
        assert!((outputs.len() as u64) < 1 << l, "{} outputs", outputs.len());
    }

    #[test]
    fn invalid_settings_are_rejected() {
        let x = PureState::basis(2, 0);
        assert!(qc_search(&x, 0.0, 4).is_err());
        assert!(qc_search(&x, 1.5, 4).is_err());
        assert!(qc_search(&x, 0.9, 25).is_err());
    }
}
