use proptest::prelude::*;

use qkc::kolm::{
    self, BitString, InterpreterId, Program, bits_of, block_entropy_decode,
    block_entropy_encode, counting_check,
};
use qkc::random::{derive_seed, random_density, random_pure};
use qkc::state::{fidelity, fidelity_pure, fidelity_pure_mixed};
use qkc::sym::{enumerate_multisets, sym_dimension};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fidelity_is_symmetric_and_bounded(seed in any::<u64>(), dim in 2usize..=4) {
        let a = random_density(dim, dim, derive_seed(seed, 1));
        let b = random_density(dim, 1 + (seed % dim as u64) as usize, derive_seed(seed, 2));
        let fab = fidelity(&a, &b).unwrap();
        let fba = fidelity(&b, &a).unwrap();
        prop_assert!((fab - fba).abs() < 1e-9);
        prop_assert!((-1e-12..=1.0 + 1e-9).contains(&fab));
        prop_assert!((fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn pure_rules_agree_with_the_density_rule(seed in any::<u64>(), dim in 2usize..=4) {
        let x = random_pure(dim, derive_seed(seed, 1));
        let y = random_pure(dim, derive_seed(seed, 2));
        let rho = random_density(dim, dim, derive_seed(seed, 3));
        let direct = fidelity_pure(&x, &y).unwrap();
        let lifted = fidelity(&x.to_density(), &y.to_density()).unwrap();
        prop_assert!((direct - lifted).abs() < 1e-8);
        let cross = fidelity_pure_mixed(&x, &rho).unwrap();
        let lifted = fidelity(&x.to_density(), &rho).unwrap();
        prop_assert!((cross - lifted).abs() < 1e-8);
    }

    #[test]
    fn entropy_stays_within_log_dim(seed in any::<u64>(), dim in 2usize..=6) {
        let rho = random_density(dim, 1 + (seed % dim as u64) as usize, seed);
        let s = rho.von_neumann_entropy();
        prop_assert!(s >= -1e-9);
        prop_assert!(s <= (dim as f64).log2() + 1e-9);
    }

    #[test]
    fn two_step_closeness_composes(seed in any::<u64>(), dim in 2usize..=4) {
        let a = random_density(dim, dim, derive_seed(seed, 1));
        let b = random_density(dim, dim, derive_seed(seed, 2));
        let c = random_density(dim, dim, derive_seed(seed, 3));
        let d1 = 1.0 - fidelity(&a, &b).unwrap();
        let d2 = 1.0 - fidelity(&b, &c).unwrap();
        prop_assert!(fidelity(&a, &c).unwrap() >= 1.0 - 2.0 * d1 - 2.0 * d2 - 1e-9);
    }
}

proptest! {
    #[test]
    fn bit_strings_roundtrip_through_hex(value in any::<u64>(), len in 1usize..=64) {
        let value = if len == 64 { value } else { value & ((1u64 << len) - 1) };
        let bits = BitString::from_value(value, len);
        let back = BitString::from_hex(&bits.to_hex(), len).unwrap();
        prop_assert_eq!(back, bits);
    }

    #[test]
    fn block_codes_roundtrip_within_their_bound(
        (k, bits) in (1usize..=4, 1usize..=8).prop_flat_map(|(k, blocks)| {
            (Just(k), proptest::collection::vec(any::<bool>(), k * blocks))
        })
    ) {
        let len = bits.len();
        let code = block_entropy_encode(&bits, k).unwrap();
        prop_assert_eq!(block_entropy_decode(&code.codeword, k, len).unwrap(), bits);
        prop_assert!(code.codeword.len() as f64 <= code.length_bound + 1e-9);
    }

    #[test]
    fn counting_budget_and_demand_partition_the_cube(
        (n, c) in (1u32..=24).prop_flat_map(|n| (Just(n), 0..=n))
    ) {
        let check = counting_check(n, c).unwrap();
        prop_assert_eq!(check.program_budget + check.state_demand, 1u64 << n);
        prop_assert_eq!(check.degenerate, c == n);
        prop_assert!(check.program_budget < 1u64 << (n - c));
    }

    #[test]
    fn multiset_arrangement_counts_partition_product_space(d in 1usize..=4, m in 0usize..=6) {
        let total: u128 = enumerate_multisets(d, m)
            .iter()
            .map(|idx| idx.permutation_count() as u128)
            .sum();
        prop_assert_eq!(total, (d as u128).pow(m as u32));
        prop_assert_eq!(
            enumerate_multisets(d, m).len() as u128,
            sym_dimension(d, m).unwrap()
        );
    }

    #[test]
    fn decoding_arbitrary_bits_never_panics(bits in proptest::collection::vec(any::<bool>(), 0..=20)) {
        for interpreter in [InterpreterId::A, InterpreterId::B] {
            let program = Program::new(BitString::from_bits(&bits), interpreter);
            if let Ok(out) = kolm::interpret(&program, None) {
                let norm: f64 = out.amps().iter().map(|a| a.norm_sqr()).sum();
                prop_assert!((norm - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn literal_programs_always_reproduce_their_string(value in any::<u64>(), len in 1usize..=8) {
        let value = value & ((1u64 << len) - 1);
        let x = bits_of(value, len);
        let program = kolm::literal_program(&x).unwrap();
        prop_assert_eq!(program.len(), len + 9);
        let out = kolm::interpret(&program, None).unwrap();
        let target = qkc::state::PureState::basis(1 << len, value as usize);
        prop_assert!((fidelity_pure(&out, &target).unwrap() - 1.0).abs() < 1e-12);
    }
}
