use std::collections::HashMap;

use collatz_descent::pattern::{
    alternating_pattern, congruence_offset, enumerate_classes_within_depth, enumerate_minimal_patterns,
    first_lower_value, pattern_constants,
};
use collatz_descent::scanner::ScanReport;
use collatz_descent::{
    chain_descents, classify_depth, descent_trace, feasibility_margin, sieve_scan, total_stopping_time, twin_check,
    Nat, ResidueClass, ScanConfig, StepKind,
};
use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::Signed;
use proptest::prelude::*;

/// Plain-integer simulation used as the reference for everything below.
fn simulate(n: u128) -> (String, u128) {
    let mut word = String::new();
    let mut v = n;
    loop {
        if v % 2 == 1 {
            v = 3 * v + 1;
            word.push('O');
        } else {
            v /= 2;
            word.push('E');
        }
        if v < n {
            return (word, v);
        }
    }
}

fn steps_to_one(mut n: u128) -> u64 {
    let mut steps = 0;
    while n != 1 {
        n = if n % 2 == 1 { 3 * n + 1 } else { n / 2 };
        steps += 1;
    }
    steps
}

fn depth12() -> Vec<ResidueClass<u128>> {
    enumerate_classes_within_depth::<u128>(12).unwrap()
}

#[test]
fn class_members_follow_their_pattern() {
    for class in depth12() {
        for k in 0u128..200 {
            let n = class.member(&k).unwrap();
            if n < 2 {
                continue;
            }
            let (word, lower) = simulate(n);
            assert_eq!(word, class.pattern().to_string(), "n = {n} in {class}");
            assert_eq!(first_lower_value(&class, &k).unwrap(), lower, "n = {n} in {class}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn lower_values_are_spaced_by_a_power_of_three(idx in 0usize..1000, k in 0u64..1_000_000) {
        let classes = depth12();
        let class = &classes[idx % classes.len()];
        let k = u128::from(k);
        let a = first_lower_value(class, &k).unwrap();
        let b = first_lower_value(class, &(k + 1)).unwrap();
        prop_assert_eq!(b - a, 3u128.pow(class.odd_count()));
    }

    #[test]
    fn traces_respect_parity(n in 2u64..u64::MAX / 4) {
        let trace = descent_trace(&u128::from(n)).unwrap();
        let steps = trace.pattern.steps();
        for (input, step) in trace.inputs().zip(steps) {
            prop_assert_eq!(*step == StepKind::Odd, input % 2 == 1);
        }
        for pair in steps.windows(2) {
            if pair[0] == StepKind::Odd {
                prop_assert_eq!(pair[1], StepKind::Even);
            }
        }
        prop_assert!(trace.first_lower < u128::from(n));
    }

    #[test]
    fn even_starts_descend_in_one_step(m in 1u64..u64::MAX / 2) {
        let trace = descent_trace(&(2 * m)).unwrap();
        prop_assert_eq!(trace.pattern.to_string(), "E");
        prop_assert_eq!(trace.first_lower, m);
    }

    #[test]
    fn reports_do_not_depend_on_workers(
        lo in 2u64..50_000,
        span in 0u64..20_000,
        depth in 0u32..8,
        workers in 1usize..6,
        block in 1u64..5_000,
    ) {
        let base = ScanConfig::default().with_depth(depth);
        let one = sieve_scan(&lo, &(lo + span), &base.clone().with_workers(1)).unwrap();
        let many = sieve_scan(&lo, &(lo + span), &base.with_workers(workers).with_block_size(block)).unwrap();
        prop_assert_eq!(one.canonical_json(), many.canonical_json());
    }
}

#[test]
fn alternating_adder_has_closed_form() {
    for i in 1..=40u32 {
        let pattern = alternating_pattern(i);
        let constants = pattern_constants::<Nat>(&pattern).unwrap();
        assert_eq!(
            constants.adder,
            BigUint::from(3u8).pow(i) - BigUint::from(2u8).pow(i),
            "i = {i}"
        );
    }
}

#[test]
fn congruence_agrees_with_propagation() {
    let mut checked = 0;
    for length in 1..=30 {
        for class in enumerate_minimal_patterns::<u128>(length).unwrap() {
            let x = congruence_offset(class.odd_count(), class.even_count(), class.adder()).unwrap();
            assert_eq!(&x, class.offset(), "{class}");
            checked += 1;
        }
    }
    assert!(checked > 100);
}

#[test]
fn classes_up_to_length_16_are_disjoint() {
    const BITS: u32 = 16;
    let mut owner = vec![None::<String>; 1 << BITS];
    for length in 1..=16 {
        for class in enumerate_minimal_patterns::<u64>(length).unwrap() {
            assert!(class.even_count() <= BITS);
            let step = *class.modulus();
            let mut r = *class.offset();
            while r < 1 << BITS {
                if let Some(prev) = &owner[r as usize] {
                    panic!("residue {r} lies in both {prev} and {class}");
                }
                owner[r as usize] = Some(class.to_string());
                r += step;
            }
        }
    }
}

#[test]
fn patterns_only_exist_for_feasible_lengths() {
    for length in 1..=40usize {
        let feasible = (0..=length as u32).any(|i| feasibility_margin(i, length as u32 - i).is_positive());
        let classes = enumerate_minimal_patterns::<u128>(length).unwrap();
        assert!(feasible || classes.is_empty(), "length {length}");
    }
}

#[test]
fn odd_starts_match_their_class() {
    let classes = enumerate_classes_within_depth::<u64>(16).unwrap();
    let mut by_residue: HashMap<u64, &ResidueClass<u64>> = HashMap::new();
    for class in &classes {
        let mut r = *class.offset();
        while r < 1 << 16 {
            assert!(by_residue.insert(r, class).is_none());
            r += class.modulus();
        }
    }
    for n in (3u64..1 << 16).step_by(2) {
        let (word, _) = simulate(u128::from(n));
        let simulated_even = word.matches('E').count();
        match by_residue.get(&n) {
            Some(class) => assert_eq!(word, class.pattern().to_string(), "n = {n}"),
            None => assert!(simulated_even > 16, "n = {n} descends via {word} but has no class"),
        }
    }
}

/// Reference scan: simulate every number and split by how many halvings its
/// descent needed.
fn naive_scan(lo: u128, hi: u128, depth: u32) -> (u64, u64, u64, Option<u128>) {
    let (mut verified, mut skipped, mut best, mut best_n) = (0, 0, 0, None);
    for n in lo..=hi {
        let (word, lower) = simulate(n);
        assert!(lower < n);
        if depth > 0 && word.matches('E').count() as u32 <= depth {
            skipped += 1;
        } else {
            verified += 1;
            if word.len() as u64 > best {
                best = word.len() as u64;
                best_n = Some(n);
            }
        }
    }
    (verified, skipped, best, best_n)
}

#[test]
fn sieve_scan_matches_naive_scan() {
    let hi = 1u128 << 16;
    for depth in [1, 2, 5] {
        let report: ScanReport<u128> = sieve_scan(&2, &hi, &ScanConfig::default().with_depth(depth)).unwrap();
        assert!(report.failures.is_empty());
        let (verified, skipped, best, best_n) = naive_scan(2, hi, depth);
        assert_eq!(report.verified_count, verified, "depth {depth}");
        assert_eq!(report.skipped_count, skipped, "depth {depth}");
        assert_eq!(report.max_descent_steps, best, "depth {depth}");
        assert_eq!(report.max_descent_start, best_n, "depth {depth}");
    }
}

#[test]
fn measure_two_ways() {
    for depth in 1..=14u32 {
        let report = classify_depth(depth).unwrap();
        let by_sum = report.classes.iter().fold(Ratio::new(0u64, 1), |acc, c| {
            acc + Ratio::new(1, 1u64 << c.even_count())
        });
        assert_eq!(report.resolved_measure, by_sum, "depth {depth}");
        assert_eq!(report.resolved_measure, report.measure_by_bitmap(), "depth {depth}");

        // One full residue system, simulated.
        let base = 1u128 << depth;
        let covered = (base..2 * base)
            .filter(|&n| simulate(n).0.matches('E').count() as u32 <= depth)
            .count() as u64;
        assert_eq!(
            report.resolved_measure,
            Ratio::new(covered, 1u64 << depth),
            "depth {depth}"
        );
        assert_eq!(report.unresolved_residues.len() as u64, (1u64 << depth) - covered);
    }
}

#[test]
fn twin_law_below_ten_thousand() {
    for n in (3u32..=10_000).step_by(2) {
        let record = twin_check(&Nat::from(n)).unwrap();
        assert!(record.holds(), "n = {n}");
    }
}

#[test]
fn descents_chain_to_the_total_stopping_time() {
    for n in 2u32..=10_000 {
        let chain = chain_descents(&u128::from(n)).unwrap();
        let summed: u64 = chain.iter().map(|t| t.len() as u64).sum();
        let total = total_stopping_time(&u128::from(n)).unwrap();
        assert_eq!(summed, total, "n = {n}");
        assert_eq!(total, steps_to_one(u128::from(n)), "n = {n}");
        for pair in chain.windows(2) {
            assert_eq!(pair[1].start, pair[0].first_lower);
        }
    }
}
