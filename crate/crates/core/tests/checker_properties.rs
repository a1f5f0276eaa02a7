mod common;

use common::*;
use drat_stitch_core::checker::{
    fixpoint_by_definition, has_at, has_rat, propagate_fixpoint, PropagationOutcome,
};
use drat_stitch_core::{check_refutation, DeletionMode, Formula, ProofStep, Refutation};
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn engine_matches_definitional_fixpoint(cs in formula(12, 14, 3)) {
        let f = to_formula(&cs);
        prop_assert_eq!(propagate_fixpoint(&f), fixpoint_by_definition(&f, |_| 0));
    }

    #[test]
    fn at_is_sound(cs in formula(8, 12, 3), c in clause(8, 4)) {
        let f = to_formula(&cs);
        let c = to_clause(&c);
        if has_at(&f, &c) {
            prop_assert!(entails(&f, &c, 8));
        }
    }

    #[test]
    fn at_is_monotone(cs in formula(8, 10, 3), extra in formula(8, 4, 3), c in clause(8, 4)) {
        let f = to_formula(&cs);
        let c = to_clause(&c);
        if has_at(&f, &c) {
            let bigger = f.union(&to_formula(&extra));
            prop_assert!(has_at(&bigger, &c));
        }
    }

    #[test]
    fn rat_is_satisfiability_preserving(cs in formula(6, 10, 3), c in clause(6, 3)) {
        let f = to_formula(&cs);
        let c = to_clause(&c);
        let Some(&pivot) = c.literals().first() else { return Ok(()); };
        if has_rat(&f, &c, pivot).unwrap() && is_sat(&f, 6) {
            prop_assert!(is_sat(&f.with_clause(c), 6));
        }
    }

    #[test]
    fn valid_refutation_means_unsat(cs in formula(5, 14, 3), steps in prop::collection::vec(clause(5, 3), 0..6)) {
        let f = to_formula(&cs);
        let mut proof: Refutation = steps.iter().map(|c| ProofStep::add(to_clause(c))).collect();
        proof.push(ProofStep::add(to_clause(&[])));
        if check_refutation(&f, &proof, DeletionMode::Strict).is_valid() {
            prop_assert!(!is_sat(&f, 5));
        }
    }
}

fn shuffled_choice(rng: &mut ChaCha8Rng) -> impl FnMut(&[drat_stitch_core::Literal]) -> usize + '_ {
    move |options| rng.gen_range(0..options.len())
}

/// Propagation order never changes the fixpoint: 20 random orders per formula.
#[test]
fn propagation_is_confluent() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    for _ in 0..1000 {
        let cs = formula(12, 16, 3).new_tree(&mut runner).unwrap().current();
        let f = to_formula(&cs);
        let reference = fixpoint_by_definition(&f, |_| 0);
        for _ in 0..20 {
            let mut choose = shuffled_choice(&mut rng);
            assert_eq!(fixpoint_by_definition(&f, &mut choose), reference, "{f:?}");
        }
    }
}

#[test]
fn conflicts_are_unsat() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    for _ in 0..500 {
        let cs = formula(6, 12, 2).new_tree(&mut runner).unwrap().current();
        let f: Formula = to_formula(&cs);
        if propagate_fixpoint(&f) == PropagationOutcome::Conflict {
            assert!(!is_sat(&f, 6));
        }
    }
}
