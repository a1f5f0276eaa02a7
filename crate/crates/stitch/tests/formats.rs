use drat_stitch::io::{drat_to_string, parse_dimacs, parse_drat, write_dimacs};
use drat_stitch_core::{Clause, Formula, Literal, ProofStep, Refutation, StepKind};
use proptest::prelude::*;

fn literal() -> impl Strategy<Value = Literal> {
    (1i32..=40, any::<bool>()).prop_map(|(v, neg)| Literal::new(if neg { -v } else { v }).unwrap())
}

/// Clauses keep their literal order; duplicates collapse on construction.
fn clause() -> impl Strategy<Value = Clause> {
    prop::collection::vec(literal(), 0..6).prop_map(Clause::new)
}

fn step() -> impl Strategy<Value = ProofStep> {
    (clause(), any::<bool>()).prop_map(|(c, delete)| if delete { ProofStep::delete(c) } else { ProofStep::add(c) })
}

/// Re-spaces a DRAT text: random blank runs, tabs, line breaks inside steps, comments.
fn respace(text: &str, seps: &[u8]) -> String {
    let mut out = String::from("c generated\n");
    for (i, token) in text.split_ascii_whitespace().enumerate() {
        out.push_str(match seps[i % seps.len()] % 4 {
            0 => " ",
            1 => "\t ",
            2 => "\n",
            _ => "  \n  ",
        });
        out.push_str(token);
    }
    out.push('\n');
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn drat_round_trips_with_literal_order(steps in prop::collection::vec(step(), 0..30)) {
        let proof: Refutation = steps.into_iter().collect();
        let text = drat_to_string(&proof);
        let back = parse_drat(text.as_bytes()).unwrap();
        prop_assert_eq!(&back, &proof);
        for (a, b) in back.iter().zip(proof.iter()) {
            prop_assert_eq!(a.clause.literals(), b.clause.literals());
            prop_assert_eq!(a.clause.pivot(), b.clause.pivot());
        }
        prop_assert_eq!(drat_to_string(&back), text);
    }

    #[test]
    fn drat_ignores_layout(steps in prop::collection::vec(step(), 1..20), seps in prop::collection::vec(any::<u8>(), 1..8)) {
        let proof: Refutation = steps.into_iter().collect();
        let text = respace(&drat_to_string(&proof), &seps);
        prop_assert_eq!(parse_drat(text.as_bytes()).unwrap(), proof);
    }

    #[test]
    fn dimacs_round_trips_multisets(clauses in prop::collection::vec(clause(), 0..30)) {
        let mut formula = Formula::new();
        for c in clauses {
            formula.add(c);
        }
        let mut text = Vec::new();
        write_dimacs(&formula, &mut text).unwrap();
        let back = parse_dimacs(&text).unwrap();
        prop_assert_eq!(&back.formula, &formula);
        let vars = formula.max_variable().map_or(0, |v| v.index() as usize);
        prop_assert_eq!(back.declared, Some((vars, formula.total_clauses())));
    }
}

#[test]
fn deletion_marker_only_starts_a_step() {
    let proof = parse_drat(b"d 1 2 0\n1\n -2 0 d 3 0 0\n").unwrap();
    let kinds: Vec<StepKind> = proof.iter().map(|s| s.kind).collect();
    assert_eq!(kinds, [StepKind::Delete, StepKind::Add, StepKind::Delete, StepKind::Add]);
    assert!(proof.ends_with_empty_clause());
    assert!(parse_drat(b"1 d 0\n").is_err());
}
