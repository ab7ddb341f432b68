mod common;

use common::*;
use dedmod::kernel::{check_proof, find_cuts, Rule, Sequent};
use dedmod::prover::{consistency_probe, search_proof, SearchOutcome};
use dedmod::syntax::{Proposition, Term};
use dedmod::theories::load_builtin;
use proptest::prelude::*;

#[test]
fn associativity_is_not_needed_for_identical_sides() {
    let assoc = load_builtin("assoc").unwrap();
    let empty = rule_free("empty", assoc.signature.clone());
    let (t, g) = goal_file(&empty, "assoc-identity.goal");
    let r = search_proof(&t, &g, 8).unwrap();
    assert!(r.outcome.is_proved());
    assert_eq!(r.stats.narrowing_calls, 0);
}

#[test]
fn witness_by_unification_modulo_associativity() {
    let (t, g) = goal_file(&load_builtin("assoc").unwrap(), "assoc-exists.goal");
    let SearchOutcome::Proved(p) = search_proof(&t, &g, 8).unwrap().outcome else { panic!() };
    assert_eq!(p.rule, Rule::ExistsIntro(Term::app("+", vec![Term::constant("b"), Term::constant("c")])));
    // without the rule the same goal has no proof
    let empty = rule_free("empty", t.signature.clone());
    assert_eq!(search_proof(&empty, &g, 8).unwrap().outcome, SearchOutcome::Fail);
}

#[test]
fn crabbe_has_no_cut_free_proof_within_bounds() {
    let t = load_builtin("crabbe").unwrap();
    for depth in [1, 5, 10] {
        assert_eq!(search_proof(&t, &Sequent::goal(prop(&t, "Q")), depth).unwrap().outcome, SearchOutcome::Fail);
    }
}

#[test]
fn probes() {
    for name in ["empty", "pf-collapse", "def-conj", "assoc", "addition", "powerset", "p0-forall"] {
        let t = load_builtin(name).unwrap();
        assert_eq!(consistency_probe(&t, 10).unwrap().outcome, SearchOutcome::Fail, "{name}");
    }
    let (t, g) = goal_file(&load_builtin("empty").unwrap(), "pf-hypothesis.goal");
    for depth in 4..=10 {
        let start = std::time::Instant::now();
        assert_eq!(search_proof(&t, &g, depth).unwrap().outcome, SearchOutcome::BoundExceeded);
        assert!(start.elapsed().as_secs() < 10);
    }
}

#[test]
fn definition_as_rule_or_as_hypothesis() {
    let t = load_builtin("def-conj").unwrap();
    let rows = fold_unfold_agreement(&t, "(iff P (and A B))", &DEF_CONJ_GOALS, 6, 4);
    for (g, a, b) in &rows {
        assert_eq!(a, b, "{g}");
    }
    assert_eq!(rows.iter().filter(|r| r.1).count(), 14);
}

#[test]
fn associativity_as_rule_or_as_hypothesis() {
    let t = load_builtin("assoc").unwrap();
    let goals = [
        "(imp (P (+ a (+ b c))) (P (+ (+ a b) c)))",
        "(imp (P (+ (+ a b) c)) (P (+ a (+ b c))))",
        "(imp (P (+ (+ a b) (+ c d))) (P (+ a (+ b (+ c d)))))",
        "(imp (P (+ a (+ b c))) (P (+ a (+ b c))))",
        "(imp (P (+ a b)) (P (+ b a)))",
        "(imp (P (+ (+ a b) c)) (P (+ a (+ c b))))",
        "(imp (P a) (P b))",
    ];
    // the hypothesis rewrites only at the root of P's argument, which is
    // where every provable goal here needs it
    let axiom = "(forall x:i (forall y:i (forall z:i (iff (P (+ x (+ y z))) (P (+ (+ x y) z))))))";
    for (g, a, b) in fold_unfold_agreement(&t, axiom, &goals, 4, 4) {
        assert_eq!(a, b, "{g}");
    }
}

#[test]
fn depth_monotonicity() {
    let t = load_builtin("def-conj").unwrap();
    for g in DEF_CONJ_GOALS {
        let seq = Sequent::goal(prop(&t, g));
        if let Some(d) = (0..=6).find(|d| proves(&t, &seq, *d)) {
            for e in d..=8 {
                assert!(proves(&t, &seq, e), "{g} at {e}");
            }
        }
    }
    let (t, g) = goal_file(&load_builtin("assoc").unwrap(), "assoc-exists.goal");
    for e in 2..=9 {
        assert!(proves(&t, &g, e), "{e}");
    }
}

#[test]
fn proofs_found_are_checked_and_cut_free() {
    for (t, g, p) in seed_proofs() {
        check_proof(&t, &p, &g, FUEL).unwrap();
        assert!(find_cuts(&t, &g, &p, FUEL).unwrap().is_cut_free());
    }
}

#[test]
fn disjunction_proofs_end_with_an_introduction() {
    for (name, g) in DISJUNCTIONS {
        let mut t = load_builtin(name).unwrap();
        if name == "addition" {
            let mut s = t.signature.clone();
            s.add_predicate("P", &["nat"]).unwrap();
            t = t.extend_signature(&s).unwrap();
        }
        let SearchOutcome::Proved(p) = search_proof(&t, &Sequent::goal(prop(&t, g)), 8).unwrap().outcome else {
            panic!("{name}: {g}")
        };
        assert!(ends_with_or_intro(&p), "{g}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn random_disjunctions_end_with_an_introduction(a in arb_def_conj_prop(), b in arb_def_conj_prop()) {
        let t = load_builtin("def-conj").unwrap();
        let g = Sequent::goal(Proposition::or(a, b));
        if let SearchOutcome::Proved(p) = search_proof(&t, &g, 5).unwrap().outcome {
            prop_assert!(ends_with_or_intro(&p));
        }
    }
}
