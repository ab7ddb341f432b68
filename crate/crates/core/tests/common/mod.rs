//! Generators and independent oracles shared by the property suites and the
//! acceptance target.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use dedmod::kernel::{check_proof, find_cuts, normalize_proof, reduce_cut, ProofTree, Rule, Sequent};
use dedmod::parse::{parse_document, parse_prop};
use dedmod::prover::{search_proof, SearchOutcome};
use dedmod::rewrite::{RewriteSystem, RuleBody};
use dedmod::syntax::{Atom, Expr, Proposition, Signature, Substitutable, Substitution, Term, Var};
use dedmod::theories::{load_builtin, validate_theory, Theory};
use dedmod::unify::{narrow_unify, NarrowBounds, UnificationProblem};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FUEL: usize = 10_000;

pub fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

pub fn read_corpus(name: &str) -> String {
    std::fs::read_to_string(corpus(name)).unwrap()
}

/// A goal file read against a theory; extra declarations extend the theory.
pub fn goal_file(theory: &Theory, name: &str) -> (Theory, Sequent) {
    let doc = parse_document(&read_corpus(name), &theory.signature).unwrap();
    let t = theory.extend_signature(&doc.signature).unwrap();
    (t, Sequent::new(doc.hypotheses, doc.goals[0].clone()).unwrap())
}

pub fn prop(t: &Theory, text: &str) -> Proposition {
    parse_prop(text, &t.signature).unwrap()
}

/// A theory with `signature` and no rules.
pub fn rule_free(name: &str, signature: Signature) -> Theory {
    let mut t = Theory::new(name, signature, RewriteSystem::new());
    validate_theory(&mut t, FUEL);
    t
}

// ---------------------------------------------------------------- syntax

/// Sort `i`; constants a, b; f unary, g binary; P unary, R binary.
pub fn small_signature() -> Signature {
    let mut s = Signature::new();
    s.add_sort("i").unwrap();
    s.add_function("a", &[], "i").unwrap();
    s.add_function("b", &[], "i").unwrap();
    s.add_function("f", &["i"], "i").unwrap();
    s.add_function("g", &["i", "i"], "i").unwrap();
    s.add_predicate("P", &["i"]).unwrap();
    s.add_predicate("R", &["i", "i"]).unwrap();
    s
}

pub const VARS: [&str; 4] = ["x", "y", "z", "x'"];

pub fn var(name: &str) -> Var {
    Var::new(name, "i")
}

pub fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        prop::sample::select(VARS.to_vec()).prop_map(|v| Term::Var(var(v))),
        prop::sample::select(vec!["a", "b"]).prop_map(Term::constant),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::app("f", vec![t])),
            (inner.clone(), inner).prop_map(|(a, b)| Term::app("g", vec![a, b])),
        ]
    })
}

pub fn arb_prop() -> impl Strategy<Value = Proposition> {
    let leaf = prop_oneof![
        arb_term().prop_map(|t| Proposition::atom("P", vec![t])),
        (arb_term(), arb_term()).prop_map(|(a, b)| Proposition::atom("R", vec![a, b])),
        Just(Proposition::Top),
        Just(Proposition::Bottom),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        let v = prop::sample::select(VARS.to_vec());
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Proposition::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Proposition::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Proposition::imp(a, b)),
            (v.clone(), inner.clone()).prop_map(|(v, b)| Proposition::forall(var(v), b)),
            (v, inner).prop_map(|(v, b)| Proposition::exists(var(v), b)),
        ]
    })
}

pub fn arb_subst() -> impl Strategy<Value = Substitution> {
    prop::collection::vec((prop::sample::select(VARS.to_vec()), arb_term()), 0..4)
        .prop_map(|pairs| pairs.into_iter().map(|(v, t)| (var(v), t)).collect())
}

/// Locally nameless form: bound variables become de Bruijn indices, so
/// substitution for free names cannot capture.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NTerm {
    Bound(usize),
    Free(Var),
    App(String, Vec<NTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NProp {
    Atom(String, Vec<NTerm>),
    Top,
    Bottom,
    Bin(u8, Box<NProp>, Box<NProp>),
    Quant(u8, String, Box<NProp>),
}

fn nameless_term(t: &Term, env: &[Var]) -> NTerm {
    match t {
        Term::Var(v) => match env.iter().rposition(|w| w == v) {
            Some(i) => NTerm::Bound(env.len() - 1 - i),
            None => NTerm::Free(v.clone()),
        },
        Term::App(f, args) => NTerm::App(f.clone(), args.iter().map(|a| nameless_term(a, env)).collect()),
    }
}

pub fn nameless(p: &Proposition) -> NProp {
    fn go(p: &Proposition, env: &mut Vec<Var>) -> NProp {
        use Proposition::*;
        match p {
            Atom(a) => NProp::Atom(a.pred.clone(), a.args.iter().map(|t| nameless_term(t, env)).collect()),
            Top => NProp::Top,
            Bottom => NProp::Bottom,
            And(a, b) => NProp::Bin(0, Box::new(go(a, env)), Box::new(go(b, env))),
            Or(a, b) => NProp::Bin(1, Box::new(go(a, env)), Box::new(go(b, env))),
            Imp(a, b) => NProp::Bin(2, Box::new(go(a, env)), Box::new(go(b, env))),
            Forall(v, b) | Exists(v, b) => {
                let q = if matches!(p, Forall(..)) { 0 } else { 1 };
                env.push(v.clone());
                let body = go(b, env);
                env.pop();
                NProp::Quant(q, v.sort.0.clone(), Box::new(body))
            }
        }
    }
    go(p, &mut Vec::new())
}

fn nsubst_term(t: &NTerm, s: &Substitution) -> NTerm {
    match t {
        NTerm::Bound(i) => NTerm::Bound(*i),
        NTerm::Free(v) => match s.get(v) {
            Some(u) => nameless_term(u, &[]),
            None => NTerm::Free(v.clone()),
        },
        NTerm::App(f, args) => NTerm::App(f.clone(), args.iter().map(|a| nsubst_term(a, s)).collect()),
    }
}

/// Substitution on the nameless form; inserted terms are closed under no
/// binder, so no shifting is needed.
pub fn nsubst(p: &NProp, s: &Substitution) -> NProp {
    match p {
        NProp::Atom(r, args) => NProp::Atom(r.clone(), args.iter().map(|a| nsubst_term(a, s)).collect()),
        NProp::Top => NProp::Top,
        NProp::Bottom => NProp::Bottom,
        NProp::Bin(k, a, b) => NProp::Bin(*k, Box::new(nsubst(a, s)), Box::new(nsubst(b, s))),
        NProp::Quant(k, sort, b) => NProp::Quant(*k, sort.clone(), Box::new(nsubst(b, s))),
    }
}

// ------------------------------------------------------------- rewriting

fn match_term(pat: &Term, t: &Term, m: &mut BTreeMap<Var, Term>) -> bool {
    match (pat, t) {
        (Term::Var(v), _) => match m.get(v) {
            Some(u) => u == t,
            None => {
                m.insert(v.clone(), t.clone());
                true
            }
        },
        (Term::App(f, ps), Term::App(g, ts)) => {
            f == g && ps.len() == ts.len() && ps.iter().zip(ts).all(|(p, t)| match_term(p, t, m))
        }
        _ => false,
    }
}

fn subst_of(m: BTreeMap<Var, Term>) -> Substitution {
    m.into_iter().collect()
}

/// Rewrites the `k`-th redex (in a fixed traversal order) of `t`, or counts
/// redexes when `k` runs past them. Returns the rewritten term if done.
fn step_term(sys: &RewriteSystem, t: &Term, k: &mut usize) -> Option<Term> {
    for r in sys.rules() {
        if let RuleBody::Term { lhs, rhs } = r.body() {
            let mut m = BTreeMap::new();
            if match_term(lhs, t, &mut m) {
                if *k == 0 {
                    return Some(rhs.apply(&subst_of(m)));
                }
                *k -= 1;
            }
        }
    }
    if let Term::App(f, args) = t {
        for (i, a) in args.iter().enumerate() {
            if let Some(a2) = step_term(sys, a, k) {
                let mut args = args.clone();
                args[i] = a2;
                return Some(Term::App(f.clone(), args));
            }
        }
    }
    None
}

fn step_prop(sys: &RewriteSystem, p: &Proposition, k: &mut usize) -> Option<Proposition> {
    use Proposition::*;
    match p {
        Atom(a) => {
            for r in sys.rules() {
                if let RuleBody::Prop { lhs, rhs } = r.body() {
                    let mut m = BTreeMap::new();
                    let whole = Term::App(lhs.pred.clone(), lhs.args.clone());
                    if match_term(&whole, &Term::App(a.pred.clone(), a.args.clone()), &mut m) {
                        if *k == 0 {
                            return Some(rhs.apply(&subst_of(m)));
                        }
                        *k -= 1;
                    }
                }
            }
            for (i, t) in a.args.iter().enumerate() {
                if let Some(t2) = step_term(sys, t, k) {
                    let mut args = a.args.clone();
                    args[i] = t2;
                    return Some(Proposition::Atom(dedmod::syntax::Atom { pred: a.pred.clone(), args }));
                }
            }
            None
        }
        Top | Bottom => None,
        And(a, b) | Or(a, b) | Imp(a, b) => {
            let rebuild = |x: Proposition, y: Proposition| match p {
                And(..) => Proposition::and(x, y),
                Or(..) => Proposition::or(x, y),
                _ => Proposition::imp(x, y),
            };
            if let Some(a2) = step_prop(sys, a, k) {
                return Some(rebuild(a2, (**b).clone()));
            }
            step_prop(sys, b, k).map(|b2| rebuild((**a).clone(), b2))
        }
        Forall(v, b) => step_prop(sys, b, k).map(|b2| Proposition::forall(v.clone(), b2)),
        Exists(v, b) => step_prop(sys, b, k).map(|b2| Proposition::exists(v.clone(), b2)),
    }
}

fn count<T>(step: impl Fn(&mut usize) -> Option<T>) -> usize {
    let mut k = usize::MAX;
    let _ = step(&mut k);
    usize::MAX - k
}

/// Normal form reached by contracting a randomly chosen redex at each step.
pub fn random_normal_term(sys: &RewriteSystem, t: &Term, rng: &mut ChaCha8Rng) -> Term {
    let mut t = t.clone();
    for _ in 0..FUEL {
        let n = count(|k| step_term(sys, &t, k));
        if n == 0 {
            return t;
        }
        let mut k = rng.gen_range(0..n);
        t = step_term(sys, &t, &mut k).unwrap();
    }
    panic!("oracle out of fuel on {t}");
}

pub fn random_normal_prop(sys: &RewriteSystem, p: &Proposition, rng: &mut ChaCha8Rng) -> Proposition {
    let mut p = p.clone();
    for _ in 0..FUEL {
        let n = count(|k| step_prop(sys, &p, k));
        if n == 0 {
            return p;
        }
        let mut k = rng.gen_range(0..n);
        p = step_prop(sys, &p, &mut k).unwrap();
    }
    panic!("oracle out of fuel on {p}");
}

pub fn nat(n: usize) -> Term {
    (0..n).fold(Term::constant("0"), |t, _| Term::app("S", vec![t]))
}

/// Ground terms over the addition signature.
pub fn arb_nat_term() -> impl Strategy<Value = Term> {
    (0usize..3).prop_map(nat).prop_recursive(3, 10, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::app("S", vec![t])),
            (inner.clone(), inner).prop_map(|(a, b)| Term::app("+", vec![a, b])),
        ]
    })
}

/// Ground terms over the associativity signature.
pub fn arb_assoc_term() -> impl Strategy<Value = Term> {
    prop::sample::select(vec!["a", "b", "c", "d", "e"])
        .prop_map(Term::constant)
        .prop_recursive(4, 16, 2, |inner| (inner.clone(), inner).prop_map(|(a, b)| Term::app("+", vec![a, b])))
}

/// Assoc terms over constants and the variables x, y.
pub fn arb_assoc_open() -> impl Strategy<Value = Term> {
    prop_oneof![
        prop::sample::select(vec!["a", "b", "c"]).prop_map(Term::constant),
        prop::sample::select(vec!["x", "y"]).prop_map(|v| Term::var(v, "i")),
    ]
    .prop_recursive(3, 8, 2, |inner| (inner.clone(), inner).prop_map(|(a, b)| Term::app("+", vec![a, b])))
}

/// Addition terms over 0, S and the variables x, y.
pub fn arb_nat_open() -> impl Strategy<Value = Term> {
    prop_oneof![
        (0usize..3).prop_map(nat),
        prop::sample::select(vec!["x", "y"]).prop_map(|v| Term::var(v, "nat")),
    ]
    .prop_recursive(3, 8, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::app("S", vec![t])),
            (inner.clone(), inner).prop_map(|(a, b)| Term::app("+", vec![a, b])),
        ]
    })
}

/// Propositions over def-conj: A, B, P and connectives.
pub fn arb_def_conj_prop() -> impl Strategy<Value = Proposition> {
    prop_oneof![
        Just(Proposition::atom("A", vec![])),
        Just(Proposition::atom("B", vec![])),
        Just(Proposition::atom("P", vec![])),
        Just(Proposition::Bottom),
    ]
    .prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Proposition::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Proposition::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Proposition::imp(a, b)),
        ]
    })
}

/// Membership propositions over the powerset signature.
pub fn arb_powerset_prop() -> impl Strategy<Value = Proposition> {
    let set = prop::sample::select(vec!["u", "v"])
        .prop_map(|v| Term::var(v, "set"))
        .prop_recursive(2, 4, 1, |inner| inner.prop_map(|t| Term::app("𝒫", vec![t])));
    (set.clone(), set)
        .prop_map(|(a, b)| Proposition::Atom(Atom::new("∈", vec![a, b])))
        .prop_recursive(2, 6, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Proposition::and(a, b)),
                inner.prop_map(|a| Proposition::forall(Var::new("u", "set"), a)),
            ]
        })
}

// ---------------------------------------------------------------- proofs

/// Goals proved by the search, used as seeds for proof mutation.
pub fn seed_proofs() -> Vec<(Theory, Sequent, ProofTree)> {
    let mut out = Vec::new();
    let mut add = |t: &Theory, g: Sequent| {
        let SearchOutcome::Proved(p) = search_proof(t, &g, 8).unwrap().outcome else { panic!("seed {g} not proved") };
        out.push((t.clone(), g, p));
    };
    let dc = load_builtin("def-conj").unwrap();
    for g in ["(imp P A)", "(imp (and A B) P)", "(imp P (or B A))", "(imp (or A P) (or A B))"] {
        add(&dc, Sequent::goal(prop(&dc, g)));
    }
    let pf = load_builtin("p0-forall").unwrap();
    for g in ["(imp (P 0) (exists z:nat (P z)))", "(imp (P 0) (forall y:nat (and (P y) (P 0))))"] {
        add(&pf, Sequent::goal(prop(&pf, g)));
    }
    let ps = load_builtin("powerset").unwrap();
    add(&ps, Sequent::goal(prop(&ps, "(forall x:set (∈ x (𝒫 x)))")));
    let assoc = load_builtin("assoc").unwrap();
    let (t, g) = goal_file(&assoc, "assoc-exists.goal");
    add(&t, g);
    let add_t = load_builtin("addition").unwrap();
    let ctx = vec![("n".to_string(), prop(&with_even(&add_t), "(forall x:nat (imp (Even x) (Even (S (S x)))))"))];
    let t2 = with_even(&add_t);
    add(&t2, Sequent::new(ctx, prop(&t2, "(imp (Even 0) (Even (+ (S 0) (S 0))))")).unwrap());
    out
}

/// Addition with an extra predicate `Even`.
fn with_even(t: &Theory) -> Theory {
    let mut extra = t.signature.clone();
    extra.add_predicate("Even", &["nat"]).unwrap();
    t.extend_signature(&extra).unwrap()
}

fn node_paths(p: &ProofTree, here: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(here.clone());
    for (i, c) in p.children.iter().enumerate() {
        here.push(i);
        node_paths(c, here, out);
        here.pop();
    }
}

pub fn all_paths(p: &ProofTree) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    node_paths(p, &mut Vec::new(), &mut out);
    out
}

fn first_constant(t: &Theory) -> Option<(Term, dedmod::syntax::Sort)> {
    t.signature.functions.iter().find(|(_, d)| d.args.is_empty()).map(|(n, d)| (Term::constant(n), d.result.clone()))
}

/// Wraps the subproof at a random node in an introduction immediately
/// eliminated. `proof` must be fully annotated; `n` makes names fresh.
pub fn insert_detour(t: &Theory, proof: &ProofTree, rng: &mut ChaCha8Rng, n: usize) -> ProofTree {
    let paths = all_paths(proof);
    let path = &paths[rng.gen_range(0..paths.len())];
    let q = proof.at(path).unwrap().clone();
    let c = q.conclusion.clone().expect("annotated");
    let l1 = format!("m{n}");
    let l2 = format!("m{n}'");
    let top = || ProofTree::new(Rule::TopIntro, vec![]);
    let konst = first_constant(t);
    let choices = if konst.is_some() { 7 } else { 5 };
    let d = match rng.gen_range(0..choices) {
        0 => ProofTree::imp_elim(
            ProofTree::imp_intro(&l1, ProofTree::axiom(&l1)).annotated(Proposition::imp(c.clone(), c.clone())),
            q,
        ),
        1 => ProofTree::new(Rule::AndElimLeft, vec![ProofTree::and_intro(q, top())]),
        2 => ProofTree::new(Rule::AndElimRight, vec![ProofTree::and_intro(top(), q)]),
        3 => {
            let major = ProofTree::new(Rule::OrIntroLeft, vec![q]).annotated(Proposition::or(c.clone(), Proposition::Bottom));
            let right = ProofTree::new(Rule::BotElim, vec![ProofTree::axiom(&l2)]);
            ProofTree::new(Rule::OrElim(l1.clone(), l2), vec![major, ProofTree::axiom(&l1), right])
        }
        4 => {
            let inner = ProofTree::new(Rule::AndElimLeft, vec![ProofTree::and_intro(ProofTree::axiom(&l1), top())]);
            ProofTree::imp_elim(ProofTree::imp_intro(&l1, inner).annotated(Proposition::imp(c.clone(), c.clone())), q)
        }
        5 => {
            let (k, sort) = konst.unwrap();
            let x = Var::new(format!("ev{n}"), sort.0.as_str());
            let major = ProofTree::new(Rule::ExistsIntro(k), vec![top()])
                .annotated(Proposition::exists(x.clone(), Proposition::Top));
            ProofTree::new(Rule::ExistsElim(x, l1), vec![major, q])
        }
        _ => {
            let (k, sort) = konst.unwrap();
            let x = Var::new(format!("ev{n}"), sort.0.as_str());
            let major = ProofTree::new(Rule::ForallIntro(x.clone()), vec![q]).annotated(Proposition::forall(x, c.clone()));
            ProofTree::new(Rule::ForallElim(k), vec![major])
        }
    };
    proof.replace_at(path, d)
}

/// Inserts `count` detours, re-elaborating after each.
pub fn mutate(t: &Theory, goal: &Sequent, proof: &ProofTree, count: usize, rng: &mut ChaCha8Rng) -> ProofTree {
    let mut p = check_proof(t, proof, goal, FUEL).unwrap().proof;
    for n in 0..count {
        let q = insert_detour(t, &p, rng, n);
        p = match check_proof(t, &q, goal, FUEL) {
            Ok(c) => c.proof,
            Err(e) => panic!("mutation does not check: {e}\n{q}"),
        };
    }
    p
}

// ---------------------------------------------------------------- search

/// Goals over def-conj: provable ones first.
pub const DEF_CONJ_GOALS: [&str; 24] = [
    "(imp P A)",
    "(imp P B)",
    "(imp (and A B) P)",
    "(imp P (and B A))",
    "(imp (and P P) A)",
    "(imp A (imp B P))",
    "(imp (imp A (imp B P)) (imp (and A B) P))",
    "(imp (or P A) A)",
    "(imp P (or A bot))",
    "(imp (imp P bot) (imp A (imp B bot)))",
    "(imp (imp (and A B) bot) (imp P bot))",
    "(or (imp P A) bot)",
    "(imp (imp A P) (imp A (imp B A)))",
    "(imp (and P (imp A bot)) bot)",
    "(imp A P)",
    "(imp B P)",
    "P",
    "(imp (or A B) P)",
    "(imp (imp A B) P)",
    "(imp P bot)",
    "(imp (imp P A) B)",
    "(or A B)",
    "(imp (or A B) (and A B))",
    "(imp (imp B A) P)",
];

/// Provability modulo a rule against provability from the matching
/// equivalence as a hypothesis, the latter with `extra` more steps.
pub fn fold_unfold_agreement(
    modulo: &Theory,
    axiom: &str,
    goals: &[&str],
    depth: usize,
    extra: usize,
) -> Vec<(String, bool, bool)> {
    let plain = rule_free("empty", modulo.signature.clone());
    let ax = prop(&plain, axiom);
    goals
        .iter()
        .map(|g| {
            let p = prop(modulo, g);
            let a = proves(modulo, &Sequent::goal(p.clone()), depth);
            let b = proves(&plain, &Sequent::new(vec![("ax".into(), ax.clone())], p).unwrap(), depth + extra);
            (g.to_string(), a, b)
        })
        .collect()
}

/// Closed disjunctive goals over the builtins.
pub const DISJUNCTIONS: [(&str, &str); 10] = [
    ("def-conj", "(or (imp P A) B)"),
    ("def-conj", "(or B (imp P (and B A)))"),
    ("def-conj", "(or (imp A A) bot)"),
    ("def-conj", "(or bot (or A (imp P B)))"),
    ("p0-forall", "(or (imp (forall y:nat (P y)) (P 0)) bot)"),
    ("p0-forall", "(or bot (imp (P 0) (exists y:nat (P y))))"),
    ("assoc", "(or bot (imp (P (+ a (+ b c))) (P (+ (+ a b) c))))"),
    ("powerset", "(or (forall x:set (∈ x (𝒫 x))) bot)"),
    ("addition", "(or bot (forall x:nat (imp (P (+ 0 x)) (P x))))"),
    ("crabbe", "(or (imp Q Q) P)"),
];

pub fn ends_with_or_intro(p: &dedmod::kernel::ProofTree) -> bool {
    matches!(p.rule, Rule::OrIntroLeft | Rule::OrIntroRight)
}


pub fn proves(t: &Theory, g: &Sequent, depth: usize) -> bool {
    search_proof(t, g, depth).unwrap().outcome.is_proved()
}

pub const SMALL: NarrowBounds = NarrowBounds { depth: 4, cap: 8 };

pub fn narrowing_case(theory: &str, a: Term, b: Term, seed: u64) -> Result<usize, TestCaseError> {
    let sys = load_builtin(theory).unwrap().system;
    let problem = UnificationProblem::new(Expr::Term(a.clone()), Expr::Term(b.clone()));
    let stream = narrow_unify(&sys, &problem, SMALL).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for s in &stream.solutions {
        let x = random_normal_term(&sys, &a.apply(s), &mut rng);
        let y = random_normal_term(&sys, &b.apply(s), &mut rng);
        prop_assert_eq!(&x, &y, "solution {} of {} = {}", s, a, b);
    }
    Ok(stream.solutions.len())
}


/// Mutates a seed proof, then checks that every single cut reduction and the
/// full normalization keep the conclusion.
pub fn mutation_case(seeds: &[(Theory, Sequent, ProofTree)], case: usize, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (t, goal, base) = &seeds[case % seeds.len()];
    let p = mutate(t, goal, base, 1 + case % 4, rng);
    let report = find_cuts(t, goal, &p, FUEL).map_err(|e| e.to_string())?;
    if report.is_cut_free() {
        return Err(format!("case {case}: mutation left no cut"));
    }
    for cut in &report.cuts {
        let q = reduce_cut(t, goal, &p, &cut.path, FUEL).map_err(|e| format!("case {case}: {e}\n{p}"))?;
        check_proof(t, &q, goal, FUEL).map_err(|e| format!("case {case}: {e}"))?;
    }
    let n = normalize_proof(t, goal, &p, 1000).map_err(|e| format!("case {case}: {e}"))?;
    if !find_cuts(t, goal, &n.proof, FUEL).map_err(|e| e.to_string())?.is_cut_free() {
        return Err(format!("case {case}: normal form has a cut"));
    }
    if n.proof.conclusion.as_ref() != Some(&goal.conclusion) {
        return Err(format!("case {case}: conclusion changed"));
    }
    Ok(())
}
