//! Bounded, goal-directed, cut-free proof search modulo a rewrite system.
//!
//! Invertible rules are applied eagerly. Universal instances and existential
//! witnesses start as metavariables `?k`, resolved when a branch closes by
//! unifying a hypothesis with the goal modulo the rules.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::kernel::{check_proof, find_cuts, ProofTree, Rule, Sequent};
use crate::rewrite::DEFAULT_FUEL;
use crate::syntax::{alpha_eq, fresh_name, Expr, Proposition, Sort, Substitutable, Substitution, Term, Var, WfError};
use crate::theories::Theory;
use crate::unify::{narrow_unify, NarrowBounds, UnificationProblem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    /// A kernel-checked, cut-free proof.
    Proved(ProofTree),
    /// Every branch failed within the bound.
    Fail,
    /// Some branch was cut by the depth bound or by an incomplete unifier set.
    BoundExceeded,
}

impl SearchOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, SearchOutcome::Proved(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchStats {
    pub nodes: usize,
    pub narrowing_calls: usize,
    /// Candidate proofs the kernel rejected.
    pub rejected: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub outcome: SearchOutcome,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("theory {0} has not been validated")]
    Unvalidated(String),
    #[error("theory {0} is not non-confusing")]
    Confusing(String),
    #[error("malformed goal: {0}")]
    MalformedGoal(WfError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Rule applications allowed on a branch.
    pub depth: usize,
    pub fuel: usize,
    pub narrowing: NarrowBounds,
}

impl SearchOptions {
    pub fn with_depth(depth: usize) -> Self {
        SearchOptions { depth, fuel: DEFAULT_FUEL, narrowing: NarrowBounds::default() }
    }
}

#[derive(Debug, Clone)]
struct Hyp {
    prop: Proposition,
    proof: ProofTree,
    /// Disjunctions and existentials are split once.
    split: bool,
}

#[derive(Debug, Clone, Default)]
struct Branch {
    hyps: Vec<Hyp>,
}

struct Meta {
    sort: Sort,
    /// Eigenvariables created before this metavariable; only those may occur
    /// in its value.
    clock: usize,
}

struct Search<'a> {
    theory: &'a Theory,
    goal: &'a Sequent,
    opts: SearchOptions,
    stats: SearchStats,
    hit_bound: bool,
    metas: Vec<Meta>,
    eigen_clock: BTreeMap<String, usize>,
    clock: usize,
    names: BTreeSet<String>,
    labels: usize,
    found: Option<ProofTree>,
}

type Cont<'k> = &'k mut dyn FnMut(&mut Search<'_>, &Substitution, ProofTree) -> bool;

fn meta_index(v: &Var) -> Option<usize> {
    v.name.strip_prefix('?').and_then(|k| k.parse().ok())
}

fn is_meta(v: &Var) -> bool {
    meta_index(v).is_some()
}

fn has_meta(p: &Proposition) -> bool {
    p.free_vars().iter().any(is_meta)
}

/// Metavariables renamed in order of first occurrence, for variant checks.
fn canonical(p: &Proposition) -> Proposition {
    let mut order = Vec::new();
    collect_metas(p, &mut order);
    let s: Substitution = order
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            let sort = v.sort.clone();
            (v, Term::Var(Var { name: format!("?#{i}"), sort }))
        })
        .collect();
    p.apply(&s)
}

fn collect_metas(p: &Proposition, out: &mut Vec<Var>) {
    let push_term = |t: &Term, out: &mut Vec<Var>| {
        let mut vs = Vec::new();
        term_vars_in_order(t, &mut vs);
        for v in vs {
            if is_meta(&v) && !out.contains(&v) {
                out.push(v);
            }
        }
    };
    match p {
        Proposition::Atom(a) => a.args.iter().for_each(|t| push_term(t, out)),
        Proposition::Top | Proposition::Bottom => {}
        Proposition::And(a, b) | Proposition::Or(a, b) | Proposition::Imp(a, b) => {
            collect_metas(a, out);
            collect_metas(b, out);
        }
        Proposition::Forall(_, b) | Proposition::Exists(_, b) => collect_metas(b, out),
    }
}

fn term_vars_in_order(t: &Term, out: &mut Vec<Var>) {
    match t {
        Term::Var(v) => out.push(v.clone()),
        Term::App(_, args) => args.iter().for_each(|a| term_vars_in_order(a, out)),
    }
}

impl<'a> Search<'a> {
    fn hnf(&mut self, p: &Proposition) -> Option<Proposition> {
        match self.theory.system.head_normalize(p, self.opts.fuel) {
            Ok(n) => Some(n.value),
            Err(_) => {
                self.hit_bound = true;
                None
            }
        }
    }

    fn fresh_label(&mut self) -> String {
        self.labels += 1;
        format!("h{}", self.labels)
    }

    fn new_meta(&mut self, sort: &Sort) -> Term {
        let k = self.metas.len();
        self.metas.push(Meta { sort: sort.clone(), clock: self.clock });
        Term::Var(Var { name: format!("?{k}"), sort: sort.clone() })
    }

    fn new_eigen(&mut self, base: &Var) -> Var {
        let name = fresh_name(base.name.trim_end_matches('\''), &self.names);
        self.names.insert(name.clone());
        self.clock += 1;
        self.eigen_clock.insert(name.clone(), self.clock);
        Var { name, sort: base.sort.clone() }
    }

    /// Adds a hypothesis with its derivation, splitting conjunctions. Returns
    /// false when every part is already known.
    fn add_hyp(&mut self, br: &Branch, prop: Proposition, proof: ProofTree, s: &Substitution) -> Option<Branch> {
        let mut out = br.clone();
        let mut added = false;
        let mut todo = vec![(prop, proof)];
        while let Some((p, pf)) = todo.pop() {
            let cp = canonical(&p.apply(s));
            if out.hyps.iter().any(|h| alpha_eq(&canonical(&h.prop.apply(s)), &cp)) {
                continue;
            }
            let head = self.hnf(&p.apply(s));
            out.hyps.push(Hyp { prop: p, proof: pf.clone(), split: false });
            added = true;
            if let Some(Proposition::And(a, b)) = head {
                todo.push((*b, ProofTree::new(Rule::AndElimRight, vec![pf.clone()])));
                todo.push((*a, ProofTree::new(Rule::AndElimLeft, vec![pf])));
            }
        }
        added.then_some(out)
    }

    /// Unifiers of `a` and `b` modulo the rules, extending `s`.
    fn unify(&mut self, a: &Proposition, b: &Proposition, s: &Substitution) -> Vec<Substitution> {
        if !has_meta(a) && !has_meta(b) {
            return match self.theory.system.congruent_props(a, b, self.opts.fuel) {
                Ok(true) => vec![s.clone()],
                Ok(false) => vec![],
                Err(_) => {
                    self.hit_bound = true;
                    vec![]
                }
            };
        }
        let mut rigid = a.free_vars();
        rigid.extend(b.free_vars());
        rigid.retain(|v| !is_meta(v));
        let problem = UnificationProblem::new(Expr::Prop(a.clone()), Expr::Prop(b.clone())).with_rigid(rigid);
        self.stats.narrowing_calls += 1;
        let stream = match narrow_unify(&self.theory.system, &problem, self.opts.narrowing) {
            Ok(stream) => stream,
            Err(_) => {
                // quantified formulas: only syntactic identity up to bound names
                return if alpha_eq(a, b) { vec![s.clone()] } else { vec![] };
            }
        };
        if !stream.is_complete() {
            self.hit_bound = true;
        }
        let mut out = Vec::new();
        for sol in stream.solutions {
            // variables introduced by narrowing become metavariables
            let mut ren = Substitution::new();
            for v in sol.range_vars() {
                if !is_meta(&v) && !ren.contains(&v) && !a.free_vars().contains(&v) && !b.free_vars().contains(&v) {
                    let m = self.new_meta(&v.sort);
                    ren.insert(v, m);
                }
            }
            let sol: Substitution = sol.iter().map(|(v, t)| (v.clone(), t.apply(&ren))).collect();
            if self.respects_scope(&sol) {
                out.push(s.compose(&sol));
            }
        }
        out
    }

    fn respects_scope(&self, sol: &Substitution) -> bool {
        sol.iter().all(|(v, t)| {
            let Some(k) = meta_index(v) else { return true };
            let limit = self.metas[k].clock;
            t.vars().iter().all(|w| self.eigen_clock.get(&w.name).map_or(true, |c| *c <= limit))
        })
    }

    fn has_moves(&mut self, br: &Branch, g: &Proposition, s: &Substitution) -> bool {
        if !matches!(self.hnf(g), Some(Proposition::Atom(_) | Proposition::Bottom) | None) {
            return true;
        }
        br.hyps.iter().any(|h| {
            let p = h.prop.apply(s);
            matches!(
                self.theory.system.head_normalize(&p, self.opts.fuel).map(|n| n.value),
                Ok(Proposition::Forall(..) | Proposition::Imp(..)) | Ok(Proposition::Or(..) | Proposition::Exists(..))
            )
        })
    }

    fn prove(&mut self, br: &Branch, goal: &Proposition, depth: usize, s: &Substitution, k: Cont<'_>) -> bool {
        self.stats.nodes += 1;
        let g = goal.apply(s);

        // closing a branch costs nothing
        for i in 0..br.hyps.len() {
            let hp = br.hyps[i].prop.apply(s);
            for s2 in self.unify(&hp, &g, s) {
                if k(self, &s2, br.hyps[i].proof.clone()) {
                    return true;
                }
            }
        }
        for h in &br.hyps {
            if self.hnf(&h.prop.apply(s)) == Some(Proposition::Bottom) {
                let pf = ProofTree::new(Rule::BotElim, vec![h.proof.clone()]);
                return k(self, s, pf);
            }
        }

        if depth == 0 {
            if self.has_moves(br, &g, s) {
                self.hit_bound = true;
            }
            return false;
        }
        let d = depth - 1;
        let Some(head) = self.hnf(&g) else { return false };

        // invertible right rules
        match &head {
            Proposition::Top => return k(self, s, ProofTree::new(Rule::TopIntro, vec![])),
            Proposition::And(a, b) => {
                let (a, b) = ((**a).clone(), (**b).clone());
                return self.prove(br, &a, d, s, &mut |srch, s1, pa| {
                    srch.prove(br, &b, d, s1, &mut |srch, s2, pb| k(srch, s2, ProofTree::and_intro(pa.clone(), pb)))
                });
            }
            Proposition::Imp(a, b) => {
                let label = self.fresh_label();
                let b = (**b).clone();
                let br2 = self.add_hyp(br, (**a).clone(), ProofTree::axiom(&label), s).unwrap_or_else(|| br.clone());
                return self.prove(&br2, &b, d, s, &mut |srch, s1, pb| k(srch, s1, ProofTree::imp_intro(&label, pb)));
            }
            Proposition::Forall(v, body) => {
                let x = self.new_eigen(v);
                let inst = Proposition::instantiate(v, body, &Term::Var(x.clone()));
                return self.prove(br, &inst, d, s, &mut |srch, s1, pb| {
                    k(srch, s1, ProofTree::new(Rule::ForallIntro(x.clone()), vec![pb]))
                });
            }
            _ => {}
        }

        // invertible left rules
        for i in 0..br.hyps.len() {
            if br.hyps[i].split {
                continue;
            }
            let hp = br.hyps[i].prop.apply(s);
            let major = br.hyps[i].proof.clone();
            let mut base = br.clone();
            base.hyps[i].split = true;
            match self.hnf(&hp) {
                Some(Proposition::Or(a, b)) => {
                    let (l1, l2) = (self.fresh_label(), self.fresh_label());
                    let left = self.add_hyp(&base, *a, ProofTree::axiom(&l1), s).unwrap_or_else(|| base.clone());
                    let right = self.add_hyp(&base, *b, ProofTree::axiom(&l2), s).unwrap_or_else(|| base.clone());
                    return self.prove(&left, goal, d, s, &mut |srch, s1, pl| {
                        srch.prove(&right, goal, d, s1, &mut |srch, s2, pr| {
                            let rule = Rule::OrElim(l1.clone(), l2.clone());
                            k(srch, s2, ProofTree::new(rule, vec![major.clone(), pl.clone(), pr]))
                        })
                    });
                }
                Some(Proposition::Exists(v, body)) => {
                    let x = self.new_eigen(&v);
                    let label = self.fresh_label();
                    let inst = Proposition::instantiate(&v, &body, &Term::Var(x.clone()));
                    let br2 = self.add_hyp(&base, inst, ProofTree::axiom(&label), s).unwrap_or_else(|| base.clone());
                    return self.prove(&br2, goal, d, s, &mut |srch, s1, pb| {
                        let rule = Rule::ExistsElim(x.clone(), label.clone());
                        k(srch, s1, ProofTree::new(rule, vec![major.clone(), pb]))
                    });
                }
                _ => {}
            }
        }

        // right choices
        match &head {
            Proposition::Or(a, b) => {
                let (a, b) = ((**a).clone(), (**b).clone());
                if self.prove(br, &a, d, s, &mut |srch, s1, p| k(srch, s1, ProofTree::new(Rule::OrIntroLeft, vec![p]))) {
                    return true;
                }
                if self.prove(br, &b, d, s, &mut |srch, s1, p| k(srch, s1, ProofTree::new(Rule::OrIntroRight, vec![p]))) {
                    return true;
                }
            }
            Proposition::Exists(v, body) => {
                let m = self.new_meta(&v.sort);
                let inst = Proposition::instantiate(v, body, &m);
                if self.prove(br, &inst, d, s, &mut |srch, s1, p| {
                    k(srch, s1, ProofTree::new(Rule::ExistsIntro(m.clone()), vec![p]))
                }) {
                    return true;
                }
            }
            _ => {}
        }

        // focused eliminations, in context order
        for i in 0..br.hyps.len() {
            let hp = br.hyps[i].prop.apply(s);
            let major = br.hyps[i].proof.clone();
            match self.hnf(&hp) {
                Some(Proposition::Forall(v, body)) => {
                    let m = self.new_meta(&v.sort);
                    let inst = Proposition::instantiate(&v, &body, &m);
                    let pf = ProofTree::new(Rule::ForallElim(m), vec![major]);
                    let Some(br2) = self.add_hyp(br, inst, pf, s) else { continue };
                    if self.prove(&br2, goal, d, s, k) {
                        return true;
                    }
                }
                Some(Proposition::Imp(a, b)) => {
                    let b = *b;
                    if self.add_hyp(br, b.clone(), ProofTree::axiom("?"), s).is_none() {
                        continue;
                    }
                    let found = self.prove(br, &a, d, s, &mut |srch, s1, pa| {
                        let pf = ProofTree::imp_elim(major.clone(), pa);
                        match srch.add_hyp(br, b.clone(), pf, s1) {
                            Some(br2) => srch.prove(&br2, goal, d, s1, k),
                            None => false,
                        }
                    });
                    if found {
                        return true;
                    }
                }
                _ => {}
            }
        }
        false
    }

    /// Grounds leftover metavariables: a constant of the sort when one is
    /// declared, a fresh variable otherwise.
    fn ground(&self, s: &Substitution, proof: &ProofTree) -> ProofTree {
        let mut full = s.clone();
        for (k, m) in self.metas.iter().enumerate() {
            let v = Var { name: format!("?{k}"), sort: m.sort.clone() };
            if full.contains(&v) {
                continue;
            }
            let constant = self
                .theory
                .signature
                .functions
                .iter()
                .find(|(_, d)| d.args.is_empty() && d.result == m.sort)
                .map(|(n, _)| Term::constant(n));
            let t = constant.unwrap_or_else(|| Term::Var(Var { name: format!("_{k}"), sort: m.sort.clone() }));
            full = full.compose(&Substitution::singleton(v, t));
        }
        let mut p = fill(proof, &full);
        // values may mention other metavariables
        for _ in 0..self.metas.len() {
            let q = fill(&p, &full);
            if q == p {
                break;
            }
            p = q;
        }
        p
    }
}

/// Replaces metavariables in witnesses and instances. Unlike
/// `ProofTree::subst_terms` this does not rename eigenvariables: a
/// metavariable may stand for a term over eigenvariables in scope.
fn fill(p: &ProofTree, s: &Substitution) -> ProofTree {
    let rule = match &p.rule {
        Rule::ForallElim(t) => Rule::ForallElim(t.apply(s)),
        Rule::ExistsIntro(t) => Rule::ExistsIntro(t.apply(s)),
        r => r.clone(),
    };
    ProofTree {
        rule,
        conclusion: p.conclusion.as_ref().map(|c| c.apply(s)),
        children: p.children.iter().map(|c| fill(c, s)).collect(),
    }
}

fn check_theory(theory: &Theory) -> Result<(), SearchError> {
    let Some(report) = &theory.report else { return Err(SearchError::Unvalidated(theory.name.clone())) };
    if !report.non_confusing {
        return Err(SearchError::Confusing(theory.name.clone()));
    }
    Ok(())
}

/// Searches for a cut-free proof of `goal` with at most `opts.depth` rule
/// applications per branch. Returned proofs pass the kernel and contain no
/// cut.
pub fn search_proof_with(theory: &Theory, goal: &Sequent, opts: SearchOptions) -> Result<SearchResult, SearchError> {
    check_theory(theory)?;
    for (_, p) in &goal.context {
        theory.signature.check_prop(p).map_err(SearchError::MalformedGoal)?;
    }
    theory.signature.check_prop(&goal.conclusion).map_err(SearchError::MalformedGoal)?;

    let mut names = BTreeSet::new();
    goal.conclusion.all_var_names(&mut names);
    for (_, p) in &goal.context {
        p.all_var_names(&mut names);
    }
    // iterative deepening: the first proof found uses the fewest steps on
    // its longest branch, and a pass that never meets the bound settles Fail
    let mut stats = SearchStats::default();
    for depth in 0..=opts.depth {
        let (found, hit_bound) = bounded(theory, goal, opts, &names, depth, &mut stats);
        if let Some(p) = found {
            return Ok(SearchResult { outcome: SearchOutcome::Proved(p), stats });
        }
        if !hit_bound {
            return Ok(SearchResult { outcome: SearchOutcome::Fail, stats });
        }
    }
    Ok(SearchResult { outcome: SearchOutcome::BoundExceeded, stats })
}

fn bounded(
    theory: &Theory,
    goal: &Sequent,
    opts: SearchOptions,
    names: &BTreeSet<String>,
    depth: usize,
    stats: &mut SearchStats,
) -> (Option<ProofTree>, bool) {
    let mut search = Search {
        theory,
        goal,
        opts,
        stats: *stats,
        hit_bound: false,
        metas: Vec::new(),
        eigen_clock: BTreeMap::new(),
        clock: 0,
        names: names.clone(),
        labels: 0,
        found: None,
    };
    let mut br = Branch::default();
    for (label, p) in &goal.context {
        br = search.add_hyp(&br, p.clone(), ProofTree::axiom(label), &Substitution::new()).unwrap_or(br);
    }
    // generated labels start past any `hN` in the context
    search.labels = goal
        .context
        .iter()
        .filter_map(|(l, _)| l.strip_prefix('h')?.parse::<usize>().ok())
        .max()
        .unwrap_or(0);
    search.prove(&br, &goal.conclusion, depth, &Substitution::new(), &mut |srch, s, proof| {
        let candidate = srch.ground(s, &proof);
        let ok = check_proof(srch.theory, &candidate, srch.goal, srch.opts.fuel)
            .ok()
            .and_then(|_| find_cuts(srch.theory, srch.goal, &candidate, srch.opts.fuel).ok())
            .is_some_and(|c| c.is_cut_free());
        if ok {
            srch.found = Some(candidate);
        } else {
            srch.stats.rejected += 1;
        }
        ok
    });
    *stats = search.stats;
    (search.found, search.hit_bound)
}

pub fn search_proof(theory: &Theory, goal: &Sequent, depth: usize) -> Result<SearchResult, SearchError> {
    search_proof_with(theory, goal, SearchOptions::with_depth(depth))
}

/// Searches for a proof of ⊥ from no hypotheses. `Fail` means consistent up
/// to the bound.
pub fn consistency_probe(theory: &Theory, depth: usize) -> Result<SearchResult, SearchError> {
    consistency_probe_with(theory, SearchOptions::with_depth(depth))
}

pub fn consistency_probe_with(theory: &Theory, opts: SearchOptions) -> Result<SearchResult, SearchError> {
    search_proof_with(theory, &Sequent::goal(Proposition::Bottom), opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_document, parse_prop};
    use crate::theories::load_builtin;

    fn goal(theory: &Theory, text: &str) -> Sequent {
        Sequent::goal(parse_prop(text, &theory.signature).unwrap())
    }

    #[test]
    fn long_identity_without_rules() {
        let mut t = load_builtin("empty").unwrap();
        t.signature = load_builtin("assoc").unwrap().signature;
        let g = goal(&t, "(imp (P (+ (+ (+ (+ a b) c) d) e)) (P (+ (+ (+ (+ a b) c) d) e)))");
        assert!(search_proof(&t, &g, 8).unwrap().outcome.is_proved());
    }

    #[test]
    fn existential_witness_found_by_narrowing() {
        let t = load_builtin("assoc").unwrap();
        let g = goal(&t, "(exists x:i (imp (P (+ a x)) (P (+ (+ a b) c))))");
        let r = search_proof(&t, &g, 8).unwrap();
        let SearchOutcome::Proved(p) = r.outcome else { panic!("{:?}", r.outcome) };
        assert_eq!(p.rule, Rule::ExistsIntro(Term::app("+", vec![Term::constant("b"), Term::constant("c")])));
        assert!(r.stats.narrowing_calls > 0);
    }

    #[test]
    fn crabbe_goal_fails() {
        let t = load_builtin("crabbe").unwrap();
        assert_eq!(search_proof(&t, &goal(&t, "Q"), 10).unwrap().outcome, SearchOutcome::Fail);
    }

    #[test]
    fn probes() {
        for name in ["empty", "pf-collapse"] {
            let t = load_builtin(name).unwrap();
            assert_eq!(consistency_probe(&t, 10).unwrap().outcome, SearchOutcome::Fail, "{name}");
        }
    }

    #[test]
    fn unoriented_axiom_exceeds_the_bound() {
        let t = load_builtin("empty").unwrap();
        let doc = parse_document(include_str!("../corpus/pf-hypothesis.goal"), &t.signature).unwrap();
        let t = t.extend_signature(&doc.signature).unwrap();
        let g = Sequent::new(doc.hypotheses, Proposition::Bottom).unwrap();
        assert_eq!(search_proof(&t, &g, 4).unwrap().outcome, SearchOutcome::BoundExceeded);
    }

    #[test]
    fn unvalidated_theory_is_rejected() {
        let mut t = load_builtin("empty").unwrap();
        t.report = None;
        assert!(matches!(search_proof(&t, &Sequent::goal(Proposition::Top), 3), Err(SearchError::Unvalidated(_))));
    }

    #[test]
    fn definitions_unfold_in_hypotheses_and_goals() {
        let t = load_builtin("def-conj").unwrap();
        for g in ["(imp P A)", "(imp (and A B) P)", "(imp P (and B A))", "(or (imp P A) B)"] {
            assert!(search_proof(&t, &goal(&t, g), 6).unwrap().outcome.is_proved(), "{g}");
        }
        assert!(!search_proof(&t, &goal(&t, "(imp A P)"), 6).unwrap().outcome.is_proved());
    }

    #[test]
    fn quantifier_rules() {
        let t = load_builtin("p0-forall").unwrap();
        for g in [
            "(imp (P 0) (P 0))",
            "(imp (P 0) (forall y:nat (P y)))",
            "(imp (forall y:nat (P y)) (P 0))",
            "(imp (forall y:nat (P y)) (exists z:nat (P z)))",
            "(imp (exists y:nat (P y)) (exists z:nat (P z)))",
        ] {
            let r = search_proof(&t, &goal(&t, g), 6).unwrap();
            assert!(r.outcome.is_proved(), "{g}: {:?}", r.outcome);
        }
        let r = search_proof(&t, &goal(&t, "(imp (exists y:nat (P y)) (forall z:nat (P z)))"), 6).unwrap();
        assert!(!r.outcome.is_proved());
    }
}
