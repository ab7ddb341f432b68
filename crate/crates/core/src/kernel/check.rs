use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use super::{Label, ProofTree, Rule, Sequent};
use crate::rewrite::{FuelExhausted, RewriteSystem, Trust};
use crate::syntax::{Proposition, Signature, Sort, Term, Var, WfError};
use crate::theories::Theory;

/// First failure found while checking, with the path (child indices from the
/// root) of the offending node.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("at {path:?}: {tag} takes {expected} premises, found {found}")]
    Arity { path: Vec<usize>, tag: &'static str, expected: usize, found: usize },
    #[error("at {path:?}: unknown hypothesis \"{label}\"")]
    UnknownHypothesis { path: Vec<usize>, label: Label },
    #[error("at {path:?}: {found} is not congruent to {expected}")]
    NotCongruent { path: Vec<usize>, expected: Proposition, found: Proposition },
    #[error("at {path:?}: {tag} cannot prove {goal}")]
    Shape { path: Vec<usize>, tag: &'static str, goal: Proposition },
    #[error("at {path:?}: the major premise of {tag} proves {found}")]
    MajorShape { path: Vec<usize>, tag: &'static str, found: Proposition },
    #[error("at {path:?}: eigenvariable {var} occurs free in {occurs_in}")]
    Eigenvariable { path: Vec<usize>, var: Var, occurs_in: Proposition },
    #[error("at {path:?}: expected a term of sort {expected}, found sort {found}")]
    SortMismatch { path: Vec<usize>, expected: Sort, found: Sort },
    #[error("at {path:?}: cannot infer what {tag} proves here; annotate it with (the A ...)")]
    CannotSynthesize { path: Vec<usize>, tag: &'static str },
    #[error("at {path:?}: {source}")]
    IllFormed { path: Vec<usize>, source: WfError },
    #[error("at {path:?}: congruence check ran out of fuel after {steps} steps")]
    Fuel { path: Vec<usize>, steps: usize },
}

impl CheckError {
    pub fn path(&self) -> &[usize] {
        match self {
            CheckError::Arity { path, .. }
            | CheckError::UnknownHypothesis { path, .. }
            | CheckError::NotCongruent { path, .. }
            | CheckError::Shape { path, .. }
            | CheckError::MajorShape { path, .. }
            | CheckError::Eigenvariable { path, .. }
            | CheckError::SortMismatch { path, .. }
            | CheckError::CannotSynthesize { path, .. }
            | CheckError::IllFormed { path, .. }
            | CheckError::Fuel { path, .. } => path,
        }
    }
}

/// A proof that checked, with every node annotated by what it proves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckedProof {
    pub proof: ProofTree,
    pub trust: Trust,
}

/// Checks `proof` against `goal`, comparing propositions modulo the theory's
/// congruence. Conclusions are checked top-down; eliminations infer the
/// conclusion of their major premise.
pub fn check_proof(theory: &Theory, proof: &ProofTree, goal: &Sequent, fuel: usize) -> Result<CheckedProof, CheckError> {
    let mut c = Checker::new(&theory.signature, &theory.system, fuel);
    for (_, p) in &goal.context {
        c.wf(p, &[])?;
    }
    c.wf(&goal.conclusion, &[])?;
    let mut ctx = goal.context.clone();
    let tree = c.check(&mut ctx, proof, &goal.conclusion, &mut Vec::new())?;
    Ok(CheckedProof { proof: tree, trust: theory.system.trust() })
}

type Ctx = Vec<(Label, Proposition)>;

struct Checker<'a> {
    sig: &'a Signature,
    sys: &'a RewriteSystem,
    fuel: usize,
    cong_memo: HashMap<(Proposition, Proposition), bool>,
    hnf_memo: HashMap<Proposition, Proposition>,
    fv_memo: HashMap<Proposition, BTreeSet<Var>>,
}

impl<'a> Checker<'a> {
    fn new(sig: &'a Signature, sys: &'a RewriteSystem, fuel: usize) -> Self {
        Checker { sig, sys, fuel, cong_memo: HashMap::new(), hnf_memo: HashMap::new(), fv_memo: HashMap::new() }
    }

    fn wf(&self, p: &Proposition, path: &[usize]) -> Result<(), CheckError> {
        self.sig.check_prop(p).map_err(|source| CheckError::IllFormed { path: path.to_vec(), source })
    }

    fn term_sort(&self, t: &Term, expected: &Sort, path: &[usize]) -> Result<(), CheckError> {
        let found = self.sig.check_term(t).map_err(|source| CheckError::IllFormed { path: path.to_vec(), source })?;
        if &found != expected {
            return Err(CheckError::SortMismatch { path: path.to_vec(), expected: expected.clone(), found });
        }
        Ok(())
    }

    fn fuel_error(path: &[usize], e: FuelExhausted) -> CheckError {
        CheckError::Fuel { path: path.to_vec(), steps: e.steps }
    }

    fn cong(&mut self, found: &Proposition, expected: &Proposition, path: &[usize]) -> Result<(), CheckError> {
        let key = (found.clone(), expected.clone());
        let equal = match self.cong_memo.get(&key) {
            Some(b) => *b,
            None => {
                let b = self.sys.congruent_props(found, expected, self.fuel).map_err(|e| Self::fuel_error(path, e))?;
                self.cong_memo.insert(key, b);
                b
            }
        };
        if equal {
            return Ok(());
        }
        // report normal forms when they exist
        let nf = |p: &Proposition| self.sys.normalize_prop(p, self.fuel).map(|n| n.value).unwrap_or_else(|_| p.clone());
        Err(CheckError::NotCongruent { path: path.to_vec(), expected: nf(expected), found: nf(found) })
    }

    fn hnf(&mut self, p: &Proposition, path: &[usize]) -> Result<Proposition, CheckError> {
        if let Some(h) = self.hnf_memo.get(p) {
            return Ok(h.clone());
        }
        let h = self.sys.head_normalize(p, self.fuel).map_err(|e| Self::fuel_error(path, e))?.value;
        self.hnf_memo.insert(p.clone(), h.clone());
        Ok(h)
    }

    /// Free variables of the normal form, or of `p` itself when normalization
    /// runs out of fuel.
    fn free_vars(&mut self, p: &Proposition) -> BTreeSet<Var> {
        if let Some(v) = self.fv_memo.get(p) {
            return v.clone();
        }
        let vars = match self.sys.normalize_prop(p, self.fuel) {
            Ok(n) => n.value.free_vars(),
            Err(_) => p.free_vars(),
        };
        self.fv_memo.insert(p.clone(), vars.clone());
        vars
    }

    fn fresh_for(&mut self, x: &Var, props: &[&Proposition], path: &[usize]) -> Result<(), CheckError> {
        for p in props {
            if self.free_vars(p).contains(x) {
                return Err(CheckError::Eigenvariable { path: path.to_vec(), var: x.clone(), occurs_in: (*p).clone() });
            }
        }
        Ok(())
    }

    fn eigenvariable(&mut self, ctx: &Ctx, x: &Var, bound: &Var, others: &[&Proposition], path: &[usize]) -> Result<(), CheckError> {
        self.term_sort(&Term::Var(x.clone()), &bound.sort, path)?;
        let ctx_props: Vec<Proposition> = ctx.iter().map(|(_, p)| p.clone()).collect();
        let mut all: Vec<&Proposition> = ctx_props.iter().collect();
        all.extend_from_slice(others);
        self.fresh_for(x, &all, path)
    }

    fn arity(p: &ProofTree, path: &[usize]) -> Result<(), CheckError> {
        if p.children.len() != p.rule.arity() {
            return Err(CheckError::Arity {
                path: path.to_vec(),
                tag: p.rule.tag(),
                expected: p.rule.arity(),
                found: p.children.len(),
            });
        }
        Ok(())
    }

    fn child_check(&mut self, ctx: &mut Ctx, p: &ProofTree, i: usize, goal: &Proposition, path: &mut Vec<usize>) -> Result<ProofTree, CheckError> {
        path.push(i);
        let r = self.check(ctx, &p.children[i], goal, path);
        path.pop();
        r
    }

    fn child_synth(&mut self, ctx: &mut Ctx, p: &ProofTree, i: usize, path: &mut Vec<usize>) -> Result<(ProofTree, Proposition), CheckError> {
        path.push(i);
        let r = self.synth(ctx, &p.children[i], path);
        path.pop();
        r
    }

    fn with_hyp<T>(ctx: &mut Ctx, h: &Label, a: Proposition, f: impl FnOnce(&mut Ctx) -> T) -> T {
        ctx.push((h.clone(), a));
        let r = f(ctx);
        ctx.pop();
        r
    }

    /// Infers the major premise (child 0) and exposes its head connective.
    fn major(&mut self, ctx: &mut Ctx, p: &ProofTree, path: &mut Vec<usize>) -> Result<(ProofTree, Proposition, Proposition), CheckError> {
        let (t, c) = self.child_synth(ctx, p, 0, path)?;
        path.push(0);
        let h = self.hnf(&c, path);
        path.pop();
        Ok((t, c, h?))
    }

    fn major_shape(p: &ProofTree, found: &Proposition, path: &[usize]) -> CheckError {
        CheckError::MajorShape { path: path.to_vec(), tag: p.rule.tag(), found: found.clone() }
    }

    fn check(&mut self, ctx: &mut Ctx, p: &ProofTree, goal: &Proposition, path: &mut Vec<usize>) -> Result<ProofTree, CheckError> {
        Self::arity(p, path)?;
        let target = match &p.conclusion {
            Some(a) => {
                self.wf(a, path)?;
                self.cong(a, goal, path)?;
                a.clone()
            }
            None => goal.clone(),
        };
        let mut t = self.check_inner(ctx, p, &target, path)?;
        t.conclusion = Some(target);
        Ok(t)
    }

    fn synth(&mut self, ctx: &mut Ctx, p: &ProofTree, path: &mut Vec<usize>) -> Result<(ProofTree, Proposition), CheckError> {
        Self::arity(p, path)?;
        if let Some(a) = &p.conclusion {
            self.wf(a, path)?;
            let mut t = self.check_inner(ctx, p, a, path)?;
            t.conclusion = Some(a.clone());
            return Ok((t, a.clone()));
        }
        let (mut t, c) = self.synth_inner(ctx, p, path)?;
        t.conclusion = Some(c.clone());
        Ok((t, c))
    }

    fn node(rule: Rule, children: Vec<ProofTree>) -> ProofTree {
        ProofTree { rule, conclusion: None, children }
    }

    fn check_inner(&mut self, ctx: &mut Ctx, p: &ProofTree, goal: &Proposition, path: &mut Vec<usize>) -> Result<ProofTree, CheckError> {
        let shape = |path: &[usize]| CheckError::Shape { path: path.to_vec(), tag: p.rule.tag(), goal: goal.clone() };
        match &p.rule {
            Rule::TopIntro => match self.hnf(goal, path)? {
                Proposition::Top => Ok(Self::node(Rule::TopIntro, vec![])),
                _ => Err(shape(path)),
            },
            Rule::AndIntro => match self.hnf(goal, path)? {
                Proposition::And(a, b) => {
                    let l = self.child_check(ctx, p, 0, &a, path)?;
                    let r = self.child_check(ctx, p, 1, &b, path)?;
                    Ok(Self::node(Rule::AndIntro, vec![l, r]))
                }
                _ => Err(shape(path)),
            },
            Rule::OrIntroLeft | Rule::OrIntroRight => match self.hnf(goal, path)? {
                Proposition::Or(a, b) => {
                    let side = if p.rule == Rule::OrIntroLeft { a } else { b };
                    let c = self.child_check(ctx, p, 0, &side, path)?;
                    Ok(Self::node(p.rule.clone(), vec![c]))
                }
                _ => Err(shape(path)),
            },
            Rule::ImpIntro(h) => match self.hnf(goal, path)? {
                Proposition::Imp(a, b) => {
                    let body = Self::with_hyp(ctx, h, *a, |ctx| self.child_check(ctx, p, 0, &b, path))?;
                    Ok(Self::node(p.rule.clone(), vec![body]))
                }
                _ => Err(shape(path)),
            },
            Rule::ForallIntro(x) => match self.hnf(goal, path)? {
                Proposition::Forall(v, body) => {
                    let whole = Proposition::Forall(v.clone(), body.clone());
                    self.eigenvariable(ctx, x, &v, &[&whole], path)?;
                    let inst = Proposition::instantiate(&v, &body, &Term::Var(x.clone()));
                    let c = self.child_check(ctx, p, 0, &inst, path)?;
                    Ok(Self::node(p.rule.clone(), vec![c]))
                }
                _ => Err(shape(path)),
            },
            Rule::ExistsIntro(t) => match self.hnf(goal, path)? {
                Proposition::Exists(v, body) => {
                    self.term_sort(t, &v.sort, path)?;
                    let inst = Proposition::instantiate(&v, &body, t);
                    let c = self.child_check(ctx, p, 0, &inst, path)?;
                    Ok(Self::node(p.rule.clone(), vec![c]))
                }
                _ => Err(shape(path)),
            },
            Rule::BotElim => {
                let c = self.child_check(ctx, p, 0, &Proposition::Bottom, path)?;
                Ok(Self::node(Rule::BotElim, vec![c]))
            }
            Rule::OrElim(h1, h2) => {
                let (m, _, head) = self.major(ctx, p, path)?;
                let Proposition::Or(a, b) = head else { return Err(Self::major_shape(p, &head, path)) };
                let l = Self::with_hyp(ctx, h1, *a, |ctx| self.child_check(ctx, p, 1, goal, path))?;
                let r = Self::with_hyp(ctx, h2, *b, |ctx| self.child_check(ctx, p, 2, goal, path))?;
                Ok(Self::node(p.rule.clone(), vec![m, l, r]))
            }
            Rule::ExistsElim(x, h) => {
                let (m, c, head) = self.major(ctx, p, path)?;
                let Proposition::Exists(v, body) = head else { return Err(Self::major_shape(p, &head, path)) };
                self.eigenvariable(ctx, x, &v, &[&c, goal], path)?;
                let inst = Proposition::instantiate(&v, &body, &Term::Var(x.clone()));
                let b = Self::with_hyp(ctx, h, inst, |ctx| self.child_check(ctx, p, 1, goal, path))?;
                Ok(Self::node(p.rule.clone(), vec![m, b]))
            }
            Rule::Axiom(_) | Rule::AndElimLeft | Rule::AndElimRight | Rule::ImpElim | Rule::ForallElim(_) => {
                let (t, c) = self.synth_inner(ctx, p, path)?;
                self.cong(&c, goal, path)?;
                Ok(t)
            }
        }
    }

    fn synth_inner(&mut self, ctx: &mut Ctx, p: &ProofTree, path: &mut Vec<usize>) -> Result<(ProofTree, Proposition), CheckError> {
        match &p.rule {
            Rule::Axiom(h) => match ctx.iter().rev().find(|(l, _)| l == h) {
                Some((_, a)) => Ok((Self::node(p.rule.clone(), vec![]), a.clone())),
                None => Err(CheckError::UnknownHypothesis { path: path.clone(), label: h.clone() }),
            },
            Rule::TopIntro => Ok((Self::node(Rule::TopIntro, vec![]), Proposition::Top)),
            Rule::AndIntro => {
                let (l, a) = self.child_synth(ctx, p, 0, path)?;
                let (r, b) = self.child_synth(ctx, p, 1, path)?;
                Ok((Self::node(Rule::AndIntro, vec![l, r]), Proposition::and(a, b)))
            }
            Rule::AndElimLeft | Rule::AndElimRight => {
                let (m, _, head) = self.major(ctx, p, path)?;
                let Proposition::And(a, b) = head else { return Err(Self::major_shape(p, &head, path)) };
                let c = if p.rule == Rule::AndElimLeft { *a } else { *b };
                Ok((Self::node(p.rule.clone(), vec![m]), c))
            }
            Rule::ImpElim => {
                let (m, _, head) = self.major(ctx, p, path)?;
                let Proposition::Imp(a, b) = head else { return Err(Self::major_shape(p, &head, path)) };
                let minor = self.child_check(ctx, p, 1, &a, path)?;
                Ok((Self::node(Rule::ImpElim, vec![m, minor]), *b))
            }
            Rule::ForallElim(t) => {
                let (m, _, head) = self.major(ctx, p, path)?;
                let Proposition::Forall(v, body) = head else { return Err(Self::major_shape(p, &head, path)) };
                self.term_sort(t, &v.sort, path)?;
                Ok((Self::node(p.rule.clone(), vec![m]), Proposition::instantiate(&v, &body, t)))
            }
            Rule::OrElim(h1, h2) => {
                let (m, _, head) = self.major(ctx, p, path)?;
                let Proposition::Or(a, b) = head else { return Err(Self::major_shape(p, &head, path)) };
                let (l, c) = Self::with_hyp(ctx, h1, *a, |ctx| self.child_synth(ctx, p, 1, path))?;
                let r = Self::with_hyp(ctx, h2, *b, |ctx| self.child_check(ctx, p, 2, &c, path))?;
                Ok((Self::node(p.rule.clone(), vec![m, l, r]), c))
            }
            Rule::ExistsElim(x, h) => {
                let (m, c, head) = self.major(ctx, p, path)?;
                let Proposition::Exists(v, body) = head else { return Err(Self::major_shape(p, &head, path)) };
                self.eigenvariable(ctx, x, &v, &[&c], path)?;
                let inst = Proposition::instantiate(&v, &body, &Term::Var(x.clone()));
                let (b, concl) = Self::with_hyp(ctx, h, inst, |ctx| self.child_synth(ctx, p, 1, path))?;
                self.fresh_for(x, &[&concl], path)?;
                Ok((Self::node(p.rule.clone(), vec![m, b]), concl))
            }
            _ => Err(CheckError::CannotSynthesize { path: path.clone(), tag: p.rule.tag() }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_proof, parse_prop};
    use crate::theories::load_builtin;

    fn run(theory: &str, proof: &str, hyps: &[(&str, &str)], goal: &str) -> Result<CheckedProof, CheckError> {
        let t = load_builtin(theory).unwrap();
        let p = parse_proof(proof, &t.signature).unwrap();
        let ctx = hyps.iter().map(|(h, a)| (h.to_string(), parse_prop(a, &t.signature).unwrap())).collect();
        let g = Sequent::new(ctx, parse_prop(goal, &t.signature).unwrap()).unwrap();
        check_proof(&t, &p, &g, 1000)
    }

    #[test]
    fn identity() {
        run("def-conj", "(imp_i \"h\" (axiom \"h\"))", &[], "(imp P P)").unwrap();
        run("p0-forall", "(imp_i \"h\" (axiom \"h\"))", &[], "(imp (forall x:nat (P x)) (forall y:nat (P y)))").unwrap();
    }

    #[test]
    fn axiom_modulo_a_proposition_rule() {
        run("p0-forall", "(axiom \"h\")", &[("h", "(forall x:nat (P x))")], "(P 0)").unwrap();
    }

    #[test]
    fn crabbe_proof_checks() {
        let r = run("crabbe", include_str!("../../corpus/crabbe.proof"), &[], "Q").unwrap();
        assert_eq!(r.trust, Trust::Heuristic);
        assert_eq!(r.proof.conclusion, Some(Proposition::atom("Q", vec![])));
    }

    #[test]
    fn wrong_hypothesis_reports_normal_forms() {
        let e = run("def-conj", "(imp_i \"h\" (axiom \"h\"))", &[], "(imp P B)").unwrap_err();
        match e {
            CheckError::NotCongruent { path, expected, found } => {
                assert_eq!(path, vec![0]);
                assert_eq!(expected.to_string(), "B");
                assert_eq!(found.to_string(), "(and A B)");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn child_count_mismatch() {
        let t = load_builtin("empty").unwrap();
        let p = ProofTree::new(Rule::ImpElim, vec![ProofTree::axiom("h")]);
        let e = check_proof(&t, &p, &Sequent::goal(Proposition::Top), 10).unwrap_err();
        assert!(matches!(e, CheckError::Arity { expected: 2, found: 1, .. }));
    }

    #[test]
    fn eigenvariable_must_be_fresh() {
        let e = run("p0-forall", "(forall_i x:nat (axiom \"h\"))", &[("h", "(P x:nat)")], "(forall y:nat (P y))").unwrap_err();
        assert!(matches!(e, CheckError::Eigenvariable { .. }), "{e}");
        run("p0-forall", "(forall_i z:nat (forall_e z (axiom \"h\")))", &[("h", "(forall x:nat (P x))")], "(forall y:nat (P y))")
            .unwrap();
    }

    #[test]
    fn introduction_in_major_position_needs_an_annotation() {
        let e = run("def-conj", "(and_e_l (and_i (axiom \"a\") (axiom \"a\")))", &[("a", "A")], "A");
        // a pair of hypotheses synthesizes
        assert!(e.is_ok());
        let e = run("def-conj", "(imp_e (imp_i \"h\" (axiom \"h\")) (axiom \"a\"))", &[("a", "A")], "A").unwrap_err();
        assert!(matches!(e, CheckError::CannotSynthesize { .. }), "{e}");
    }

    #[test]
    fn disjunction_and_existential_eliminations() {
        run(
            "def-conj",
            "(or_e \"l\" \"r\" (axiom \"d\") (or_i_r (axiom \"l\")) (or_i_l (axiom \"r\")))",
            &[("d", "(or A B)")],
            "(or B A)",
        )
        .unwrap();
        run(
            "p0-forall",
            "(exists_e w:nat \"k\" (axiom \"e\") (exists_i w (axiom \"k\")))",
            &[("e", "(exists x:nat (P x))")],
            "(exists y:nat (P y))",
        )
        .unwrap();
        let e = run("p0-forall", "(exists_e w:nat \"k\" (axiom \"e\") (axiom \"k\"))", &[("e", "(exists x:nat (P x))")], "(P w)")
            .unwrap_err();
        assert!(matches!(e, CheckError::Eigenvariable { .. }), "{e}");
    }

    #[test]
    fn bottom_and_top() {
        run("def-conj", "(bot_e (axiom \"f\"))", &[("f", "bot")], "P").unwrap();
        run("def-conj", "(top_i)", &[], "top").unwrap();
        assert!(run("def-conj", "(top_i)", &[], "P").is_err());
    }
}
