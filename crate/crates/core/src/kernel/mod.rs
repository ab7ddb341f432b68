//! Constructive natural deduction modulo a congruence: proof trees, checking,
//! cut detection and cut reduction.

mod check;
mod reduce;

pub use check::{check_proof, CheckError, CheckedProof};
pub use reduce::{
    commute_conversions, find_cuts, normalize_proof, reduce_cut, Cut, CutReport, NormalizeError, ProofNormalization,
    ReduceError,
};

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::print::Annotated;
use crate::rewrite::{RewriteRule, RuleError};
use crate::syntax::{alpha_eq, Proposition, Substitutable, Substitution, Term, Var};

pub type Label = String;

/// Inference rule of a proof node, with its payload.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Rule {
    Axiom(Label),
    TopIntro,
    BotElim,
    AndIntro,
    AndElimLeft,
    AndElimRight,
    OrIntroLeft,
    OrIntroRight,
    /// Children: major premise, left branch (binds the first label), right
    /// branch (binds the second).
    OrElim(Label, Label),
    ImpIntro(Label),
    /// Children: major premise, minor premise.
    ImpElim,
    ForallIntro(Var),
    ForallElim(Term),
    ExistsIntro(Term),
    /// Children: major premise, body (binds the eigenvariable and the label).
    ExistsElim(Var, Label),
}

impl Rule {
    pub fn tag(&self) -> &'static str {
        match self {
            Rule::Axiom(_) => "axiom",
            Rule::TopIntro => "top_i",
            Rule::BotElim => "bot_e",
            Rule::AndIntro => "and_i",
            Rule::AndElimLeft => "and_e_l",
            Rule::AndElimRight => "and_e_r",
            Rule::OrIntroLeft => "or_i_l",
            Rule::OrIntroRight => "or_i_r",
            Rule::OrElim(..) => "or_e",
            Rule::ImpIntro(_) => "imp_i",
            Rule::ImpElim => "imp_e",
            Rule::ForallIntro(_) => "forall_i",
            Rule::ForallElim(_) => "forall_e",
            Rule::ExistsIntro(_) => "exists_i",
            Rule::ExistsElim(..) => "exists_e",
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Rule::Axiom(_) | Rule::TopIntro => 0,
            Rule::AndIntro | Rule::ImpElim | Rule::ExistsElim(..) => 2,
            Rule::OrElim(..) => 3,
            _ => 1,
        }
    }

    pub fn is_intro(&self) -> bool {
        matches!(
            self,
            Rule::TopIntro
                | Rule::AndIntro
                | Rule::OrIntroLeft
                | Rule::OrIntroRight
                | Rule::ImpIntro(_)
                | Rule::ForallIntro(_)
                | Rule::ExistsIntro(_)
        )
    }

    /// Eliminations, whose first child is the major premise.
    pub fn is_elim(&self) -> bool {
        !self.is_intro() && !matches!(self, Rule::Axiom(_))
    }

    /// Whether an elimination of this kind consumes an introduction `intro`.
    pub fn eliminates(&self, intro: &Rule) -> bool {
        matches!(
            (self, intro),
            (Rule::AndElimLeft | Rule::AndElimRight, Rule::AndIntro)
                | (Rule::ImpElim, Rule::ImpIntro(_))
                | (Rule::OrElim(..), Rule::OrIntroLeft | Rule::OrIntroRight)
                | (Rule::ForallElim(_), Rule::ForallIntro(_))
                | (Rule::ExistsElim(..), Rule::ExistsIntro(_))
        )
    }
}

/// A natural-deduction derivation. `conclusion` is the stated conclusion; the
/// checker fills it in on every node of the tree it returns.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProofTree {
    pub rule: Rule,
    pub conclusion: Option<Proposition>,
    pub children: Vec<ProofTree>,
}

impl ProofTree {
    pub fn new(rule: Rule, children: Vec<ProofTree>) -> Self {
        ProofTree { rule, conclusion: None, children }
    }

    pub fn axiom(label: &str) -> Self {
        ProofTree::new(Rule::Axiom(label.into()), vec![])
    }

    pub fn imp_intro(label: &str, body: ProofTree) -> Self {
        ProofTree::new(Rule::ImpIntro(label.into()), vec![body])
    }

    pub fn imp_elim(major: ProofTree, minor: ProofTree) -> Self {
        ProofTree::new(Rule::ImpElim, vec![major, minor])
    }

    pub fn and_intro(a: ProofTree, b: ProofTree) -> Self {
        ProofTree::new(Rule::AndIntro, vec![a, b])
    }

    pub fn annotated(mut self, conclusion: Proposition) -> Self {
        self.conclusion = Some(conclusion);
        self
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(ProofTree::size).sum::<usize>()
    }

    pub fn at(&self, path: &[usize]) -> Option<&ProofTree> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children.get(i)?.at(rest),
        }
    }

    pub fn replace_at(&self, path: &[usize], with: ProofTree) -> ProofTree {
        match path.split_first() {
            None => with,
            Some((&i, rest)) => {
                let mut out = self.clone();
                out.children[i] = self.children[i].replace_at(rest, with);
                out
            }
        }
    }

    /// True iff the last rule is an introduction.
    pub fn ends_with_intro(&self) -> bool {
        self.rule.is_intro()
    }

    /// Every hypothesis label and eigenvariable name used anywhere.
    pub(crate) fn names(&self, labels: &mut BTreeSet<String>, vars: &mut BTreeSet<String>) {
        match &self.rule {
            Rule::Axiom(h) | Rule::ImpIntro(h) => {
                labels.insert(h.clone());
            }
            Rule::OrElim(a, b) => {
                labels.insert(a.clone());
                labels.insert(b.clone());
            }
            Rule::ExistsElim(x, h) => {
                labels.insert(h.clone());
                vars.insert(x.name.clone());
            }
            Rule::ForallIntro(x) => {
                vars.insert(x.name.clone());
            }
            Rule::ForallElim(t) | Rule::ExistsIntro(t) => {
                for v in t.vars() {
                    vars.insert(v.name);
                }
            }
            _ => {}
        }
        if let Some(c) = &self.conclusion {
            c.all_var_names(vars);
        }
        for c in &self.children {
            c.names(labels, vars);
        }
    }

    /// Applies a term substitution to every conclusion and witness, renaming
    /// eigenvariables that would capture.
    pub fn subst_terms(&self, s: &Substitution) -> ProofTree {
        if s.is_empty() {
            return self.clone();
        }
        let conclusion = self.conclusion.as_ref().map(|c| c.apply(s));
        let bind = |x: &Var, child: &ProofTree| -> (Var, ProofTree) {
            let mut inner = s.clone();
            inner.remove(x);
            if inner.range_vars().contains(x) {
                let mut labels = BTreeSet::new();
                let mut vars = BTreeSet::new();
                child.names(&mut labels, &mut vars);
                for v in inner.range_vars() {
                    vars.insert(v.name);
                }
                let y = Var { name: crate::syntax::fresh_name(&x.name, &vars), sort: x.sort.clone() };
                let renamed = child.subst_terms(&Substitution::singleton(x.clone(), Term::Var(y.clone())));
                (y, renamed.subst_terms(&inner))
            } else {
                (x.clone(), child.subst_terms(&inner))
            }
        };
        let (rule, children) = match &self.rule {
            Rule::ForallIntro(x) => {
                let (y, child) = bind(x, &self.children[0]);
                (Rule::ForallIntro(y), vec![child])
            }
            Rule::ExistsElim(x, h) => {
                let major = self.children[0].subst_terms(s);
                let (y, body) = bind(x, &self.children[1]);
                (Rule::ExistsElim(y, h.clone()), vec![major, body])
            }
            Rule::ForallElim(t) => (Rule::ForallElim(t.apply(s)), self.children.iter().map(|c| c.subst_terms(s)).collect()),
            Rule::ExistsIntro(t) => (Rule::ExistsIntro(t.apply(s)), self.children.iter().map(|c| c.subst_terms(s)).collect()),
            r => (r.clone(), self.children.iter().map(|c| c.subst_terms(s)).collect()),
        };
        ProofTree { rule, conclusion, children }
    }

    /// Replaces the free occurrences of hypothesis `label` by `with`, renaming
    /// inner binders that would capture labels or variables of `with`.
    pub fn subst_hyp(&self, label: &str, with: &ProofTree) -> ProofTree {
        let mut with_labels = BTreeSet::new();
        let mut with_vars = BTreeSet::new();
        with.names(&mut with_labels, &mut with_vars);
        self.subst_hyp_in(label, with, &with_labels, &with_vars)
    }

    fn subst_hyp_in(&self, label: &str, with: &ProofTree, wl: &BTreeSet<String>, wv: &BTreeSet<String>) -> ProofTree {
        if let Rule::Axiom(h) = &self.rule {
            return if h == label { with.clone() } else { self.clone() };
        }
        // renames a bound label clashing with `with`, then substitutes unless shadowed
        let under = |bound: &str, child: &ProofTree| -> (String, ProofTree) {
            if bound == label {
                return (bound.to_string(), child.clone());
            }
            if wl.contains(bound) {
                let mut labels = BTreeSet::new();
                let mut vars = BTreeSet::new();
                child.names(&mut labels, &mut vars);
                labels.extend(wl.iter().cloned());
                labels.insert(label.to_string());
                let fresh = crate::syntax::fresh_name(bound, &labels);
                let renamed = child.subst_hyp(bound, &ProofTree::axiom(&fresh));
                (fresh, renamed.subst_hyp_in(label, with, wl, wv))
            } else {
                (bound.to_string(), child.subst_hyp_in(label, with, wl, wv))
            }
        };
        let eigen = |x: &Var, child: ProofTree| -> (Var, ProofTree) {
            if wv.contains(&x.name) {
                let mut labels = BTreeSet::new();
                let mut vars = BTreeSet::new();
                child.names(&mut labels, &mut vars);
                vars.extend(wv.iter().cloned());
                let y = Var { name: crate::syntax::fresh_name(&x.name, &vars), sort: x.sort.clone() };
                let child = child.subst_terms(&Substitution::singleton(x.clone(), Term::Var(y.clone())));
                (y, child)
            } else {
                (x.clone(), child)
            }
        };
        let (rule, children) = match &self.rule {
            Rule::ImpIntro(h) => {
                let (h2, body) = under(h, &self.children[0]);
                (Rule::ImpIntro(h2), vec![body])
            }
            Rule::OrElim(h1, h2) => {
                let major = self.children[0].subst_hyp_in(label, with, wl, wv);
                let (k1, left) = under(h1, &self.children[1]);
                let (k2, right) = under(h2, &self.children[2]);
                (Rule::OrElim(k1, k2), vec![major, left, right])
            }
            Rule::ExistsElim(x, h) => {
                let major = self.children[0].subst_hyp_in(label, with, wl, wv);
                let (y, body) = eigen(x, self.children[1].clone());
                let (k, body) = under(h, &body);
                (Rule::ExistsElim(y, k), vec![major, body])
            }
            Rule::ForallIntro(x) => {
                let (y, body) = eigen(x, self.children[0].clone());
                (Rule::ForallIntro(y), vec![body.subst_hyp_in(label, with, wl, wv)])
            }
            r => (r.clone(), self.children.iter().map(|c| c.subst_hyp_in(label, with, wl, wv)).collect()),
        };
        ProofTree { rule, conclusion: self.conclusion.clone(), children }
    }

    /// Drops stated conclusions except on introductions in major-premise
    /// position, where the checker needs them.
    pub fn minimal_annotations(&self) -> ProofTree {
        self.minimal_in(false)
    }

    fn minimal_in(&self, major: bool) -> ProofTree {
        let keep = major && !synthesizable(self);
        let children = self
            .children
            .iter()
            .enumerate()
            .map(|(i, c)| c.minimal_in(i == 0 && self.rule.is_elim()))
            .collect();
        ProofTree {
            rule: self.rule.clone(),
            conclusion: if keep { self.conclusion.clone() } else { None },
            children,
        }
    }
}

/// Whether the checker can infer the conclusion once majors that need an
/// annotation carry one.
fn synthesizable(p: &ProofTree) -> bool {
    match &p.rule {
        Rule::Axiom(_) | Rule::TopIntro => true,
        Rule::AndElimLeft | Rule::AndElimRight | Rule::ImpElim | Rule::ForallElim(_) => true,
        Rule::AndIntro => p.children.iter().all(synthesizable),
        Rule::OrElim(..) | Rule::ExistsElim(..) => p.children.get(1).is_some_and(synthesizable),
        _ => false,
    }
}

fn quote(label: &str) -> String {
    format!("\"{}\"", label.replace('\\', "\\\\").replace('"', "\\\""))
}

impl fmt::Display for ProofTree {
    /// Canonical proof syntax; stated conclusions print as `(the A …)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(c) = &self.conclusion {
            write!(f, "(the {c} ")?;
        }
        write!(f, "({}", self.rule.tag())?;
        match &self.rule {
            Rule::Axiom(h) | Rule::ImpIntro(h) => write!(f, " {}", quote(h))?,
            Rule::OrElim(a, b) => write!(f, " {} {}", quote(a), quote(b))?,
            Rule::ForallIntro(x) => write!(f, " {x}")?,
            Rule::ExistsElim(x, h) => write!(f, " {x} {}", quote(h))?,
            Rule::ForallElim(t) | Rule::ExistsIntro(t) => write!(f, " {}", Annotated(t))?,
            _ => {}
        }
        for c in &self.children {
            write!(f, " {c}")?;
        }
        f.write_str(")")?;
        if self.conclusion.is_some() {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Hypotheses and a conclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequent {
    pub context: Vec<(Label, Proposition)>,
    pub conclusion: Proposition,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("hypothesis label {0} used twice")]
pub struct DuplicateLabel(pub String);

impl Sequent {
    pub fn new(context: Vec<(Label, Proposition)>, conclusion: Proposition) -> Result<Self, DuplicateLabel> {
        let mut seen = BTreeSet::new();
        for (h, _) in &context {
            if !seen.insert(h.clone()) {
                return Err(DuplicateLabel(h.clone()));
            }
        }
        Ok(Sequent { context, conclusion })
    }

    pub fn goal(conclusion: Proposition) -> Self {
        Sequent { context: vec![], conclusion }
    }

    pub fn is_closed(&self) -> bool {
        self.context.is_empty() && self.conclusion.is_closed()
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (h, p)) in self.context.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{h}: {p}")?;
        }
        if !self.context.is_empty() {
            f.write_str(" ")?;
        }
        write!(f, "|- {}", self.conclusion)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IffError {
    #[error("axiom {index} is not a universally closed equivalence")]
    NotAnEquivalence { index: usize },
    #[error("axiom {index}: left-hand side is not atomic")]
    LhsNotAtomic { index: usize },
    #[error("axiom {index}: {source}")]
    Rule { index: usize, source: RuleError },
}

/// A proposition rule obtained from an equivalence axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IffConversion {
    pub rule: RewriteRule,
    /// The defined predicate occurs in its own definition.
    pub self_referential: bool,
}

/// Turns axioms `∀x̄ (A ⇔ B)`, with `A` atomic, into rules `A ⟶ B`.
/// `A ⇔ B` is read as `(A ⇒ B) ∧ (B ⇒ A)`.
pub fn iff_axioms_to_rules(axioms: &[Proposition]) -> Result<Vec<IffConversion>, IffError> {
    let mut out = Vec::new();
    let mut names = BTreeSet::new();
    for (index, ax) in axioms.iter().enumerate() {
        let mut body = ax;
        while let Proposition::Forall(_, b) = body {
            body = b;
        }
        let Proposition::And(l, r) = body else { return Err(IffError::NotAnEquivalence { index }) };
        let (Proposition::Imp(a, b), Proposition::Imp(b2, a2)) = (&**l, &**r) else {
            return Err(IffError::NotAnEquivalence { index });
        };
        if !alpha_eq(a, a2) || !alpha_eq(b, b2) {
            return Err(IffError::NotAnEquivalence { index });
        }
        let Proposition::Atom(atom) = &**a else { return Err(IffError::LhsNotAtomic { index }) };
        let mut name = format!("def_{}", atom.pred);
        while !names.insert(name.clone()) {
            name.push('\'');
        }
        let rule = RewriteRule::prop(&name, atom.clone(), (**b).clone()).map_err(|source| IffError::Rule { index, source })?;
        let mut preds = BTreeSet::new();
        b.symbols(&mut preds, &mut BTreeSet::new());
        out.push(IffConversion { rule, self_referential: preds.contains(&atom.pred) });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::RuleBody;

    fn atom(p: &str) -> Proposition {
        Proposition::atom(p, vec![])
    }

    #[test]
    fn definition_becomes_rule() {
        let ax = Proposition::iff(atom("P"), Proposition::and(atom("A"), atom("B")));
        let rules = iff_axioms_to_rules(&[ax]).unwrap();
        assert_eq!(rules.len(), 1);
        assert!(!rules[0].self_referential);
        match rules[0].rule.body() {
            RuleBody::Prop { lhs, rhs } => {
                assert_eq!(lhs.pred, "P");
                assert_eq!(*rhs, Proposition::and(atom("A"), atom("B")));
            }
            _ => panic!("expected a proposition rule"),
        }
    }

    #[test]
    fn powerset_axiom_becomes_rule() {
        let x = Term::var("x", "set");
        let y = Term::var("y", "set");
        let z = Term::var("z", "set");
        let mem = |a: Term, b: Term| Proposition::atom("∈", vec![a, b]);
        let lhs = mem(x.clone(), Term::app("𝒫", vec![y.clone()]));
        let rhs = Proposition::forall(Var::new("z", "set"), Proposition::imp(mem(z.clone(), x), mem(z, y)));
        let ax = Proposition::forall(
            Var::new("x", "set"),
            Proposition::forall(Var::new("y", "set"), Proposition::iff(lhs.clone(), rhs.clone())),
        );
        let rules = iff_axioms_to_rules(&[ax]).unwrap();
        match rules[0].rule.body() {
            RuleBody::Prop { lhs: l, rhs: r } => {
                assert_eq!(Proposition::Atom(l.clone()), lhs);
                assert_eq!(*r, rhs);
            }
            _ => panic!("expected a proposition rule"),
        }
    }

    #[test]
    fn non_atomic_lhs_is_rejected() {
        let ax = Proposition::iff(Proposition::or(atom("A"), atom("B")), atom("C"));
        assert_eq!(iff_axioms_to_rules(&[ax]), Err(IffError::LhsNotAtomic { index: 0 }));
    }

    #[test]
    fn self_reference_is_flagged() {
        let ax = Proposition::iff(atom("P"), Proposition::imp(atom("P"), atom("Q")));
        assert!(iff_axioms_to_rules(&[ax]).unwrap()[0].self_referential);
    }

    #[test]
    fn free_variable_escape_is_rejected() {
        let ax = Proposition::forall(
            Var::new("x", "i"),
            Proposition::iff(atom("P"), Proposition::atom("R", vec![Term::var("x", "i")])),
        );
        assert!(matches!(iff_axioms_to_rules(&[ax]), Err(IffError::Rule { .. })));
    }

    #[test]
    fn hypothesis_substitution_avoids_capture() {
        // (imp_i "k" (axiom "h")) with h := (axiom "k") must rename the binder
        let p = ProofTree::imp_intro("k", ProofTree::axiom("h"));
        let out = p.subst_hyp("h", &ProofTree::axiom("k"));
        assert_eq!(out, ProofTree::imp_intro("k'", ProofTree::axiom("k")));
        // shadowed occurrences stay
        let q = ProofTree::imp_intro("h", ProofTree::axiom("h"));
        assert_eq!(q.subst_hyp("h", &ProofTree::axiom("z")), q);
    }
}
