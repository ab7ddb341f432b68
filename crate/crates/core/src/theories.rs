//! Builtin theories, theory validation and sub-formula closure.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::parse::{parse_document, DocumentPrinter, ParseError};
use crate::rewrite::{LocalConfluenceReport, RewriteRule, RewriteSystem, RuleBody, Termination, TerminationOrder};
use crate::syntax::{alpha_eq, Atom, Proposition, Signature, Substitutable, Substitution, Term, Var};
use crate::unify::unify_terms;

pub const BUILTIN_NAMES: [&str; 9] =
    ["empty", "def-conj", "assoc", "addition", "powerset", "crabbe", "comm", "p0-forall", "pf-collapse"];

const SOURCES: [(&str, &str); 9] = [
    ("empty", include_str!("../corpus/empty.thy")),
    ("def-conj", include_str!("../corpus/def-conj.thy")),
    ("assoc", include_str!("../corpus/assoc.thy")),
    ("addition", include_str!("../corpus/addition.thy")),
    ("powerset", include_str!("../corpus/powerset.thy")),
    ("crabbe", include_str!("../corpus/crabbe.thy")),
    ("comm", include_str!("../corpus/comm.thy")),
    ("p0-forall", include_str!("../corpus/p0-forall.thy")),
    ("pf-collapse", include_str!("../corpus/pf-collapse.thy")),
];

/// Facts about a theory that validation cannot discover.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnownNegative {
    /// Some provable sequent has no cut-free proof.
    CutEliminationFails,
}

impl fmt::Display for KnownNegative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KnownNegative::CutEliminationFails => f.write_str("cut elimination fails"),
        }
    }
}

/// Verdicts of the latest validation run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    /// Every rule is well-formed over the signature.
    pub lhs_shapes: bool,
    pub non_confusing: bool,
    pub confluence: LocalConfluenceReport,
    pub termination: Termination,
    pub order: Option<TerminationOrder>,
    /// Proposition rules whose head predicate occurs in their right-hand side.
    pub self_referential: Vec<String>,
}

impl ValidationReport {
    pub fn locally_confluent(&self) -> bool {
        self.confluence.is_locally_confluent()
    }

    pub fn terminating(&self) -> bool {
        self.termination != Termination::Unknown
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rule shapes: {}", if self.lhs_shapes { "ok" } else { "ill-formed" })?;
        writeln!(f, "non-confusing: {}", yes_no(self.non_confusing))?;
        let c = &self.confluence;
        writeln!(
            f,
            "critical pairs: {} (joinable {}, not joinable {}, unknown {})",
            c.total(),
            c.joinable.len(),
            c.failures.len(),
            c.unknown.len()
        )?;
        for cp in c.failures.iter().chain(&c.unknown) {
            writeln!(f, "  {cp}")?;
        }
        writeln!(f, "locally confluent: {}", yes_no(self.locally_confluent()))?;
        write!(f, "termination: {}", self.termination)?;
        if let Some(o) = &self.order {
            write!(f, " (precedence {}", o.precedence.join(" > "))?;
            for (s, st) in &o.status {
                write!(f, ", {s} {st:?}")?;
            }
            write!(f, ")")?;
        }
        writeln!(f)?;
        if !self.self_referential.is_empty() {
            writeln!(f, "self-referential rules: {}", self.self_referential.join(", "))?;
        }
        Ok(())
    }
}

/// A signature with a rewrite system over it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theory {
    pub name: String,
    pub signature: Signature,
    pub system: RewriteSystem,
    pub report: Option<ValidationReport>,
    pub known_negative: Vec<KnownNegative>,
}

impl Theory {
    /// An unvalidated theory.
    pub fn new(name: &str, signature: Signature, system: RewriteSystem) -> Self {
        Theory { name: name.to_string(), signature, system, report: None, known_negative: vec![] }
    }

    pub fn is_validated(&self) -> bool {
        self.report.is_some()
    }

    /// The same theory with extra declarations. Validation verdicts carry
    /// over since the rules are unchanged.
    pub fn extend_signature(&self, extra: &Signature) -> Result<Theory, crate::syntax::SignatureError> {
        let mut out = self.clone();
        out.signature.merge(extra)?;
        Ok(out)
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = DocumentPrinter {
            signature: &self.signature,
            rules: self.system.rules(),
            assert_terminating: self.system.asserted_terminating(),
        };
        write!(f, "{p}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("unknown builtin theory {0}")]
    UnknownBuiltin(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("theory files contain no hypotheses or goals")]
    GoalsInTheory,
}

/// Reads a theory file and validates it with the default fuel.
pub fn parse_theory(name: &str, text: &str) -> Result<Theory, TheoryError> {
    let doc = parse_document(text, &Signature::new())?;
    if !doc.hypotheses.is_empty() || !doc.goals.is_empty() {
        return Err(TheoryError::GoalsInTheory);
    }
    let mut system = RewriteSystem::new();
    for r in doc.rules {
        system.add_rule(r).expect("rules are checked by the parser");
    }
    if doc.assert_terminating {
        system.assert_terminating();
    }
    let mut t = Theory::new(name, doc.signature, system);
    validate_theory(&mut t, crate::rewrite::DEFAULT_FUEL);
    Ok(t)
}

pub fn builtin_source(name: &str) -> Option<&'static str> {
    SOURCES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn load_builtin(name: &str) -> Result<Theory, TheoryError> {
    let src = builtin_source(name).ok_or_else(|| TheoryError::UnknownBuiltin(name.to_string()))?;
    let mut t = parse_theory(name, src)?;
    if name == "crabbe" {
        t.known_negative.push(KnownNegative::CutEliminationFails);
    }
    Ok(t)
}

/// Later declarations rank higher: definitions are usually declared after
/// the symbols they unfold into.
pub fn default_precedence(sig: &Signature) -> Vec<String> {
    sig.order.iter().rev().cloned().collect()
}

fn self_referential(rule: &RewriteRule) -> bool {
    match rule.body() {
        RuleBody::Prop { lhs, rhs } => {
            let mut preds = BTreeSet::new();
            rhs.symbols(&mut preds, &mut BTreeSet::new());
            preds.contains(&lhs.pred)
        }
        RuleBody::Term { .. } => false,
    }
}

/// Runs every check and records the verdicts in the theory. Never rejects.
pub fn validate_theory(theory: &mut Theory, fuel: usize) -> ValidationReport {
    let lhs_shapes = theory.system.rules().iter().all(|r| r.check(&theory.signature).is_ok());
    let non_confusing = theory.system.check_nonconfusing();
    let confluence = theory.system.check_local_confluence(fuel);
    let precedence = default_precedence(&theory.signature);
    theory.system.check_termination_lpo(&precedence);
    let order = theory.system.termination_order(&precedence);
    let report = ValidationReport {
        lhs_shapes,
        non_confusing,
        confluence,
        termination: theory.system.termination(),
        order,
        self_referential: theory.system.rules().iter().filter(|r| self_referential(r)).map(|r| r.name().to_string()).collect(),
    };
    theory.report = Some(report.clone());
    report
}

/// Name of the placeholder standing for an arbitrary term.
pub const PLACEHOLDER: &str = "•";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureStatus {
    Closed,
    /// More than `fuel` candidates were examined.
    Truncated,
    /// Closed, but some classes contain placeholders and stand for infinitely
    /// many instances.
    InfiniteSchematic,
}

/// Representatives of the congruence classes of a sub-formula closure, in
/// discovery order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubformulaSet {
    pub classes: Vec<Proposition>,
    pub status: ClosureStatus,
}

fn is_placeholder(v: &Var) -> bool {
    v.name == PLACEHOLDER
}

fn has_placeholder(p: &Proposition) -> bool {
    p.free_vars().iter().any(is_placeholder)
}

/// Every occurrence of the placeholder becomes its own variable `•k`.
fn open_term(t: &Term, next: &mut usize) -> Term {
    match t {
        Term::Var(v) if is_placeholder(v) => {
            *next += 1;
            Term::Var(Var { name: format!("{PLACEHOLDER}{next}"), sort: v.sort.clone() })
        }
        Term::Var(_) => t.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| open_term(a, next)).collect()),
    }
}

/// Replaces every free variable (placeholders and rule variables alike) by
/// the placeholder.
fn close_schema(p: &Proposition) -> Proposition {
    let s: Substitution =
        p.free_vars().into_iter().map(|v| (v.clone(), Term::Var(Var { name: PLACEHOLDER.into(), sort: v.sort }))).collect();
    p.apply(&s)
}

impl SubformulaSet {
    /// Whether `p` is congruent to a representative or an instance of one.
    pub fn contains(&self, sys: &RewriteSystem, p: &Proposition, fuel: usize) -> bool {
        self.classes.iter().any(|c| {
            if sys.congruent_props(c, p, fuel).unwrap_or(false) {
                return true;
            }
            has_placeholder(c) && instance_of(c, p)
        })
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// Syntactic instance check with placeholders as independent pattern holes.
fn instance_of(schema: &Proposition, p: &Proposition) -> bool {
    use Proposition::*;
    match (schema, p) {
        (Atom(a), Atom(b)) => {
            a.pred == b.pred && a.args.len() == b.args.len() && a.args.iter().zip(&b.args).all(|(s, t)| term_instance(s, t))
        }
        (Top, Top) | (Bottom, Bottom) => true,
        (And(a1, a2), And(b1, b2)) | (Or(a1, a2), Or(b1, b2)) | (Imp(a1, a2), Imp(b1, b2)) => {
            instance_of(a1, b1) && instance_of(a2, b2)
        }
        (Forall(x, a), Forall(y, b)) | (Exists(x, a), Exists(y, b)) => {
            x.sort == y.sort && instance_of(a, &Proposition::instantiate(y, b, &Term::Var(x.clone())))
        }
        _ => false,
    }
}

fn term_instance(s: &Term, t: &Term) -> bool {
    match (s, t) {
        (Term::Var(v), Term::Var(w)) if is_placeholder(v) => v.sort == w.sort,
        (Term::Var(v), _) if is_placeholder(v) => true,
        (Term::Var(a), Term::Var(b)) => a == b,
        (Term::App(f, xs), Term::App(g, ys)) => f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term_instance(x, y)),
        _ => false,
    }
}

/// Immediate sub-trees, with each quantifier body opened on a placeholder.
fn schematic_children(p: &Proposition) -> Vec<Proposition> {
    match p {
        Proposition::Forall(v, body) | Proposition::Exists(v, body) => {
            let hole = Term::Var(Var { name: PLACEHOLDER.into(), sort: v.sort.clone() });
            vec![Proposition::instantiate(v, body, &hole)]
        }
        _ => p.children().into_iter().cloned().collect(),
    }
}

/// Propositions congruent to some instance of the schema `p`, obtained by
/// narrowing one rule at an atom: placeholder occurrences may be instantiated
/// to match a left-hand side.
fn schematic_reducts(sys: &RewriteSystem, p: &Proposition) -> Vec<Proposition> {
    let mut out = Vec::new();
    let Proposition::Atom(a) = p else { return out };
    if !has_placeholder(p) {
        return out;
    }
    let mut next = 0;
    let opened = Atom { pred: a.pred.clone(), args: a.args.iter().map(|t| open_term(t, &mut next)).collect() };
    for (k, rule) in sys.rules().iter().enumerate() {
        let rule = rule.renamed(&format!("#s{k}"));
        match rule.body() {
            RuleBody::Prop { lhs, rhs } => {
                if lhs.pred != opened.pred || lhs.args.len() != opened.args.len() {
                    continue;
                }
                let eqs = lhs.args.iter().cloned().zip(opened.args.iter().cloned()).collect();
                if let Some(s) = unify_terms(eqs, |_| true) {
                    out.push(close_schema(&rhs.apply(&s)));
                }
            }
            RuleBody::Term { lhs, rhs } => {
                for (i, arg) in opened.args.iter().enumerate() {
                    for pos in arg.positions() {
                        let sub = arg.at(&pos).expect("position of argument");
                        if let Some(s) = unify_terms(vec![(sub.clone(), lhs.clone())], |_| true) {
                            let mut args = opened.args.clone();
                            args[i] = arg.replace_at(&pos, rhs.clone());
                            out.push(close_schema(&Proposition::Atom(Atom { pred: opened.pred.clone(), args }.apply(&s))));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Smallest set of classes containing `a` and closed under sub-trees,
/// instantiation (kept schematic with placeholders) and the congruence.
/// `fuel` bounds the number of candidates examined.
pub fn subformula_closure(theory: &Theory, a: &Proposition, fuel: usize) -> SubformulaSet {
    let sys = &theory.system;
    let mut classes: Vec<Proposition> = Vec::new();
    let mut seen: Vec<Proposition> = Vec::new();
    let mut queue = std::collections::VecDeque::from([a.clone()]);
    let mut examined = 0;
    let mut schematic = false;
    while let Some(p) = queue.pop_front() {
        if seen.iter().any(|q| alpha_eq(q, &p)) {
            continue;
        }
        examined += 1;
        if examined > fuel {
            return SubformulaSet { classes, status: ClosureStatus::Truncated };
        }
        seen.push(p.clone());
        schematic |= has_placeholder(&p);
        let known = classes.iter().any(|c| sys.congruent_props(c, &p, fuel).unwrap_or(false));
        if !known {
            classes.push(p.clone());
        }
        queue.extend(schematic_children(&p));
        // the class also holds every proposition p rewrites to
        match sys.head_normalize(&p, fuel) {
            Ok(h) if !alpha_eq(&h.value, &p) => queue.push_back(h.value),
            _ => {}
        }
        if let Proposition::Atom(atom) = &p {
            if let Ok(n) = sys.normalize_prop(&Proposition::Atom(atom.clone()), fuel) {
                if !alpha_eq(&n.value, &p) {
                    queue.push_back(n.value);
                }
            }
        }
        queue.extend(schematic_reducts(sys, &p));
    }
    let status = if schematic { ClosureStatus::InfiniteSchematic } else { ClosureStatus::Closed };
    SubformulaSet { classes, status }
}
