//! The congruence engine: oriented rules, matching, normalization, and the
//! checks (local confluence, termination, non-confusion) that make the
//! congruence decidable.

mod critical;
mod lpo;

pub use critical::{CriticalPair, Joinability, LocalConfluenceReport};
pub use lpo::{Status, TerminationOrder};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::syntax::{
    alpha_eq, fresh_name, Atom, Expr, Position, Proposition, Signature, Substitutable, Substitution, Term, Var,
    WfError,
};

/// Default rewrite-step budget.
pub const DEFAULT_FUEL: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("rule {0}: left-hand side is a variable")]
    VariableLhs(String),
    #[error("rule {rule}: variable {var} of the right-hand side does not occur on the left")]
    FreeVariableEscape { rule: String, var: String },
    #[error("rule {rule}: {source}")]
    IllFormed { rule: String, source: WfError },
    #[error("rule {rule}: sides have different sorts ({lhs} vs {rhs})")]
    SortMismatch { rule: String, lhs: String, rhs: String },
    #[error("duplicate rule name {0}")]
    DuplicateName(String),
}

/// Rewriting ran out of steps. The system may be non-terminating.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("fuel exhausted after {steps} rewrite steps")]
pub struct FuelExhausted {
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RuleBody {
    Term { lhs: Term, rhs: Term },
    Prop { lhs: Atom, rhs: Proposition },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RewriteRule {
    name: String,
    body: RuleBody,
}

impl RewriteRule {
    /// A term rule `lhs ⟶ rhs`. The left-hand side must not be a variable and
    /// must contain every variable of the right-hand side.
    pub fn term(name: &str, lhs: Term, rhs: Term) -> Result<Self, RuleError> {
        if lhs.is_var() {
            return Err(RuleError::VariableLhs(name.into()));
        }
        let lv = lhs.vars();
        if let Some(v) = rhs.vars().into_iter().find(|v| !lv.contains(v)) {
            return Err(RuleError::FreeVariableEscape { rule: name.into(), var: v.name });
        }
        Ok(RewriteRule { name: name.into(), body: RuleBody::Term { lhs, rhs } })
    }

    /// A proposition rule `atom ⟶ proposition`.
    pub fn prop(name: &str, lhs: Atom, rhs: Proposition) -> Result<Self, RuleError> {
        let lv = lhs.vars();
        if let Some(v) = rhs.free_vars().into_iter().find(|v| !lv.contains(v)) {
            return Err(RuleError::FreeVariableEscape { rule: name.into(), var: v.name });
        }
        Ok(RewriteRule { name: name.into(), body: RuleBody::Prop { lhs, rhs } })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn body(&self) -> &RuleBody {
        &self.body
    }

    pub fn is_prop_rule(&self) -> bool {
        matches!(self.body, RuleBody::Prop { .. })
    }

    pub fn lhs_vars(&self) -> BTreeSet<Var> {
        match &self.body {
            RuleBody::Term { lhs, .. } => lhs.vars(),
            RuleBody::Prop { lhs, .. } => lhs.vars(),
        }
    }

    /// Head symbol of the left-hand side.
    pub fn head(&self) -> &str {
        match &self.body {
            RuleBody::Term { lhs, .. } => lhs.head().expect("term rule lhs is never a variable"),
            RuleBody::Prop { lhs, .. } => &lhs.pred,
        }
    }

    /// Checks both sides against the signature and that term rules preserve sorts.
    pub fn check(&self, sig: &Signature) -> Result<(), RuleError> {
        let wrap = |source| RuleError::IllFormed { rule: self.name.clone(), source };
        match &self.body {
            RuleBody::Term { lhs, rhs } => {
                let l = sig.check_term(lhs).map_err(wrap)?;
                let r = sig.check_term(rhs).map_err(wrap)?;
                if l != r {
                    return Err(RuleError::SortMismatch { rule: self.name.clone(), lhs: l.0, rhs: r.0 });
                }
            }
            RuleBody::Prop { lhs, rhs } => {
                sig.check_atom(lhs).map_err(wrap)?;
                sig.check_prop(rhs).map_err(wrap)?;
            }
        }
        Ok(())
    }

    /// The rule with its variables renamed by appending `suffix`.
    pub fn renamed(&self, suffix: &str) -> RewriteRule {
        let s: Substitution = self
            .lhs_vars()
            .into_iter()
            .map(|v| {
                let w = Var { name: format!("{}{}", v.name, suffix), sort: v.sort.clone() };
                (v, Term::Var(w))
            })
            .collect();
        let body = match &self.body {
            RuleBody::Term { lhs, rhs } => RuleBody::Term { lhs: lhs.apply(&s), rhs: rhs.apply(&s) },
            RuleBody::Prop { lhs, rhs } => RuleBody::Prop { lhs: lhs.apply(&s), rhs: rhs.apply(&s) },
        };
        RewriteRule { name: self.name.clone(), body }
    }
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.body {
            RuleBody::Term { lhs, rhs } => write!(f, "rule {}: {} ~> {}.", self.name, lhs, rhs),
            RuleBody::Prop { lhs, rhs } => write!(f, "rule {}: {} ~> {}.", self.name, lhs, rhs),
        }
    }
}

/// How the termination of a system is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Termination {
    Lpo,
    UserAsserted,
    Unknown,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::Lpo => "lpo",
            Termination::UserAsserted => "user-asserted",
            Termination::Unknown => "unknown",
        })
    }
}

/// An ordered list of rules plus the flags recording what has been checked.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RewriteSystem {
    rules: Vec<RewriteRule>,
    asserted_terminating: bool,
    lpo_terminating: bool,
    locally_confluent: bool,
    non_confusing: bool,
}

/// A rewrite redex found by [`RewriteSystem::rewrite_positions`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Redex<T> {
    pub position: Position,
    pub rule: String,
    pub reduct: T,
}

/// Result of a successful normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized<T> {
    pub value: T,
    pub steps: usize,
}

/// Whether a congruence verdict rests on checked properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trust {
    /// Terminating (LPO or user-asserted) and locally confluent.
    Decided,
    /// The system lacks a termination or confluence certificate.
    Heuristic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Congruence {
    pub equal: bool,
    pub trust: Trust,
}

impl RewriteSystem {
    pub fn new() -> Self {
        RewriteSystem::default()
    }

    pub fn from_rules(rules: impl IntoIterator<Item = RewriteRule>) -> Result<Self, RuleError> {
        let mut sys = RewriteSystem::new();
        for r in rules {
            sys.add_rule(r)?;
        }
        Ok(sys)
    }

    /// Appends a rule. Any previously computed check is invalidated.
    pub fn add_rule(&mut self, rule: RewriteRule) -> Result<(), RuleError> {
        if self.rules.iter().any(|r| r.name == rule.name) {
            return Err(RuleError::DuplicateName(rule.name));
        }
        self.rules.push(rule);
        self.lpo_terminating = false;
        self.locally_confluent = false;
        self.non_confusing = false;
        Ok(())
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn rule(&self, name: &str) -> Option<&RewriteRule> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn assert_terminating(&mut self) {
        self.asserted_terminating = true;
    }

    pub fn asserted_terminating(&self) -> bool {
        self.asserted_terminating
    }

    pub fn lpo_terminating(&self) -> bool {
        self.lpo_terminating
    }

    pub fn locally_confluent(&self) -> bool {
        self.locally_confluent
    }

    pub fn non_confusing(&self) -> bool {
        self.non_confusing
    }

    pub fn termination(&self) -> Termination {
        if self.lpo_terminating {
            Termination::Lpo
        } else if self.asserted_terminating {
            Termination::UserAsserted
        } else {
            Termination::Unknown
        }
    }

    pub fn trust(&self) -> Trust {
        if self.termination() != Termination::Unknown && self.locally_confluent {
            Trust::Decided
        } else {
            Trust::Heuristic
        }
    }

    fn term_rules(&self) -> impl Iterator<Item = (&str, &Term, &Term)> {
        self.rules.iter().filter_map(|r| match &r.body {
            RuleBody::Term { lhs, rhs } => Some((r.name.as_str(), lhs, rhs)),
            RuleBody::Prop { .. } => None,
        })
    }

    fn prop_rules(&self) -> impl Iterator<Item = (&str, &Atom, &Proposition)> {
        self.rules.iter().filter_map(|r| match &r.body {
            RuleBody::Prop { lhs, rhs } => Some((r.name.as_str(), lhs, rhs)),
            RuleBody::Term { .. } => None,
        })
    }

    pub fn has_prop_rules(&self) -> bool {
        self.prop_rules().next().is_some()
    }

    /// Every proposition rule has an atomic left-hand side and every term rule a
    /// term one. Both hold by construction of [`RewriteRule`], so this records
    /// the verdict and returns true.
    pub fn check_nonconfusing(&mut self) -> bool {
        let ok = self.rules.iter().all(|r| match &r.body {
            RuleBody::Term { lhs, .. } => !lhs.is_var(),
            RuleBody::Prop { .. } => true,
        });
        self.non_confusing = ok;
        ok
    }

    /// Tests local confluence by joining each critical pair within `fuel`.
    pub fn check_local_confluence(&mut self, fuel: usize) -> LocalConfluenceReport {
        let report = critical::local_confluence(self, fuel);
        self.locally_confluent = report.is_locally_confluent();
        report
    }

    pub fn critical_pairs(&self) -> Vec<CriticalPair> {
        critical::critical_pairs(self, DEFAULT_FUEL)
    }

    /// Checks every rule decreases in a recursive path order with the given
    /// precedence (greatest first), searching over lexicographic and multiset
    /// argument statuses.
    pub fn check_termination_lpo(&mut self, precedence: &[String]) -> bool {
        let ok = lpo::find_order(self, precedence).is_some();
        self.lpo_terminating = ok;
        ok
    }

    /// The order that orients every rule, if any.
    pub fn termination_order(&self, precedence: &[String]) -> Option<TerminationOrder> {
        lpo::find_order(self, precedence)
    }

    // ---- one-step rewriting -------------------------------------------------

    fn rewrite_term_root(&self, t: &Term) -> Option<(&str, Term)> {
        for (name, lhs, rhs) in self.term_rules() {
            if let Some(s) = match_term(lhs, t) {
                return Some((name, rhs.apply(&s)));
            }
        }
        None
    }

    fn rewrite_atom_root(&self, a: &Atom) -> Option<(&str, Proposition)> {
        for (name, lhs, rhs) in self.prop_rules() {
            if let Some(s) = match_atom(lhs, a) {
                return Some((name, rhs.apply(&s)));
            }
        }
        None
    }

    fn term_redexes(&self, t: &Term, prefix: &mut Position, out: &mut Vec<Redex<Term>>) {
        if let Term::App(_, args) = t {
            for (name, lhs, rhs) in self.term_rules() {
                if let Some(s) = match_term(lhs, t) {
                    out.push(Redex { position: prefix.clone(), rule: name.into(), reduct: rhs.apply(&s) });
                }
            }
            for (i, a) in args.iter().enumerate() {
                prefix.push(i);
                self.term_redexes(a, prefix, out);
                prefix.pop();
            }
        }
    }

    /// Every redex of a term, pre-order, with the whole rewritten term as reduct.
    pub fn term_rewrite_positions(&self, t: &Term) -> Vec<Redex<Term>> {
        let mut local = Vec::new();
        self.term_redexes(t, &mut Vec::new(), &mut local);
        local
            .into_iter()
            .map(|r| Redex { reduct: t.replace_at(&r.position, r.reduct), ..r })
            .collect()
    }

    /// Every redex of a proposition, including inside atoms and under binders.
    pub fn prop_rewrite_positions(&self, p: &Proposition) -> Vec<Redex<Proposition>> {
        let mut out = Vec::new();
        self.prop_redexes(p, &mut Vec::new(), &mut out);
        out.into_iter().map(|r| Redex { reduct: replace_prop_at(p, &r.position, r.reduct), ..r }).collect()
    }

    fn prop_redexes(&self, p: &Proposition, prefix: &mut Position, out: &mut Vec<Redex<Proposition>>) {
        match p {
            Proposition::Atom(a) => {
                for (name, lhs, rhs) in self.prop_rules() {
                    if let Some(s) = match_atom(lhs, a) {
                        out.push(Redex { position: prefix.clone(), rule: name.into(), reduct: rhs.apply(&s) });
                    }
                }
                for (i, arg) in a.args.iter().enumerate() {
                    let mut local = Vec::new();
                    self.term_redexes(arg, &mut Vec::new(), &mut local);
                    for r in local {
                        let mut position = prefix.clone();
                        position.push(i);
                        position.extend(&r.position);
                        let mut args = a.args.clone();
                        args[i] = arg.replace_at(&r.position, r.reduct);
                        let reduct = Proposition::Atom(Atom { pred: a.pred.clone(), args });
                        // the reduct recorded here is the rewritten atom
                        out.push(Redex { position, rule: r.rule, reduct });
                    }
                }
            }
            Proposition::Top | Proposition::Bottom => {}
            _ => {
                for (i, c) in p.children().into_iter().enumerate() {
                    prefix.push(i);
                    self.prop_redexes(c, prefix, out);
                    prefix.pop();
                }
            }
        }
    }

    pub fn rewrite_positions(&self, x: &Expr) -> Vec<Redex<Expr>> {
        match x {
            Expr::Term(t) => self
                .term_rewrite_positions(t)
                .into_iter()
                .map(|r| Redex { position: r.position, rule: r.rule, reduct: Expr::Term(r.reduct) })
                .collect(),
            Expr::Prop(p) => self
                .prop_rewrite_positions(p)
                .into_iter()
                .map(|r| Redex { position: r.position, rule: r.rule, reduct: Expr::Prop(r.reduct) })
                .collect(),
        }
    }

    // ---- normalization ------------------------------------------------------

    fn norm_term(&self, t: &Term, steps: &mut usize, fuel: usize) -> Result<Term, FuelExhausted> {
        let mut cur = t.clone();
        loop {
            cur = match cur {
                Term::Var(_) => return Ok(cur),
                Term::App(f, args) => {
                    let args = args.iter().map(|a| self.norm_term(a, steps, fuel)).collect::<Result<Vec<_>, _>>()?;
                    Term::App(f, args)
                }
            };
            match self.rewrite_term_root(&cur) {
                Some((_, reduct)) => {
                    tick(steps, fuel)?;
                    cur = reduct;
                }
                None => return Ok(cur),
            }
        }
    }

    fn norm_atom_args(&self, a: &Atom, steps: &mut usize, fuel: usize) -> Result<Atom, FuelExhausted> {
        let args = a.args.iter().map(|t| self.norm_term(t, steps, fuel)).collect::<Result<Vec<_>, _>>()?;
        Ok(Atom { pred: a.pred.clone(), args })
    }

    /// Rewrites at the root of an atom (after normalizing its arguments) until
    /// the result is a non-atomic proposition or an irreducible atom.
    pub fn head_normalize(&self, p: &Proposition, fuel: usize) -> Result<Normalized<Proposition>, FuelExhausted> {
        let mut steps = 0;
        let value = self.head_norm(p, &mut steps, fuel)?;
        Ok(Normalized { value, steps })
    }

    fn head_norm(&self, p: &Proposition, steps: &mut usize, fuel: usize) -> Result<Proposition, FuelExhausted> {
        let mut cur = p.clone();
        loop {
            let Proposition::Atom(a) = &cur else { return Ok(cur) };
            let a = self.norm_atom_args(a, steps, fuel)?;
            match self.rewrite_atom_root(&a) {
                Some((_, reduct)) => {
                    tick(steps, fuel)?;
                    cur = reduct;
                }
                None => return Ok(Proposition::Atom(a)),
            }
        }
    }

    /// Leftmost-innermost normalization. Works with an explicit stack so that
    /// non-terminating proposition rules exhaust fuel instead of the call stack.
    fn norm_prop(&self, p: &Proposition, steps: &mut usize, fuel: usize) -> Result<Proposition, FuelExhausted> {
        enum Frame {
            Visit(Proposition),
            And,
            Or,
            Imp,
            Forall(Var),
            Exists(Var),
        }
        let mut work = vec![Frame::Visit(p.clone())];
        let mut done: Vec<Proposition> = Vec::new();
        while let Some(frame) = work.pop() {
            match frame {
                Frame::Visit(q) => match q {
                    Proposition::Atom(a) => {
                        let a = self.norm_atom_args(&a, steps, fuel)?;
                        match self.rewrite_atom_root(&a) {
                            Some((_, reduct)) => {
                                tick(steps, fuel)?;
                                work.push(Frame::Visit(reduct));
                            }
                            None => done.push(Proposition::Atom(a)),
                        }
                    }
                    Proposition::Top | Proposition::Bottom => done.push(q),
                    Proposition::And(a, b) => work.extend([Frame::And, Frame::Visit(*b), Frame::Visit(*a)]),
                    Proposition::Or(a, b) => work.extend([Frame::Or, Frame::Visit(*b), Frame::Visit(*a)]),
                    Proposition::Imp(a, b) => work.extend([Frame::Imp, Frame::Visit(*b), Frame::Visit(*a)]),
                    Proposition::Forall(v, b) => work.extend([Frame::Forall(v), Frame::Visit(*b)]),
                    Proposition::Exists(v, b) => work.extend([Frame::Exists(v), Frame::Visit(*b)]),
                },
                Frame::And | Frame::Or | Frame::Imp => {
                    let b = done.pop().expect("right operand");
                    let a = done.pop().expect("left operand");
                    done.push(match frame {
                        Frame::And => Proposition::and(a, b),
                        Frame::Or => Proposition::or(a, b),
                        _ => Proposition::imp(a, b),
                    });
                }
                Frame::Forall(v) => {
                    let b = done.pop().expect("body");
                    done.push(Proposition::forall(v, b));
                }
                Frame::Exists(v) => {
                    let b = done.pop().expect("body");
                    done.push(Proposition::exists(v, b));
                }
            }
        }
        Ok(done.pop().expect("normal form"))
    }

    pub fn normalize_term(&self, t: &Term, fuel: usize) -> Result<Normalized<Term>, FuelExhausted> {
        let mut steps = 0;
        let value = self.norm_term(t, &mut steps, fuel)?;
        Ok(Normalized { value, steps })
    }

    pub fn normalize_prop(&self, p: &Proposition, fuel: usize) -> Result<Normalized<Proposition>, FuelExhausted> {
        let mut steps = 0;
        let value = self.norm_prop(p, &mut steps, fuel)?;
        Ok(Normalized { value, steps })
    }

    /// Leftmost-innermost normalization of a term or proposition.
    pub fn normalize(&self, x: &Expr, fuel: usize) -> Result<Normalized<Expr>, FuelExhausted> {
        match x {
            Expr::Term(t) => self.normalize_term(t, fuel).map(|n| Normalized { value: Expr::Term(n.value), steps: n.steps }),
            Expr::Prop(p) => self.normalize_prop(p, fuel).map(|n| Normalized { value: Expr::Prop(n.value), steps: n.steps }),
        }
    }

    /// Normalizes by repeatedly rewriting the redex picked by `choose` among all
    /// current redexes. Used to compare strategies against leftmost-innermost.
    pub fn normalize_with(
        &self,
        x: &Expr,
        fuel: usize,
        mut choose: impl FnMut(&[Redex<Expr>]) -> usize,
    ) -> Result<Normalized<Expr>, FuelExhausted> {
        let mut cur = x.clone();
        let mut steps = 0;
        loop {
            let redexes = self.rewrite_positions(&cur);
            if redexes.is_empty() {
                return Ok(Normalized { value: cur, steps });
            }
            tick(&mut steps, fuel)?;
            let i = choose(&redexes).min(redexes.len() - 1);
            cur = redexes.into_iter().nth(i).expect("index in range").reduct;
        }
    }

    // ---- congruence ---------------------------------------------------------

    /// Decides `a ≡ b`. Propositions are compared lazily: atoms are rewritten at
    /// the root only until a connective appears, then the comparison descends
    /// structurally. On terminating confluent systems this agrees with comparing
    /// full normal forms; it also terminates on some non-terminating proposition
    /// rules such as `P ⟶ P ⇒ Q`.
    pub fn congruent(&self, a: &Expr, b: &Expr, fuel: usize) -> Result<Congruence, FuelExhausted> {
        let mut steps = 0;
        let equal = match (a, b) {
            (Expr::Term(s), Expr::Term(t)) => self.norm_term(s, &mut steps, fuel)? == self.norm_term(t, &mut steps, fuel)?,
            (Expr::Prop(p), Expr::Prop(q)) => self.cong_prop(p, q, &mut steps, fuel)?,
            _ => false,
        };
        Ok(Congruence { equal, trust: self.trust() })
    }

    pub fn congruent_props(&self, a: &Proposition, b: &Proposition, fuel: usize) -> Result<bool, FuelExhausted> {
        let mut steps = 0;
        self.cong_prop(a, b, &mut steps, fuel)
    }

    pub fn congruent_terms(&self, a: &Term, b: &Term, fuel: usize) -> Result<bool, FuelExhausted> {
        let mut steps = 0;
        Ok(self.norm_term(a, &mut steps, fuel)? == self.norm_term(b, &mut steps, fuel)?)
    }

    fn cong_prop(&self, a: &Proposition, b: &Proposition, steps: &mut usize, fuel: usize) -> Result<bool, FuelExhausted> {
        if alpha_eq(a, b) {
            return Ok(true);
        }
        let a = self.head_norm(a, steps, fuel)?;
        let b = self.head_norm(b, steps, fuel)?;
        use Proposition::*;
        Ok(match (&a, &b) {
            (Atom(x), Atom(y)) => x == y,
            (Top, Top) | (Bottom, Bottom) => true,
            (And(a1, a2), And(b1, b2)) | (Or(a1, a2), Or(b1, b2)) | (Imp(a1, a2), Imp(b1, b2)) => {
                self.cong_prop(a1, b1, steps, fuel)? && self.cong_prop(a2, b2, steps, fuel)?
            }
            (Forall(v, p), Forall(w, q)) | (Exists(v, p), Exists(w, q)) => {
                if v.sort != w.sort {
                    return Ok(false);
                }
                let mut avoid = BTreeSet::new();
                a.all_var_names(&mut avoid);
                b.all_var_names(&mut avoid);
                let z = Term::Var(Var { name: fresh_name(&v.name, &avoid), sort: v.sort.clone() });
                let p = Proposition::instantiate(v, p, &z);
                let q = Proposition::instantiate(w, q, &z);
                self.cong_prop(&p, &q, steps, fuel)?
            }
            _ => false,
        })
    }
}

fn tick(steps: &mut usize, fuel: usize) -> Result<(), FuelExhausted> {
    if *steps >= fuel {
        return Err(FuelExhausted { steps: *steps });
    }
    *steps += 1;
    Ok(())
}

/// Replaces the sub-proposition (or the atom) at `pos`. Positions that enter
/// an atom's arguments are handled by the caller, so `pos` stops at the atom.
fn replace_prop_at(p: &Proposition, pos: &[usize], with: Proposition) -> Proposition {
    let Some((&i, rest)) = pos.split_first() else { return with };
    match p {
        Proposition::And(a, b) => match i {
            0 => Proposition::and(replace_prop_at(a, rest, with), (**b).clone()),
            _ => Proposition::and((**a).clone(), replace_prop_at(b, rest, with)),
        },
        Proposition::Or(a, b) => match i {
            0 => Proposition::or(replace_prop_at(a, rest, with), (**b).clone()),
            _ => Proposition::or((**a).clone(), replace_prop_at(b, rest, with)),
        },
        Proposition::Imp(a, b) => match i {
            0 => Proposition::imp(replace_prop_at(a, rest, with), (**b).clone()),
            _ => Proposition::imp((**a).clone(), replace_prop_at(b, rest, with)),
        },
        Proposition::Forall(v, b) => Proposition::forall(v.clone(), replace_prop_at(b, rest, with)),
        Proposition::Exists(v, b) => Proposition::exists(v.clone(), replace_prop_at(b, rest, with)),
        // position inside an atom: `with` is already the rewritten atom
        Proposition::Atom(_) => with,
        Proposition::Top | Proposition::Bottom => panic!("position below a constant proposition"),
    }
}

/// First-order matching: `s` with `pattern.apply(s) == subject`.
pub fn match_term(pattern: &Term, subject: &Term) -> Option<Substitution> {
    let mut m = BTreeMap::new();
    match_into(pattern, subject, &mut m).then(|| m.into_iter().collect())
}

pub fn match_atom(pattern: &Atom, subject: &Atom) -> Option<Substitution> {
    if pattern.pred != subject.pred || pattern.args.len() != subject.args.len() {
        return None;
    }
    let mut m = BTreeMap::new();
    pattern
        .args
        .iter()
        .zip(&subject.args)
        .all(|(p, t)| match_into(p, t, &mut m))
        .then(|| m.into_iter().collect())
}

/// Matching on either kind; an atom pattern only matches an atomic subject.
pub fn match_pattern(pattern: &Expr, subject: &Expr) -> Option<Substitution> {
    match (pattern, subject) {
        (Expr::Term(p), Expr::Term(t)) => match_term(p, t),
        (Expr::Prop(Proposition::Atom(p)), Expr::Prop(Proposition::Atom(a))) => match_atom(p, a),
        _ => None,
    }
}

// Bindings are kept in a plain map: identity bindings matter for non-linear
// patterns and `Substitution` drops them.
fn match_into(pattern: &Term, subject: &Term, m: &mut BTreeMap<Var, Term>) -> bool {
    match (pattern, subject) {
        (Term::Var(v), _) => {
            if let Term::Var(w) = subject {
                if w.sort != v.sort {
                    return false;
                }
            }
            match m.get(v) {
                Some(bound) => bound == subject,
                None => {
                    m.insert(v.clone(), subject.clone());
                    true
                }
            }
        }
        (Term::App(f, ps), Term::App(g, ts)) => {
            f == g && ps.len() == ts.len() && ps.iter().zip(ts).all(|(p, t)| match_into(p, t, m))
        }
        _ => false,
    }
}
