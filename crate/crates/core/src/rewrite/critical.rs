use std::fmt;

use super::{RewriteSystem, RuleBody};
use crate::syntax::{alpha_eq, Atom, Expr, Position, Proposition, Substitutable, Term};
use crate::unify::unify_terms;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Joinability {
    Joinable,
    NotJoinable,
    /// Normalizing one of the reducts ran out of fuel.
    UnknownAtFuel,
}

/// Two one-step reducts of an overlapped left-hand-side instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalPair {
    /// Rule whose left-hand side is the peak.
    pub outer: String,
    /// Rule applied at `position` inside the outer left-hand side.
    pub inner: String,
    pub position: Position,
    pub peak: Expr,
    /// Reduct by the inner rule.
    pub left: Expr,
    /// Reduct by the outer rule at the root.
    pub right: Expr,
    pub joinable: Joinability,
}

impl fmt::Display for CriticalPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} / {} at {:?}: {} <- {} -> {} [{:?}]",
            self.inner, self.outer, self.position, self.left, self.peak, self.right, self.joinable
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LocalConfluenceReport {
    pub joinable: Vec<CriticalPair>,
    pub failures: Vec<CriticalPair>,
    pub unknown: Vec<CriticalPair>,
}

impl LocalConfluenceReport {
    pub fn is_locally_confluent(&self) -> bool {
        self.failures.is_empty() && self.unknown.is_empty()
    }

    pub fn total(&self) -> usize {
        self.joinable.len() + self.failures.len() + self.unknown.len()
    }
}

pub(super) fn local_confluence(sys: &RewriteSystem, fuel: usize) -> LocalConfluenceReport {
    let mut report = LocalConfluenceReport::default();
    for cp in critical_pairs(sys, fuel) {
        match cp.joinable {
            Joinability::Joinable => report.joinable.push(cp),
            Joinability::NotJoinable => report.failures.push(cp),
            Joinability::UnknownAtFuel => report.unknown.push(cp),
        }
    }
    report
}

fn join(sys: &RewriteSystem, a: &Expr, b: &Expr, fuel: usize) -> Joinability {
    match (sys.normalize(a, fuel), sys.normalize(b, fuel)) {
        (Ok(x), Ok(y)) => {
            let same = match (&x.value, &y.value) {
                (Expr::Term(s), Expr::Term(t)) => s == t,
                (Expr::Prop(p), Expr::Prop(q)) => alpha_eq(p, q),
                _ => false,
            };
            if same {
                Joinability::Joinable
            } else {
                Joinability::NotJoinable
            }
        }
        _ => Joinability::UnknownAtFuel,
    }
}

/// All overlaps between renamed-apart rules at non-variable positions, with the
/// root overlap of a rule with itself excluded. Term positions inside the
/// arguments of a proposition rule's atom count; two proposition rules
/// overlap only at the atom root.
pub(super) fn critical_pairs(sys: &RewriteSystem, fuel: usize) -> Vec<CriticalPair> {
    let flexible = |_: &crate::syntax::Var| true;
    let mut out = Vec::new();
    let rules = sys.rules();
    for (i, outer) in rules.iter().enumerate() {
        for (j, inner) in rules.iter().enumerate() {
            let inner = inner.renamed("#1");
            match (&outer.body, &inner.body) {
                (RuleBody::Term { lhs: l2, rhs: r2 }, RuleBody::Term { lhs: l1, rhs: r1 }) => {
                    for p in l2.positions() {
                        if p.is_empty() && i == j {
                            continue;
                        }
                        let sub = l2.at(&p).expect("position of lhs");
                        let Some(s) = unify_terms(vec![(sub.clone(), l1.clone())], flexible) else { continue };
                        let peak = l2.apply(&s);
                        let left = l2.replace_at(&p, r1.clone()).apply(&s);
                        let right = r2.apply(&s);
                        out.push(pair(sys, outer.name(), inner.name(), p, Expr::Term(peak), Expr::Term(left), Expr::Term(right), fuel));
                    }
                }
                (RuleBody::Prop { lhs: a2, rhs: r2 }, RuleBody::Term { lhs: l1, rhs: r1 }) => {
                    for (k, arg) in a2.args.iter().enumerate() {
                        for p in arg.positions() {
                            let sub = arg.at(&p).expect("position of argument");
                            let Some(s) = unify_terms(vec![(sub.clone(), l1.clone())], flexible) else { continue };
                            let peak = Proposition::Atom(a2.apply(&s));
                            let mut args = a2.args.clone();
                            args[k] = arg.replace_at(&p, r1.clone());
                            let left = Proposition::Atom(Atom { pred: a2.pred.clone(), args }.apply(&s));
                            let right = r2.apply(&s);
                            let mut position = vec![k];
                            position.extend(p);
                            out.push(pair(sys, outer.name(), inner.name(), position, Expr::Prop(peak), Expr::Prop(left), Expr::Prop(right), fuel));
                        }
                    }
                }
                (RuleBody::Prop { lhs: a2, rhs: r2 }, RuleBody::Prop { lhs: a1, rhs: r1 }) => {
                    if i >= j || a1.pred != a2.pred || a1.args.len() != a2.args.len() {
                        continue;
                    }
                    let eqs: Vec<(Term, Term)> = a2.args.iter().cloned().zip(a1.args.iter().cloned()).collect();
                    let Some(s) = unify_terms(eqs, flexible) else { continue };
                    let peak = Proposition::Atom(a2.apply(&s));
                    out.push(pair(sys, outer.name(), inner.name(), vec![], Expr::Prop(peak), Expr::Prop(r1.apply(&s)), Expr::Prop(r2.apply(&s)), fuel));
                }
                (RuleBody::Term { .. }, RuleBody::Prop { .. }) => {}
            }
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn pair(
    sys: &RewriteSystem,
    outer: &str,
    inner: &str,
    position: Position,
    peak: Expr,
    left: Expr,
    right: Expr,
    fuel: usize,
) -> CriticalPair {
    let joinable = join(sys, &left, &right, fuel);
    CriticalPair { outer: outer.into(), inner: inner.into(), position, peak, left, right, joinable }
}
