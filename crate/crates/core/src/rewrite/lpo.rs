//! Recursive path order with status, used as a sufficient termination check.
//!
//! Propositions are compared as trees whose inner nodes are connectives,
//! predicates and function symbols. Connectives sit below every declared
//! symbol in the precedence; bound variables become constants below
//! everything else.

use std::collections::{BTreeMap, BTreeSet};

use super::{RewriteSystem, RuleBody};
use crate::syntax::{Proposition, Term, Var};

/// How the arguments of a symbol are compared when both sides share it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    /// Lexicographic, left to right (plain LPO).
    LexLeft,
    /// Lexicographic, right to left.
    LexRight,
    Multiset,
}

/// Precedence plus the status found for each symbol that needed one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TerminationOrder {
    pub precedence: Vec<String>,
    pub status: BTreeMap<String, Status>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Sym {
    Named(String),
    Conn(&'static str),
    Bound(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Tree {
    Var(Var),
    Node(Sym, Vec<Tree>),
}

const CONNECTIVES: [&str; 7] = ["imp", "and", "or", "forall", "exists", "top", "bot"];

struct Order<'a> {
    rank: BTreeMap<&'a str, usize>,
    status: &'a BTreeMap<String, Status>,
}

impl Order<'_> {
    /// Higher is greater. `None` means the symbol is outside the precedence.
    fn rank(&self, s: &Sym) -> Option<(usize, usize)> {
        match s {
            Sym::Named(n) => self.rank.get(n.as_str()).map(|r| (2, *r)),
            Sym::Conn(c) => {
                let i = CONNECTIVES.iter().position(|k| k == c).expect("known connective");
                Some((1, CONNECTIVES.len() - i))
            }
            Sym::Bound(_) => Some((0, 0)),
        }
    }

    fn prec_gt(&self, f: &Sym, g: &Sym) -> bool {
        if let (Sym::Bound(_), Sym::Bound(_)) = (f, g) {
            return false;
        }
        match (self.rank(f), self.rank(g)) {
            (Some(a), Some(b)) => a > b,
            _ => false,
        }
    }

    fn status(&self, f: &Sym) -> Status {
        match f {
            Sym::Named(n) => self.status.get(n).copied().unwrap_or(Status::LexLeft),
            _ => Status::LexLeft,
        }
    }

    fn gt(&self, s: &Tree, t: &Tree) -> bool {
        match (s, t) {
            (Tree::Var(_), _) => false,
            (Tree::Node(..), Tree::Var(x)) => occurs(x, s),
            (Tree::Node(f, ss), Tree::Node(g, ts)) => {
                if ss.iter().any(|si| si == t || self.gt(si, t)) {
                    return true;
                }
                if self.prec_gt(f, g) {
                    return ts.iter().all(|tj| self.gt(s, tj));
                }
                if f == g {
                    return match self.status(f) {
                        Status::LexLeft => self.lex_gt(ss.iter(), ts.iter()) && ts.iter().all(|tj| self.gt(s, tj)),
                        Status::LexRight => {
                            self.lex_gt(ss.iter().rev(), ts.iter().rev()) && ts.iter().all(|tj| self.gt(s, tj))
                        }
                        Status::Multiset => self.mul_gt(ss, ts),
                    };
                }
                false
            }
        }
    }

    fn lex_gt<'t>(&self, mut ss: impl Iterator<Item = &'t Tree>, mut ts: impl Iterator<Item = &'t Tree>) -> bool {
        loop {
            match (ss.next(), ts.next()) {
                (Some(a), Some(b)) if a == b => continue,
                (Some(a), Some(b)) => return self.gt(a, b),
                (Some(_), None) => return true,
                _ => return false,
            }
        }
    }

    fn mul_gt(&self, ss: &[Tree], ts: &[Tree]) -> bool {
        let mut left: Vec<&Tree> = ss.iter().collect();
        let mut right: Vec<&Tree> = Vec::new();
        for t in ts {
            if let Some(i) = left.iter().position(|s| *s == t) {
                left.remove(i);
            } else {
                right.push(t);
            }
        }
        if left.is_empty() {
            return false;
        }
        right.iter().all(|t| left.iter().any(|s| self.gt(s, t)))
    }
}

fn occurs(x: &Var, t: &Tree) -> bool {
    match t {
        Tree::Var(y) => x == y,
        Tree::Node(_, args) => args.iter().any(|a| occurs(x, a)),
    }
}

fn term_tree(t: &Term, bound: &[(Var, usize)]) -> Tree {
    match t {
        Term::Var(v) => match bound.iter().rev().find(|(b, _)| b == v) {
            Some((_, id)) => Tree::Node(Sym::Bound(*id), vec![]),
            None => Tree::Var(v.clone()),
        },
        Term::App(f, args) => Tree::Node(Sym::Named(f.clone()), args.iter().map(|a| term_tree(a, bound)).collect()),
    }
}

fn prop_tree(p: &Proposition, bound: &mut Vec<(Var, usize)>, next: &mut usize) -> Tree {
    let conn = |c: &'static str, kids: Vec<Tree>| Tree::Node(Sym::Conn(c), kids);
    match p {
        Proposition::Atom(a) => Tree::Node(Sym::Named(a.pred.clone()), a.args.iter().map(|t| term_tree(t, bound)).collect()),
        Proposition::Top => conn("top", vec![]),
        Proposition::Bottom => conn("bot", vec![]),
        Proposition::And(a, b) => conn("and", vec![prop_tree(a, bound, next), prop_tree(b, bound, next)]),
        Proposition::Or(a, b) => conn("or", vec![prop_tree(a, bound, next), prop_tree(b, bound, next)]),
        Proposition::Imp(a, b) => conn("imp", vec![prop_tree(a, bound, next), prop_tree(b, bound, next)]),
        Proposition::Forall(v, b) | Proposition::Exists(v, b) => {
            let c = if matches!(p, Proposition::Forall(..)) { "forall" } else { "exists" };
            *next += 1;
            bound.push((v.clone(), *next));
            let body = prop_tree(b, bound, next);
            bound.pop();
            conn(c, vec![body])
        }
    }
}

fn rule_trees(sys: &RewriteSystem) -> Vec<(Tree, Tree)> {
    sys.rules()
        .iter()
        .map(|r| match r.body() {
            RuleBody::Term { lhs, rhs } => (term_tree(lhs, &[]), term_tree(rhs, &[])),
            RuleBody::Prop { lhs, rhs } => {
                let l = Tree::Node(Sym::Named(lhs.pred.clone()), lhs.args.iter().map(|t| term_tree(t, &[])).collect());
                (l, prop_tree(rhs, &mut Vec::new(), &mut 0))
            }
        })
        .collect()
}

fn multi_arg_symbols(t: &Tree, out: &mut BTreeSet<String>) {
    if let Tree::Node(f, args) = t {
        if let Sym::Named(n) = f {
            if args.len() >= 2 {
                out.insert(n.clone());
            }
        }
        args.iter().for_each(|a| multi_arg_symbols(a, out));
    }
}

/// Searches statuses for the symbols of arity ≥ 2. Exhaustive up to six such
/// symbols, uniform assignments beyond that.
pub(super) fn find_order(sys: &RewriteSystem, precedence: &[String]) -> Option<TerminationOrder> {
    let rules = rule_trees(sys);
    let rank: BTreeMap<&str, usize> =
        precedence.iter().enumerate().map(|(i, s)| (s.as_str(), precedence.len() - i)).collect();
    let mut symbols = BTreeSet::new();
    for (l, r) in &rules {
        multi_arg_symbols(l, &mut symbols);
        multi_arg_symbols(r, &mut symbols);
    }
    let symbols: Vec<String> = symbols.into_iter().collect();
    const ALL: [Status; 3] = [Status::LexLeft, Status::LexRight, Status::Multiset];

    let mut candidates: Vec<BTreeMap<String, Status>> = Vec::new();
    if symbols.len() <= 6 {
        let total = 3usize.pow(symbols.len() as u32);
        for mut code in 0..total {
            let mut m = BTreeMap::new();
            for s in &symbols {
                m.insert(s.clone(), ALL[code % 3]);
                code /= 3;
            }
            candidates.push(m);
        }
    } else {
        for st in ALL {
            candidates.push(symbols.iter().map(|s| (s.clone(), st)).collect());
        }
    }

    candidates.into_iter().find_map(|status| {
        let order = Order { rank: rank.clone(), status: &status };
        rules
            .iter()
            .all(|(l, r)| order.gt(l, r))
            .then(|| TerminationOrder { precedence: precedence.to_vec(), status: status.clone() })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::RewriteRule;
    use crate::syntax::{Atom, Term};

    fn v(n: &str) -> Term {
        Term::var(n, "i")
    }
    fn plus(a: Term, b: Term) -> Term {
        Term::app("+", vec![a, b])
    }
    fn prec(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn orients_associativity() {
        let r = RewriteRule::term("assoc", plus(v("x"), plus(v("y"), v("z"))), plus(plus(v("x"), v("y")), v("z"))).unwrap();
        let mut sys = RewriteSystem::from_rules([r]).unwrap();
        assert!(sys.check_termination_lpo(&prec(&["+"])));
        let order = sys.termination_order(&prec(&["+"])).unwrap();
        assert_eq!(order.status["+"], Status::LexRight);
    }

    #[test]
    fn rejects_commutativity() {
        let r = RewriteRule::term("comm", plus(v("x"), v("y")), plus(v("y"), v("x"))).unwrap();
        let mut sys = RewriteSystem::from_rules([r]).unwrap();
        assert!(!sys.check_termination_lpo(&prec(&["+"])));
    }

    #[test]
    fn projection_rule_terminates() {
        let r = RewriteRule::term("add0", plus(Term::constant("0"), v("y")), v("y")).unwrap();
        let mut sys = RewriteSystem::from_rules([r]).unwrap();
        assert!(sys.check_termination_lpo(&prec(&["+", "0"])));
    }

    #[test]
    fn self_referential_proposition_rule_does_not_terminate() {
        let p = Proposition::atom("P", vec![]);
        let r = RewriteRule::prop("crabbe", Atom::new("P", vec![]), Proposition::imp(p, Proposition::atom("Q", vec![]))).unwrap();
        let mut sys = RewriteSystem::from_rules([r]).unwrap();
        assert!(!sys.check_termination_lpo(&prec(&["Q", "P"])));
    }

    #[test]
    fn unfolding_into_a_quantifier_terminates() {
        let zero = Term::App("0".into(), vec![]);
        let body = Proposition::atom("P", vec![Term::var("x", "nat")]);
        let r = RewriteRule::prop("p0", Atom::new("P", vec![zero]), Proposition::forall(Var::new("x", "nat"), body)).unwrap();
        let mut sys = RewriteSystem::from_rules([r]).unwrap();
        assert!(sys.check_termination_lpo(&prec(&["P", "0"])));
    }
}
