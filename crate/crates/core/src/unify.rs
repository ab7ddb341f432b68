//! Syntactic unification and unification modulo a rewrite system by narrowing.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use thiserror::Error;

use crate::rewrite::{FuelExhausted, RewriteSystem, DEFAULT_FUEL};
use crate::syntax::{Expr, Proposition, Substitutable, Substitution, Term, Var};

/// Robinson unification with occurs check. Only variables accepted by
/// `flexible` may be bound; the others behave like constants.
pub fn unify_terms(pairs: Vec<(Term, Term)>, flexible: impl Fn(&Var) -> bool) -> Option<Substitution> {
    let mut sigma = Substitution::new();
    let mut work = pairs;
    work.reverse();
    while let Some((s, t)) = work.pop() {
        let s = s.apply(&sigma);
        let t = t.apply(&sigma);
        if s == t {
            continue;
        }
        match (&s, &t) {
            (Term::Var(x), _) if flexible(x) => bind(&mut sigma, x, &t)?,
            (_, Term::Var(y)) if flexible(y) => bind(&mut sigma, y, &s)?,
            (Term::App(f, xs), Term::App(g, ys)) => {
                if f != g || xs.len() != ys.len() {
                    return None;
                }
                for (a, b) in xs.iter().zip(ys).rev() {
                    work.push((a.clone(), b.clone()));
                }
            }
            _ => return None,
        }
    }
    Some(sigma)
}

fn bind(sigma: &mut Substitution, x: &Var, t: &Term) -> Option<()> {
    if let Term::Var(y) = t {
        if y.sort != x.sort {
            return None;
        }
    }
    if t.occurs(x) {
        return None;
    }
    let single = Substitution::singleton(x.clone(), t.clone());
    *sigma = sigma.compose(&single);
    Some(())
}

/// Most general unifier of two terms or quantifier-free propositions; every
/// variable may be bound. Quantified propositions are never unified.
pub fn unify_syntactic(a: &Expr, b: &Expr) -> Option<Substitution> {
    let mut pairs = Vec::new();
    match (a, b) {
        (Expr::Term(s), Expr::Term(t)) => pairs.push((s.clone(), t.clone())),
        (Expr::Prop(p), Expr::Prop(q)) => decompose(p, q, &mut pairs).ok()?,
        _ => return None,
    }
    unify_terms(pairs, |_| true)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnifyError {
    #[error("quantified propositions are not unified")]
    Quantified,
    #[error("cannot unify a term with a proposition")]
    KindMismatch,
    #[error("bounds must be positive")]
    ZeroBound,
    #[error(transparent)]
    Fuel(#[from] FuelExhausted),
}

/// Structural decomposition into term equations. `Err(true)` for a quantifier,
/// `Err(false)` for a clash.
fn decompose(p: &Proposition, q: &Proposition, out: &mut Vec<(Term, Term)>) -> Result<(), bool> {
    use Proposition::*;
    match (p, q) {
        (Atom(x), Atom(y)) => {
            if x.pred != y.pred || x.args.len() != y.args.len() {
                return Err(false);
            }
            out.extend(x.args.iter().cloned().zip(y.args.iter().cloned()));
            Ok(())
        }
        (Top, Top) | (Bottom, Bottom) => Ok(()),
        (And(a1, a2), And(b1, b2)) | (Or(a1, a2), Or(b1, b2)) | (Imp(a1, a2), Imp(b1, b2)) => {
            decompose(a1, b1, out)?;
            decompose(a2, b2, out)
        }
        (Forall(..), _) | (Exists(..), _) | (_, Forall(..)) | (_, Exists(..)) => Err(true),
        _ => Err(false),
    }
}

/// Equations to solve modulo a rewrite system.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UnificationProblem {
    pub pairs: Vec<(Expr, Expr)>,
    /// Variables that must not be instantiated (eigenvariables, free goal variables).
    pub rigid: BTreeSet<Var>,
}

impl UnificationProblem {
    pub fn new(a: Expr, b: Expr) -> Self {
        UnificationProblem { pairs: vec![(a, b)], rigid: BTreeSet::new() }
    }

    pub fn with_rigid(mut self, rigid: BTreeSet<Var>) -> Self {
        self.rigid = rigid;
        self
    }

    fn flexible_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for (a, b) in &self.pairs {
            for e in [a, b] {
                match e {
                    Expr::Term(t) => t.collect_vars(&mut out),
                    Expr::Prop(p) => p.collect_free_vars(&mut out),
                }
            }
        }
        out.retain(|v| !self.rigid.contains(v));
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NarrowBounds {
    /// Maximum number of narrowing steps on a derivation.
    pub depth: usize,
    /// Stop after this many solutions.
    pub cap: usize,
}

impl Default for NarrowBounds {
    fn default() -> Self {
        NarrowBounds { depth: 8, cap: 16 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exhaustiveness {
    /// Every narrowing derivation was followed to the end.
    SearchSpaceExhausted,
    /// Some derivations were cut at the depth bound.
    DepthBoundReached,
    /// The solution cap was reached first.
    SolutionCapReached,
}

/// Solutions found within bounds, in breadth-first order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionStream {
    pub solutions: Vec<Substitution>,
    pub exhaustiveness: Exhaustiveness,
    /// Candidates dropped because the congruence check rejected them; only
    /// possible on non-confluent systems.
    pub rejected: usize,
    /// Search states expanded.
    pub states: usize,
}

impl SolutionStream {
    pub fn is_complete(&self) -> bool {
        self.exhaustiveness == Exhaustiveness::SearchSpaceExhausted
    }
}

#[derive(Clone)]
struct State {
    eqs: Vec<(Term, Term)>,
    sigma: Substitution,
}

struct Narrower<'a> {
    sys: &'a RewriteSystem,
    rigid: &'a BTreeSet<Var>,
    fresh: usize,
}

impl Narrower<'_> {
    fn flexible(&self) -> impl Fn(&Var) -> bool + '_ {
        move |v: &Var| !self.rigid.contains(v)
    }

    fn normalize_eqs(&self, eqs: Vec<(Term, Term)>) -> Result<Option<Vec<(Term, Term)>>, FuelExhausted> {
        let mut out = Vec::with_capacity(eqs.len());
        for (s, t) in eqs {
            let s = self.sys.normalize_term(&s, DEFAULT_FUEL)?.value;
            let t = self.sys.normalize_term(&t, DEFAULT_FUEL)?.value;
            if s == t {
                continue;
            }
            let no_flex = |x: &Term| x.vars().iter().all(|v| self.rigid.contains(v));
            if no_flex(&s) && no_flex(&t) {
                // distinct normal forms with nothing left to instantiate
                return Ok(None);
            }
            out.push((s, t));
        }
        Ok(Some(out))
    }

    fn expand(&mut self, state: &State) -> Result<Vec<State>, FuelExhausted> {
        let mut out = Vec::new();
        for (e, (l, r)) in state.eqs.iter().enumerate() {
            for (side, term) in [(0usize, l), (1, r)] {
                for p in term.positions() {
                    let sub = term.at(&p).expect("own position");
                    for rule in self.sys.rules() {
                        let crate::rewrite::RuleBody::Term { .. } = rule.body() else { continue };
                        if sub.head() != Some(rule.head()) {
                            continue;
                        }
                        self.fresh += 1;
                        let renamed = rule.renamed(&format!("#{}", self.fresh));
                        let crate::rewrite::RuleBody::Term { lhs, rhs } = renamed.body() else { unreachable!() };
                        let Some(mu) = unify_terms(vec![(sub.clone(), lhs.clone())], self.flexible()) else { continue };
                        let mut eqs = state.eqs.clone();
                        let replaced = term.replace_at(&p, rhs.clone());
                        if side == 0 {
                            eqs[e].0 = replaced;
                        } else {
                            eqs[e].1 = replaced;
                        }
                        let eqs: Vec<(Term, Term)> = eqs.into_iter().map(|(a, b)| (a.apply(&mu), b.apply(&mu))).collect();
                        if let Some(eqs) = self.normalize_eqs(eqs)? {
                            out.push(State { eqs, sigma: state.sigma.compose(&mu) });
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Restricts to `keep`, renames variables introduced by narrowing to `_1`,
/// `_2`, … in order of first appearance, and normalizes the bound terms.
fn canonical_solution(
    sys: &RewriteSystem,
    sigma: &Substitution,
    keep: &BTreeSet<Var>,
    rigid: &BTreeSet<Var>,
) -> Result<Substitution, FuelExhausted> {
    let restricted = sigma.restrict(keep);
    let mut names: BTreeMap<Var, Var> = BTreeMap::new();
    let mut next = 0;
    let mut out = Substitution::new();
    for (v, t) in restricted.iter() {
        let t = sys.normalize_term(t, DEFAULT_FUEL)?.value;
        let mut order = Vec::new();
        collect_in_order(&t, &mut order);
        for w in order {
            if !keep.contains(&w) && !rigid.contains(&w) && !names.contains_key(&w) {
                next += 1;
                names.insert(w.clone(), Var { name: format!("_{next}"), sort: w.sort.clone() });
            }
        }
        let ren: Substitution = names.iter().map(|(a, b)| (a.clone(), Term::Var(b.clone()))).collect();
        out.insert(v.clone(), t.apply(&ren));
    }
    Ok(out)
}

fn collect_in_order(t: &Term, out: &mut Vec<Var>) {
    match t {
        Term::Var(v) => {
            if !out.contains(v) {
                out.push(v.clone())
            }
        }
        Term::App(_, args) => args.iter().for_each(|a| collect_in_order(a, out)),
    }
}

fn state_key(state: &State, keep: &BTreeSet<Var>, rigid: &BTreeSet<Var>) -> String {
    // variables introduced by narrowing are renamed by first appearance
    let mut order = Vec::new();
    for (a, b) in &state.eqs {
        collect_in_order(a, &mut order);
        collect_in_order(b, &mut order);
    }
    let restricted = state.sigma.restrict(keep);
    for (_, t) in restricted.iter() {
        collect_in_order(t, &mut order);
    }
    let ren: Substitution = order
        .into_iter()
        .filter(|v| !keep.contains(v) && !rigid.contains(v))
        .enumerate()
        .map(|(i, v)| {
            let w = Var { name: format!("_{i}"), sort: v.sort.clone() };
            (v, Term::Var(w))
        })
        .collect();
    let mut key = String::new();
    for (a, b) in &state.eqs {
        key.push_str(&format!("{}={};", a.apply(&ren), b.apply(&ren)));
    }
    for (v, t) in restricted.iter() {
        key.push_str(&format!("{}:{}->{};", v.name, v.sort, t.apply(&ren)));
    }
    key
}

/// Solves the problem modulo `sys` by normalizing narrowing, breadth first.
/// Every emitted substitution makes each pair congruent; duplicates modulo
/// renaming of introduced variables are dropped.
pub fn narrow_unify(
    sys: &RewriteSystem,
    problem: &UnificationProblem,
    bounds: NarrowBounds,
) -> Result<SolutionStream, UnifyError> {
    if bounds.depth == 0 || bounds.cap == 0 {
        return Err(UnifyError::ZeroBound);
    }
    let mut eqs = Vec::new();
    for (a, b) in &problem.pairs {
        match (a, b) {
            (Expr::Term(s), Expr::Term(t)) => eqs.push((s.clone(), t.clone())),
            (Expr::Prop(p), Expr::Prop(q)) => {
                let p = sys.head_normalize(p, DEFAULT_FUEL)?.value;
                let q = sys.head_normalize(q, DEFAULT_FUEL)?.value;
                match decompose(&p, &q, &mut eqs) {
                    Ok(()) => {}
                    Err(true) => return Err(UnifyError::Quantified),
                    Err(false) => {
                        return Ok(SolutionStream {
                            solutions: vec![],
                            exhaustiveness: Exhaustiveness::SearchSpaceExhausted,
                            rejected: 0,
                            states: 0,
                        })
                    }
                }
            }
            _ => return Err(UnifyError::KindMismatch),
        }
    }
    let keep = problem.flexible_vars();
    let mut narrower = Narrower { sys, rigid: &problem.rigid, fresh: 0 };
    let mut stream = SolutionStream {
        solutions: vec![],
        exhaustiveness: Exhaustiveness::SearchSpaceExhausted,
        rejected: 0,
        states: 0,
    };
    let mut seen_solutions: HashSet<Substitution> = HashSet::new();
    let mut seen_states: HashSet<String> = HashSet::new();
    let mut level: Vec<State> = match narrower.normalize_eqs(eqs)? {
        Some(eqs) => vec![State { eqs, sigma: Substitution::new() }],
        None => vec![],
    };
    let mut depth = 0;
    while !level.is_empty() {
        let mut next = Vec::new();
        for state in &level {
            stream.states += 1;
            if let Some(mu) = unify_terms(state.eqs.clone(), narrower.flexible()) {
                let sol = canonical_solution(sys, &state.sigma.compose(&mu), &keep, &problem.rigid)?;
                if seen_solutions.insert(sol.clone()) {
                    if verify(sys, problem, &sol)? {
                        stream.solutions.push(sol);
                        if stream.solutions.len() >= bounds.cap {
                            stream.exhaustiveness = Exhaustiveness::SolutionCapReached;
                            return Ok(stream);
                        }
                    } else {
                        stream.rejected += 1;
                    }
                }
            }
            if depth == bounds.depth {
                continue;
            }
            for child in narrower.expand(state)? {
                if seen_states.insert(state_key(&child, &keep, &problem.rigid)) {
                    next.push(child);
                }
            }
        }
        if depth == bounds.depth {
            if level.iter().any(|s| !s.eqs.is_empty()) {
                stream.exhaustiveness = Exhaustiveness::DepthBoundReached;
            }
            break;
        }
        level = next;
        depth += 1;
    }
    Ok(stream)
}

fn verify(sys: &RewriteSystem, problem: &UnificationProblem, s: &Substitution) -> Result<bool, FuelExhausted> {
    for (a, b) in &problem.pairs {
        let ok = match (a, b) {
            (Expr::Term(x), Expr::Term(y)) => sys.congruent_terms(&x.apply(s), &y.apply(s), DEFAULT_FUEL)?,
            (Expr::Prop(p), Expr::Prop(q)) => sys.congruent_props(&p.apply(s), &q.apply(s), DEFAULT_FUEL)?,
            _ => false,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}
