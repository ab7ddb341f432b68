//! Many-sorted first-order syntax: signatures, terms, propositions and
//! capture-avoiding substitution.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

/// A sort identifier.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sort(pub String);

impl Sort {
    pub fn new(name: impl Into<String>) -> Self {
        Sort(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A sorted variable. Two variables are the same iff name and sort agree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub name: String,
    pub sort: Sort,
}

impl Var {
    pub fn new(name: impl Into<String>, sort: impl Into<String>) -> Self {
        Var { name: name.into(), sort: Sort(sort.into()) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Var),
    App(String, Vec<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Proposition {
    Atom(Atom),
    Top,
    Bottom,
    And(Box<Proposition>, Box<Proposition>),
    Or(Box<Proposition>, Box<Proposition>),
    Imp(Box<Proposition>, Box<Proposition>),
    Forall(Var, Box<Proposition>),
    Exists(Var, Box<Proposition>),
}

/// Either a term or a proposition; the operations of the rewrite engine and
/// the command line accept both.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr {
    Term(Term),
    Prop(Proposition),
}

/// A path from the root: child indices. Atom arguments and term arguments are
/// numbered from zero, binary connectives use 0/1, quantifier bodies use 0.
pub type Position = Vec<usize>;

impl Term {
    pub fn var(name: &str, sort: &str) -> Term {
        Term::Var(Var::new(name, sort))
    }

    pub fn constant(name: &str) -> Term {
        Term::App(name.to_string(), Vec::new())
    }

    pub fn app(head: &str, args: Vec<Term>) -> Term {
        Term::App(head.to_string(), args)
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn head(&self) -> Option<&str> {
        match self {
            Term::Var(_) => None,
            Term::App(f, _) => Some(f),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn occurs(&self, v: &Var) -> bool {
        match self {
            Term::Var(w) => w == v,
            Term::App(_, args) => args.iter().any(|a| a.occurs(v)),
        }
    }

    pub fn at(&self, pos: &[usize]) -> Option<&Term> {
        match pos.split_first() {
            None => Some(self),
            Some((&i, rest)) => match self {
                Term::App(_, args) => args.get(i)?.at(rest),
                Term::Var(_) => None,
            },
        }
    }

    /// Returns a copy with the subterm at `pos` replaced. Panics on an invalid position.
    pub fn replace_at(&self, pos: &[usize], with: Term) -> Term {
        match pos.split_first() {
            None => with,
            Some((&i, rest)) => match self {
                Term::App(f, args) => {
                    let mut args = args.clone();
                    args[i] = args[i].replace_at(rest, with);
                    Term::App(f.clone(), args)
                }
                Term::Var(_) => panic!("position below a variable"),
            },
        }
    }

    /// Non-variable positions in pre-order (parent before children, left to right).
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        fn go(t: &Term, prefix: &mut Position, out: &mut Vec<Position>) {
            if let Term::App(_, args) = t {
                out.push(prefix.clone());
                for (i, a) in args.iter().enumerate() {
                    prefix.push(i);
                    go(a, prefix, out);
                    prefix.pop();
                }
            }
        }
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Collects every function symbol occurring in the term.
    pub fn symbols(&self, out: &mut BTreeSet<String>) {
        if let Term::App(f, args) = self {
            out.insert(f.clone());
            args.iter().for_each(|a| a.symbols(out));
        }
    }

    pub fn sort(&self, sig: &Signature) -> Option<Sort> {
        match self {
            Term::Var(v) => Some(v.sort.clone()),
            Term::App(f, _) => sig.functions.get(f).map(|d| d.result.clone()),
        }
    }
}

impl Atom {
    pub fn new(pred: &str, args: Vec<Term>) -> Atom {
        Atom { pred: pred.to_string(), args }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        self.args.iter().for_each(|a| a.collect_vars(out));
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn apply(&self, s: &Substitution) -> Atom {
        Atom { pred: self.pred.clone(), args: self.args.iter().map(|a| a.apply(s)).collect() }
    }
}

impl Proposition {
    pub fn atom(pred: &str, args: Vec<Term>) -> Proposition {
        Proposition::Atom(Atom::new(pred, args))
    }

    pub fn and(a: Proposition, b: Proposition) -> Proposition {
        Proposition::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Proposition, b: Proposition) -> Proposition {
        Proposition::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Proposition, b: Proposition) -> Proposition {
        Proposition::Imp(Box::new(a), Box::new(b))
    }

    /// `¬A` is notation for `A ⇒ ⊥`.
    pub fn not(a: Proposition) -> Proposition {
        Proposition::imp(a, Proposition::Bottom)
    }

    /// `A ⇔ B` is notation for `(A ⇒ B) ∧ (B ⇒ A)`.
    pub fn iff(a: Proposition, b: Proposition) -> Proposition {
        Proposition::and(Proposition::imp(a.clone(), b.clone()), Proposition::imp(b, a))
    }

    pub fn forall(v: Var, body: Proposition) -> Proposition {
        Proposition::Forall(v, Box::new(body))
    }

    pub fn exists(v: Var, body: Proposition) -> Proposition {
        Proposition::Exists(v, Box::new(body))
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Proposition::Atom(_))
    }

    pub fn children(&self) -> Vec<&Proposition> {
        match self {
            Proposition::Atom(_) | Proposition::Top | Proposition::Bottom => vec![],
            Proposition::And(a, b) | Proposition::Or(a, b) | Proposition::Imp(a, b) => vec![a, b],
            Proposition::Forall(_, b) | Proposition::Exists(_, b) => vec![b],
        }
    }

    pub fn collect_free_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Proposition::Atom(a) => a.collect_vars(out),
            Proposition::Top | Proposition::Bottom => {}
            Proposition::And(a, b) | Proposition::Or(a, b) | Proposition::Imp(a, b) => {
                a.collect_free_vars(out);
                b.collect_free_vars(out);
            }
            Proposition::Forall(v, body) | Proposition::Exists(v, body) => {
                let mut inner = BTreeSet::new();
                body.collect_free_vars(&mut inner);
                inner.remove(v);
                out.extend(inner);
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(&mut out);
        out
    }

    /// All variable names occurring anywhere, bound or free.
    pub fn all_var_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Proposition::Atom(a) => {
                for v in a.vars() {
                    out.insert(v.name);
                }
            }
            Proposition::Top | Proposition::Bottom => {}
            Proposition::And(a, b) | Proposition::Or(a, b) | Proposition::Imp(a, b) => {
                a.all_var_names(out);
                b.all_var_names(out);
            }
            Proposition::Forall(v, body) | Proposition::Exists(v, body) => {
                out.insert(v.name.clone());
                body.all_var_names(out);
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn size(&self) -> usize {
        match self {
            Proposition::Atom(a) => 1 + a.args.iter().map(Term::size).sum::<usize>(),
            Proposition::Top | Proposition::Bottom => 1,
            Proposition::And(a, b) | Proposition::Or(a, b) | Proposition::Imp(a, b) => {
                1 + a.size() + b.size()
            }
            Proposition::Forall(_, b) | Proposition::Exists(_, b) => 1 + b.size(),
        }
    }

    /// Predicate symbols and function symbols occurring in the proposition.
    pub fn symbols(&self, preds: &mut BTreeSet<String>, funcs: &mut BTreeSet<String>) {
        match self {
            Proposition::Atom(a) => {
                preds.insert(a.pred.clone());
                a.args.iter().for_each(|t| t.symbols(funcs));
            }
            Proposition::Top | Proposition::Bottom => {}
            Proposition::And(a, b) | Proposition::Or(a, b) | Proposition::Imp(a, b) => {
                a.symbols(preds, funcs);
                b.symbols(preds, funcs);
            }
            Proposition::Forall(_, b) | Proposition::Exists(_, b) => b.symbols(preds, funcs),
        }
    }

    /// Instantiates the body of a quantifier: `body[bound := t]`.
    pub fn instantiate(bound: &Var, body: &Proposition, t: &Term) -> Proposition {
        let mut s = Substitution::new();
        s.insert(bound.clone(), t.clone());
        body.apply(&s)
    }
}

/// Generates a name based on `base` that is not in `avoid`, by appending primes.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let mut name = format!("{base}'");
    while avoid.contains(&name) {
        name.push('\'');
    }
    name
}

/// A finite, sort-preserving map from variables to terms.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution {
    map: BTreeMap<Var, Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("sort mismatch: variable {var} has sort {expected} but the replacement has sort {found}")]
    SortMismatch { var: String, expected: Sort, found: String },
}

impl Substitution {
    pub fn new() -> Self {
        Substitution::default()
    }

    pub fn singleton(v: Var, t: Term) -> Self {
        let mut s = Substitution::new();
        s.insert(v, t);
        s
    }

    /// Inserts a binding without sort checking; identity bindings are dropped.
    pub fn insert(&mut self, v: Var, t: Term) {
        if t == Term::Var(v.clone()) {
            self.map.remove(&v);
        } else {
            self.map.insert(v, t);
        }
    }

    /// Inserts a binding after checking the replacement has the variable's sort.
    pub fn insert_checked(&mut self, sig: &Signature, v: Var, t: Term) -> Result<(), SubstError> {
        match t.sort(sig) {
            Some(s) if s == v.sort => {
                self.insert(v, t);
                Ok(())
            }
            other => Err(SubstError::SortMismatch {
                var: v.name.clone(),
                expected: v.sort.clone(),
                found: other.map(|s| s.0).unwrap_or_else(|| "<unknown>".into()),
            }),
        }
    }

    pub fn get(&self, v: &Var) -> Option<&Term> {
        self.map.get(v)
    }

    pub fn contains(&self, v: &Var) -> bool {
        self.map.contains_key(v)
    }

    pub fn remove(&mut self, v: &Var) -> Option<Term> {
        self.map.remove(v)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.map.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Var> {
        self.map.keys()
    }

    /// Free variables of the range.
    pub fn range_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for t in self.map.values() {
            t.collect_vars(&mut out);
        }
        out
    }

    /// Checks every binding is sort-preserving under `sig`.
    pub fn check(&self, sig: &Signature) -> Result<(), SubstError> {
        for (v, t) in &self.map {
            let mut probe = Substitution::new();
            probe.insert_checked(sig, v.clone(), t.clone())?;
        }
        Ok(())
    }

    /// The substitution that applies `self` first and then `then`.
    pub fn compose(&self, then: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (v, t) in &self.map {
            out.insert(v.clone(), t.apply(then));
        }
        for (v, t) in &then.map {
            if !self.map.contains_key(v) {
                out.insert(v.clone(), t.clone());
            }
        }
        out
    }

    /// Keeps only the bindings for the given variables.
    pub fn restrict(&self, vars: &BTreeSet<Var>) -> Substitution {
        Substitution {
            map: self.map.iter().filter(|(v, _)| vars.contains(*v)).map(|(v, t)| (v.clone(), t.clone())).collect(),
        }
    }
}

impl FromIterator<(Var, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Var, Term)>>(iter: I) -> Self {
        let mut s = Substitution::new();
        for (v, t) in iter {
            s.insert(v, t);
        }
        s
    }
}

/// Things a substitution can be applied to.
pub trait Substitutable: Sized {
    fn apply(&self, s: &Substitution) -> Self;

    /// Applies `s` after checking it is sort-preserving.
    fn apply_checked(&self, sig: &Signature, s: &Substitution) -> Result<Self, SubstError> {
        s.check(sig)?;
        Ok(self.apply(s))
    }
}

impl Substitutable for Term {
    fn apply(&self, s: &Substitution) -> Term {
        if s.is_empty() {
            return self.clone();
        }
        match self {
            Term::Var(v) => s.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.apply(s)).collect()),
        }
    }
}

impl Substitutable for Atom {
    fn apply(&self, s: &Substitution) -> Atom {
        Atom::apply(self, s)
    }
}

impl Substitutable for Proposition {
    /// Simultaneous capture-avoiding substitution. A bound variable is renamed
    /// (by appending primes) only when it would capture a variable of an
    /// inserted term.
    fn apply(&self, s: &Substitution) -> Proposition {
        if s.is_empty() {
            return self.clone();
        }
        match self {
            Proposition::Atom(a) => Proposition::Atom(a.apply(s)),
            Proposition::Top | Proposition::Bottom => self.clone(),
            Proposition::And(a, b) => Proposition::and(a.apply(s), b.apply(s)),
            Proposition::Or(a, b) => Proposition::or(a.apply(s), b.apply(s)),
            Proposition::Imp(a, b) => Proposition::imp(a.apply(s), b.apply(s)),
            Proposition::Forall(v, body) => {
                let (v, body) = subst_binder(v, body, s);
                Proposition::Forall(v, Box::new(body))
            }
            Proposition::Exists(v, body) => {
                let (v, body) = subst_binder(v, body, s);
                Proposition::Exists(v, Box::new(body))
            }
        }
    }
}

fn subst_binder(v: &Var, body: &Proposition, s: &Substitution) -> (Var, Proposition) {
    let mut inner = s.clone();
    inner.remove(v);
    let body_free = body.free_vars();
    let relevant: Substitution = inner.restrict(&body_free);
    if relevant.is_empty() {
        return (v.clone(), body.clone());
    }
    let captured = relevant.iter().any(|(_, t)| t.occurs(v));
    if !captured {
        return (v.clone(), body.apply(&relevant));
    }
    let mut avoid: BTreeSet<String> = BTreeSet::new();
    for w in relevant.range_vars() {
        avoid.insert(w.name);
    }
    for w in &body_free {
        avoid.insert(w.name.clone());
    }
    body.all_var_names(&mut avoid);
    let renamed = Var { name: fresh_name(&v.name, &avoid), sort: v.sort.clone() };
    let mut with_rename = relevant;
    with_rename.insert(v.clone(), Term::Var(renamed.clone()));
    (renamed, body.apply(&with_rename))
}

/// True iff `a` and `b` are equal up to renaming of bound variables.
pub fn alpha_eq(a: &Proposition, b: &Proposition) -> bool {
    alpha_eq_in(a, b, &mut Vec::new())
}

fn alpha_eq_in(a: &Proposition, b: &Proposition, env: &mut Vec<(Var, Var)>) -> bool {
    use Proposition::*;
    match (a, b) {
        (Atom(x), Atom(y)) => {
            x.pred == y.pred
                && x.args.len() == y.args.len()
                && x.args.iter().zip(&y.args).all(|(s, t)| alpha_eq_term(s, t, env))
        }
        (Top, Top) | (Bottom, Bottom) => true,
        (And(a1, a2), And(b1, b2)) | (Or(a1, a2), Or(b1, b2)) | (Imp(a1, a2), Imp(b1, b2)) => {
            alpha_eq_in(a1, b1, env) && alpha_eq_in(a2, b2, env)
        }
        (Forall(v, p), Forall(w, q)) | (Exists(v, p), Exists(w, q)) => {
            if v.sort != w.sort {
                return false;
            }
            env.push((v.clone(), w.clone()));
            let r = alpha_eq_in(p, q, env);
            env.pop();
            r
        }
        _ => false,
    }
}

fn alpha_eq_term(s: &Term, t: &Term, env: &[(Var, Var)]) -> bool {
    match (s, t) {
        (Term::Var(v), Term::Var(w)) => {
            let lv = env.iter().rposition(|(x, _)| x == v);
            let rw = env.iter().rposition(|(_, y)| y == w);
            match (lv, rw) {
                (None, None) => v == w,
                (Some(i), Some(j)) => i == j,
                _ => false,
            }
        }
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_eq_term(x, y, env))
        }
        _ => false,
    }
}

/// Declared function symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionDecl {
    pub args: Vec<Sort>,
    pub result: Sort,
}

/// Sorts, function symbols and predicate symbols, in declaration order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub sorts: Vec<Sort>,
    pub functions: IndexMap<String, FunctionDecl>,
    pub predicates: IndexMap<String, Vec<Sort>>,
    /// Function and predicate identifiers interleaved in declaration order.
    pub order: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("sort {0} declared twice")]
    DuplicateSort(String),
    #[error("identifier {0} declared twice")]
    DuplicateSymbol(String),
    #[error("sort {sort} used by {symbol} is not declared")]
    UndeclaredSort { symbol: String, sort: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WfErrorKind {
    UnknownSymbol(String),
    Arity { symbol: String, expected: usize, found: usize },
    SortMismatch { expected: Sort, found: Sort },
}

/// A well-formedness failure at a position of the checked expression.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("ill-formed at position {position:?}: {kind}")]
pub struct WfError {
    pub position: Position,
    pub kind: WfErrorKind,
}

impl fmt::Display for WfErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WfErrorKind::UnknownSymbol(s) => write!(f, "unknown identifier {s}"),
            WfErrorKind::Arity { symbol, expected, found } => {
                write!(f, "{symbol} expects {expected} argument(s), got {found}")
            }
            WfErrorKind::SortMismatch { expected, found } => {
                write!(f, "expected sort {expected}, found {found}")
            }
        }
    }
}

impl Signature {
    pub fn new() -> Self {
        Signature::default()
    }

    pub fn add_sort(&mut self, s: &str) -> Result<(), SignatureError> {
        let s = Sort::new(s);
        if self.sorts.contains(&s) {
            return Err(SignatureError::DuplicateSort(s.0));
        }
        self.sorts.push(s);
        Ok(())
    }

    fn check_fresh(&self, name: &str) -> Result<(), SignatureError> {
        if self.functions.contains_key(name) || self.predicates.contains_key(name) {
            return Err(SignatureError::DuplicateSymbol(name.to_string()));
        }
        Ok(())
    }

    fn check_sort(&self, symbol: &str, s: &str) -> Result<Sort, SignatureError> {
        let s = Sort::new(s);
        if !self.sorts.contains(&s) {
            return Err(SignatureError::UndeclaredSort { symbol: symbol.into(), sort: s.0 });
        }
        Ok(s)
    }

    pub fn add_function(&mut self, name: &str, args: &[&str], result: &str) -> Result<(), SignatureError> {
        self.check_fresh(name)?;
        let args = args.iter().map(|a| self.check_sort(name, a)).collect::<Result<Vec<_>, _>>()?;
        let result = self.check_sort(name, result)?;
        self.functions.insert(name.to_string(), FunctionDecl { args, result });
        self.order.push(name.to_string());
        Ok(())
    }

    pub fn add_predicate(&mut self, name: &str, args: &[&str]) -> Result<(), SignatureError> {
        self.check_fresh(name)?;
        let args = args.iter().map(|a| self.check_sort(name, a)).collect::<Result<Vec<_>, _>>()?;
        self.predicates.insert(name.to_string(), args);
        self.order.push(name.to_string());
        Ok(())
    }

    /// Adds every declaration of `other` not already present here.
    pub fn merge(&mut self, other: &Signature) -> Result<(), SignatureError> {
        for s in &other.sorts {
            if !self.sorts.contains(s) {
                self.sorts.push(s.clone());
            }
        }
        for name in &other.order {
            if let Some(d) = other.functions.get(name) {
                match self.functions.get(name) {
                    Some(mine) if mine == d => {}
                    Some(_) => return Err(SignatureError::DuplicateSymbol(name.clone())),
                    None => {
                        self.check_fresh(name)?;
                        self.functions.insert(name.clone(), d.clone());
                        self.order.push(name.clone());
                    }
                }
            } else if let Some(d) = other.predicates.get(name) {
                match self.predicates.get(name) {
                    Some(mine) if mine == d => {}
                    Some(_) => return Err(SignatureError::DuplicateSymbol(name.clone())),
                    None => {
                        self.check_fresh(name)?;
                        self.predicates.insert(name.clone(), d.clone());
                        self.order.push(name.clone());
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_function(&self, name: &str) -> bool {
        self.functions.contains_key(name)
    }

    pub fn is_predicate(&self, name: &str) -> bool {
        self.predicates.contains_key(name)
    }

    /// Checks a term and returns its sort.
    pub fn check_term(&self, t: &Term) -> Result<Sort, WfError> {
        self.check_term_at(t, &mut Vec::new())
    }

    fn check_term_at(&self, t: &Term, pos: &mut Position) -> Result<Sort, WfError> {
        match t {
            Term::Var(v) => {
                if !self.sorts.contains(&v.sort) {
                    return Err(WfError { position: pos.clone(), kind: WfErrorKind::UnknownSymbol(v.sort.0.clone()) });
                }
                Ok(v.sort.clone())
            }
            Term::App(f, args) => {
                let decl = self.functions.get(f).ok_or_else(|| WfError {
                    position: pos.clone(),
                    kind: WfErrorKind::UnknownSymbol(f.clone()),
                })?;
                self.check_args(f, &decl.args, args, pos)?;
                Ok(decl.result.clone())
            }
        }
    }

    fn check_args(&self, symbol: &str, expected: &[Sort], args: &[Term], pos: &mut Position) -> Result<(), WfError> {
        if expected.len() != args.len() {
            return Err(WfError {
                position: pos.clone(),
                kind: WfErrorKind::Arity { symbol: symbol.into(), expected: expected.len(), found: args.len() },
            });
        }
        for (i, (a, s)) in args.iter().zip(expected).enumerate() {
            pos.push(i);
            let found = self.check_term_at(a, pos)?;
            if &found != s {
                return Err(WfError {
                    position: pos.clone(),
                    kind: WfErrorKind::SortMismatch { expected: s.clone(), found },
                });
            }
            pos.pop();
        }
        Ok(())
    }

    pub fn check_atom(&self, a: &Atom) -> Result<(), WfError> {
        self.check_atom_at(a, &mut Vec::new())
    }

    fn check_atom_at(&self, a: &Atom, pos: &mut Position) -> Result<(), WfError> {
        let decl = self.predicates.get(&a.pred).ok_or_else(|| WfError {
            position: pos.clone(),
            kind: WfErrorKind::UnknownSymbol(a.pred.clone()),
        })?;
        self.check_args(&a.pred, decl, &a.args, pos)
    }

    pub fn check_prop(&self, p: &Proposition) -> Result<(), WfError> {
        self.check_prop_at(p, &mut Vec::new())
    }

    fn check_prop_at(&self, p: &Proposition, pos: &mut Position) -> Result<(), WfError> {
        match p {
            Proposition::Atom(a) => self.check_atom_at(a, pos),
            Proposition::Top | Proposition::Bottom => Ok(()),
            Proposition::And(a, b) | Proposition::Or(a, b) | Proposition::Imp(a, b) => {
                pos.push(0);
                self.check_prop_at(a, pos)?;
                pos.pop();
                pos.push(1);
                self.check_prop_at(b, pos)?;
                pos.pop();
                Ok(())
            }
            Proposition::Forall(v, body) | Proposition::Exists(v, body) => {
                if !self.sorts.contains(&v.sort) {
                    return Err(WfError { position: pos.clone(), kind: WfErrorKind::UnknownSymbol(v.sort.0.clone()) });
                }
                pos.push(0);
                self.check_prop_at(body, pos)?;
                pos.pop();
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Term {
        Term::var("x", "i")
    }
    fn y() -> Term {
        Term::var("y", "i")
    }
    fn plus(a: Term, b: Term) -> Term {
        Term::app("+", vec![a, b])
    }
    fn c(n: &str) -> Term {
        Term::constant(n)
    }

    #[test]
    fn substitutes_into_atom() {
        let p = Proposition::atom("P", vec![plus(c("a"), x())]);
        let s = Substitution::singleton(Var::new("x", "i"), plus(c("b"), c("c")));
        let expected = Proposition::atom("P", vec![plus(c("a"), plus(c("b"), c("c")))]);
        assert_eq!(p.apply(&s), expected);
    }

    #[test]
    fn empty_substitution_is_identity() {
        let p = Proposition::forall(Var::new("y", "i"), Proposition::atom("P", vec![x(), y()]));
        assert_eq!(p.apply(&Substitution::new()), p);
    }

    #[test]
    fn renames_bound_variable_to_avoid_capture() {
        let p = Proposition::forall(Var::new("y", "i"), Proposition::atom("P", vec![x(), y()]));
        let s = Substitution::singleton(Var::new("x", "i"), y());
        let out = p.apply(&s);
        let expected =
            Proposition::forall(Var::new("y'", "i"), Proposition::atom("P", vec![y(), Term::var("y'", "i")]));
        assert_eq!(out, expected);
        assert!(out.free_vars().contains(&Var::new("y", "i")));
    }

    #[test]
    fn bound_variable_is_not_substituted() {
        let p = Proposition::forall(Var::new("x", "i"), Proposition::atom("P", vec![x()]));
        let s = Substitution::singleton(Var::new("x", "i"), c("a"));
        assert_eq!(p.apply(&s), p);
    }

    #[test]
    fn alpha_equivalence() {
        let px = Proposition::forall(Var::new("x", "i"), Proposition::atom("P", vec![x()]));
        let py = Proposition::forall(Var::new("y", "i"), Proposition::atom("P", vec![y()]));
        assert!(alpha_eq(&px, &py));
        assert!(!alpha_eq(&Proposition::atom("P", vec![x()]), &Proposition::atom("P", vec![y()])));
        // free y vs bound y
        let bound = Proposition::forall(Var::new("x", "i"), Proposition::atom("Q", vec![x(), y()]));
        let clash = Proposition::forall(Var::new("y", "i"), Proposition::atom("Q", vec![y(), y()]));
        assert!(!alpha_eq(&bound, &clash));
    }

    #[test]
    fn alpha_eq_on_existential_context_formula() {
        let mk = |v: &str| {
            let xv = Term::var(v, "i");
            Proposition::exists(
                Var::new(v, "i"),
                Proposition::imp(
                    Proposition::atom("P", vec![plus(c("a"), xv)]),
                    Proposition::atom("P", vec![plus(plus(c("a"), c("b")), c("c"))]),
                ),
            )
        };
        assert!(alpha_eq(&mk("x"), &mk("w")));
    }

    fn arith() -> Signature {
        let mut sig = Signature::new();
        sig.add_sort("nat").unwrap();
        sig.add_function("0", &[], "nat").unwrap();
        sig.add_function("S", &["nat"], "nat").unwrap();
        sig.add_function("+", &["nat", "nat"], "nat").unwrap();
        sig
    }

    #[test]
    fn wellformed_terms() {
        let sig = arith();
        let t = Term::app("+", vec![Term::app("S", vec![Term::var("x", "nat")]), Term::var("y", "nat")]);
        assert_eq!(sig.check_term(&t), Ok(Sort::new("nat")));
        let bad = Term::app("0", vec![Term::var("x", "nat")]);
        let err = sig.check_term(&bad).unwrap_err();
        assert_eq!(err.position, Vec::<usize>::new());
        assert!(matches!(err.kind, WfErrorKind::Arity { expected: 0, found: 1, .. }));
        let sorty = Term::app("S", vec![Term::var("x", "set")]);
        assert!(sig.check_term(&sorty).is_err());
        let deep = Term::app("+", vec![c("0"), Term::app("S", vec![c("0"), c("0")])]);
        assert_eq!(sig.check_term(&deep).unwrap_err().position, vec![1]);
    }

    #[test]
    fn wellformed_powerset_atom() {
        let mut sig = Signature::new();
        sig.add_sort("set").unwrap();
        sig.add_function("𝒫", &["set"], "set").unwrap();
        sig.add_predicate("∈", &["set", "set"]).unwrap();
        let a = Proposition::atom("∈", vec![Term::var("x", "set"), Term::app("𝒫", vec![Term::var("y", "set")])]);
        assert!(sig.check_prop(&a).is_ok());
        assert!(sig.add_predicate("𝒫", &[]).is_err());
    }

    #[test]
    fn checked_substitution_rejects_sort_mismatch() {
        let sig = arith();
        let mut s = Substitution::new();
        assert!(s.insert_checked(&sig, Var::new("x", "nat"), c("0")).is_ok());
        assert!(s.insert_checked(&sig, Var::new("x", "set"), c("0")).is_err());
    }

    #[test]
    fn composition_applies_in_order() {
        let s1 = Substitution::singleton(Var::new("x", "i"), plus(y(), c("a")));
        let s2 = Substitution::singleton(Var::new("y", "i"), c("b"));
        let t = plus(x(), y());
        assert_eq!(t.apply(&s1).apply(&s2), t.apply(&s1.compose(&s2)));
    }
}
