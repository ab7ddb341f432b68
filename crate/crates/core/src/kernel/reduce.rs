use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::check::{check_proof, CheckError};
use super::{ProofTree, Rule, Sequent};
use crate::syntax::{fresh_name, Substitution, Term, Var};
use crate::theories::Theory;

/// An elimination whose major premise is the matching introduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    /// Path of the elimination node.
    pub path: Vec<usize>,
    pub intro: &'static str,
    pub elim: &'static str,
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} at {:?}", self.intro, self.elim, self.path)
    }
}

/// Cuts in post-order: the first entry is the leftmost-innermost cut.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CutReport {
    pub cuts: Vec<Cut>,
}

impl CutReport {
    pub fn is_cut_free(&self) -> bool {
        self.cuts.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("proof does not check: {0}")]
    Check(CheckError),
    #[error("no cut at {0:?}")]
    NoCutAt(Vec<usize>),
    #[error("reduct does not check: {0}")]
    Recheck(CheckError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("proof does not check: {0}")]
    Check(CheckError),
    #[error("{0}")]
    Reduce(ReduceError),
    /// The last proof reached is kept so callers can inspect it.
    #[error("fuel exhausted after {steps} reductions")]
    FuelExhausted { steps: usize, last: Box<ProofTree> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofNormalization {
    /// Fully annotated result.
    pub proof: ProofTree,
    /// Cut reductions performed.
    pub steps: usize,
    /// Commuting conversions performed.
    pub permutations: usize,
}

fn collect_cuts(p: &ProofTree, path: &mut Vec<usize>, out: &mut Vec<Cut>) {
    for (i, c) in p.children.iter().enumerate() {
        path.push(i);
        collect_cuts(c, path, out);
        path.pop();
    }
    if let Some(major) = p.children.first() {
        if p.rule.is_elim() && p.rule.eliminates(&major.rule) {
            out.push(Cut { path: path.clone(), intro: major.rule.tag(), elim: p.rule.tag() });
        }
    }
}

/// Checks the proof, then lists its cuts. The checker guarantees that each
/// cut's introduced and eliminated formulas are congruent.
pub fn find_cuts(theory: &Theory, goal: &Sequent, proof: &ProofTree, fuel: usize) -> Result<CutReport, CheckError> {
    let checked = check_proof(theory, proof, goal, fuel)?;
    Ok(cuts_of(&checked.proof))
}

fn cuts_of(p: &ProofTree) -> CutReport {
    let mut cuts = Vec::new();
    collect_cuts(p, &mut Vec::new(), &mut cuts);
    CutReport { cuts }
}

/// One-step contraction of the cut whose elimination is `e`.
fn contract(e: &ProofTree) -> Option<ProofTree> {
    let m = e.children.first()?;
    let mut out = match (&e.rule, &m.rule) {
        (Rule::AndElimLeft, Rule::AndIntro) => m.children[0].clone(),
        (Rule::AndElimRight, Rule::AndIntro) => m.children[1].clone(),
        (Rule::ImpElim, Rule::ImpIntro(h)) => m.children[0].subst_hyp(h, &e.children[1]),
        (Rule::OrElim(h1, _), Rule::OrIntroLeft) => e.children[1].subst_hyp(h1, &m.children[0]),
        (Rule::OrElim(_, h2), Rule::OrIntroRight) => e.children[2].subst_hyp(h2, &m.children[0]),
        (Rule::ForallElim(t), Rule::ForallIntro(x)) => {
            m.children[0].subst_terms(&Substitution::singleton(x.clone(), t.clone()))
        }
        (Rule::ExistsElim(y, h), Rule::ExistsIntro(t)) => e.children[1]
            .subst_terms(&Substitution::singleton(y.clone(), t.clone()))
            .subst_hyp(h, &m.children[0]),
        _ => return None,
    };
    out.conclusion = e.conclusion.clone();
    Some(out)
}

fn reduce_checked(theory: &Theory, goal: &Sequent, elaborated: &ProofTree, path: &[usize], fuel: usize) -> Result<ProofTree, ReduceError> {
    let e = elaborated.at(path).ok_or_else(|| ReduceError::NoCutAt(path.to_vec()))?;
    let reduct = contract(e).ok_or_else(|| ReduceError::NoCutAt(path.to_vec()))?;
    let next = elaborated.replace_at(path, reduct);
    check_proof(theory, &next, goal, fuel).map(|c| c.proof).map_err(ReduceError::Recheck)
}

/// Contracts the cut at `path` and re-checks the result against `goal`.
pub fn reduce_cut(theory: &Theory, goal: &Sequent, proof: &ProofTree, path: &[usize], fuel: usize) -> Result<ProofTree, ReduceError> {
    let elaborated = check_proof(theory, proof, goal, fuel).map_err(ReduceError::Check)?.proof;
    reduce_checked(theory, goal, &elaborated, path, fuel)
}

/// Reduces leftmost-innermost cuts until none is left. `fuel` bounds the
/// number of reductions; it is also the rewriting fuel for re-checking.
pub fn normalize_proof(theory: &Theory, goal: &Sequent, proof: &ProofTree, fuel: usize) -> Result<ProofNormalization, NormalizeError> {
    let mut current = check_proof(theory, proof, goal, fuel).map_err(NormalizeError::Check)?.proof;
    let mut steps = 0;
    loop {
        let Some(cut) = cuts_of(&current).cuts.into_iter().next() else {
            return Ok(ProofNormalization { proof: current, steps, permutations: 0 });
        };
        if steps >= fuel {
            return Err(NormalizeError::FuelExhausted { steps, last: Box::new(current) });
        }
        current = reduce_checked(theory, goal, &current, &cut.path, fuel).map_err(NormalizeError::Reduce)?;
        steps += 1;
    }
}

fn first_permutable(p: &ProofTree, path: &mut Vec<usize>) -> Option<Vec<usize>> {
    for (i, c) in p.children.iter().enumerate() {
        path.push(i);
        let found = first_permutable(c, path);
        path.pop();
        if found.is_some() {
            return found;
        }
    }
    let major = p.children.first()?;
    (p.rule.is_elim() && matches!(major.rule, Rule::OrElim(..) | Rule::ExistsElim(..))).then(|| path.clone())
}

/// Names used by `e` outside its major premise.
fn names_outside_major(e: &ProofTree) -> (BTreeSet<String>, BTreeSet<String>) {
    let mut labels = BTreeSet::new();
    let mut vars = BTreeSet::new();
    for c in e.children.iter().skip(1) {
        c.names(&mut labels, &mut vars);
    }
    if let Rule::ForallElim(t) | Rule::ExistsIntro(t) = &e.rule {
        vars.extend(t.vars().into_iter().map(|v| v.name));
    }
    if let Some(c) = &e.conclusion {
        c.all_var_names(&mut vars);
    }
    (labels, vars)
}

fn plug(e: &ProofTree, major: ProofTree) -> ProofTree {
    let mut out = e.clone();
    out.children[0] = major;
    out
}

fn rename_label(branch: &ProofTree, h: &str, taken: &BTreeSet<String>) -> (String, ProofTree) {
    if !taken.contains(h) {
        return (h.to_string(), branch.clone());
    }
    let mut labels = taken.clone();
    branch.names(&mut labels, &mut BTreeSet::new());
    let fresh = fresh_name(h, &labels);
    let renamed = branch.subst_hyp(h, &ProofTree::axiom(&fresh));
    (fresh, renamed)
}

/// Moves the elimination `e` into the branches of its disjunction or
/// existential major premise.
fn permute(e: &ProofTree) -> Option<ProofTree> {
    let m = e.children.first()?;
    let (labels, vars) = names_outside_major(e);
    let mut out = match &m.rule {
        Rule::OrElim(h1, h2) => {
            let (k1, left) = rename_label(&m.children[1], h1, &labels);
            let (k2, right) = rename_label(&m.children[2], h2, &labels);
            let mut l = plug(e, left);
            let mut r = plug(e, right);
            l.conclusion = e.conclusion.clone();
            r.conclusion = e.conclusion.clone();
            ProofTree { rule: Rule::OrElim(k1, k2), conclusion: None, children: vec![m.children[0].clone(), l, r] }
        }
        Rule::ExistsElim(x, h) => {
            let mut body = m.children[1].clone();
            let mut y = x.clone();
            if vars.contains(&x.name) {
                let mut all_vars = vars.clone();
                body.names(&mut BTreeSet::new(), &mut all_vars);
                y = Var { name: fresh_name(&x.name, &all_vars), sort: x.sort.clone() };
                body = body.subst_terms(&Substitution::singleton(x.clone(), Term::Var(y.clone())));
            }
            let (k, body) = rename_label(&body, h, &labels);
            let mut b = plug(e, body);
            b.conclusion = e.conclusion.clone();
            ProofTree { rule: Rule::ExistsElim(y, k), conclusion: None, children: vec![m.children[0].clone(), b] }
        }
        _ => return None,
    };
    out.conclusion = e.conclusion.clone();
    Some(out)
}

/// Alternates cut reduction with commuting conversions until neither
/// applies. Both kinds of step draw on `fuel`.
pub fn commute_conversions(theory: &Theory, goal: &Sequent, proof: &ProofTree, fuel: usize) -> Result<ProofNormalization, NormalizeError> {
    let mut current = check_proof(theory, proof, goal, fuel).map_err(NormalizeError::Check)?.proof;
    let mut steps = 0;
    let mut permutations = 0;
    loop {
        if let Some(cut) = cuts_of(&current).cuts.into_iter().next() {
            if steps + permutations >= fuel {
                return Err(NormalizeError::FuelExhausted { steps, last: Box::new(current) });
            }
            current = reduce_checked(theory, goal, &current, &cut.path, fuel).map_err(NormalizeError::Reduce)?;
            steps += 1;
            continue;
        }
        let Some(path) = first_permutable(&current, &mut Vec::new()) else {
            return Ok(ProofNormalization { proof: current, steps, permutations });
        };
        if steps + permutations >= fuel {
            return Err(NormalizeError::FuelExhausted { steps, last: Box::new(current) });
        }
        let e = current.at(&path).expect("permutable node");
        let next = current.replace_at(&path, permute(e).expect("permutable node"));
        current = check_proof(theory, &next, goal, fuel)
            .map_err(|err| NormalizeError::Reduce(ReduceError::Recheck(err)))?
            .proof;
        permutations += 1;
    }
}
