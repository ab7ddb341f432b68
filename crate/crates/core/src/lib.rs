//! A workbench for deduction modulo: first-order theories given as rewrite
//! systems, proof checking modulo the induced congruence, cut reduction,
//! unification by narrowing and bounded cut-free proof search.

pub mod cli;
pub mod kernel;
pub mod parse;
pub mod print;
pub mod prover;
pub mod rewrite;
pub mod syntax;
pub mod theories;
pub mod unify;

pub use rewrite::{RewriteRule, RewriteSystem};
pub use syntax::{Atom, Expr, Proposition, Signature, Sort, Substitution, Term, Var};
