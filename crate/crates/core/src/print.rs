//! Canonical printing: fully parenthesized prefix form, sorts on binders.
//!
//! `Display` on terms and propositions produces text that `parse` reads back
//! to the same value under the same signature.

use std::fmt;

use crate::syntax::{Atom, Expr, Proposition, Substitution, Term, Var};

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.sort)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(&v.name),
            Term::App(h, args) if args.is_empty() => f.write_str(h),
            Term::App(h, args) => {
                write!(f, "({h}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Prints a term with every variable annotated with its sort, for positions
/// (proof witnesses) where the sort cannot be inferred from context.
pub struct Annotated<'a>(pub &'a Term);

impl fmt::Display for Annotated<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(h, args) if args.is_empty() => f.write_str(h),
            Term::App(h, args) => {
                write!(f, "({h}")?;
                for a in args {
                    write!(f, " {}", Annotated(a))?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.args.is_empty() {
            return f.write_str(&self.pred);
        }
        write!(f, "({}", self.pred)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Proposition::Atom(a) => write!(f, "{a}"),
            Proposition::Top => f.write_str("top"),
            Proposition::Bottom => f.write_str("bot"),
            Proposition::And(a, b) => write!(f, "(and {a} {b})"),
            Proposition::Or(a, b) => write!(f, "(or {a} {b})"),
            Proposition::Imp(a, b) => write!(f, "(imp {a} {b})"),
            Proposition::Forall(v, b) => write!(f, "(forall {v} {b})"),
            Proposition::Exists(v, b) => write!(f, "(exists {v} {b})"),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Term(t) => write!(f, "{t}"),
            Expr::Prop(p) => write!(f, "{p}"),
        }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{} ↦ {}", v.name, t)?;
        }
        f.write_str("}")
    }
}
