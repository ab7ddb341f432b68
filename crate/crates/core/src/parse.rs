//! Readers for the prefix syntax of terms and propositions, theory files,
//! goal files and proof trees.
//!
//! Expressions are parenthesized prefix forms such as `(forall x:nat (P x))`.
//! A bare identifier is resolved, in order, as a bound or eigen variable, a
//! variable already seen in the same statement, a constant, and finally a
//! fresh variable whose sort is the one expected at that argument position.
//! `name:sort` forces a variable of that sort.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::kernel::{ProofTree, Rule};
use crate::rewrite::{RewriteRule, RuleError};
use crate::syntax::{Atom, Expr, Proposition, Signature, Sort, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl Pos {
    fn err<T>(self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { line: self.line, col: self.col, message: message.into() })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    Str(String),
    Word(String),
    Dot,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: Pos,
}

fn lex(text: &str) -> Result<(Vec<Token>, Pos), ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    let bump = |c: char, line: &mut usize, col: &mut usize| {
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        match c {
            c if c.is_whitespace() => {
                chars.next();
                bump(c, &mut line, &mut col);
            }
            '%' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    bump(c, &mut line, &mut col);
                }
            }
            '(' | ')' => {
                chars.next();
                bump(c, &mut line, &mut col);
                out.push(Token { tok: if c == '(' { Tok::Open } else { Tok::Close }, pos });
            }
            '"' => {
                chars.next();
                bump(c, &mut line, &mut col);
                let mut s = String::new();
                loop {
                    match chars.next() {
                        None => return pos.err("unterminated string"),
                        Some('"') => {
                            bump('"', &mut line, &mut col);
                            break;
                        }
                        Some('\\') => {
                            bump('\\', &mut line, &mut col);
                            match chars.next() {
                                Some(e) => {
                                    bump(e, &mut line, &mut col);
                                    s.push(e);
                                }
                                None => return pos.err("unterminated string"),
                            }
                        }
                        Some(ch) => {
                            bump(ch, &mut line, &mut col);
                            s.push(ch);
                        }
                    }
                }
                out.push(Token { tok: Tok::Str(s), pos });
            }
            _ => {
                let mut w = String::new();
                while let Some(&ch) = chars.peek() {
                    if ch.is_whitespace() || matches!(ch, '(' | ')' | '"' | '%') {
                        break;
                    }
                    w.push(ch);
                    chars.next();
                    bump(ch, &mut line, &mut col);
                }
                if w == "." {
                    out.push(Token { tok: Tok::Dot, pos });
                } else if let Some(stem) = w.strip_suffix('.') {
                    out.push(Token { tok: Tok::Word(stem.to_string()), pos });
                    let dot = Pos { line: pos.line, col: pos.col + stem.chars().count() };
                    out.push(Token { tok: Tok::Dot, pos: dot });
                } else if w.len() > 1 && w.ends_with(':') && w.matches(':').count() == 1 {
                    // `name:` as in `rule add_zero: ...`
                    let stem = &w[..w.len() - 1];
                    out.push(Token { tok: Tok::Word(stem.to_string()), pos });
                    let colon = Pos { line: pos.line, col: pos.col + stem.chars().count() };
                    out.push(Token { tok: Tok::Word(":".into()), pos: colon });
                } else {
                    out.push(Token { tok: Tok::Word(w), pos });
                }
            }
        }
    }
    Ok((out, Pos { line, col }))
}

/// A parsed but not yet elaborated expression.
#[derive(Debug, Clone)]
enum SExp {
    Word(String, Pos),
    Str(String, Pos),
    List(Vec<SExp>, Pos),
}

impl SExp {
    fn pos(&self) -> Pos {
        match self {
            SExp::Word(_, p) | SExp::Str(_, p) | SExp::List(_, p) => *p,
        }
    }

    fn word(&self) -> Option<&str> {
        match self {
            SExp::Word(w, _) => Some(w),
            _ => None,
        }
    }
}

struct Reader {
    toks: Vec<Token>,
    i: usize,
    end: Pos,
}

impl Reader {
    fn new(text: &str) -> Result<Self, ParseError> {
        let (toks, end) = lex(text)?;
        Ok(Reader { toks, i: 0, end })
    }

    fn at_end(&self) -> bool {
        self.i >= self.toks.len()
    }

    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.i)
    }

    fn here(&self) -> Pos {
        self.peek().map(|t| t.pos).unwrap_or(self.end)
    }

    fn sexp(&mut self) -> Result<SExp, ParseError> {
        let Some(t) = self.toks.get(self.i).cloned() else { return self.end.err("unexpected end of input") };
        self.i += 1;
        match t.tok {
            Tok::Word(w) => Ok(SExp::Word(w, t.pos)),
            Tok::Str(s) => Ok(SExp::Str(s, t.pos)),
            Tok::Close => t.pos.err("unexpected ')'"),
            Tok::Dot => t.pos.err("unexpected '.'"),
            Tok::Open => {
                let mut items = Vec::new();
                loop {
                    match self.peek().map(|t| &t.tok) {
                        None => return self.end.err("unexpected end of input, missing ')'"),
                        Some(Tok::Close) => {
                            self.i += 1;
                            return Ok(SExp::List(items, t.pos));
                        }
                        _ => items.push(self.sexp()?),
                    }
                }
            }
        }
    }

    /// Items up to the next top-level `.`.
    fn statement(&mut self) -> Result<(Vec<SExp>, Pos), ParseError> {
        let start = self.here();
        let mut items = Vec::new();
        loop {
            match self.peek().map(|t| &t.tok) {
                None => return self.end.err("unexpected end of input, missing '.'"),
                Some(Tok::Dot) => {
                    self.i += 1;
                    return Ok((items, start));
                }
                _ => items.push(self.sexp()?),
            }
        }
    }
}

const KEYWORDS: [&str; 10] = ["top", "bot", "and", "or", "imp", "iff", "not", "forall", "exists", "the"];

fn split_annotation(w: &str) -> Option<(&str, &str)> {
    let (name, sort) = w.rsplit_once(':')?;
    (!name.is_empty() && !sort.is_empty()).then_some((name, sort))
}

/// Resolves identifiers against a signature.
struct Elab<'a> {
    sig: &'a Signature,
    bound: Vec<Var>,
    free: BTreeMap<String, Var>,
}

impl<'a> Elab<'a> {
    fn new(sig: &'a Signature) -> Self {
        Elab { sig, bound: Vec::new(), free: BTreeMap::new() }
    }

    fn default_sort(&self) -> Option<Sort> {
        (self.sig.sorts.len() == 1).then(|| self.sig.sorts[0].clone())
    }

    fn binder(&self, x: &SExp) -> Result<Var, ParseError> {
        let Some(w) = x.word() else { return x.pos().err("expected a variable") };
        let var = match split_annotation(w) {
            Some((name, sort)) => Var::new(name, sort),
            None => match self.default_sort() {
                Some(s) => Var { name: w.to_string(), sort: s },
                None => return x.pos().err(format!("variable {w} needs a sort annotation")),
            },
        };
        if !self.sig.sorts.contains(&var.sort) {
            return x.pos().err(format!("unknown sort {}", var.sort));
        }
        if KEYWORDS.contains(&var.name.as_str()) || self.sig.is_function(&var.name) || self.sig.is_predicate(&var.name) {
            return x.pos().err(format!("{} cannot be used as a variable name", var.name));
        }
        Ok(var)
    }

    fn expect_sort(pos: Pos, expected: Option<&Sort>, found: &Sort) -> Result<(), ParseError> {
        match expected {
            Some(e) if e != found => pos.err(format!("expected a term of sort {e}, found sort {found}")),
            _ => Ok(()),
        }
    }

    fn term(&mut self, x: &SExp, expected: Option<&Sort>) -> Result<Term, ParseError> {
        match x {
            SExp::Str(_, p) => p.err("expected a term, found a string"),
            SExp::Word(w, p) => {
                if KEYWORDS.contains(&w.as_str()) {
                    return p.err(format!("expected a term, found keyword {w}"));
                }
                if let Some((name, sort)) = split_annotation(w) {
                    let v = self.binder(x)?;
                    Self::expect_sort(*p, expected, &v.sort)?;
                    if !self.bound.iter().any(|b| b == &v) {
                        self.free.entry(name.to_string()).or_insert_with(|| Var::new(name, sort));
                    }
                    return Ok(Term::Var(v));
                }
                if let Some(v) = self.bound.iter().rev().find(|v| &v.name == w) {
                    Self::expect_sort(*p, expected, &v.sort)?;
                    return Ok(Term::Var(v.clone()));
                }
                if let Some(v) = self.free.get(w) {
                    Self::expect_sort(*p, expected, &v.sort)?;
                    return Ok(Term::Var(v.clone()));
                }
                if let Some(decl) = self.sig.functions.get(w) {
                    if !decl.args.is_empty() {
                        return p.err(format!("{w} expects {} argument(s), got 0", decl.args.len()));
                    }
                    Self::expect_sort(*p, expected, &decl.result)?;
                    return Ok(Term::constant(w));
                }
                if self.sig.is_predicate(w) {
                    return p.err(format!("predicate {w} used as a term"));
                }
                let sort = match expected.cloned().or_else(|| self.default_sort()) {
                    Some(s) => s,
                    None => return p.err(format!("cannot infer the sort of variable {w}; write {w}:<sort>")),
                };
                let v = Var { name: w.clone(), sort };
                self.free.insert(w.clone(), v.clone());
                Ok(Term::Var(v))
            }
            SExp::List(items, p) => {
                let Some((head, args)) = items.split_first() else { return p.err("empty application") };
                let Some(f) = head.word() else { return head.pos().err("expected a function symbol") };
                let Some(decl) = self.sig.functions.get(f) else {
                    if self.sig.is_predicate(f) {
                        return head.pos().err(format!("predicate {f} used as a term"));
                    }
                    return head.pos().err(format!("unknown function symbol {f}"));
                };
                if decl.args.len() != args.len() {
                    return p.err(format!("{f} expects {} argument(s), got {}", decl.args.len(), args.len()));
                }
                Self::expect_sort(*p, expected, &decl.result)?;
                let sorts = decl.args.clone();
                let args = args.iter().zip(&sorts).map(|(a, s)| self.term(a, Some(s))).collect::<Result<Vec<_>, _>>()?;
                Ok(Term::App(f.to_string(), args))
            }
        }
    }

    fn atom(&mut self, pred: &str, args: &[SExp], pos: Pos) -> Result<Atom, ParseError> {
        let Some(sorts) = self.sig.predicates.get(pred).cloned() else {
            if self.sig.is_function(pred) {
                return pos.err(format!("function symbol {pred} used as a proposition"));
            }
            return pos.err(format!("unknown predicate {pred}"));
        };
        if sorts.len() != args.len() {
            return pos.err(format!("{pred} expects {} argument(s), got {}", sorts.len(), args.len()));
        }
        let args = args.iter().zip(&sorts).map(|(a, s)| self.term(a, Some(s))).collect::<Result<Vec<_>, _>>()?;
        Ok(Atom { pred: pred.to_string(), args })
    }

    fn prop(&mut self, x: &SExp) -> Result<Proposition, ParseError> {
        match x {
            SExp::Str(_, p) => p.err("expected a proposition, found a string"),
            SExp::Word(w, p) => match w.as_str() {
                "top" => Ok(Proposition::Top),
                "bot" => Ok(Proposition::Bottom),
                _ => Ok(Proposition::Atom(self.atom(w, &[], *p)?)),
            },
            SExp::List(items, p) => {
                let Some((head, args)) = items.split_first() else { return p.err("empty proposition") };
                let Some(h) = head.word() else { return head.pos().err("expected a connective or predicate") };
                let arity = |n: usize| -> Result<(), ParseError> {
                    if args.len() != n {
                        return p.err(format!("{h} expects {n} argument(s), got {}", args.len()));
                    }
                    Ok(())
                };
                match h {
                    "and" | "or" | "imp" | "iff" => {
                        arity(2)?;
                        let a = self.prop(&args[0])?;
                        let b = self.prop(&args[1])?;
                        Ok(match h {
                            "and" => Proposition::and(a, b),
                            "or" => Proposition::or(a, b),
                            "imp" => Proposition::imp(a, b),
                            _ => Proposition::iff(a, b),
                        })
                    }
                    "not" => {
                        arity(1)?;
                        Ok(Proposition::not(self.prop(&args[0])?))
                    }
                    "forall" | "exists" => {
                        arity(2)?;
                        let v = self.binder(&args[0])?;
                        self.bound.push(v.clone());
                        let body = self.prop(&args[1]);
                        self.bound.pop();
                        let body = body?;
                        Ok(if h == "forall" { Proposition::forall(v, body) } else { Proposition::exists(v, body) })
                    }
                    "top" | "bot" | "the" => head.pos().err(format!("{h} takes no arguments here")),
                    _ => Ok(Proposition::Atom(self.atom(h, args, *p)?)),
                }
            }
        }
    }

    fn head_is_predicate(&self, x: &SExp) -> bool {
        let head = match x {
            SExp::List(items, _) => items.first().and_then(SExp::word),
            SExp::Word(w, _) => Some(w.as_str()),
            SExp::Str(..) => None,
        };
        head.is_some_and(|h| {
            self.sig.is_predicate(h) || matches!(h, "top" | "bot" | "and" | "or" | "imp" | "iff" | "not" | "forall" | "exists")
        })
    }

    fn expr(&mut self, x: &SExp) -> Result<Expr, ParseError> {
        if self.head_is_predicate(x) {
            Ok(Expr::Prop(self.prop(x)?))
        } else {
            Ok(Expr::Term(self.term(x, None)?))
        }
    }
}

fn single(text: &str) -> Result<SExp, ParseError> {
    let mut r = Reader::new(text)?;
    let x = r.sexp()?;
    if !r.at_end() {
        return r.here().err("trailing input");
    }
    Ok(x)
}

pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, ParseError> {
    Elab::new(sig).term(&single(text)?, None)
}

pub fn parse_prop(text: &str, sig: &Signature) -> Result<Proposition, ParseError> {
    Elab::new(sig).prop(&single(text)?)
}

/// A term, or a proposition when the head is a predicate or connective.
pub fn parse_expr(text: &str, sig: &Signature) -> Result<Expr, ParseError> {
    Elab::new(sig).expr(&single(text)?)
}

/// Parses two expressions sharing their free variables, as in a unification
/// problem.
pub fn parse_expr_pair(a: &str, b: &str, sig: &Signature) -> Result<(Expr, Expr), ParseError> {
    let mut e = Elab::new(sig);
    let x = e.expr(&single(a)?)?;
    let y = e.expr(&single(b)?)?;
    Ok((x, y))
}

/// Declarations, rules, hypotheses and goals read from a file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Document {
    pub signature: Signature,
    pub rules: Vec<RewriteRule>,
    pub assert_terminating: bool,
    pub hypotheses: Vec<(String, Proposition)>,
    pub goals: Vec<Proposition>,
}

fn words<'s>(items: &'s [SExp], pos: Pos, what: &str) -> Result<Vec<&'s str>, ParseError> {
    items
        .iter()
        .map(|x| match x.word() {
            Some(w) => Ok(w),
            None => x.pos().err(format!("expected an identifier in {what}")),
        })
        .collect::<Result<_, _>>()
        .or_else(|e: ParseError| if items.is_empty() { pos.err(format!("empty {what}")) } else { Err(e) })
}

/// `<name> :` then the remaining items.
fn named<'s>(items: &'s [SExp], pos: Pos, what: &str) -> Result<(&'s str, &'s [SExp]), ParseError> {
    match items {
        [SExp::Word(n, _), SExp::Word(c, _), rest @ ..] if c == ":" => Ok((n, rest)),
        [x, ..] => x.pos().err(format!("expected `{what} <name>: ...`")),
        [] => pos.err(format!("expected `{what} <name>: ...`")),
    }
}

fn declare(r: Result<(), crate::syntax::SignatureError>, pos: Pos) -> Result<(), ParseError> {
    r.or_else(|e| pos.err(e.to_string()))
}

fn check_symbol(name: &str, pos: Pos) -> Result<(), ParseError> {
    if KEYWORDS.contains(&name) || name.contains(':') {
        return pos.err(format!("{name} cannot be declared as a symbol"));
    }
    Ok(())
}

fn rule_error(e: RuleError, pos: Pos) -> ParseError {
    ParseError { line: pos.line, col: pos.col, message: e.to_string() }
}

/// Reads the statement grammar. Declarations extend `base`.
pub fn parse_document(text: &str, base: &Signature) -> Result<Document, ParseError> {
    let mut r = Reader::new(text)?;
    let mut doc = Document { signature: base.clone(), ..Document::default() };
    while !r.at_end() {
        let (items, pos) = r.statement()?;
        let Some((kw, rest)) = items.split_first() else { return pos.err("empty statement") };
        let Some(kw) = kw.word() else { return kw.pos().err("expected a keyword") };
        match kw {
            "sort" => {
                let ws = words(rest, pos, "sort declaration")?;
                let [name] = ws[..] else { return pos.err("expected `sort <id>.`") };
                check_symbol(name, pos)?;
                let res = doc.signature.add_sort(name);
                declare(res, pos)?;
            }
            "func" => {
                let ws = words(rest, pos, "function declaration")?;
                let [name, ":", ref tail @ ..] = ws[..] else { return pos.err("expected `func <id> : <sorts> -> <sort>.`") };
                let Some(arrow) = tail.iter().position(|w| *w == "->") else {
                    return pos.err("expected `->` in function declaration");
                };
                let [result] = tail[arrow + 1..] else { return pos.err("expected one result sort after `->`") };
                check_symbol(name, pos)?;
                let res = doc.signature.add_function(name, &tail[..arrow], result);
                declare(res, pos)?;
            }
            "pred" => {
                let ws = words(rest, pos, "predicate declaration")?;
                let [name, ":", ref args @ ..] = ws[..] else { return pos.err("expected `pred <id> : <sorts>.`") };
                check_symbol(name, pos)?;
                let res = doc.signature.add_predicate(name, args);
                declare(res, pos)?;
            }
            "rule" => {
                let (name, body) = named(rest, pos, "rule")?;
                let [lhs, SExp::Word(arrow, _), rhs] = body else { return pos.err("expected `rule <id>: <lhs> ~> <rhs>.`") };
                if arrow != "~>" {
                    return pos.err("expected `~>` between the two sides of a rule");
                }
                let mut e = Elab::new(&doc.signature);
                let rule = if e.head_is_predicate(lhs) {
                    let Proposition::Atom(a) = e.prop(lhs)? else {
                        return lhs.pos().err("the left-hand side of a proposition rule must be atomic");
                    };
                    let rhs = e.prop(rhs)?;
                    RewriteRule::prop(name, a, rhs)
                } else {
                    let l = e.term(lhs, None)?;
                    let sort = l.sort(&doc.signature);
                    let rhs = e.term(rhs, sort.as_ref())?;
                    RewriteRule::term(name, l, rhs)
                }
                .map_err(|err| rule_error(err, pos))?;
                rule.check(&doc.signature).map_err(|err| rule_error(err, pos))?;
                if doc.rules.iter().any(|r| r.name() == name) {
                    return pos.err(format!("rule {name} declared twice"));
                }
                doc.rules.push(rule);
            }
            "assert" => {
                let ws = words(rest, pos, "assertion")?;
                if ws != ["terminating"] {
                    return pos.err("expected `assert terminating.`");
                }
                doc.assert_terminating = true;
            }
            "hyp" => {
                let (name, body) = named(rest, pos, "hyp")?;
                let [p] = body else { return pos.err("expected `hyp <label>: <proposition>.`") };
                if doc.hypotheses.iter().any(|(h, _)| h == name) {
                    return pos.err(format!("hypothesis {name} declared twice"));
                }
                let p = Elab::new(&doc.signature).prop(p)?;
                doc.hypotheses.push((name.to_string(), p));
            }
            "goal" => {
                let [p] = rest else { return pos.err("expected `goal <proposition>.`") };
                let p = Elab::new(&doc.signature).prop(p)?;
                doc.goals.push(p);
            }
            other => return pos.err(format!("unknown statement {other}")),
        }
    }
    Ok(doc)
}

/// Prints declarations then rules in the statement grammar.
pub struct DocumentPrinter<'a> {
    pub signature: &'a Signature,
    pub rules: &'a [RewriteRule],
    pub assert_terminating: bool,
}

impl fmt::Display for DocumentPrinter<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = self.signature;
        for s in &sig.sorts {
            writeln!(f, "sort {s}.")?;
        }
        for name in &sig.order {
            if let Some(d) = sig.functions.get(name) {
                write!(f, "func {name} :")?;
                for a in &d.args {
                    write!(f, " {a}")?;
                }
                writeln!(f, " -> {}.", d.result)?;
            } else if let Some(args) = sig.predicates.get(name) {
                write!(f, "pred {name} :")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                writeln!(f, ".")?;
            }
        }
        for r in self.rules {
            writeln!(f, "{r}")?;
        }
        if self.assert_terminating {
            writeln!(f, "assert terminating.")?;
        }
        Ok(())
    }
}

const TAGS: [&str; 15] = [
    "axiom", "top_i", "bot_e", "and_i", "and_e_l", "and_e_r", "or_i_l", "or_i_r", "or_e", "imp_i", "imp_e", "forall_i",
    "forall_e", "exists_i", "exists_e",
];

struct ProofReader<'a> {
    elab: Elab<'a>,
}

impl ProofReader<'_> {
    fn label(x: &SExp) -> Result<String, ParseError> {
        match x {
            SExp::Str(s, _) => Ok(s.clone()),
            _ => x.pos().err("expected a quoted hypothesis label"),
        }
    }

    fn proof(&mut self, x: &SExp) -> Result<ProofTree, ParseError> {
        let SExp::List(items, pos) = x else { return x.pos().err("expected a proof, `(<rule> ...)`") };
        let Some((head, args)) = items.split_first() else { return pos.err("empty proof") };
        let Some(tag) = head.word() else { return head.pos().err("expected a rule tag") };
        if tag == "the" {
            let [p, sub] = args else { return pos.err("expected `(the <proposition> <proof>)`") };
            let concl = self.elab.prop(p)?;
            let mut inner = self.proof(sub)?;
            if inner.conclusion.is_some() {
                return sub.pos().err("proof already annotated");
            }
            inner.conclusion = Some(concl);
            return Ok(inner);
        }
        if !TAGS.contains(&tag) {
            return head.pos().err(format!("unknown rule tag {tag}"));
        }
        // payload arguments come first, subproofs after
        let (payload, subs): (usize, usize) = match tag {
            "axiom" => (1, 0),
            "top_i" => (0, 0),
            "and_i" | "imp_e" => (0, 2),
            "or_e" => (2, 3),
            "imp_i" | "forall_i" | "forall_e" | "exists_i" => (1, 1),
            "exists_e" => (2, 2),
            _ => (0, 1),
        };
        if args.len() != payload + subs {
            return pos.err(format!("{tag} expects {} argument(s), got {}", payload + subs, args.len()));
        }
        let (pay, kids) = args.split_at(payload);
        let mut bound = None;
        let rule = match tag {
            "axiom" => Rule::Axiom(Self::label(&pay[0])?),
            "top_i" => Rule::TopIntro,
            "bot_e" => Rule::BotElim,
            "and_i" => Rule::AndIntro,
            "and_e_l" => Rule::AndElimLeft,
            "and_e_r" => Rule::AndElimRight,
            "or_i_l" => Rule::OrIntroLeft,
            "or_i_r" => Rule::OrIntroRight,
            "or_e" => Rule::OrElim(Self::label(&pay[0])?, Self::label(&pay[1])?),
            "imp_i" => Rule::ImpIntro(Self::label(&pay[0])?),
            "imp_e" => Rule::ImpElim,
            "forall_i" => {
                let v = self.elab.binder(&pay[0])?;
                bound = Some((v.clone(), 0));
                Rule::ForallIntro(v)
            }
            "forall_e" => Rule::ForallElim(self.elab.term(&pay[0], None)?),
            "exists_i" => Rule::ExistsIntro(self.elab.term(&pay[0], None)?),
            _ => {
                let v = self.elab.binder(&pay[0])?;
                bound = Some((v.clone(), 1));
                Rule::ExistsElim(v, Self::label(&pay[1])?)
            }
        };
        let mut children = Vec::new();
        for (i, k) in kids.iter().enumerate() {
            let scoped = matches!(&bound, Some((_, from)) if i >= *from);
            if scoped {
                self.elab.bound.push(bound.as_ref().expect("scoped binder").0.clone());
            }
            let c = self.proof(k);
            if scoped {
                self.elab.bound.pop();
            }
            children.push(c?);
        }
        Ok(ProofTree { rule, conclusion: None, children })
    }
}

/// Parses a proof tree. Witness terms and annotations are elaborated against
/// `sig`; eigenvariables scope over the subproofs they bind.
pub fn parse_proof(text: &str, sig: &Signature) -> Result<ProofTree, ParseError> {
    let x = single(text)?;
    ProofReader { elab: Elab::new(sig) }.proof(&x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arith() -> Signature {
        let mut s = Signature::new();
        s.add_sort("nat").unwrap();
        s.add_function("0", &[], "nat").unwrap();
        s.add_function("S", &["nat"], "nat").unwrap();
        s.add_function("+", &["nat", "nat"], "nat").unwrap();
        s.add_predicate("P", &["nat"]).unwrap();
        s
    }

    #[test]
    fn free_variables_take_the_sort_of_their_position() {
        let t = parse_term("(+ (S x) y)", &arith()).unwrap();
        assert_eq!(t, Term::app("+", vec![Term::app("S", vec![Term::var("x", "nat")]), Term::var("y", "nat")]));
    }

    #[test]
    fn constant_applied_to_an_argument_is_an_arity_error() {
        let e = parse_term("(0 x)", &arith()).unwrap_err();
        assert_eq!((e.line, e.col), (1, 1));
        assert!(e.message.contains("expects 0"), "{}", e.message);
    }

    #[test]
    fn binders_scope_over_their_body() {
        let p = parse_prop("(forall x:nat (P x))", &arith()).unwrap();
        assert_eq!(p, Proposition::forall(Var::new("x", "nat"), Proposition::atom("P", vec![Term::var("x", "nat")])));
    }

    #[test]
    fn truncated_input_reports_the_end_position() {
        let e = parse_proof("(imp_i \"h\"\n  (axiom \"h\")", &Signature::new()).unwrap_err();
        assert_eq!((e.line, e.col), (2, 14));
    }

    #[test]
    fn unknown_rule_tag() {
        let e = parse_proof("(imp_x \"h\" (axiom \"h\"))", &Signature::new()).unwrap_err();
        assert!(e.message.contains("unknown rule tag"));
    }

    #[test]
    fn proof_arity_mismatch() {
        let e = parse_proof("(imp_e (axiom \"h\"))", &Signature::new()).unwrap_err();
        assert!(e.message.contains("expects 2"));
    }

    #[test]
    fn identity_proof() {
        let p = parse_proof("(imp_i \"h\" (axiom \"h\"))", &Signature::new()).unwrap();
        assert_eq!(p, ProofTree::imp_intro("h", ProofTree::axiom("h")));
        assert_eq!(p.to_string(), "(imp_i \"h\" (axiom \"h\"))");
    }

    #[test]
    fn variable_lhs_rule_is_rejected() {
        let mut sig = Signature::new();
        sig.add_sort("i").unwrap();
        sig.add_function("f", &["i"], "i").unwrap();
        let e = parse_document("rule bad: x:i ~> (f x).", &sig).unwrap_err();
        assert!(e.message.contains("variable"), "{}", e.message);
    }

    #[test]
    fn empty_file_is_an_empty_document() {
        assert_eq!(parse_document("", &Signature::new()).unwrap(), Document::default());
        assert_eq!(parse_document("% only a comment\n", &Signature::new()).unwrap(), Document::default());
    }

    #[test]
    fn statement_errors_carry_positions() {
        let e = parse_document("sort nat.\nfunc S : nat -> .", &Signature::new()).unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_document("sort nat.\npred P : nat", &Signature::new()).unwrap_err();
        assert!(e.message.contains("missing '.'"));
    }

    #[test]
    fn undeclared_sort_is_a_signature_error() {
        let e = parse_document("func f : i -> i.", &Signature::new()).unwrap_err();
        assert!(e.message.contains("not declared"), "{}", e.message);
    }
}
