//! Command-line driver. Every command prints a report whose last line is
//! `#verdict: ...`; exit status 0 is a positive verdict, 1 a negative one,
//! 2 an error or an exceeded bound.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::kernel::{
    check_proof, commute_conversions, find_cuts, normalize_proof, CheckError, NormalizeError, ProofTree, Sequent,
};
use crate::parse::{parse_document, parse_expr, parse_expr_pair, parse_proof, parse_prop, ParseError};
use crate::prover::{consistency_probe_with, search_proof_with, SearchError, SearchOptions, SearchOutcome, SearchResult};
use crate::rewrite::{Trust, DEFAULT_FUEL};
use crate::syntax::Expr;
use crate::theories::{load_builtin, parse_theory, subformula_closure, ClosureStatus, Theory, TheoryError};
use crate::unify::{narrow_unify, unify_syntactic, NarrowBounds, UnificationProblem};

pub const DEFAULT_DEPTH: usize = 8;
pub const DEFAULT_CAP: usize = 16;

#[derive(Debug, Parser)]
#[command(name = "dedmod", version, about = "Rewrite-defined theories: checking, normalization, narrowing and proof search")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct TheoryArgs {
    /// Theory file.
    #[arg(long, value_name = "FILE", conflicts_with = "builtin")]
    pub theory: Option<PathBuf>,
    /// Builtin theory name (default: empty).
    #[arg(long, value_name = "NAME")]
    pub builtin: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct GoalArgs {
    /// Goal file: optional declarations, `hyp` statements and one `goal`.
    #[arg(long, value_name = "FILE", conflicts_with = "prop")]
    pub goal: Option<PathBuf>,
    /// Conclusion of a sequent with empty context.
    #[arg(long, value_name = "PROP")]
    pub prop: Option<String>,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Fuel {
    /// Rewrite steps per normalization (reductions, for `eliminate`).
    #[arg(long, default_value_t = DEFAULT_FUEL)]
    pub fuel: usize,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct SearchBounds {
    /// Rule applications per branch (narrowing steps, for `unify`).
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    pub depth: usize,
    #[arg(long, default_value_t = DEFAULT_FUEL)]
    pub fuel: usize,
    /// Maximum unifiers per narrowing call.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Check a proof against a goal.
    Check {
        #[command(flatten)]
        theory: TheoryArgs,
        #[command(flatten)]
        goal: GoalArgs,
        proof: PathBuf,
        #[command(flatten)]
        fuel: Fuel,
    },
    /// Print the normal form of a term or proposition.
    Normalize {
        #[command(flatten)]
        theory: TheoryArgs,
        expr: String,
        #[command(flatten)]
        fuel: Fuel,
    },
    /// Decide whether two expressions are congruent.
    Congruent {
        #[command(flatten)]
        theory: TheoryArgs,
        a: String,
        b: String,
        #[command(flatten)]
        fuel: Fuel,
    },
    /// Unifiers of two expressions modulo the rules.
    Unify {
        #[command(flatten)]
        theory: TheoryArgs,
        a: String,
        b: String,
        #[command(flatten)]
        bounds: SearchBounds,
    },
    /// Search for a cut-free proof.
    Prove {
        #[command(flatten)]
        theory: TheoryArgs,
        #[command(flatten)]
        goal: GoalArgs,
        #[command(flatten)]
        bounds: SearchBounds,
    },
    /// List the cuts of a proof.
    Cuts {
        #[command(flatten)]
        theory: TheoryArgs,
        #[command(flatten)]
        goal: GoalArgs,
        proof: PathBuf,
        #[command(flatten)]
        fuel: Fuel,
    },
    /// Reduce cuts until none remain.
    Eliminate {
        #[command(flatten)]
        theory: TheoryArgs,
        #[command(flatten)]
        goal: GoalArgs,
        proof: PathBuf,
        /// Also permute eliminations into disjunction and existential branches.
        #[arg(long)]
        commute: bool,
        #[command(flatten)]
        fuel: Fuel,
    },
    /// Report rule shapes, confluence and termination.
    Validate {
        #[command(flatten)]
        theory: TheoryArgs,
    },
    /// Subformula closure modulo the rules.
    Subformulae {
        #[command(flatten)]
        theory: TheoryArgs,
        prop: String,
        #[command(flatten)]
        fuel: Fuel,
    },
    /// Search for a proof of bot.
    Probe {
        #[command(flatten)]
        theory: TheoryArgs,
        #[command(flatten)]
        bounds: SearchBounds,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub code: i32,
    pub text: String,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{}:{}: {}", .source.line, .source.col, .source.message)]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Theory(#[from] TheoryError),
    #[error("{0}")]
    Search(#[from] SearchError),
    #[error("{0}")]
    Usage(String),
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn in_file(path: &str) -> impl Fn(ParseError) -> CliError + '_ {
    move |source| CliError::Parse { path: path.to_string(), source }
}

fn load_theory(args: &TheoryArgs) -> Result<Theory, CliError> {
    match (&args.theory, &args.builtin) {
        (Some(path), _) => {
            let name = path.file_stem().map_or("theory".into(), |s| s.to_string_lossy().into_owned());
            match parse_theory(&name, &read(path)?) {
                Err(TheoryError::Parse(source)) => Err(CliError::Parse { path: path.display().to_string(), source }),
                other => Ok(other?),
            }
        }
        (None, Some(name)) => Ok(load_builtin(name)?),
        (None, None) => Ok(load_builtin("empty")?),
    }
}

/// The sequent to prove; goal files may declare extra symbols, which are
/// added to the theory's signature.
fn load_goal(theory: Theory, args: &GoalArgs) -> Result<(Theory, Sequent), CliError> {
    match (&args.goal, &args.prop) {
        (Some(path), _) => {
            let p = path.display().to_string();
            let doc = parse_document(&read(path)?, &theory.signature).map_err(in_file(&p))?;
            if !doc.rules.is_empty() {
                return Err(CliError::Usage(format!("{p}: goal files contain no rules")));
            }
            let [conclusion] = &doc.goals[..] else {
                return Err(CliError::Usage(format!("{p}: expected exactly one goal")));
            };
            let seq = Sequent::new(doc.hypotheses.clone(), conclusion.clone())
                .map_err(|e| CliError::Usage(format!("{p}: duplicate hypothesis {}", e.0)))?;
            let mut theory = theory;
            theory.signature = doc.signature;
            Ok((theory, seq))
        }
        (None, Some(text)) => {
            let p = parse_prop(text, &theory.signature).map_err(in_file("<prop>"))?;
            Ok((theory, Sequent::goal(p)))
        }
        (None, None) => Err(CliError::Usage("a goal is required: --goal FILE or --prop PROP".into())),
    }
}

fn load_proof(theory: &Theory, path: &Path) -> Result<ProofTree, CliError> {
    let p = path.display().to_string();
    parse_proof(&read(path)?, &theory.signature).map_err(in_file(&p))
}

struct Out {
    text: String,
}

impl Out {
    fn line(&mut self, s: impl std::fmt::Display) {
        let _ = writeln!(self.text, "{s}");
    }

    fn verdict(mut self, code: i32, v: impl std::fmt::Display) -> Report {
        self.line(format_args!("#verdict: {v}"));
        Report { code, text: self.text }
    }
}

fn trust_line(out: &mut Out, theory: &Theory) {
    if theory.system.trust() == Trust::Heuristic {
        out.line("trust: heuristic (the rules lack a termination or confluence certificate)");
    }
    for k in &theory.known_negative {
        out.line(format_args!("note: {k}"));
    }
}

fn check_verdict(out: Out, e: &CheckError) -> Report {
    let mut out = out;
    out.line(format_args!("error: {e}"));
    match e {
        CheckError::Fuel { .. } => out.verdict(2, "fuel-exhausted"),
        _ => out.verdict(1, "rejected"),
    }
}

fn search_report(mut out: Out, r: SearchResult, positive: &str, proved_code: i32) -> Report {
    out.line(format_args!("nodes: {}", r.stats.nodes));
    out.line(format_args!("narrowing calls: {}", r.stats.narrowing_calls));
    match r.outcome {
        SearchOutcome::Proved(p) => {
            out.line(p.minimal_annotations());
            out.verdict(proved_code, if proved_code == 0 { "proved" } else { "inconsistent" })
        }
        SearchOutcome::Fail => out.verdict(if proved_code == 0 { 1 } else { 0 }, positive),
        SearchOutcome::BoundExceeded => out.verdict(2, "bound-exceeded"),
    }
}

fn run(cmd: &Command) -> Result<Report, CliError> {
    let mut out = Out { text: String::new() };
    let report = match cmd {
        Command::Check { theory, goal, proof, fuel } => {
            let (t, seq) = load_goal(load_theory(theory)?, goal)?;
            let proof = load_proof(&t, proof)?;
            trust_line(&mut out, &t);
            match check_proof(&t, &proof, &seq, fuel.fuel) {
                Ok(c) => {
                    out.line(&c.proof);
                    out.verdict(0, "checked")
                }
                Err(e) => check_verdict(out, &e),
            }
        }
        Command::Normalize { theory, expr, fuel } => {
            let t = load_theory(theory)?;
            let e = parse_expr(expr, &t.signature).map_err(in_file("<expr>"))?;
            match t.system.normalize(&e, fuel.fuel) {
                Ok(n) => {
                    out.line(format_args!("steps: {}", n.steps));
                    out.line(&n.value);
                    out.verdict(0, "normal-form")
                }
                Err(e) => out.verdict(2, format_args!("fuel-exhausted after {} steps", e.steps)),
            }
        }
        Command::Congruent { theory, a, b, fuel } => {
            let t = load_theory(theory)?;
            let (x, y) = parse_expr_pair(a, b, &t.signature).map_err(in_file("<expr>"))?;
            let same_kind = matches!((&x, &y), (Expr::Term(_), Expr::Term(_)) | (Expr::Prop(_), Expr::Prop(_)));
            if !same_kind {
                return Err(CliError::Usage("cannot compare a term with a proposition".into()));
            }
            trust_line(&mut out, &t);
            match t.system.congruent(&x, &y, fuel.fuel) {
                Ok(c) if c.equal => out.verdict(0, "congruent"),
                Ok(_) => out.verdict(1, "not-congruent"),
                Err(e) => out.verdict(2, format_args!("fuel-exhausted after {} steps", e.steps)),
            }
        }
        Command::Unify { theory, a, b, bounds } => {
            let t = load_theory(theory)?;
            let (x, y) = parse_expr_pair(a, b, &t.signature).map_err(in_file("<expr>"))?;
            match unify_syntactic(&x, &y) {
                Some(s) => out.line(format_args!("syntactic: {s}")),
                None => out.line("syntactic: none"),
            }
            let problem = UnificationProblem::new(x, y);
            let nb = NarrowBounds { depth: bounds.depth, cap: bounds.cap };
            match narrow_unify(&t.system, &problem, nb) {
                Ok(stream) => {
                    for s in &stream.solutions {
                        out.line(s);
                    }
                    let n = stream.solutions.len();
                    let how = if stream.is_complete() { "complete" } else { "incomplete" };
                    let code = match (n, stream.is_complete()) {
                        (0, true) => 1,
                        (0, false) => 2,
                        _ => 0,
                    };
                    out.verdict(code, format_args!("unifiers {n} {how}"))
                }
                Err(e) => {
                    out.line(format_args!("error: {e}"));
                    out.verdict(2, "error")
                }
            }
        }
        Command::Prove { theory, goal, bounds } => {
            let (t, seq) = load_goal(load_theory(theory)?, goal)?;
            trust_line(&mut out, &t);
            let r = search_proof_with(&t, &seq, options(bounds))?;
            search_report(out, r, "fail", 0)
        }
        Command::Cuts { theory, goal, proof, fuel } => {
            let (t, seq) = load_goal(load_theory(theory)?, goal)?;
            let proof = load_proof(&t, proof)?;
            match find_cuts(&t, &seq, &proof, fuel.fuel) {
                Ok(r) if r.is_cut_free() => out.verdict(0, "cut-free"),
                Ok(r) => {
                    for c in &r.cuts {
                        out.line(c);
                    }
                    out.verdict(1, format_args!("cuts {}", r.cuts.len()))
                }
                Err(e) => check_verdict(out, &e),
            }
        }
        Command::Eliminate { theory, goal, proof, commute, fuel } => {
            let (t, seq) = load_goal(load_theory(theory)?, goal)?;
            let proof = load_proof(&t, proof)?;
            trust_line(&mut out, &t);
            let r = if *commute {
                commute_conversions(&t, &seq, &proof, fuel.fuel)
            } else {
                normalize_proof(&t, &seq, &proof, fuel.fuel)
            };
            match r {
                Ok(n) => {
                    out.line(format_args!("reductions: {}", n.steps));
                    if *commute {
                        out.line(format_args!("permutations: {}", n.permutations));
                    }
                    out.line(n.proof.minimal_annotations());
                    out.verdict(0, "cut-free")
                }
                Err(NormalizeError::FuelExhausted { steps, .. }) => {
                    out.verdict(2, format_args!("fuel-exhausted after {steps} reductions"))
                }
                Err(NormalizeError::Check(e)) => check_verdict(out, &e),
                Err(e) => {
                    out.line(format_args!("error: {e}"));
                    out.verdict(2, "error")
                }
            }
        }
        Command::Validate { theory } => {
            let t = load_theory(theory)?;
            let Some(r) = &t.report else { return Err(CliError::Usage("theory was not validated".into())) };
            out.line(r.to_string().trim_end());
            trust_line(&mut out, &t);
            if r.non_confusing && r.locally_confluent() && r.terminating() {
                out.verdict(0, "convergent")
            } else {
                out.verdict(1, "not-convergent")
            }
        }
        Command::Subformulae { theory, prop, fuel } => {
            let t = load_theory(theory)?;
            let p = parse_prop(prop, &t.signature).map_err(in_file("<prop>"))?;
            let s = subformula_closure(&t, &p, fuel.fuel);
            for c in &s.classes {
                out.line(format_args!("[{c}]"));
            }
            let n = s.classes.len();
            match s.status {
                ClosureStatus::Closed => out.verdict(0, format_args!("closed {n}")),
                ClosureStatus::InfiniteSchematic => out.verdict(0, format_args!("infinite-schematic {n}")),
                ClosureStatus::Truncated => out.verdict(2, format_args!("truncated {n}")),
            }
        }
        Command::Probe { theory, bounds } => {
            let t = load_theory(theory)?;
            let r = consistency_probe_with(&t, options(bounds))?;
            search_report(out, r, &format!("consistent-at-depth {}", bounds.depth), 1)
        }
    };
    Ok(report)
}

/// Narrowing keeps its default depth inside proof search; `--depth` bounds the
/// search itself.
fn options(b: &SearchBounds) -> SearchOptions {
    let narrowing = NarrowBounds { cap: b.cap, ..NarrowBounds::default() };
    SearchOptions { depth: b.depth, fuel: b.fuel, narrowing }
}

/// Runs one command. Errors become a report with exit status 2.
pub fn run_command(cmd: &Command) -> Report {
    run(cmd).unwrap_or_else(|e| Out { text: format!("error: {e}\n") }.verdict(2, "error"))
}

/// Parses `args` (program name first) and runs the command.
pub fn run_args<I, T>(args: I) -> Report
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run_command(&cli.command),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            Report { code, text: e.to_string() }
        }
    }
}
