//! Command-line front end.
//!
//! Every verb parses and canonicalizes its expression first (inline text,
//! or `@path` to read a file) and requires it to be closed. Exit codes:
//! 0 = accept/success, 1 = reject (or check failures), 2 = error/unknown.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser as CliParser, Subcommand};

use crate::error::Error;
use crate::ipd::{self, Classifier, Form, StackForm};
use crate::nullability::{null, NullEnv};
use crate::oracle;
use crate::pda::{build_nfa, build_pda, BfsOutcome, Pda};
use crate::syntax::{parse, words_up_to, Expr, Subst, Symbol, Word};

#[derive(CliParser)]
#[command(name = "muregex", version, about = "Partial derivatives of mu-regular expressions")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether the empty word belongs to the language
    Null {
        /// Expression (or @path to read it from a file)
        expr: String,
    },
    /// Print the partial derivative, one stack per line
    #[command(group(ArgGroup::new("alpha").required(true)))]
    Deriv {
        /// Derive by this symbol
        #[arg(long, value_name = "SYM", group = "alpha")]
        sym: Option<char>,
        /// Take the spontaneous (empty-word) derivative
        #[arg(long, group = "alpha")]
        eps: bool,
        expr: String,
    },
    /// List the iterated partial derivatives with their form tags
    Ipd {
        /// Print only the number of elements
        #[arg(long)]
        stats: bool,
        expr: String,
    },
    /// Build the pushdown automaton and print its table
    Pda {
        expr: String,
        /// Also write a Graphviz rendering to this path
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// Build the Antimirov NFA of a mu-free expression
    Nfa { expr: String },
    /// Decide membership via the automaton (grammar-backed, exact)
    Match {
        expr: String,
        /// Input word; pass "" for the empty word
        word: String,
    },
    /// Run the bounded configuration search, printing visited configurations
    Trace {
        expr: String,
        word: String,
        /// Maximum number of configurations to expand
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
    },
    /// Enumerate the language up to a length bound
    Enum {
        expr: String,
        #[arg(long = "maxlen", default_value_t = 6)]
        max_len: usize,
    },
    /// Print the equivalent context-free grammar
    ToCfg { expr: String },
    /// Decide membership via the grammar oracle only
    OracleMatch { expr: String, word: String },
    /// Run the differential battery over a corpus file (one expression per
    /// line, # comments)
    Check {
        corpus: PathBuf,
        #[arg(long = "maxlen", default_value_t = 6)]
        max_len: usize,
    },
}

/// Run the CLI on the given arguments, writing to `out`/`err`; returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    2
                }
            }
        }
    };
    match dispatch(cli.cmd, out) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {}", msg);
            2
        }
    }
}

fn load_text(source: &str) -> Result<String, String> {
    match source.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| format!("cannot read {}: {}", path, e)),
        None => Ok(source.to_string()),
    }
}

fn load_expr(source: &str) -> Result<Expr, String> {
    let text = load_text(source)?;
    let raw = parse(text.trim()).map_err(|e| e.to_string())?;
    let t = raw.canonicalize();
    if let Some(&x) = t.free_vars().iter().next() {
        return Err(format!("expression has a free variable {}", x));
    }
    Ok(t)
}

fn parse_word(text: &str) -> Result<Word, String> {
    text.parse::<Word>().map_err(|e| e.to_string())
}

fn fail(e: Error) -> String {
    e.to_string()
}

fn dispatch(cmd: Cmd, out: &mut dyn Write) -> Result<i32, String> {
    match cmd {
        Cmd::Null { expr } => {
            let t = load_expr(&expr)?;
            let b = null(&t, &NullEnv::new()).map_err(fail)?;
            let _ = writeln!(out, "{}", b);
            Ok(if b { 0 } else { 1 })
        }
        Cmd::Deriv { sym, eps, expr } => {
            let t = load_expr(&expr)?;
            let alpha = if eps {
                None
            } else {
                Some(Symbol::new(sym.unwrap()).map_err(fail)?)
            };
            let d = crate::derivative::pderiv(alpha, &Subst::new(), &NullEnv::new(), &t).map_err(fail)?;
            for stack in d.iter() {
                let _ = writeln!(out, "{}", stack);
            }
            Ok(0)
        }
        Cmd::Ipd { stats, expr } => {
            let t = load_expr(&expr)?;
            let set = ipd::ipd(&t).map_err(fail)?;
            if stats {
                let _ = writeln!(out, "{}", set.len());
            } else {
                let classifier = Classifier::new(&t).map_err(fail)?;
                for e in set.iter() {
                    let _ = writeln!(out, "{}\t{}", e, classifier.classify(e));
                }
            }
            Ok(0)
        }
        Cmd::Pda { expr, dot } => {
            let t = load_expr(&expr)?;
            let p = build_pda(&t).map_err(fail)?;
            print_pda(&p, out);
            if let Some(path) = dot {
                fs::write(&path, p.to_dot()).map_err(|e| format!("cannot write {}: {}", path.display(), e))?;
            }
            Ok(0)
        }
        Cmd::Nfa { expr } => {
            let t = load_expr(&expr)?;
            let n = build_nfa(&t).map_err(fail)?;
            let _ = writeln!(out, "states:");
            for (i, q) in n.states().iter().enumerate() {
                let marker = if n.finals()[i] { " [final]" } else { "" };
                let _ = writeln!(out, "q{} = {}{}", i, q, marker);
            }
            let _ = writeln!(out, "delta:");
            for (from, a, to) in n.delta() {
                let _ = writeln!(out, "{} q{} -> q{}", a, from, to);
            }
            Ok(0)
        }
        Cmd::Match { expr, word } => {
            let t = load_expr(&expr)?;
            let w = parse_word(&word)?;
            let accept = build_pda(&t).map_err(fail)?.accepts(&w);
            let _ = writeln!(out, "{}", if accept { "accept" } else { "reject" });
            Ok(if accept { 0 } else { 1 })
        }
        Cmd::Trace { expr, word, budget } => {
            let t = load_expr(&expr)?;
            let w = parse_word(&word)?;
            let p = build_pda(&t).map_err(fail)?;
            let gamma = p.gamma().to_vec();
            let mut lines = Vec::new();
            let outcome = p.accepts_bfs_traced(&w, budget, &mut |c| {
                let stack: Vec<String> = c.stack.iter().map(|&i| gamma[i].to_string()).collect();
                lines.push(format!("[{}] ⊢ {}", stack.join(", "), c.remaining));
            });
            for line in lines {
                let _ = writeln!(out, "{}", line);
            }
            let _ = writeln!(out, "{}", outcome);
            Ok(match outcome {
                BfsOutcome::Accept => 0,
                BfsOutcome::Reject => 1,
                BfsOutcome::Unknown => 2,
            })
        }
        Cmd::Enum { expr, max_len } => {
            let t = load_expr(&expr)?;
            let words = oracle::enumerate(&t, max_len).map_err(fail)?;
            for w in &words.words {
                let _ = writeln!(out, "{}", w);
            }
            Ok(0)
        }
        Cmd::ToCfg { expr } => {
            let t = load_expr(&expr)?;
            let g = oracle::mu_to_grammar(&t).map_err(fail)?;
            let _ = write!(out, "{}", g.to_text());
            Ok(0)
        }
        Cmd::OracleMatch { expr, word } => {
            let t = load_expr(&expr)?;
            let w = parse_word(&word)?;
            let accept = oracle::member(&t, &w).map_err(fail)?;
            let _ = writeln!(out, "{}", if accept { "accept" } else { "reject" });
            Ok(if accept { 0 } else { 1 })
        }
        Cmd::Check { corpus, max_len } => run_check(&corpus, max_len, out),
    }
}

fn print_pda(p: &Pda, out: &mut dyn Write) {
    let alphabet: Vec<String> = p.alphabet().iter().map(|a| a.to_string()).collect();
    let _ = writeln!(out, "alphabet: {}", alphabet.join(" "));
    let _ = writeln!(out, "z0: g{}", p.z0());
    let _ = writeln!(out, "gamma:");
    for (i, e) in p.gamma().iter().enumerate() {
        let _ = writeln!(out, "g{} = {}", i, e);
    }
    let _ = writeln!(out, "delta:");
    for t in p.delta() {
        let input = t.input.map(|a| a.to_string()).unwrap_or_else(|| "eps".into());
        let push: Vec<String> = t.push.iter().map(|i| format!("g{}", i)).collect();
        let _ = writeln!(out, "{} g{} -> [{}]", input, t.pop, push.join(", "));
    }
}

/// The differential battery: automaton vs oracle on all short words, NFA
/// agreement on mu-free entries, and form classification over the
/// iterated derivatives.
fn run_check(path: &Path, max_len: usize, out: &mut dyn Write) -> Result<i32, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {}", path.display(), e))?;
    let mut checked = 0usize;
    let mut failed = 0usize;
    for (lineno, raw_line) in text.lines().enumerate() {
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let t = parse(line)
            .map_err(|e| format!("{}:{}: {}", path.display(), lineno + 1, e))?
            .canonicalize();
        if let Some(&x) = t.free_vars().iter().next() {
            return Err(format!("{}:{}: free variable {}", path.display(), lineno + 1, x));
        }
        checked += 1;

        let p = build_pda(&t).map_err(fail)?;
        let g = oracle::mu_to_grammar(&t).map_err(fail)?;
        let alphabet: Vec<Symbol> = t.symbols().into_iter().collect();
        let words = words_up_to(&alphabet, max_len);

        let mut mismatch = None;
        for w in &words {
            let by_pda = p.accepts(w);
            let by_oracle = oracle::recognize(&g, w);
            if by_pda != by_oracle {
                mismatch = Some((w.clone(), by_pda, by_oracle));
                break;
            }
        }
        match mismatch {
            None => {
                let _ = writeln!(out, "ok   {}  pda-oracle  words={}", line, words.len());
            }
            Some((w, by_pda, by_oracle)) => {
                failed += 1;
                let _ = writeln!(
                    out,
                    "FAIL {}  pda-oracle  word={} pda={} oracle={}",
                    line, w, by_pda, by_oracle
                );
            }
        }

        if t.is_mu_free() {
            let n = build_nfa(&t).map_err(fail)?;
            let mut mismatch = None;
            for w in &words {
                let by_nfa = n.accepts(w);
                let by_pda = p.accepts(w);
                if by_nfa != by_pda {
                    mismatch = Some((w.clone(), by_nfa, by_pda));
                    break;
                }
            }
            match mismatch {
                None => {
                    let _ = writeln!(out, "ok   {}  nfa-agree  words={}", line, words.len());
                }
                Some((w, by_nfa, by_pda)) => {
                    failed += 1;
                    let _ = writeln!(
                        out,
                        "FAIL {}  nfa-agree  word={} nfa={} pda={}",
                        line, w, by_nfa, by_pda
                    );
                }
            }
        }

        let set = ipd::ipd(&t).map_err(fail)?;
        let classifier = Classifier::new(&t).map_err(fail)?;
        let mut bad = None;
        'forms: for e in set.iter() {
            if matches!(classifier.classify(e), Form::Other) {
                bad = Some(format!("element {} has no top/rec form", e));
                break;
            }
            for a in &alphabet {
                let d = crate::derivative::pderiv(Some(*a), &Subst::new(), &NullEnv::new(), e)
                    .map_err(fail)?;
                for stack in d.iter() {
                    if classifier.stack_form(stack) != StackForm::TopPlus {
                        bad = Some(format!("stack {} of d_{}({}) is not top+", stack, a, e));
                        break 'forms;
                    }
                }
            }
            let d = crate::derivative::pderiv(None, &Subst::new(), &NullEnv::new(), e).map_err(fail)?;
            for stack in d.iter() {
                if classifier.stack_form(stack) != StackForm::RecTopStar {
                    bad = Some(format!("stack {} of d_eps({}) is not rec.top*", stack, e));
                    break 'forms;
                }
            }
        }
        match bad {
            None => {
                let _ = writeln!(out, "ok   {}  forms  ipd={}", line, set.len());
            }
            Some(reason) => {
                failed += 1;
                let _ = writeln!(out, "FAIL {}  forms  {}", line, reason);
            }
        }
    }
    let _ = writeln!(out, "summary: {} checked, {} failed", checked, failed);
    Ok(if failed > 0 { 1 } else { 0 })
}
