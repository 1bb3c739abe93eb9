//! Independent ground truth for recognition.
//!
//! The oracle is deliberately derivative-free: expressions are translated
//! structurally into a context-free grammar and words are decided with a
//! chart recognizer, so a bug in the derivative machinery cannot mask
//! itself here.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::Error;
use crate::syntax::{words_up_to, Expr, ExprNode, Symbol, VarId, Word};

mod earley;
mod membership;

pub use membership::{check_membership_rules, check_membership_rules_capped, DEFAULT_MEMBERSHIP_CAP};

/// One grammar symbol: a terminal or a nonterminal index.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GrammarSym {
    Terminal(Symbol),
    Nonterminal(usize),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Production {
    pub head: usize,
    pub body: Vec<GrammarSym>,
}

/// A context-free grammar with indexed nonterminals.
#[derive(Clone)]
pub struct Grammar {
    nonterminals: Vec<String>,
    terminals: BTreeSet<Symbol>,
    productions: Vec<Production>,
    start: usize,
    by_head: Vec<Vec<usize>>,
}

impl Grammar {
    pub fn new(
        nonterminals: Vec<String>,
        terminals: BTreeSet<Symbol>,
        productions: Vec<Production>,
        start: usize,
    ) -> Result<Grammar, Error> {
        let n = nonterminals.len();
        if start >= n {
            return Err(Error::BadGrammar(format!("start nonterminal {} not declared", start)));
        }
        for p in &productions {
            if p.head >= n {
                return Err(Error::BadGrammar(format!("production head {} not declared", p.head)));
            }
            for sym in &p.body {
                match sym {
                    GrammarSym::Nonterminal(i) if *i >= n => {
                        return Err(Error::BadGrammar(format!("nonterminal {} not declared", i)))
                    }
                    GrammarSym::Terminal(s) if !terminals.contains(s) => {
                        return Err(Error::BadGrammar(format!("terminal {} not declared", s)))
                    }
                    _ => {}
                }
            }
        }
        let mut by_head = vec![Vec::new(); n];
        for (i, p) in productions.iter().enumerate() {
            by_head[p.head].push(i);
        }
        Ok(Grammar { nonterminals, terminals, productions, start, by_head })
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn nonterminal_count(&self) -> usize {
        self.nonterminals.len()
    }

    pub fn nonterminal_name(&self, i: usize) -> &str {
        &self.nonterminals[i]
    }

    pub fn terminals(&self) -> &BTreeSet<Symbol> {
        &self.terminals
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    pub fn productions_of(&self, head: usize) -> &[usize] {
        &self.by_head[head]
    }

    /// Nonterminals that derive the empty word, by fixpoint iteration.
    pub fn nullable_set(&self) -> Vec<bool> {
        let mut nullable = vec![false; self.nonterminals.len()];
        loop {
            let mut changed = false;
            for p in &self.productions {
                if nullable[p.head] {
                    continue;
                }
                let all = p.body.iter().all(|sym| match sym {
                    GrammarSym::Terminal(_) => false,
                    GrammarSym::Nonterminal(i) => nullable[*i],
                });
                if all {
                    nullable[p.head] = true;
                    changed = true;
                }
            }
            if !changed {
                return nullable;
            }
        }
    }

    /// One `N -> body` line per production, `%eps` for an empty body,
    /// productions grouped by nonterminal with the start symbol first.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut order: Vec<usize> = (0..self.nonterminals.len()).collect();
        order.sort_by_key(|&i| (i != self.start, i));
        for head in order {
            for &pi in &self.by_head[head] {
                let p = &self.productions[pi];
                out.push_str(&self.nonterminals[head]);
                out.push_str(" ->");
                if p.body.is_empty() {
                    out.push_str(" %eps");
                } else {
                    for sym in &p.body {
                        out.push(' ');
                        match sym {
                            GrammarSym::Terminal(s) => out.push(s.as_char()),
                            GrammarSym::Nonterminal(i) => out.push_str(&self.nonterminals[*i]),
                        }
                    }
                }
                out.push('\n');
            }
        }
        out
    }

    /// Parse the `to_text` line format. Nonterminal tokens are `N<index>`;
    /// single lowercase letters are terminals; `%eps` alone denotes an
    /// empty body. The start symbol is `N0`.
    pub fn from_text(text: &str) -> Result<Grammar, Error> {
        fn nt_index(tok: &str) -> Option<usize> {
            let rest = tok.strip_prefix('N')?;
            if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            rest.parse().ok()
        }
        let mut max_nt = 0usize;
        let mut terminals = BTreeSet::new();
        let mut productions = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut toks = line.split_whitespace();
            let head_tok = toks.next().unwrap();
            let head = nt_index(head_tok).ok_or_else(|| Error::Parse {
                line: lineno + 1,
                col: 1,
                msg: format!("expected a nonterminal N<i>, found {:?}", head_tok),
            })?;
            max_nt = max_nt.max(head);
            if toks.next() != Some("->") {
                return Err(Error::Parse {
                    line: lineno + 1,
                    col: 1,
                    msg: "expected `->` after the nonterminal".into(),
                });
            }
            let rest: Vec<&str> = toks.collect();
            let body = if rest == ["%eps"] {
                Vec::new()
            } else {
                let mut body = Vec::with_capacity(rest.len());
                for tok in rest {
                    if let Some(i) = nt_index(tok) {
                        max_nt = max_nt.max(i);
                        body.push(GrammarSym::Nonterminal(i));
                    } else if tok.len() == 1 {
                        let s = Symbol::new(tok.chars().next().unwrap()).map_err(|_| Error::Parse {
                            line: lineno + 1,
                            col: 1,
                            msg: format!("invalid terminal {:?}", tok),
                        })?;
                        terminals.insert(s);
                        body.push(GrammarSym::Terminal(s));
                    } else {
                        return Err(Error::Parse {
                            line: lineno + 1,
                            col: 1,
                            msg: format!("unrecognized token {:?}", tok),
                        });
                    }
                }
                body
            };
            productions.push(Production { head, body });
        }
        let nonterminals = (0..=max_nt).map(|i| format!("N{}", i)).collect();
        Grammar::new(nonterminals, terminals, productions, 0)
    }
}

impl fmt::Debug for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// True iff `w` is generated by `g`. Total: the chart recognizer handles
/// ε-productions and left recursion.
pub fn recognize(g: &Grammar, w: &Word) -> bool {
    earley::recognize(g, w)
}

struct GrammarBuilder {
    names: Vec<String>,
    productions: Vec<Production>,
    binder_nt: HashMap<VarId, usize>,
}

impl GrammarBuilder {
    fn alloc(&mut self) -> usize {
        let id = self.names.len();
        self.names.push(format!("N{}", id));
        id
    }

    fn build(&mut self, e: &Expr) -> Result<usize, Error> {
        if let ExprNode::Var(x) = e.node() {
            return self.binder_nt.get(x).copied().ok_or(Error::UnboundVariable(*x));
        }
        let id = self.alloc();
        match e.node() {
            ExprNode::EmptySet => {}
            ExprNode::EmptyWord => self.productions.push(Production { head: id, body: vec![] }),
            ExprNode::Sym(s) => self
                .productions
                .push(Production { head: id, body: vec![GrammarSym::Terminal(*s)] }),
            ExprNode::Alt(l, r) => {
                let nl = self.build(l)?;
                let nr = self.build(r)?;
                self.productions.push(Production { head: id, body: vec![GrammarSym::Nonterminal(nl)] });
                self.productions.push(Production { head: id, body: vec![GrammarSym::Nonterminal(nr)] });
            }
            ExprNode::Cat(l, r) => {
                let nl = self.build(l)?;
                let nr = self.build(r)?;
                self.productions.push(Production {
                    head: id,
                    body: vec![GrammarSym::Nonterminal(nl), GrammarSym::Nonterminal(nr)],
                });
            }
            ExprNode::Star(b) => {
                let nb = self.build(b)?;
                self.productions.push(Production { head: id, body: vec![] });
                self.productions.push(Production {
                    head: id,
                    body: vec![GrammarSym::Nonterminal(nb), GrammarSym::Nonterminal(id)],
                });
            }
            ExprNode::Mu(x, b) => {
                if self.binder_nt.insert(*x, id).is_some() {
                    return Err(Error::DuplicateBinder(*x));
                }
                let nb = self.build(b)?;
                self.productions.push(Production { head: id, body: vec![GrammarSym::Nonterminal(nb)] });
            }
            ExprNode::Var(_) => unreachable!(),
        }
        Ok(id)
    }
}

/// Structural translation to a grammar of linear size: one nonterminal per
/// subexpression, with `mu x. b` and the occurrences of `x` sharing the
/// binder's nonterminal. Requires a closed expression with distinct
/// binders (canonicalize first).
pub fn mu_to_grammar(r: &Expr) -> Result<Grammar, Error> {
    if let Some(&x) = r.free_vars().iter().next() {
        return Err(Error::NotClosed(x));
    }
    let mut b = GrammarBuilder { names: Vec::new(), productions: Vec::new(), binder_nt: HashMap::new() };
    let start = b.build(r)?;
    debug_assert_eq!(start, 0);
    let mut productions = b.productions;
    productions.sort_by_key(|p| p.head);
    Grammar::new(b.names, r.symbols(), productions, start)
}

/// Ground-truth membership: translate to a grammar and run the recognizer.
pub fn member(r: &Expr, w: &Word) -> Result<bool, Error> {
    let g = mu_to_grammar(&r.canonicalize())?;
    Ok(recognize(&g, w))
}

/// A finite window onto a language: exactly the members of length at most
/// `max_len` over the symbols of the source expression.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WordSet {
    pub words: BTreeSet<Word>,
    pub max_len: usize,
}

impl WordSet {
    pub fn contains(&self, w: &Word) -> bool {
        self.words.contains(w)
    }
}

/// Cap on enumeration length; `enumerate_capped` takes an explicit one.
pub const DEFAULT_ENUM_CAP: usize = 10;

pub fn enumerate(r: &Expr, max_len: usize) -> Result<WordSet, Error> {
    enumerate_capped(r, max_len, DEFAULT_ENUM_CAP)
}

pub fn enumerate_capped(r: &Expr, max_len: usize, cap: usize) -> Result<WordSet, Error> {
    if max_len > cap {
        return Err(Error::EnumCapExceeded { requested: max_len, cap });
    }
    let t = r.canonicalize();
    let g = mu_to_grammar(&t)?;
    let alphabet: Vec<Symbol> = t.symbols().into_iter().collect();
    let words = words_up_to(&alphabet, max_len)
        .into_iter()
        .filter(|w| recognize(&g, w))
        .collect();
    Ok(WordSet { words, max_len })
}

/// Enumeration for an expression with free variables, each interpreted as
/// a given finite language. Binders must be bound at most once and every
/// free variable must be covered by `env`.
pub fn enumerate_with_env(
    r: &Expr,
    env: &BTreeMap<VarId, BTreeSet<Word>>,
    max_len: usize,
) -> Result<WordSet, Error> {
    enumerate_with_env_capped(r, env, max_len, DEFAULT_ENUM_CAP)
}

pub fn enumerate_with_env_capped(
    r: &Expr,
    env: &BTreeMap<VarId, BTreeSet<Word>>,
    max_len: usize,
    cap: usize,
) -> Result<WordSet, Error> {
    if max_len > cap {
        return Err(Error::EnumCapExceeded { requested: max_len, cap });
    }
    for x in r.free_vars() {
        if !env.contains_key(&x) {
            return Err(Error::UnboundVariable(x));
        }
    }
    let mut b = GrammarBuilder { names: Vec::new(), productions: Vec::new(), binder_nt: HashMap::new() };
    let mut terminals: BTreeSet<Symbol> = r.symbols();
    for (x, words) in env {
        let id = b.alloc();
        b.binder_nt.insert(*x, id);
        for w in words {
            terminals.extend(w.symbols().iter().copied());
            b.productions.push(Production {
                head: id,
                body: w.symbols().iter().map(|s| GrammarSym::Terminal(*s)).collect(),
            });
        }
    }
    let start = b.build(r)?;
    let g = Grammar::new(b.names, terminals.clone(), b.productions, start)?;
    let alphabet: Vec<Symbol> = terminals.into_iter().collect();
    let words = words_up_to(&alphabet, max_len)
        .into_iter()
        .filter(|w| recognize(&g, w))
        .collect();
    Ok(WordSet { words, max_len })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn e(text: &str) -> Expr {
        parse(text).unwrap().canonicalize()
    }

    fn w(text: &str) -> Word {
        text.parse().unwrap()
    }

    #[test]
    fn grammar_for_single_symbol() {
        let g = mu_to_grammar(&e("a")).unwrap();
        assert_eq!(g.nonterminal_count(), 1);
        assert_eq!(g.productions().len(), 1);
        assert_eq!(g.productions()[0].body, vec![GrammarSym::Terminal(Symbol::new('a').unwrap())]);
        assert!(recognize(&g, &w("a")));
        assert!(!recognize(&g, &w("b")));
        assert!(!recognize(&g, &Word::empty()));
    }

    #[test]
    fn grammar_for_anbn() {
        let g = mu_to_grammar(&e("mu X. 1 + a X b")).unwrap();
        assert!(recognize(&g, &Word::empty()));
        assert!(recognize(&g, &w("ab")));
        assert!(recognize(&g, &w("aabb")));
        assert!(!recognize(&g, &w("aab")));
        assert!(!recognize(&g, &w("ba")));
    }

    #[test]
    fn grammar_for_star() {
        let g = mu_to_grammar(&e("a*")).unwrap();
        assert!(recognize(&g, &Word::empty()));
        assert!(recognize(&g, &w("aaa")));
        assert!(!recognize(&g, &w("ab")));
    }

    #[test]
    fn epsilon_iff_start_nullable() {
        for text in ["a", "a*", "1", "0", "mu X. 1 + X a", "mu X. X", "(a + 1) b*"] {
            let g = mu_to_grammar(&e(text)).unwrap();
            assert_eq!(recognize(&g, &Word::empty()), g.nullable_set()[g.start()], "{}", text);
        }
    }

    #[test]
    fn member_examples() {
        assert!(member(&e("mu X. 1 + X a"), &w("aaa")).unwrap());
        assert!(!member(&e("0"), &Word::empty()).unwrap());
        let pal = e("mu X. a + a X a + b X b + b");
        assert!(!member(&pal, &w("abba")).unwrap());
        assert!(member(&pal, &w("abbba")).unwrap());
    }

    #[test]
    fn enumerate_examples() {
        let ws = enumerate(&e("a*"), 3).unwrap();
        let expected: BTreeSet<Word> =
            [Word::empty(), w("a"), w("aa"), w("aaa")].into_iter().collect();
        assert_eq!(ws.words, expected);

        let ws = enumerate(&e("mu X. 1 + a X b"), 6).unwrap();
        let expected: BTreeSet<Word> =
            [Word::empty(), w("ab"), w("aabb"), w("aaabbb")].into_iter().collect();
        assert_eq!(ws.words, expected);

        assert!(enumerate(&e("0"), 5).unwrap().words.is_empty());

        assert_eq!(
            enumerate(&e("a"), 11),
            Err(Error::EnumCapExceeded { requested: 11, cap: DEFAULT_ENUM_CAP })
        );
    }

    #[test]
    fn enumerate_agrees_with_member() {
        for text in ["a*", "mu X. 1 + a X b", "mu X. a + a X a + b X b + b"] {
            let r = e(text);
            let ws = enumerate(&r, 5).unwrap();
            let alphabet: Vec<Symbol> = r.symbols().into_iter().collect();
            for word in words_up_to(&alphabet, 5) {
                assert_eq!(ws.contains(&word), member(&r, &word).unwrap(), "{} / {}", text, word);
            }
        }
    }

    #[test]
    fn bounded_monotonicity_in_the_environment() {
        // expressions with one free variable X0, under growing finite
        // languages for it: the enumerated window must grow monotonically
        let x = Expr::var(VarId(0));
        let instances = [
            Expr::cat(e("a"), x.clone()),
            Expr::alt(e("b"), Expr::star(x.clone())),
            Expr::cat(x.clone(), Expr::alt(e("a"), x.clone())),
            Expr::mu(VarId(1), Expr::alt(Expr::empty_word(), Expr::cat(x.clone(), Expr::var(VarId(1))))),
        ];
        let chains: [Vec<BTreeSet<Word>>; 2] = [
            vec![
                BTreeSet::new(),
                [w("b")].into_iter().collect(),
                [w("b"), w("ab")].into_iter().collect(),
                [w("b"), w("ab"), Word::empty()].into_iter().collect(),
            ],
            vec![
                [Word::empty()].into_iter().collect(),
                [Word::empty(), w("a")].into_iter().collect(),
                [Word::empty(), w("a"), w("bb")].into_iter().collect(),
            ],
        ];
        for r in &instances {
            for chain in &chains {
                for pair in chain.windows(2) {
                    let lo = enumerate_with_env(r, &BTreeMap::from([(VarId(0), pair[0].clone())]), 4)
                        .unwrap();
                    let hi = enumerate_with_env(r, &BTreeMap::from([(VarId(0), pair[1].clone())]), 4)
                        .unwrap();
                    assert!(
                        lo.words.is_subset(&hi.words),
                        "monotonicity fails for {:?}: {:?} ⊄ {:?}",
                        r,
                        lo.words,
                        hi.words
                    );
                }
            }
        }

        // and a concrete spot check
        let r = Expr::cat(e("a"), x);
        let small: BTreeSet<Word> = [w("b")].into_iter().collect();
        let env_small = BTreeMap::from([(VarId(0), small)]);
        let ws_small = enumerate_with_env(&r, &env_small, 4).unwrap();
        assert!(ws_small.contains(&w("ab")));
        assert!(!ws_small.contains(&w("a")));
    }

    #[test]
    fn grammar_text_round_trip() {
        let g = mu_to_grammar(&e("mu X. 1 + a X b")).unwrap();
        let text = g.to_text();
        let g2 = Grammar::from_text(&text).unwrap();
        assert_eq!(g2.to_text(), text);
        for word in ["", "ab", "aabb", "aab"] {
            let word: Word = word.parse().unwrap();
            assert_eq!(recognize(&g, &word), recognize(&g2, &word));
        }
    }

    #[test]
    fn from_text_rejects_garbage() {
        assert!(Grammar::from_text("N0 => a").is_err());
        assert!(Grammar::from_text("M0 -> a").is_err());
        assert!(Grammar::from_text("N0 -> ab").is_err());
    }
}
