//! The single-state pushdown automaton induced by iterated partial
//! derivatives, plus the Antimirov NFA for the regular fragment.
//!
//! The pushdown alphabet is `ipd(t)`; the machine accepts by empty stack
//! and its transition relation is exactly the derivative function: symbol
//! derivatives for consuming transitions, spontaneous derivatives for
//! ε-transitions, and an ε-pop for every nullable stack symbol.
//!
//! Exact recognition goes through the standard single-state-PDA/grammar
//! correspondence, because direct search need not terminate on rejecting
//! inputs of left-recursive expressions. The bounded BFS simulator stays
//! available for traces.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use crate::derivative::{antimirov_deriv, pderiv};
use crate::error::Error;
use crate::ipd::{ipd, IpdSet};
use crate::nullability::{null, NullEnv};
use crate::oracle::{recognize, Grammar, GrammarSym, Production};
use crate::syntax::{Expr, ExprNode, Subst, Symbol, Word};

/// One transition: pop `pop`, optionally consume `input`, push `push`
/// (index 0 becomes the new top). An empty push with `input = None` is a
/// nullability pop.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Transition {
    pub input: Option<Symbol>,
    pub pop: usize,
    pub push: Vec<usize>,
}

/// The induced PDA. Stack symbols are indices into `gamma`, which lists
/// the iterated partial derivatives in first-discovery order; `z0` is the
/// index of `1 t`.
pub struct Pda {
    gamma: Vec<Expr>,
    index: HashMap<Expr, usize>,
    alphabet: Vec<Symbol>,
    delta: Vec<Transition>,
    nullable: Vec<bool>,
    z0: usize,
    grammar: OnceLock<Grammar>,
}

/// A machine configuration: pushdown contents (top first, as gamma
/// indices) and remaining input. Acceptance is exactly an empty stack with
/// empty remaining input.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Config {
    pub stack: Vec<usize>,
    pub remaining: Word,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BfsOutcome {
    Accept,
    Reject,
    Unknown,
}

impl fmt::Display for BfsOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BfsOutcome::Accept => write!(f, "accept"),
            BfsOutcome::Reject => write!(f, "reject"),
            BfsOutcome::Unknown => write!(f, "unknown"),
        }
    }
}

/// Build the PDA for a closed, canonicalized expression.
pub fn build_pda(t: &Expr) -> Result<Pda, Error> {
    let gamma_set: IpdSet = ipd(t)?;
    let gamma: Vec<Expr> = gamma_set.elements().to_vec();
    let index: HashMap<Expr, usize> =
        gamma.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
    let alphabet: Vec<Symbol> = t.symbols().into_iter().collect();
    let sigma = Subst::new();
    let nu = NullEnv::new();

    let mut delta = Vec::new();
    for (i, s) in gamma.iter().enumerate() {
        for &a in &alphabet {
            for stack in pderiv(Some(a), &sigma, &nu, s)?.iter() {
                let push = stack
                    .items()
                    .iter()
                    .map(|e| *index.get(e).expect("derivative element outside ipd"))
                    .collect();
                delta.push(Transition { input: Some(a), pop: i, push });
            }
        }
        for stack in pderiv(None, &sigma, &nu, s)?.iter() {
            let push = stack
                .items()
                .iter()
                .map(|e| *index.get(e).expect("derivative element outside ipd"))
                .collect();
            delta.push(Transition { input: None, pop: i, push });
        }
    }
    let mut nullable = Vec::with_capacity(gamma.len());
    for s in &gamma {
        nullable.push(null(s, &nu)?);
    }
    for (i, is_null) in nullable.iter().enumerate() {
        if *is_null {
            delta.push(Transition { input: None, pop: i, push: Vec::new() });
        }
    }
    Ok(Pda { gamma, index, alphabet, delta, nullable, z0: 0, grammar: OnceLock::new() })
}

impl Pda {
    pub fn gamma(&self) -> &[Expr] {
        &self.gamma
    }

    pub fn gamma_index(&self, e: &Expr) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }

    pub fn delta(&self) -> &[Transition] {
        &self.delta
    }

    pub fn nullable(&self) -> &[bool] {
        &self.nullable
    }

    pub fn z0(&self) -> usize {
        self.z0
    }

    pub fn initial(&self, w: &Word) -> Config {
        Config { stack: vec![self.z0], remaining: w.clone() }
    }

    /// All one-step successor configurations; empty when stuck.
    pub fn step(&self, c: &Config) -> Vec<Config> {
        let Some((&top, rest)) = c.stack.split_first() else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for t in &self.delta {
            if t.pop != top {
                continue;
            }
            let remaining = match t.input {
                None => c.remaining.clone(),
                Some(a) => match c.remaining.split_first() {
                    Some((first, tail)) if first == a => tail,
                    _ => continue,
                },
            };
            let mut stack = Vec::with_capacity(t.push.len() + rest.len());
            stack.extend_from_slice(&t.push);
            stack.extend_from_slice(rest);
            out.push(Config { stack, remaining });
        }
        out
    }

    fn bfs(&self, w: &Word, step_budget: usize, mut visit: Option<&mut dyn FnMut(&Config)>) -> BfsOutcome {
        // frames beyond this cap declare the search inconclusive rather
        // than risking unbounded growth under left recursion
        let stack_cap = w.len() * self.gamma.len().max(1) * 4 + 16;
        let start = self.initial(w);
        let mut queue = VecDeque::new();
        let mut seen: HashSet<(Vec<usize>, usize)> = HashSet::new();
        seen.insert((start.stack.clone(), start.remaining.len()));
        queue.push_back(start);
        let mut expanded = 0usize;
        let mut pruned = false;
        while let Some(c) = queue.pop_front() {
            if let Some(v) = visit.as_deref_mut() {
                v(&c);
            }
            if c.stack.is_empty() {
                if c.remaining.is_empty() {
                    return BfsOutcome::Accept;
                }
                continue; // dead: empty stack with input left
            }
            if expanded >= step_budget {
                return BfsOutcome::Unknown;
            }
            expanded += 1;
            if c.stack.len() > stack_cap {
                pruned = true;
                continue;
            }
            for succ in self.step(&c) {
                let key = (succ.stack.clone(), succ.remaining.len());
                if seen.insert(key) {
                    queue.push_back(succ);
                }
            }
        }
        if pruned {
            BfsOutcome::Unknown
        } else {
            BfsOutcome::Reject
        }
    }

    /// Bounded breadth-first search over configurations. `Accept` and
    /// `Reject` are definitive; `Unknown` means the step budget or the
    /// stack cap was exhausted first.
    pub fn accepts_bfs(&self, w: &Word, step_budget: usize) -> BfsOutcome {
        self.bfs(w, step_budget, None)
    }

    /// Like `accepts_bfs`, reporting every configuration in visit order.
    pub fn accepts_bfs_traced(
        &self,
        w: &Word,
        step_budget: usize,
        visit: &mut dyn FnMut(&Config),
    ) -> BfsOutcome {
        self.bfs(w, step_budget, Some(visit))
    }

    /// The equivalent grammar: one nonterminal per stack symbol, one
    /// production per transition, start at `z0`. `N_s` derives exactly the
    /// words the machine can consume while popping `s` to empty.
    pub fn to_grammar(&self) -> &Grammar {
        self.grammar.get_or_init(|| {
            let names: Vec<String> = (0..self.gamma.len()).map(|i| format!("N{}", i)).collect();
            let mut productions = Vec::with_capacity(self.delta.len());
            for t in &self.delta {
                let mut body = Vec::with_capacity(t.push.len() + 1);
                if let Some(a) = t.input {
                    body.push(GrammarSym::Terminal(a));
                }
                body.extend(t.push.iter().map(|&i| GrammarSym::Nonterminal(i)));
                productions.push(Production { head: t.pop, body });
            }
            productions.sort_by_key(|p| p.head);
            Grammar::new(names, self.alphabet.iter().copied().collect(), productions, self.z0)
                .expect("pda grammar indices are well-formed")
        })
    }

    /// Exact, total recognition through the grammar backend.
    pub fn accepts(&self, w: &Word) -> bool {
        recognize(self.to_grammar(), w)
    }

    /// Deterministic DOT rendering: one node per stack symbol, push
    /// transitions as edges to the new top labeled `input / push`, and a
    /// shared point node for ε-pops.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        out.push_str("digraph pda {\n");
        out.push_str("  rankdir=LR;\n");
        out.push_str("  node [shape=box];\n");
        out.push_str("  start [shape=none, label=\"\"];\n");
        for (i, e) in self.gamma.iter().enumerate() {
            out.push_str(&format!("  g{} [label=\"g{}: {}\"];\n", i, i, e));
        }
        if self.delta.iter().any(|t| t.push.is_empty()) {
            out.push_str("  pop [shape=point];\n");
        }
        out.push_str(&format!("  start -> g{};\n", self.z0));
        for t in &self.delta {
            let label = match t.input {
                Some(a) => a.to_string(),
                None => "ε".to_string(),
            };
            match t.push.first() {
                Some(&new_top) => {
                    let pushed: Vec<String> = t.push.iter().map(|i| format!("g{}", i)).collect();
                    out.push_str(&format!(
                        "  g{} -> g{} [label=\"{} / [{}]\"];\n",
                        t.pop,
                        new_top,
                        label,
                        pushed.join(", ")
                    ));
                }
                None => {
                    out.push_str(&format!("  g{} -> pop [label=\"{}\"];\n", t.pop, label));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Debug for Pda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pda with {} stack symbols, z0 = g{}", self.gamma.len(), self.z0)?;
        for (i, e) in self.gamma.iter().enumerate() {
            writeln!(f, "  g{} = {}", i, e)?;
        }
        for t in &self.delta {
            let input = t.input.map(|a| a.to_string()).unwrap_or_else(|| "eps".into());
            let push: Vec<String> = t.push.iter().map(|i| format!("g{}", i)).collect();
            writeln!(f, "  {} g{} -> [{}]", input, t.pop, push.join(", "))?;
        }
        Ok(())
    }
}

/// The Antimirov NFA of a mu-free expression: states are iterated partial
/// derivatives, the start state is the expression, final states are the
/// nullable ones.
pub struct Nfa {
    states: Vec<Expr>,
    delta: Vec<(usize, Symbol, usize)>,
    finals: Vec<bool>,
    start: usize,
}

pub fn build_nfa(r: &Expr) -> Result<Nfa, Error> {
    if !r.is_mu_free() {
        return Err(Error::NotRegular);
    }
    let alphabet: Vec<Symbol> = r.symbols().into_iter().collect();
    let mut states = vec![r.clone()];
    let mut index = HashMap::new();
    index.insert(r.clone(), 0usize);
    let mut delta = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let q = states[i].clone();
        for &a in &alphabet {
            for target in antimirov_deriv(a, &q)? {
                let j = match index.get(&target) {
                    Some(&j) => j,
                    None => {
                        let j = states.len();
                        index.insert(target.clone(), j);
                        states.push(target);
                        queue.push_back(j);
                        j
                    }
                };
                delta.push((i, a, j));
            }
        }
    }
    let nu = NullEnv::new();
    let finals = states.iter().map(|q| null(q, &nu)).collect::<Result<Vec<_>, _>>()?;
    Ok(Nfa { states, delta, finals, start: 0 })
}

impl Nfa {
    pub fn states(&self) -> &[Expr] {
        &self.states
    }

    pub fn delta(&self) -> &[(usize, Symbol, usize)] {
        &self.delta
    }

    pub fn finals(&self) -> &[bool] {
        &self.finals
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn accepts(&self, w: &Word) -> bool {
        let mut current: HashSet<usize> = HashSet::from([self.start]);
        for &a in w.symbols() {
            let mut next = HashSet::new();
            for &(from, sym, to) in &self.delta {
                if sym == a && current.contains(&from) {
                    next.insert(to);
                }
            }
            if next.is_empty() {
                return false;
            }
            current = next;
        }
        current.iter().any(|&q| self.finals[q])
    }
}

impl fmt::Debug for Nfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "nfa with {} states, start q{}", self.states.len(), self.start)?;
        for (i, e) in self.states.iter().enumerate() {
            writeln!(f, "  q{} = {}{}", i, e, if self.finals[i] { "  (final)" } else { "" })?;
        }
        for (from, a, to) in &self.delta {
            writeln!(f, "  {}: q{} -> q{}", a, from, to)?;
        }
        Ok(())
    }
}

/// Syntactic guardedness: every variable occurrence sits behind at least
/// one symbol on its unfolding path, i.e. no occurrence is reachable from
/// its binder without consuming input. Guarded expressions need no
/// spontaneous derivatives, so their PDAs have only popping ε-transitions.
pub fn is_guarded(t: &Expr) -> Result<bool, Error> {
    use std::collections::BTreeSet;
    use crate::syntax::VarId;

    // exposed: variables with a free occurrence reachable without
    // consuming a symbol first
    fn walk(e: &Expr, nu: &NullEnv, guarded: &mut bool) -> Result<BTreeSet<VarId>, Error> {
        Ok(match e.node() {
            ExprNode::EmptySet | ExprNode::EmptyWord | ExprNode::Sym(_) => BTreeSet::new(),
            ExprNode::Var(x) => BTreeSet::from([*x]),
            ExprNode::Alt(l, r) => {
                let mut out = walk(l, nu, guarded)?;
                out.extend(walk(r, nu, guarded)?);
                out
            }
            ExprNode::Cat(l, r) => {
                let mut out = walk(l, nu, guarded)?;
                let right = walk(r, nu, guarded)?;
                if null(l, nu)? {
                    out.extend(right);
                }
                out
            }
            ExprNode::Star(b) => walk(b, nu, guarded)?,
            ExprNode::Mu(x, b) => {
                let nu2 = nu.with(*x, null(b, &nu.with(*x, false))?);
                let mut out = walk(b, &nu2, guarded)?;
                if out.remove(x) {
                    *guarded = false;
                }
                out
            }
        })
    }

    if let Some(&x) = t.free_vars().iter().next() {
        return Err(Error::NotClosed(x));
    }
    let mut guarded = true;
    let exposed = walk(t, &NullEnv::new(), &mut guarded)?;
    debug_assert!(exposed.is_empty());
    Ok(guarded)
}
