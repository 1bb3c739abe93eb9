//! Direct proof search for the inductive membership judgment
//! `sigma |- w in r`.
//!
//! Naive top-down search diverges on left recursion through the mu/variable
//! rule pair, so goals are memoized on (expression, word span, substitution
//! fingerprint) and provability is computed as the least fixpoint over the
//! finite reachable goal graph: explore all goals and their rule instances
//! once, then saturate. A cyclic derivation never marks a goal, matching
//! the inductive (smallest-relation) reading.

use std::collections::HashMap;

use crate::error::Error;
use crate::syntax::{Expr, ExprNode, Subst, Word};

/// Longest word the rule-based checker accepts by default.
pub const DEFAULT_MEMBERSHIP_CAP: usize = 6;

/// Fingerprint of a substitution: its entries as id pairs.
type SigKey = Vec<(u32, u64)>;

#[derive(Clone, PartialEq, Eq, Hash)]
struct GoalKey {
    expr: Expr,
    lo: usize,
    hi: usize,
    sigma: SigKey,
}

fn sig_key(sigma: &Subst) -> SigKey {
    sigma.entries().iter().map(|(x, e)| (x.0, e.interned_id())).collect()
}

struct GoalData {
    expr: Expr,
    sigma: Subst,
    lo: usize,
    hi: usize,
    /// Disjunction of conjunctions of premise goal ids.
    alternatives: Vec<Vec<usize>>,
    explored: bool,
}

struct Search {
    goals: Vec<GoalData>,
    index: HashMap<GoalKey, usize>,
}

impl Search {
    fn goal(&mut self, sigma: &Subst, lo: usize, hi: usize, expr: &Expr) -> usize {
        let key = GoalKey { expr: expr.clone(), lo, hi, sigma: sig_key(sigma) };
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        let id = self.goals.len();
        self.goals.push(GoalData {
            expr: expr.clone(),
            sigma: sigma.clone(),
            lo,
            hi,
            alternatives: Vec::new(),
            explored: false,
        });
        self.index.insert(key, id);
        id
    }

    fn explore(&mut self, root: usize, word: &Word) -> Result<(), Error> {
        let input = word.symbols();
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            if self.goals[id].explored {
                continue;
            }
            self.goals[id].explored = true;
            let expr = self.goals[id].expr.clone();
            let sigma = self.goals[id].sigma.clone();
            let (lo, hi) = (self.goals[id].lo, self.goals[id].hi);
            let mut alts: Vec<Vec<usize>> = Vec::new();
            match expr.node() {
                ExprNode::EmptySet => {}
                ExprNode::EmptyWord => {
                    if lo == hi {
                        alts.push(vec![]);
                    }
                }
                ExprNode::Sym(a) => {
                    if hi == lo + 1 && input[lo] == *a {
                        alts.push(vec![]);
                    }
                }
                ExprNode::Alt(l, r) => {
                    alts.push(vec![self.goal(&sigma, lo, hi, l)]);
                    alts.push(vec![self.goal(&sigma, lo, hi, r)]);
                }
                ExprNode::Cat(l, r) => {
                    for mid in lo..=hi {
                        alts.push(vec![self.goal(&sigma, lo, mid, l), self.goal(&sigma, mid, hi, r)]);
                    }
                }
                ExprNode::Star(b) => {
                    if lo == hi {
                        alts.push(vec![]);
                    }
                    for mid in lo..=hi {
                        alts.push(vec![
                            self.goal(&sigma, lo, mid, b),
                            self.goal(&sigma, mid, hi, &expr),
                        ]);
                    }
                }
                ExprNode::Mu(x, b) => {
                    let sigma2 = sigma.with(*x, expr.clone());
                    alts.push(vec![self.goal(&sigma2, lo, hi, b)]);
                }
                ExprNode::Var(x) => {
                    // the variable rule needs sigma(x) = mu x. r for the
                    // same binder; then the premise drops back to it
                    let image = sigma.get(*x).ok_or(Error::UnboundVariable(*x))?.clone();
                    if matches!(image.node(), ExprNode::Mu(y, _) if y == x) {
                        alts.push(vec![self.goal(&sigma, lo, hi, &image)]);
                    }
                }
            }
            for alt in &alts {
                for &premise in alt {
                    if !self.goals[premise].explored {
                        stack.push(premise);
                    }
                }
            }
            self.goals[id].alternatives = alts;
        }
        Ok(())
    }

    fn saturate(&self) -> Vec<bool> {
        let mut provable = vec![false; self.goals.len()];
        loop {
            let mut changed = false;
            for (id, goal) in self.goals.iter().enumerate() {
                if provable[id] {
                    continue;
                }
                if goal.alternatives.iter().any(|alt| alt.iter().all(|&p| provable[p])) {
                    provable[id] = true;
                    changed = true;
                }
            }
            if !changed {
                return provable;
            }
        }
    }
}

pub fn check_membership_rules(sigma: &Subst, w: &Word, r: &Expr) -> Result<bool, Error> {
    check_membership_rules_capped(sigma, w, r, DEFAULT_MEMBERSHIP_CAP)
}

pub fn check_membership_rules_capped(
    sigma: &Subst,
    w: &Word,
    r: &Expr,
    cap: usize,
) -> Result<bool, Error> {
    if w.len() > cap {
        return Err(Error::WordTooLong { len: w.len(), cap });
    }
    sigma.check_order_closed()?;
    let mut search = Search { goals: Vec::new(), index: HashMap::new() };
    let root = search.goal(sigma, 0, w.len(), r);
    search.explore(root, w)?;
    Ok(search.saturate()[root])
}
