//! Syntactic nullability: does the empty word belong to the language?
//!
//! The fixed point for `mu x. r` collapses to a single iteration because the
//! boolean lattice has height one, so the `Mu` case simply evaluates the
//! body with the binder mapped to false.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::Error;
use crate::syntax::{Expr, ExprNode, VarId, Word};

/// A nullability environment: variable -> bool.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct NullEnv {
    entries: BTreeMap<VarId, bool>,
}

impl NullEnv {
    pub fn new() -> NullEnv {
        NullEnv::default()
    }

    pub fn with(&self, x: VarId, b: bool) -> NullEnv {
        let mut entries = self.entries.clone();
        entries.insert(x, b);
        NullEnv { entries }
    }

    pub fn get(&self, x: VarId) -> Option<bool> {
        self.entries.get(&x).copied()
    }

    pub fn entries(&self) -> &BTreeMap<VarId, bool> {
        &self.entries
    }

    pub fn domain(&self) -> BTreeSet<VarId> {
        self.entries.keys().copied().collect()
    }
}

impl fmt::Debug for NullEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (x, b)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} -> {}", x, b)?;
        }
        write!(f, "}}")
    }
}

/// Nullability of `r` under environment `nu`. Every free variable of `r`
/// must be bound in `nu`.
pub fn null(r: &Expr, nu: &NullEnv) -> Result<bool, Error> {
    match r.node() {
        ExprNode::EmptySet => Ok(false),
        ExprNode::EmptyWord => Ok(true),
        ExprNode::Sym(_) => Ok(false),
        ExprNode::Alt(l, s) => {
            let a = null(l, nu)?;
            let b = null(s, nu)?;
            Ok(a || b)
        }
        ExprNode::Cat(l, s) => {
            let a = null(l, nu)?;
            let b = null(s, nu)?;
            Ok(a && b)
        }
        ExprNode::Star(_) => Ok(true),
        ExprNode::Var(x) => nu.get(*x).ok_or(Error::UnboundVariable(*x)),
        ExprNode::Mu(x, b) => null(b, &nu.with(*x, false)),
    }
}

/// A nullability environment agrees with a (finite approximation of a)
/// language environment when, for every variable, it records exactly
/// whether the language contains the empty word.
pub fn agrees(nu: &NullEnv, eta: &BTreeMap<VarId, BTreeSet<Word>>) -> Result<bool, Error> {
    if nu.domain() != eta.keys().copied().collect() {
        return Err(Error::DomainMismatch);
    }
    for (x, words) in eta {
        if words.contains(&Word::empty()) != nu.get(*x).unwrap() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::syntax::parse;

    fn e(text: &str) -> Expr {
        parse(text).unwrap().canonicalize()
    }

    #[test]
    fn null_examples() {
        assert!(null(&e("mu X. 1 + X a"), &NullEnv::new()).unwrap());
        assert!(!null(&e("mu X. X"), &NullEnv::new()).unwrap());
        assert!(!null(&e("(mu X. a X b) c"), &NullEnv::new()).unwrap());
    }

    #[test]
    fn null_unbound_variable() {
        assert_eq!(null(&parse("X").unwrap(), &NullEnv::new()), Err(Error::UnboundVariable(VarId(0))));
    }

    #[test]
    fn one_step_fixpoint_spot_checks() {
        // b0 = null(r, nu[x -> ff]) satisfies null(r, nu[x -> b0]) = b0
        for text in ["1 + X0 a", "X0 a", "X0 + a", "mu X1. X0 X1", "(1 + X0) (a + X0)"] {
            let r = parse(text).unwrap();
            let x = VarId(0);
            let b0 = null(&r, &NullEnv::new().with(x, false)).unwrap();
            assert_eq!(null(&r, &NullEnv::new().with(x, b0)).unwrap(), b0, "{}", text);
        }
    }

    #[test]
    fn agrees_examples() {
        let empty_eta = BTreeMap::new();
        assert!(agrees(&NullEnv::new(), &empty_eta).unwrap());

        let x = VarId(0);
        let mut eta = BTreeMap::new();
        let mut words = BTreeSet::new();
        words.insert(Word::empty());
        words.insert("a".parse().unwrap());
        eta.insert(x, words);
        assert!(agrees(&NullEnv::new().with(x, true), &eta).unwrap());
        assert_eq!(agrees(&NullEnv::new().with(x, false), &eta), Ok(false));
        assert_eq!(agrees(&NullEnv::new(), &eta), Err(Error::DomainMismatch));
    }

    #[test]
    fn null_agrees_with_oracle_on_empty_word() {
        for text in [
            "a",
            "a*",
            "(a b)*",
            "a + b",
            "mu X. 1 + X a",
            "mu X. 1 + a X",
            "mu X. 1 + a X b",
            "mu X. 1 + a X b X",
            "mu X. a + a X a + b X b + b",
            "mu X. X",
            "mu X. 1",
            "mu X. (mu Y. 1 + a Y) + X b",
        ] {
            let r = e(text);
            let by_null = null(&r, &NullEnv::new()).unwrap();
            let by_oracle = oracle::member(&r, &Word::empty()).unwrap();
            assert_eq!(by_null, by_oracle, "{}", text);
        }
    }
}
