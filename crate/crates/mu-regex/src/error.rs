use std::fmt;

use crate::syntax::VarId;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Concrete-syntax error with 1-based line and column.
    Parse { line: usize, col: usize, msg: String },
    /// A symbol outside the lowercase ASCII alphabet.
    BadSymbol(char),
    /// A variable was looked up in an environment that does not bind it.
    UnboundVariable(VarId),
    /// A substitution failed the order-closedness check at this variable.
    NotOrderClosed(VarId),
    /// An operation that needs a closed expression saw this free variable.
    NotClosed(VarId),
    /// The same binder occurs twice; canonicalize the expression first.
    DuplicateBinder(VarId),
    /// Regular-fragment operation applied to an expression with mu or variables.
    NotRegular,
    /// The iterated-derivative worklist exceeded its safety cap. This
    /// indicates a bug, not bad input: the set is provably finite.
    IpdCapExceeded(usize),
    /// Enumeration bound above the configured cap.
    EnumCapExceeded { requested: usize, cap: usize },
    /// Word too long for the rule-based membership checker.
    WordTooLong { len: usize, cap: usize },
    /// Nullability and language environments have different domains.
    DomainMismatch,
    /// Grammar construction saw an undeclared nonterminal or terminal index.
    BadGrammar(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse { line, col, msg } => write!(f, "parse error at {}:{}: {}", line, col, msg),
            Error::BadSymbol(c) => write!(f, "invalid symbol {:?}: expected a lowercase ASCII letter", c),
            Error::UnboundVariable(x) => write!(f, "unbound variable {}", x),
            Error::NotOrderClosed(x) => write!(f, "substitution is not order-closed at {}", x),
            Error::NotClosed(x) => write!(f, "expression is not closed: free variable {}", x),
            Error::DuplicateBinder(x) => write!(f, "binder {} bound more than once", x),
            Error::NotRegular => write!(f, "mu-operator or variable in regular-fragment operation"),
            Error::IpdCapExceeded(cap) => {
                write!(f, "iterated-derivative set exceeded the safety cap of {} elements (bug)", cap)
            }
            Error::EnumCapExceeded { requested, cap } => {
                write!(f, "enumeration length {} exceeds the cap {}", requested, cap)
            }
            Error::WordTooLong { len, cap } => {
                write!(f, "word of length {} exceeds the membership-rule cap {}", len, cap)
            }
            Error::DomainMismatch => write!(f, "environment domains differ"),
            Error::BadGrammar(msg) => write!(f, "malformed grammar: {}", msg),
        }
    }
}

impl std::error::Error for Error {}
