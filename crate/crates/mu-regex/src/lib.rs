//! Partial derivatives for mu-regular expressions.
//!
//! Mu-regular expressions extend regular expressions with a least fixed
//! point binder `mu X. r` and generate exactly the context-free languages.
//! This crate implements:
//!
//! - syntactic nullability with a boolean environment ([`nullability`]);
//! - classic set-valued partial derivatives on the regular fragment, and
//!   the stack-valued derivative of full mu-regular expressions together
//!   with the budgeted derivation closure ([`derivative`]);
//! - the finite set of iterated partial derivatives and the top/rec normal
//!   forms of its elements ([`ipd`]);
//! - the induced single-state pushdown automaton accepting by empty stack,
//!   a bounded configuration search, an exact grammar-backed decision
//!   procedure, the Antimirov NFA for mu-free expressions, and Graphviz
//!   export ([`pda`]);
//! - an independent, derivative-free oracle: structural translation to a
//!   context-free grammar, an Earley recognizer, bounded enumeration, and
//!   a direct proof search for the inductive membership rules ([`oracle`]).
//!
//! The `muregex` binary exposes all of it; see [`cli`].
//!
//! ```
//! use mu_regex::syntax::parse;
//! use mu_regex::pda::build_pda;
//!
//! let anbn = parse("mu X. 1 + a X b").unwrap().canonicalize();
//! let pda = build_pda(&anbn).unwrap();
//! assert!(pda.accepts(&"aabb".parse().unwrap()));
//! assert!(!pda.accepts(&"abb".parse().unwrap()));
//! ```

pub mod cli;
pub mod derivative;
mod error;
pub mod ipd;
pub mod nullability;
pub mod oracle;
pub mod pda;
pub mod syntax;

pub use error::Error;
