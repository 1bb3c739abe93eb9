//! Partial derivatives.
//!
//! For the regular fragment, `antimirov_deriv` maps a symbol and an
//! expression to a set of expressions. For full mu-regular expressions the
//! derivative is stack-valued: `pderiv` returns a set of non-empty stacks
//! of closed expressions, indexed by a deferred-unfolding substitution and
//! a nullability environment, and is defined for a symbol or for the empty
//! word. The spontaneous (empty-word) derivative unfolds one level of left
//! recursion and corresponds to the ε-transitions of the induced PDA.
//!
//! Nothing here simplifies `1 r` or `r 1`: the finiteness and form
//! classification results are stated over unsimplified syntax, so outputs
//! are kept verbatim.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::Error;
use crate::nullability::{null, NullEnv};
use crate::syntax::{Expr, ExprNode, Subst, Symbol};

/// A non-empty stack fragment of expressions. Index 0 is the top.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Stack(Vec<Expr>);

impl Stack {
    pub fn singleton(e: Expr) -> Stack {
        Stack(vec![e])
    }

    /// Panics on an empty item list; stacks are non-empty by construction.
    pub fn new(items: Vec<Expr>) -> Stack {
        assert!(!items.is_empty(), "a stack fragment must be non-empty");
        Stack(items)
    }

    pub fn items(&self) -> &[Expr] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn top(&self) -> &Expr {
        &self.0[0]
    }

    pub fn split_top(&self) -> (&Expr, &[Expr]) {
        (&self.0[0], &self.0[1..])
    }

    /// The lifted monoid operation: replace the bottom element `a` by `a b`.
    pub fn concat(&self, b: &Expr) -> Stack {
        let mut items = self.0.clone();
        let bottom = items.pop().unwrap();
        items.push(Expr::cat(bottom, b.clone()));
        Stack(items)
    }

    /// Stack concatenation: `self` on top of `below`.
    pub fn append(&self, below: &[Expr]) -> Stack {
        let mut items = self.0.clone();
        items.extend_from_slice(below);
        Stack(items)
    }
}

impl PartialOrd for Stack {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Stack {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Stack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", e)?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Stack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// A finite set of stacks: the value of a partial derivative. Iteration is
/// in canonical order (stack length, then elementwise structural order).
#[derive(Clone, Default, PartialEq, Eq)]
pub struct DerivSet(BTreeSet<Stack>);

impl DerivSet {
    pub fn empty() -> DerivSet {
        DerivSet::default()
    }

    pub fn singleton(s: Stack) -> DerivSet {
        let mut set = BTreeSet::new();
        set.insert(s);
        DerivSet(set)
    }

    pub fn insert(&mut self, s: Stack) {
        self.0.insert(s);
    }

    pub fn extend(&mut self, other: DerivSet) {
        self.0.extend(other.0);
    }

    pub fn iter(&self) -> impl Iterator<Item = &Stack> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, s: &Stack) -> bool {
        self.0.contains(s)
    }

    /// Pointwise lifted concatenation onto the bottom of every stack.
    pub fn concat(&self, b: &Expr) -> DerivSet {
        DerivSet(self.0.iter().map(|s| s.concat(b)).collect())
    }

    /// Pointwise stack concatenation: `below` appended under every stack.
    pub fn push(&self, below: &Stack) -> DerivSet {
        DerivSet(self.0.iter().map(|s| s.append(below.items())).collect())
    }
}

impl fmt::Debug for DerivSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", s)?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<Stack> for DerivSet {
    fn from_iter<T: IntoIterator<Item = Stack>>(iter: T) -> DerivSet {
        DerivSet(iter.into_iter().collect())
    }
}

/// Antimirov's partial derivative on the regular fragment. Errors when the
/// expression contains a mu-operator or a variable.
pub fn antimirov_deriv(a: Symbol, r: &Expr) -> Result<BTreeSet<Expr>, Error> {
    match r.node() {
        ExprNode::EmptySet | ExprNode::EmptyWord => Ok(BTreeSet::new()),
        ExprNode::Sym(b) => {
            let mut out = BTreeSet::new();
            if a == *b {
                out.insert(Expr::empty_word());
            }
            Ok(out)
        }
        ExprNode::Alt(l, s) => {
            let mut out = antimirov_deriv(a, l)?;
            out.extend(antimirov_deriv(a, s)?);
            Ok(out)
        }
        ExprNode::Cat(l, s) => {
            let mut out: BTreeSet<Expr> = antimirov_deriv(a, l)?
                .into_iter()
                .map(|d| Expr::cat(d, s.clone()))
                .collect();
            if null(l, &NullEnv::new())? {
                out.extend(antimirov_deriv(a, s)?);
            }
            Ok(out)
        }
        ExprNode::Star(b) => Ok(antimirov_deriv(a, b)?
            .into_iter()
            .map(|d| Expr::cat(d, r.clone()))
            .collect()),
        ExprNode::Var(_) | ExprNode::Mu(..) => Err(Error::NotRegular),
    }
}

/// The stack-valued partial derivative of a mu-regular expression by
/// `alpha` (a symbol, or `None` for the spontaneous derivative).
///
/// `sigma` maps free recursion variables to their deferred unfoldings and
/// `nu` to their nullability; both must cover the free variables of `r`.
/// Every expression in the returned stacks is closed.
pub fn pderiv(alpha: Option<Symbol>, sigma: &Subst, nu: &NullEnv, r: &Expr) -> Result<DerivSet, Error> {
    match r.node() {
        ExprNode::EmptySet | ExprNode::EmptyWord => Ok(DerivSet::empty()),
        ExprNode::Sym(b) => Ok(if alpha == Some(*b) {
            DerivSet::singleton(Stack::singleton(Expr::empty_word()))
        } else {
            DerivSet::empty()
        }),
        ExprNode::Alt(l, s) => {
            let mut out = pderiv(alpha, sigma, nu, l)?;
            out.extend(pderiv(alpha, sigma, nu, s)?);
            Ok(out)
        }
        ExprNode::Cat(l, s) => {
            let mut out = pderiv(alpha, sigma, nu, l)?.concat(&sigma.apply(s)?);
            if null(l, nu)? {
                out.extend(pderiv(alpha, sigma, nu, s)?);
            }
            Ok(out)
        }
        ExprNode::Star(b) => Ok(pderiv(alpha, sigma, nu, b)?.concat(&sigma.apply(r)?)),
        ExprNode::Mu(x, b) => {
            let sigma2 = sigma.with(*x, r.clone());
            let nu2 = nu.with(*x, null(b, &nu.with(*x, false))?);
            Ok(pderiv(alpha, &sigma2, &nu2, b)?.push(&Stack::singleton(Expr::empty_word())))
        }
        ExprNode::Var(x) => Ok(if alpha.is_none() {
            DerivSet::singleton(Stack::singleton(sigma.apply(&Expr::var(*x))?))
        } else {
            DerivSet::empty()
        }),
    }
}

/// The derivation closure of a closed stack by symbol `a`, budgeted: all
/// stacks obtainable by at most `eps_budget` spontaneous steps followed by
/// one `a`-derivative of the top. The second component is true when the
/// budget was hit with spontaneous expansions still pending, in which case
/// the returned set is a subset of the (possibly infinite) true closure.
pub fn closure(a: Symbol, stack: &Stack, eps_budget: usize) -> Result<(DerivSet, bool), Error> {
    let sigma = Subst::new();
    let nu = NullEnv::new();
    let mut result = DerivSet::empty();
    let mut exhausted = false;
    let mut level = vec![stack.clone()];
    let mut seen: BTreeSet<Stack> = level.iter().cloned().collect();
    for depth in 0..=eps_budget {
        if level.is_empty() {
            break;
        }
        let mut next = Vec::new();
        for st in &level {
            let (top, rest) = st.split_top();
            for s in pderiv(Some(a), &sigma, &nu, top)?.iter() {
                result.insert(s.append(rest));
            }
            for s in pderiv(None, &sigma, &nu, top)?.iter() {
                let ns = s.append(rest);
                if seen.contains(&ns) {
                    continue;
                }
                if depth == eps_budget {
                    exhausted = true;
                } else {
                    seen.insert(ns.clone());
                    next.push(ns);
                }
            }
        }
        level = next;
    }
    Ok((result, exhausted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn e(text: &str) -> Expr {
        parse(text).unwrap().canonicalize()
    }

    fn sym(c: char) -> Symbol {
        Symbol::new(c).unwrap()
    }

    fn pd(alpha: Option<Symbol>, r: &Expr) -> DerivSet {
        pderiv(alpha, &Subst::new(), &NullEnv::new(), r).unwrap()
    }

    #[test]
    fn stack_concat_examples() {
        let one = Expr::empty_word();
        let a = e("a");
        assert_eq!(Stack::singleton(one.clone()).concat(&a), Stack::singleton(e("1 a")));

        let r = e("mu X. 1 + X a");
        let st = Stack::new(vec![Expr::cat(r.clone(), a.clone()), one.clone()]);
        assert_eq!(
            st.concat(&a),
            Stack::new(vec![Expr::cat(r, a.clone()), e("1 a")])
        );

        let xyz = Stack::new(vec![e("x"), e("y"), e("z")]);
        assert_eq!(xyz.concat(&e("w")), Stack::new(vec![e("x"), e("y"), e("z w")]));
    }

    #[test]
    fn set_concat_and_push_examples() {
        assert_eq!(DerivSet::empty().concat(&e("b")), DerivSet::empty());

        // ({[1]}) : <1> = {[1, 1]}
        let one = Expr::empty_word();
        let single = DerivSet::singleton(Stack::singleton(one.clone()));
        assert_eq!(
            single.push(&Stack::singleton(one.clone())),
            DerivSet::singleton(Stack::new(vec![one.clone(), one]))
        );

        let two: DerivSet =
            [Stack::singleton(e("a")), Stack::singleton(e("b"))].into_iter().collect();
        let expected: DerivSet =
            [Stack::singleton(e("a c")), Stack::singleton(e("b c"))].into_iter().collect();
        assert_eq!(two.concat(&e("c")), expected);
    }

    #[test]
    fn antimirov_examples() {
        assert!(antimirov_deriv(sym('a'), &e("b")).unwrap().is_empty());

        let d = antimirov_deriv(sym('a'), &e("a*")).unwrap();
        assert_eq!(d, BTreeSet::from([e("1 a*")]));

        let d = antimirov_deriv(sym('a'), &e("(a + b) (a + b)")).unwrap();
        assert_eq!(d, BTreeSet::from([e("1 (a + b)")]));

        assert_eq!(antimirov_deriv(sym('a'), &e("mu X. a X")), Err(Error::NotRegular));
        assert_eq!(antimirov_deriv(sym('a'), &parse("X").unwrap()), Err(Error::NotRegular));
    }

    #[test]
    fn pderiv_left_recursive_example() {
        // d_a(mu X. 1 + X a) = {[1, 1]}
        let r = e("mu X. 1 + X a");
        let one = Expr::empty_word();
        assert_eq!(
            pd(Some(sym('a')), &r),
            DerivSet::singleton(Stack::new(vec![one.clone(), one.clone()]))
        );

        // d_eps(mu X. 1 + X a) = {[(mu X. 1 + X a) a, 1]}
        let expected = DerivSet::singleton(Stack::new(vec![
            Expr::cat(r.clone(), e("a")),
            one,
        ]));
        assert_eq!(pd(None, &r), expected);
    }

    #[test]
    fn pderiv_guarded_example() {
        // d_a(mu X. 1 + a X) = {[1 (mu X. 1 + a X), 1]}
        let r = e("mu X. 1 + a X");
        let one = Expr::empty_word();
        let expected = DerivSet::singleton(Stack::new(vec![
            Expr::cat(one.clone(), r.clone()),
            one,
        ]));
        assert_eq!(pd(Some(sym('a')), &r), expected);
        assert!(pd(None, &r).is_empty());
    }

    #[test]
    fn pderiv_matches_antimirov_on_regular_fragment() {
        let cases = ["a", "a*", "(a b)*", "a + b", "(a + b) (a + b)", "1 a", "0 + a b*", "a* b*"];
        for text in cases {
            let r = e(text);
            for c in ['a', 'b'] {
                let flat: BTreeSet<Expr> = pd(Some(sym(c)), &r)
                    .iter()
                    .map(|s| {
                        assert_eq!(s.len(), 1, "mu-free stacks are singletons: {}", text);
                        s.top().clone()
                    })
                    .collect();
                assert_eq!(flat, antimirov_deriv(sym(c), &r).unwrap(), "{} / {}", text, c);
            }
            assert!(pd(None, &r).is_empty(), "no spontaneous derivative on {}", text);
        }
    }

    #[test]
    fn pderiv_stacks_are_nonempty_and_closed() {
        for text in [
            "mu X. 1 + X a",
            "mu X. 1 + a X b X",
            "mu X. a + a X a + b X b + b",
            "mu X. (mu Y. 1 + a Y) + X b",
            "mu X. X",
        ] {
            let r = e(text);
            for alpha in [Some(sym('a')), Some(sym('b')), None] {
                for stack in pd(alpha, &r).iter() {
                    assert!(!stack.items().is_empty());
                    for item in stack.items() {
                        assert!(item.is_closed(), "open item in {:?} of {}", stack, text);
                    }
                }
            }
        }
    }

    #[test]
    fn closure_examples() {
        let one = Expr::empty_word();
        // no spontaneous steps from a bare symbol
        let (set, exhausted) = closure(sym('a'), &Stack::singleton(e("a")), 5).unwrap();
        assert_eq!(set, DerivSet::singleton(Stack::singleton(one.clone())));
        assert!(!exhausted);

        let r = e("mu X. 1 + X a");
        let (set, exhausted) = closure(sym('a'), &Stack::singleton(r.clone()), 0).unwrap();
        assert_eq!(set, DerivSet::singleton(Stack::new(vec![one.clone(), one.clone()])));
        assert!(exhausted);

        // one unfolding: [r a, 1], whose a-derivative adds [1, 1 a, 1]
        let (set, exhausted) = closure(sym('a'), &Stack::singleton(r), 1).unwrap();
        let expected: DerivSet = [
            Stack::new(vec![one.clone(), one.clone()]),
            Stack::new(vec![one.clone(), e("1 a"), one.clone()]),
        ]
        .into_iter()
        .collect();
        assert_eq!(set, expected);
        assert!(exhausted);
    }
}
