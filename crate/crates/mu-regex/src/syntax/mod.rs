//! Expression syntax: the interned AST, concrete syntax, variable
//! canonicalization, free variables, order-closed substitutions, subterm
//! addressing and the unfolding substitution.
//!
//! Expressions are hash-consed: structurally equal trees share one node, so
//! equality and hashing are O(1) and worklist fixpoints can use plain set
//! membership. The intern table is global and mutex-guarded; expressions are
//! immutable once built, so sharing them across threads is safe.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::Error;

mod parser;
pub use parser::parse;

/// A single input symbol. The alphabet is lowercase ASCII.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(u8);

impl Symbol {
    pub fn new(c: char) -> Result<Symbol, Error> {
        if c.is_ascii_lowercase() {
            Ok(Symbol(c as u8))
        } else {
            Err(Error::BadSymbol(c))
        }
    }

    pub fn as_char(self) -> char {
        self.0 as char
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A word over the alphabet, ordered shortlex so listings are stable.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn new(symbols: Vec<Symbol>) -> Word {
        Word(symbols)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    /// `self` with `s` appended on the right.
    pub fn appended(&self, s: Symbol) -> Word {
        let mut v = self.0.clone();
        v.push(s);
        Word(v)
    }

    /// `self` with `s` prepended on the left.
    pub fn prepended(&self, s: Symbol) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(s);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    pub fn split_first(&self) -> Option<(Symbol, Word)> {
        self.0.split_first().map(|(s, rest)| (*s, Word(rest.to_vec())))
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(text: &str) -> Result<Word, Error> {
        text.chars().map(Symbol::new).collect::<Result<Vec<_>, _>>().map(Word)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "ε")
        } else {
            for s in &self.0 {
                write!(f, "{}", s)?;
            }
            Ok(())
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// All words over `alphabet` of length at most `max_len`, in shortlex order.
pub fn words_up_to(alphabet: &[Symbol], max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut level = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(level.len() * alphabet.len());
        for w in &level {
            for &s in alphabet {
                next.push(w.appended(s));
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

/// Variable identifier. Canonicalization assigns indices in preorder of the
/// binders, so the numeric order realizes the binder order: any enclosing
/// binder has a strictly smaller index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u32);

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{}", self.0)
    }
}

impl fmt::Debug for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{}", self.0)
    }
}

/// The eight constructors of a mu-regular expression.
#[derive(Clone)]
pub enum ExprNode {
    EmptySet,
    EmptyWord,
    Sym(Symbol),
    Alt(Expr, Expr),
    Cat(Expr, Expr),
    Star(Expr),
    Var(VarId),
    Mu(VarId, Expr),
}

struct ExprInner {
    id: u64,
    node: ExprNode,
}

/// An interned mu-regular expression. Cloning is cheap (one `Arc` bump);
/// equality is structural and O(1).
#[derive(Clone)]
pub struct Expr(Arc<ExprInner>);

#[derive(PartialEq, Eq, Hash)]
enum InternKey {
    EmptySet,
    EmptyWord,
    Sym(u8),
    Alt(u64, u64),
    Cat(u64, u64),
    Star(u64),
    Var(u32),
    Mu(u32, u64),
}

fn intern(node: ExprNode) -> Expr {
    static TABLE: OnceLock<Mutex<(HashMap<InternKey, Expr>, u64)>> = OnceLock::new();
    let key = match &node {
        ExprNode::EmptySet => InternKey::EmptySet,
        ExprNode::EmptyWord => InternKey::EmptyWord,
        ExprNode::Sym(s) => InternKey::Sym(s.0),
        ExprNode::Alt(l, r) => InternKey::Alt(l.id(), r.id()),
        ExprNode::Cat(l, r) => InternKey::Cat(l.id(), r.id()),
        ExprNode::Star(b) => InternKey::Star(b.id()),
        ExprNode::Var(x) => InternKey::Var(x.0),
        ExprNode::Mu(x, b) => InternKey::Mu(x.0, b.id()),
    };
    let mut guard = TABLE.get_or_init(|| Mutex::new((HashMap::new(), 0))).lock().unwrap();
    let (map, next_id) = &mut *guard;
    if let Some(e) = map.get(&key) {
        return e.clone();
    }
    let id = *next_id;
    *next_id += 1;
    let e = Expr(Arc::new(ExprInner { id, node }));
    map.insert(key, e.clone());
    e
}

impl Expr {
    pub fn empty_set() -> Expr {
        intern(ExprNode::EmptySet)
    }

    pub fn empty_word() -> Expr {
        intern(ExprNode::EmptyWord)
    }

    pub fn sym(s: Symbol) -> Expr {
        intern(ExprNode::Sym(s))
    }

    pub fn alt(l: Expr, r: Expr) -> Expr {
        intern(ExprNode::Alt(l, r))
    }

    pub fn cat(l: Expr, r: Expr) -> Expr {
        intern(ExprNode::Cat(l, r))
    }

    pub fn star(b: Expr) -> Expr {
        intern(ExprNode::Star(b))
    }

    pub fn var(x: VarId) -> Expr {
        intern(ExprNode::Var(x))
    }

    pub fn mu(x: VarId, body: Expr) -> Expr {
        intern(ExprNode::Mu(x, body))
    }

    pub fn node(&self) -> &ExprNode {
        &self.0.node
    }

    /// The interned identity: equal exactly for structurally equal trees.
    pub(crate) fn interned_id(&self) -> u64 {
        self.0.id
    }

    fn id(&self) -> u64 {
        self.0.id
    }

    /// Free variables, with binder shadowing respected.
    pub fn free_vars(&self) -> BTreeSet<VarId> {
        fn walk(e: &Expr, bound: &mut Vec<VarId>, out: &mut BTreeSet<VarId>) {
            match e.node() {
                ExprNode::EmptySet | ExprNode::EmptyWord | ExprNode::Sym(_) => {}
                ExprNode::Alt(l, r) | ExprNode::Cat(l, r) => {
                    walk(l, bound, out);
                    walk(r, bound, out);
                }
                ExprNode::Star(b) => walk(b, bound, out),
                ExprNode::Var(x) => {
                    if !bound.contains(x) {
                        out.insert(*x);
                    }
                }
                ExprNode::Mu(x, b) => {
                    bound.push(*x);
                    walk(b, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// True when the expression contains neither `mu` nor variables.
    pub fn is_mu_free(&self) -> bool {
        match self.node() {
            ExprNode::EmptySet | ExprNode::EmptyWord | ExprNode::Sym(_) => true,
            ExprNode::Alt(l, r) | ExprNode::Cat(l, r) => l.is_mu_free() && r.is_mu_free(),
            ExprNode::Star(b) => b.is_mu_free(),
            ExprNode::Var(_) | ExprNode::Mu(..) => false,
        }
    }

    /// The set of symbols occurring in the expression.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        fn walk(e: &Expr, out: &mut BTreeSet<Symbol>) {
            match e.node() {
                ExprNode::Sym(s) => {
                    out.insert(*s);
                }
                ExprNode::Alt(l, r) | ExprNode::Cat(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
                ExprNode::Star(b) | ExprNode::Mu(_, b) => walk(b, out),
                ExprNode::EmptySet | ExprNode::EmptyWord | ExprNode::Var(_) => {}
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut out);
        out
    }

    pub fn node_count(&self) -> usize {
        match self.node() {
            ExprNode::EmptySet | ExprNode::EmptyWord | ExprNode::Sym(_) | ExprNode::Var(_) => 1,
            ExprNode::Alt(l, r) | ExprNode::Cat(l, r) => 1 + l.node_count() + r.node_count(),
            ExprNode::Star(b) | ExprNode::Mu(_, b) => 1 + b.node_count(),
        }
    }

    /// Alpha-rename binders to unique indices in preorder. Free variables
    /// receive the smallest indices (in order of first occurrence), then the
    /// binders follow in preorder, so the result is order-respecting by
    /// construction. Idempotent; closed input stays closed.
    pub fn canonicalize(&self) -> Expr {
        fn collect_free(e: &Expr, bound: &mut Vec<VarId>, out: &mut Vec<VarId>) {
            match e.node() {
                ExprNode::EmptySet | ExprNode::EmptyWord | ExprNode::Sym(_) => {}
                ExprNode::Alt(l, r) | ExprNode::Cat(l, r) => {
                    collect_free(l, bound, out);
                    collect_free(r, bound, out);
                }
                ExprNode::Star(b) => collect_free(b, bound, out),
                ExprNode::Var(x) => {
                    if !bound.contains(x) && !out.contains(x) {
                        out.push(*x);
                    }
                }
                ExprNode::Mu(x, b) => {
                    bound.push(*x);
                    collect_free(b, bound, out);
                    bound.pop();
                }
            }
        }

        fn rebuild(
            e: &Expr,
            counter: &mut u32,
            scopes: &mut HashMap<VarId, Vec<VarId>>,
            free_map: &HashMap<VarId, VarId>,
        ) -> Expr {
            match e.node() {
                ExprNode::EmptySet | ExprNode::EmptyWord | ExprNode::Sym(_) => e.clone(),
                ExprNode::Alt(l, r) => {
                    let nl = rebuild(l, counter, scopes, free_map);
                    let nr = rebuild(r, counter, scopes, free_map);
                    Expr::alt(nl, nr)
                }
                ExprNode::Cat(l, r) => {
                    let nl = rebuild(l, counter, scopes, free_map);
                    let nr = rebuild(r, counter, scopes, free_map);
                    Expr::cat(nl, nr)
                }
                ExprNode::Star(b) => {
                    let nb = rebuild(b, counter, scopes, free_map);
                    Expr::star(nb)
                }
                ExprNode::Var(x) => match scopes.get(x).and_then(|stack| stack.last()) {
                    Some(new) => Expr::var(*new),
                    None => Expr::var(free_map[x]),
                },
                ExprNode::Mu(x, b) => {
                    let new = VarId(*counter);
                    *counter += 1;
                    scopes.entry(*x).or_default().push(new);
                    let nb = rebuild(b, counter, scopes, free_map);
                    scopes.get_mut(x).unwrap().pop();
                    Expr::mu(new, nb)
                }
            }
        }

        let mut free_order = Vec::new();
        collect_free(self, &mut Vec::new(), &mut free_order);
        let free_map: HashMap<VarId, VarId> =
            free_order.iter().enumerate().map(|(i, x)| (*x, VarId(i as u32))).collect();
        let mut counter = free_order.len() as u32;
        rebuild(self, &mut counter, &mut HashMap::new(), &free_map)
    }

    /// True when every subterm `mu x. r` has only free variables strictly
    /// before `x`.
    pub fn is_order_respecting(&self) -> bool {
        fn walk(e: &Expr) -> bool {
            match e.node() {
                ExprNode::EmptySet | ExprNode::EmptyWord | ExprNode::Sym(_) | ExprNode::Var(_) => true,
                ExprNode::Alt(l, r) | ExprNode::Cat(l, r) => walk(l) && walk(r),
                ExprNode::Star(b) => walk(b),
                ExprNode::Mu(x, b) => e.free_vars().iter().all(|y| y < x) && walk(b),
            }
        }
        walk(self)
    }

    /// Map from each subterm address to the subterm. The domain is
    /// prefix-closed; binary nodes use child indices 1 and 2, unary nodes
    /// use child index 1.
    pub fn address_map(&self) -> BTreeMap<Address, Expr> {
        fn walk(e: &Expr, addr: Address, out: &mut BTreeMap<Address, Expr>) {
            out.insert(addr.clone(), e.clone());
            match e.node() {
                ExprNode::EmptySet | ExprNode::EmptyWord | ExprNode::Sym(_) | ExprNode::Var(_) => {}
                ExprNode::Alt(l, r) | ExprNode::Cat(l, r) => {
                    walk(l, addr.child(1), out);
                    walk(r, addr.child(2), out);
                }
                ExprNode::Star(b) | ExprNode::Mu(_, b) => walk(b, addr.child(1), out),
            }
        }
        let mut out = BTreeMap::new();
        walk(self, Address::root(), &mut out);
        out
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let prec = match self.node() {
            ExprNode::Mu(..) => 0,
            ExprNode::Alt(..) => 1,
            ExprNode::Cat(..) => 2,
            ExprNode::Star(..) => 3,
            _ => 4,
        };
        let parens = prec < min_prec;
        if parens {
            write!(f, "(")?;
        }
        match self.node() {
            ExprNode::EmptySet => write!(f, "0")?,
            ExprNode::EmptyWord => write!(f, "1")?,
            ExprNode::Sym(s) => write!(f, "{}", s)?,
            ExprNode::Var(x) => write!(f, "{}", x)?,
            ExprNode::Alt(l, r) => {
                l.fmt_prec(f, 1)?;
                write!(f, " + ")?;
                r.fmt_prec(f, 2)?;
            }
            ExprNode::Cat(l, r) => {
                l.fmt_prec(f, 2)?;
                write!(f, " ")?;
                r.fmt_prec(f, 3)?;
            }
            ExprNode::Star(b) => {
                b.fmt_prec(f, 3)?;
                write!(f, "*")?;
            }
            ExprNode::Mu(x, b) => {
                write!(f, "mu {}. ", x)?;
                b.fmt_prec(f, 0)?;
            }
        }
        if parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.id() == other.id()
    }
}

impl Eq for Expr {}

impl std::hash::Hash for Expr {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.id().hash(state);
    }
}

impl PartialOrd for Expr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Structural total order, independent of interning order, so printed
/// listings come out identical across runs.
impl Ord for Expr {
    fn cmp(&self, other: &Self) -> Ordering {
        fn rank(n: &ExprNode) -> u8 {
            match n {
                ExprNode::EmptySet => 0,
                ExprNode::EmptyWord => 1,
                ExprNode::Sym(_) => 2,
                ExprNode::Var(_) => 3,
                ExprNode::Star(_) => 4,
                ExprNode::Alt(..) => 5,
                ExprNode::Cat(..) => 6,
                ExprNode::Mu(..) => 7,
            }
        }
        if self.id() == other.id() {
            return Ordering::Equal;
        }
        match (self.node(), other.node()) {
            (ExprNode::Sym(a), ExprNode::Sym(b)) => a.cmp(b),
            (ExprNode::Var(a), ExprNode::Var(b)) => a.cmp(b),
            (ExprNode::Star(a), ExprNode::Star(b)) => a.cmp(b),
            (ExprNode::Alt(a1, a2), ExprNode::Alt(b1, b2))
            | (ExprNode::Cat(a1, a2), ExprNode::Cat(b1, b2)) => {
                a1.cmp(b1).then_with(|| a2.cmp(b2))
            }
            (ExprNode::Mu(x, a), ExprNode::Mu(y, b)) => x.cmp(y).then_with(|| a.cmp(b)),
            (a, b) => rank(a).cmp(&rank(b)),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Expr {
    type Err = Error;

    fn from_str(text: &str) -> Result<Expr, Error> {
        parse(text)
    }
}

/// Replace free occurrences of `x` in `e` by `image`. No capture avoidance:
/// callers guarantee (via order-closedness) that the image's free variables
/// are strictly smaller than any binder enclosing an occurrence of `x`.
fn substitute(e: &Expr, x: VarId, image: &Expr) -> Expr {
    match e.node() {
        ExprNode::Var(y) if *y == x => image.clone(),
        ExprNode::EmptySet | ExprNode::EmptyWord | ExprNode::Sym(_) | ExprNode::Var(_) => e.clone(),
        ExprNode::Alt(l, r) => Expr::alt(substitute(l, x, image), substitute(r, x, image)),
        ExprNode::Cat(l, r) => Expr::cat(substitute(l, x, image), substitute(r, x, image)),
        ExprNode::Star(b) => Expr::star(substitute(b, x, image)),
        ExprNode::Mu(y, _) if *y == x => e.clone(),
        ExprNode::Mu(y, b) => Expr::mu(*y, substitute(b, x, image)),
    }
}

/// An order-closed map from variables to expressions.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Subst {
    entries: BTreeMap<VarId, Expr>,
}

impl Subst {
    pub fn new() -> Subst {
        Subst::default()
    }

    pub fn with(&self, x: VarId, e: Expr) -> Subst {
        let mut entries = self.entries.clone();
        entries.insert(x, e);
        Subst { entries }
    }

    pub fn insert(&mut self, x: VarId, e: Expr) {
        self.entries.insert(x, e);
    }

    pub fn get(&self, x: VarId) -> Option<&Expr> {
        self.entries.get(&x)
    }

    pub fn entries(&self) -> &BTreeMap<VarId, Expr> {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Order-closedness: every image is order-respecting and its free
    /// variables are strictly smaller than the mapped variable and inside
    /// the domain.
    pub fn check_order_closed(&self) -> Result<(), Error> {
        for (x, e) in &self.entries {
            if !e.is_order_respecting() {
                return Err(Error::NotOrderClosed(*x));
            }
            for y in e.free_vars() {
                if y >= *x || !self.entries.contains_key(&y) {
                    return Err(Error::NotOrderClosed(*x));
                }
            }
        }
        Ok(())
    }

    pub fn is_order_closed(&self) -> bool {
        self.check_order_closed().is_ok()
    }

    /// The unfolding substitution: maps every binder `x` of `t` to its
    /// subterm `mu x. r`. Requires each variable to be bound at most once.
    pub fn unfolding(t: &Expr) -> Result<Subst, Error> {
        fn walk(e: &Expr, out: &mut BTreeMap<VarId, Expr>) -> Result<(), Error> {
            match e.node() {
                ExprNode::EmptySet | ExprNode::EmptyWord | ExprNode::Sym(_) | ExprNode::Var(_) => Ok(()),
                ExprNode::Alt(l, r) | ExprNode::Cat(l, r) => {
                    walk(l, out)?;
                    walk(r, out)
                }
                ExprNode::Star(b) => walk(b, out),
                ExprNode::Mu(x, b) => {
                    if out.insert(*x, e.clone()).is_some() {
                        return Err(Error::DuplicateBinder(*x));
                    }
                    walk(b, out)
                }
            }
        }
        let mut entries = BTreeMap::new();
        walk(t, &mut entries)?;
        Ok(Subst { entries })
    }

    /// Apply the substitution: repeatedly replace the largest free variable
    /// by its image until the expression is closed. Order-closedness makes
    /// this terminate; the result does not depend on which maximal variable
    /// is picked, so largest-first is a pure tie-break for reproducibility.
    pub fn apply(&self, r: &Expr) -> Result<Expr, Error> {
        self.check_order_closed()?;
        let mut cur = r.clone();
        loop {
            let fv = cur.free_vars();
            let Some(&x) = fv.iter().next_back() else {
                return Ok(cur);
            };
            let image = self.entries.get(&x).ok_or(Error::UnboundVariable(x))?;
            cur = substitute(&cur, x, image);
        }
    }
}

impl fmt::Debug for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (x, e)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} -> {}", x, e)?;
        }
        write!(f, "}}")
    }
}

/// Path to a subterm occurrence: a sequence of child indices over {1, 2}.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Address(Vec<u8>);

impl Address {
    pub fn root() -> Address {
        Address(Vec::new())
    }

    pub fn from_path(path: &[u8]) -> Address {
        Address(path.to_vec())
    }

    pub fn child(&self, i: u8) -> Address {
        let mut path = self.0.clone();
        path.push(i);
        Address(path)
    }

    pub fn path(&self) -> &[u8] {
        &self.0
    }

    /// Lexicographic occurs-before: the empty path precedes everything, a
    /// smaller head index decides, equal heads recurse.
    pub fn occurs_before(&self, other: &Address) -> bool {
        fn go(a: &[u8], b: &[u8]) -> bool {
            match (a.first(), b.first()) {
                (None, _) => true,
                (Some(_), None) => false,
                (Some(i), Some(j)) => {
                    if i < j {
                        true
                    } else if i > j {
                        false
                    } else {
                        go(&a[1..], &b[1..])
                    }
                }
            }
        }
        go(&self.0, &other.0)
    }

    pub fn strictly_before(&self, other: &Address) -> bool {
        self != other && self.occurs_before(other)
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "ε")
        } else {
            for i in &self.0 {
                write!(f, "{}", i)?;
            }
            Ok(())
        }
    }
}

impl fmt::Debug for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
