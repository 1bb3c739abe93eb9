//! Iterated partial derivatives and their normal forms.
//!
//! `ipd(t)` computes, by worklist fixpoint, the smallest set containing
//! `1 t` and closed under taking elements of symbol and spontaneous
//! derivative stacks of members. The set is finite and serves as the
//! pushdown alphabet of the induced automaton.
//!
//! Every element decomposes as an instance, under the unfolding
//! substitution of `t`, of a head (`1`, or a mu-subterm of `t`) concatenated
//! with a vector of subterms whose addresses form a strictly ascending
//! chain in postorder (children before parents, left before right): a
//! concatenation step appends a right sibling, a star step appends an
//! enclosing star, so each appended address is postorder-later than the
//! previous one. `Classifier` recognizes these two forms.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use crate::derivative::{pderiv, Stack};
use crate::error::Error;
use crate::nullability::NullEnv;
use crate::syntax::{Address, Expr, ExprNode, Subst, Symbol};

/// Safety cap for the worklist. The fixpoint provably terminates; hitting
/// the cap turns an implementation bug into a diagnosable failure.
pub const DEFAULT_IPD_CAP: usize = 100_000;

/// The set of iterated partial derivatives of an expression, in
/// first-discovery order.
#[derive(Clone)]
pub struct IpdSet {
    origin: Expr,
    elements: Vec<Expr>,
    index: HashMap<Expr, usize>,
}

impl IpdSet {
    pub fn origin(&self) -> &Expr {
        &self.origin
    }

    pub fn elements(&self) -> &[Expr] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, e: &Expr) -> bool {
        self.index.contains_key(e)
    }

    pub fn position(&self, e: &Expr) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Expr> {
        self.elements.iter()
    }
}

impl fmt::Debug for IpdSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.elements.iter()).finish()
    }
}

pub fn ipd(t: &Expr) -> Result<IpdSet, Error> {
    ipd_with_cap(t, DEFAULT_IPD_CAP)
}

pub fn ipd_with_cap(t: &Expr, cap: usize) -> Result<IpdSet, Error> {
    if let Some(&x) = t.free_vars().iter().next() {
        return Err(Error::NotClosed(x));
    }
    let sigma = Subst::new();
    let nu = NullEnv::new();
    let alphas: Vec<Option<Symbol>> = t
        .symbols()
        .into_iter()
        .map(Some)
        .chain(std::iter::once(None))
        .collect();

    let seed = Expr::cat(Expr::empty_word(), t.clone());
    let mut elements = vec![seed.clone()];
    let mut index = HashMap::new();
    index.insert(seed, 0usize);
    let mut queue: VecDeque<usize> = VecDeque::new();
    queue.push_back(0);

    while let Some(i) = queue.pop_front() {
        let r = elements[i].clone();
        for alpha in &alphas {
            for stack in pderiv(*alpha, &sigma, &nu, &r)?.iter() {
                for item in stack.items() {
                    if index.contains_key(item) {
                        continue;
                    }
                    if elements.len() >= cap {
                        return Err(Error::IpdCapExceeded(cap));
                    }
                    index.insert(item.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(item.clone());
                }
            }
        }
    }
    Ok(IpdSet { origin: t.clone(), elements, index })
}

/// Normal form of one iterated derivative with respect to the origin
/// expression: the decomposition witness carries the addresses of the
/// vector components, strictly ascending in postorder.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Form {
    Top { vector: Vec<Address> },
    Rec { head: Expr, vector: Vec<Address> },
    Other,
}

/// Strict postorder on addresses: a proper descendant precedes its
/// ancestors, siblings compare left to right.
fn postorder_before(a: &Address, b: &Address) -> bool {
    let (x, y) = (a.path(), b.path());
    let common = x.iter().zip(y.iter()).take_while(|(i, j)| i == j).count();
    match (x.get(common), y.get(common)) {
        (Some(i), Some(j)) => i < j,
        (Some(_), None) => true,  // b is a proper prefix (ancestor) of a
        (None, Some(_)) => false, // a is a proper prefix of b
        (None, None) => false,    // equal
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Form::Top { .. } => write!(f, "top"),
            Form::Rec { .. } => write!(f, "rec"),
            Form::Other => write!(f, "other"),
        }
    }
}

/// Shape of a whole derivative stack.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StackForm {
    /// Every element has form top.
    TopPlus,
    /// The top element has form rec, the rest have form top.
    RecTopStar,
    Other,
}

impl fmt::Display for StackForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StackForm::TopPlus => write!(f, "top+"),
            StackForm::RecTopStar => write!(f, "rec.top*"),
            StackForm::Other => write!(f, "other"),
        }
    }
}

/// Precomputed decomposition tables for one origin expression.
pub struct Classifier {
    /// Image of each addressed subterm under the unfolding substitution,
    /// with the addresses it occurs at in ascending postorder.
    image_addrs: BTreeMap<Expr, Vec<Address>>,
    /// Image of each mu-subterm, with the subterm and the postorder-least
    /// witness for the strictly-before side condition: the first occurrence
    /// of the bound variable, or the mu-subterm's own address if the
    /// variable never occurs.
    rec_heads: BTreeMap<Expr, (Expr, Address)>,
    one: Expr,
}

impl Classifier {
    pub fn new(t: &Expr) -> Result<Classifier, Error> {
        if let Some(&x) = t.free_vars().iter().next() {
            return Err(Error::NotClosed(x));
        }
        let sigma_t = Subst::unfolding(t)?;
        let mut image_addrs: BTreeMap<Expr, Vec<Address>> = BTreeMap::new();
        let mut var_addrs: BTreeMap<crate::syntax::VarId, Vec<Address>> = BTreeMap::new();
        let mut mu_subterms: Vec<(Expr, Address)> = Vec::new();
        for (addr, sub) in t.address_map() {
            let image = sigma_t.apply(&sub)?;
            image_addrs.entry(image).or_default().push(addr.clone());
            match sub.node() {
                ExprNode::Mu(..) => mu_subterms.push((sub.clone(), addr)),
                ExprNode::Var(x) => var_addrs.entry(*x).or_default().push(addr),
                _ => {}
            }
        }
        for addrs in image_addrs.values_mut() {
            addrs.sort_by(|a, b| {
                if postorder_before(a, b) {
                    std::cmp::Ordering::Less
                } else if a == b {
                    std::cmp::Ordering::Equal
                } else {
                    std::cmp::Ordering::Greater
                }
            });
        }
        let mut rec_heads: BTreeMap<Expr, (Expr, Address)> = BTreeMap::new();
        for (sub, addr) in mu_subterms {
            let ExprNode::Mu(x, _) = sub.node() else { unreachable!() };
            let witness = var_addrs
                .get(x)
                .and_then(|occ| {
                    occ.iter().cloned().min_by(|a, b| {
                        if postorder_before(a, b) {
                            std::cmp::Ordering::Less
                        } else {
                            std::cmp::Ordering::Greater
                        }
                    })
                })
                .unwrap_or_else(|| addr.clone());
            let image = sigma_t.apply(&sub)?;
            rec_heads.entry(image).or_insert((sub, witness));
        }
        Ok(Classifier { image_addrs, rec_heads, one: Expr::empty_word() })
    }

    /// Greedily assign postorder-ascending addresses to the vector images,
    /// each strictly after `lower` when given. Greedy (postorder-least
    /// admissible address first) is complete for chains.
    fn assign(&self, elems: &[&Expr], mut lower: Option<Address>) -> Option<Vec<Address>> {
        let mut out = Vec::with_capacity(elems.len());
        for e in elems {
            let addrs = self.image_addrs.get(*e)?;
            let pick = addrs.iter().find(|a| match &lower {
                None => true,
                Some(l) => postorder_before(l, a),
            })?;
            out.push(pick.clone());
            lower = Some(pick.clone());
        }
        Some(out)
    }

    /// Candidate decompositions of `e`, peeling the concatenation spine
    /// from the bottom: yields (head, vector images in order).
    fn decompositions(e: &Expr) -> Vec<(Expr, Vec<Expr>)> {
        let mut out = Vec::new();
        let mut rev_vector: Vec<Expr> = Vec::new();
        let mut head = e.clone();
        loop {
            let vector: Vec<Expr> = rev_vector.iter().rev().cloned().collect();
            out.push((head.clone(), vector));
            match head.node() {
                ExprNode::Cat(l, r) => {
                    rev_vector.push(r.clone());
                    head = l.clone();
                }
                _ => break,
            }
        }
        out
    }

    /// Witness that `e` has form top: `sigma_t(1 · s1 ... sk)` for a
    /// t-sorted vector, possibly empty.
    pub fn has_form_top(&self, e: &Expr) -> Option<Vec<Address>> {
        for (head, vector) in Self::decompositions(e) {
            if head != self.one {
                continue;
            }
            let refs: Vec<&Expr> = vector.iter().collect();
            if let Some(addrs) = self.assign(&refs, None) {
                return Some(addrs);
            }
        }
        None
    }

    /// Witness that `e` has form rec: `sigma_t((mu x. s) · s1 ... sk)` where
    /// the mu-subterm (or an occurrence of its variable) is strictly before
    /// every vector component.
    pub fn has_form_rec(&self, e: &Expr) -> Option<(Expr, Vec<Address>)> {
        for (head, vector) in Self::decompositions(e) {
            let Some((mu_sub, mu_addr)) = self.rec_heads.get(&head) else {
                continue;
            };
            let refs: Vec<&Expr> = vector.iter().collect();
            if let Some(addrs) = self.assign(&refs, Some(mu_addr.clone())) {
                return Some((mu_sub.clone(), addrs));
            }
        }
        None
    }

    pub fn classify(&self, e: &Expr) -> Form {
        if let Some(vector) = self.has_form_top(e) {
            return Form::Top { vector };
        }
        if let Some((head, vector)) = self.has_form_rec(e) {
            return Form::Rec { head, vector };
        }
        Form::Other
    }

    pub fn stack_form(&self, stack: &Stack) -> StackForm {
        let items = stack.items();
        if items.iter().all(|e| self.has_form_top(e).is_some()) {
            return StackForm::TopPlus;
        }
        if self.has_form_rec(&items[0]).is_some()
            && items[1..].iter().all(|e| self.has_form_top(e).is_some())
        {
            return StackForm::RecTopStar;
        }
        StackForm::Other
    }
}

/// One-shot classification; build a `Classifier` when looping over a set.
pub fn classify(t: &Expr, e: &Expr) -> Result<Form, Error> {
    Ok(Classifier::new(t)?.classify(e))
}

pub fn stack_form(t: &Expr, stack: &Stack) -> Result<StackForm, Error> {
    Ok(Classifier::new(t)?.stack_form(stack))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;
    use std::collections::BTreeSet;

    fn e(text: &str) -> Expr {
        parse(text).unwrap().canonicalize()
    }

    #[test]
    fn ipd_single_symbol() {
        let set = ipd(&e("a")).unwrap();
        let expected = BTreeSet::from([e("1 a"), Expr::empty_word()]);
        assert_eq!(set.iter().cloned().collect::<BTreeSet<_>>(), expected);
    }

    #[test]
    fn ipd_left_recursive_has_four_elements() {
        let t = e("mu X. 1 + X a");
        let set = ipd(&t).unwrap();
        assert_eq!(set.len(), 4);
        let expected = BTreeSet::from([
            Expr::cat(Expr::empty_word(), t.clone()),
            Expr::empty_word(),
            Expr::cat(t.clone(), e("a")),
            e("1 a"),
        ]);
        assert_eq!(set.iter().cloned().collect::<BTreeSet<_>>(), expected);
        // discovery order: seed first, then elements of its a-derivative,
        // then of its spontaneous derivative
        assert_eq!(set.elements()[0], Expr::cat(Expr::empty_word(), t.clone()));
        assert_eq!(set.elements()[1], Expr::empty_word());
        assert_eq!(set.elements()[2], Expr::cat(t, e("a")));
    }

    #[test]
    fn ipd_empty_set_expression() {
        let set = ipd(&e("0")).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.elements()[0], e("1 0"));
    }

    #[test]
    fn ipd_rejects_open_expressions() {
        assert!(matches!(ipd(&parse("X a").unwrap()), Err(Error::NotClosed(_))));
    }

    #[test]
    fn ipd_cap_reports_overflow() {
        match ipd_with_cap(&e("mu X. 1 + X a"), 2) {
            Err(Error::IpdCapExceeded(2)) => {}
            other => panic!("expected cap overflow, got {:?}", other.map(|s| s.len())),
        }
    }

    #[test]
    fn ipd_contains_seed_and_is_derivative_closed() {
        for text in ["a", "mu X. 1 + X a", "mu X. 1 + a X b", "mu X. X", "mu X. (mu Y. 1 + a Y) + X b"] {
            let t = e(text);
            let set = ipd(&t).unwrap();
            assert!(set.contains(&Expr::cat(Expr::empty_word(), t.clone())));
            let alphas: Vec<Option<Symbol>> =
                t.symbols().into_iter().map(Some).chain([None]).collect();
            for member in set.iter() {
                for alpha in &alphas {
                    for stack in pderiv(*alpha, &Subst::new(), &NullEnv::new(), member).unwrap().iter() {
                        for item in stack.items() {
                            assert!(set.contains(item), "{} escaped ipd({})", item, text);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn classify_examples() {
        let t = e("mu X. 1 + X a");
        let cl = Classifier::new(&t).unwrap();

        match cl.classify(&Expr::empty_word()) {
            Form::Top { vector } => assert!(vector.is_empty()),
            other => panic!("expected top, got {:?}", other),
        }

        match cl.classify(&Expr::cat(t.clone(), e("a"))) {
            Form::Rec { head, vector } => {
                assert_eq!(head, t);
                assert_eq!(vector, vec![Address::from_path(&[1, 2, 2])]);
            }
            other => panic!("expected rec, got {:?}", other),
        }

        match cl.classify(&e("1 a")) {
            Form::Top { vector } => assert_eq!(vector, vec![Address::from_path(&[1, 2, 2])]),
            other => panic!("expected top, got {:?}", other),
        }
    }

    #[test]
    fn stack_form_examples() {
        let t = e("mu X. 1 + X a");
        let cl = Classifier::new(&t).unwrap();
        let one = Expr::empty_word();
        let ra = Expr::cat(t.clone(), e("a"));

        assert_eq!(cl.stack_form(&Stack::new(vec![one.clone(), one.clone()])), StackForm::TopPlus);
        assert_eq!(cl.stack_form(&Stack::new(vec![ra.clone(), one])), StackForm::RecTopStar);
        assert_eq!(cl.stack_form(&Stack::new(vec![ra.clone(), ra])), StackForm::Other);
    }

    #[test]
    fn postorder_places_descendants_first_and_left_before_right() {
        let root = Address::root();
        let a1 = Address::from_path(&[1]);
        let a12 = Address::from_path(&[1, 2]);
        let a2 = Address::from_path(&[2]);
        assert!(postorder_before(&a12, &a1)); // child before parent
        assert!(postorder_before(&a1, &root));
        assert!(!postorder_before(&root, &a1));
        assert!(postorder_before(&a1, &a2)); // left before right
        assert!(postorder_before(&a12, &a2));
        assert!(!postorder_before(&a1, &a1));
    }

    #[test]
    fn star_over_concatenation_classifies_top() {
        // d_a(1 (a b)*) = {[(1 b) (a b)*]}: the vector is (b, (a b)*), an
        // inner right sibling followed by the enclosing star
        let t = e("(a b)*");
        let set = ipd(&t).unwrap();
        assert_eq!(set.len(), 2);
        let cl = Classifier::new(&t).unwrap();
        let elem = Expr::cat(e("1 b"), t.clone());
        assert!(set.contains(&elem));
        match cl.classify(&elem) {
            Form::Top { vector } => {
                assert_eq!(vector, vec![Address::from_path(&[1, 2]), Address::root()]);
            }
            other => panic!("expected top, got {:?}", other),
        }
    }

    #[test]
    fn bare_mu_member_classifies_rec_with_empty_vector() {
        let t = e("mu X. X");
        let set = ipd(&t).unwrap();
        assert!(set.contains(&t));
        let cl = Classifier::new(&t).unwrap();
        match cl.classify(&t) {
            Form::Rec { head, vector } => {
                assert_eq!(head, t);
                assert!(vector.is_empty());
            }
            other => panic!("expected rec, got {:?}", other),
        }
    }
}
