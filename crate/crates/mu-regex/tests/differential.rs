//! Seeded randomized differential testing: the automaton pipeline against
//! the independent oracle on generated closed expressions. Catches
//! anything the curated corpus misses.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use mu_regex::derivative::pderiv;
use mu_regex::ipd::{ipd, Classifier, Form, StackForm};
use mu_regex::nullability::{null, NullEnv};
use mu_regex::oracle::{check_membership_rules, member};
use mu_regex::pda::{build_nfa, build_pda};
use mu_regex::syntax::{words_up_to, Expr, Subst, Symbol, VarId, Word};

/// Closed expression with at most `budget` nodes: variables only refer to
/// binders currently in scope.
fn closed_expr(rng: &mut StdRng, budget: &mut usize, scope: &mut Vec<VarId>, next_var: &mut u32) -> Expr {
    let leaf_only = *budget <= 1;
    *budget = budget.saturating_sub(1);
    let choice = if leaf_only { rng.gen_range(0..5) } else { rng.gen_range(0..10) };
    match choice {
        0 => Expr::empty_set(),
        1 => Expr::empty_word(),
        2 => Expr::sym(Symbol::new('a').unwrap()),
        3 => Expr::sym(Symbol::new('b').unwrap()),
        4 => match scope.is_empty() {
            true => Expr::empty_word(),
            false => Expr::var(scope[rng.gen_range(0..scope.len())]),
        },
        5 => Expr::star(closed_expr(rng, budget, scope, next_var)),
        6 | 7 => {
            let l = closed_expr(rng, budget, scope, next_var);
            let r = closed_expr(rng, budget, scope, next_var);
            if choice == 6 {
                Expr::alt(l, r)
            } else {
                Expr::cat(l, r)
            }
        }
        _ => {
            let x = VarId(*next_var);
            *next_var += 1;
            scope.push(x);
            let body = closed_expr(rng, budget, scope, next_var);
            scope.pop();
            Expr::mu(x, body)
        }
    }
}

fn samples(count: usize, seed: u64) -> Vec<Expr> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut budget = 10usize;
            let mut scope = Vec::new();
            let mut next_var = 0u32;
            closed_expr(&mut rng, &mut budget, &mut scope, &mut next_var).canonicalize()
        })
        .collect()
}

#[test]
fn pda_matches_oracle_on_random_expressions() {
    let mut mu_count = 0usize;
    for t in samples(200, 11) {
        if !t.is_mu_free() {
            mu_count += 1;
        }
        let p = build_pda(&t).unwrap();
        let alphabet: Vec<Symbol> = t.symbols().into_iter().collect();
        for w in words_up_to(&alphabet, 5) {
            assert_eq!(
                p.accepts(&w),
                member(&t, &w).unwrap(),
                "pda/oracle mismatch on {} / {}",
                t,
                w
            );
        }
        assert_eq!(
            null(&t, &NullEnv::new()).unwrap(),
            member(&t, &Word::empty()).unwrap(),
            "nullability mismatch on {}",
            t
        );
    }
    assert!(mu_count >= 40, "generator produced too few recursive samples: {}", mu_count);
}

#[test]
fn forms_classify_on_random_expressions() {
    for t in samples(200, 23) {
        let set = ipd(&t).unwrap();
        let classifier = Classifier::new(&t).unwrap();
        let alphas: Vec<Option<Symbol>> =
            t.symbols().into_iter().map(Some).chain([None]).collect();
        for e in set.iter() {
            assert!(
                !matches!(classifier.classify(e), Form::Other),
                "ipd({}) element {} classifies as Other",
                t,
                e
            );
            for alpha in &alphas {
                let expected = match alpha {
                    Some(_) => StackForm::TopPlus,
                    None => StackForm::RecTopStar,
                };
                for stack in pderiv(*alpha, &Subst::new(), &NullEnv::new(), e).unwrap().iter() {
                    assert_eq!(
                        classifier.stack_form(stack),
                        expected,
                        "ipd({}): derivative stack {} of {} has the wrong form",
                        t,
                        stack,
                        e
                    );
                }
            }
        }
    }
}

#[test]
fn nfa_matches_pda_on_random_regular_expressions() {
    let mut regular = 0usize;
    for t in samples(300, 37) {
        if !t.is_mu_free() {
            continue;
        }
        regular += 1;
        let n = build_nfa(&t).unwrap();
        let p = build_pda(&t).unwrap();
        let alphabet: Vec<Symbol> = t.symbols().into_iter().collect();
        for w in words_up_to(&alphabet, 5) {
            assert_eq!(n.accepts(&w), p.accepts(&w), "nfa/pda mismatch on {} / {}", t, w);
        }
    }
    assert!(regular >= 50, "too few regular samples: {}", regular);
}

#[test]
fn membership_rules_match_oracle_on_random_expressions() {
    for t in samples(60, 41) {
        let alphabet: Vec<Symbol> = t.symbols().into_iter().collect();
        for w in words_up_to(&alphabet, 3) {
            assert_eq!(
                check_membership_rules(&Subst::new(), &w, &t).unwrap(),
                member(&t, &w).unwrap(),
                "rules/oracle mismatch on {} / {}",
                t,
                w
            );
        }
    }
}
