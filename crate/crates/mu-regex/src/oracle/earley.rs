//! Earley chart recognizer.
//!
//! Plain items (production, dot, origin) with one state set per input
//! position. Nullable nonterminals are precomputed and predictions over
//! them also advance the dot (the Aycock–Horspool treatment), which makes
//! ε-productions and hidden left recursion safe without re-running the
//! completer.

use std::collections::HashSet;

use super::{Grammar, GrammarSym};
use crate::syntax::Word;

type Item = (usize, usize, usize); // (production, dot, origin)

pub(super) fn recognize(g: &Grammar, w: &Word) -> bool {
    let n = w.len();
    let input = w.symbols();
    let nullable = g.nullable_set();
    let mut chart: Vec<Vec<Item>> = vec![Vec::new(); n + 1];
    let mut seen: Vec<HashSet<Item>> = vec![HashSet::new(); n + 1];

    fn add(chart: &mut [Vec<Item>], seen: &mut [HashSet<Item>], pos: usize, item: Item) {
        if seen[pos].insert(item) {
            chart[pos].push(item);
        }
    }

    for &p in g.productions_of(g.start()) {
        add(&mut chart, &mut seen, 0, (p, 0, 0));
    }

    for i in 0..=n {
        let mut k = 0;
        while k < chart[i].len() {
            let (p, dot, origin) = chart[i][k];
            k += 1;
            let body = &g.productions()[p].body;
            if dot < body.len() {
                match body[dot] {
                    GrammarSym::Nonterminal(b) => {
                        for &q in g.productions_of(b) {
                            add(&mut chart, &mut seen, i, (q, 0, i));
                        }
                        if nullable[b] {
                            add(&mut chart, &mut seen, i, (p, dot + 1, origin));
                        }
                    }
                    GrammarSym::Terminal(a) => {
                        if i < n && input[i] == a {
                            add(&mut chart, &mut seen, i + 1, (p, dot + 1, origin));
                        }
                    }
                }
            } else {
                let head = g.productions()[p].head;
                let mut j = 0;
                while j < chart[origin].len() {
                    let (p2, dot2, origin2) = chart[origin][j];
                    j += 1;
                    let body2 = &g.productions()[p2].body;
                    if dot2 < body2.len() && body2[dot2] == GrammarSym::Nonterminal(head) {
                        add(&mut chart, &mut seen, i, (p2, dot2 + 1, origin2));
                    }
                }
            }
        }
    }

    chart[n].iter().any(|&(p, dot, origin)| {
        origin == 0 && g.productions()[p].head == g.start() && dot == g.productions()[p].body.len()
    })
}

#[cfg(test)]
mod tests {
    use super::super::{Grammar, Production, GrammarSym};
    use super::*;
    use crate::syntax::Symbol;
    use std::collections::BTreeSet;

    fn sym(c: char) -> Symbol {
        Symbol::new(c).unwrap()
    }

    fn w(text: &str) -> Word {
        text.parse().unwrap()
    }

    /// N0 -> %eps | a N0 b  (directly, without the unit chains the
    /// structural translation produces)
    fn anbn() -> Grammar {
        Grammar::new(
            vec!["N0".into()],
            BTreeSet::from([sym('a'), sym('b')]),
            vec![
                Production { head: 0, body: vec![] },
                Production {
                    head: 0,
                    body: vec![
                        GrammarSym::Terminal(sym('a')),
                        GrammarSym::Nonterminal(0),
                        GrammarSym::Terminal(sym('b')),
                    ],
                },
            ],
            0,
        )
        .unwrap()
    }

    #[test]
    fn recognizes_anbn() {
        let g = anbn();
        for (word, expect) in [("", true), ("ab", true), ("aabb", true), ("aab", false), ("abab", false)] {
            assert_eq!(recognize(&g, &w(word)), expect, "{:?}", word);
        }
    }

    #[test]
    fn left_recursion_terminates() {
        // N0 -> N0 a | %eps  (left-recursive a*)
        let g = Grammar::new(
            vec!["N0".into()],
            BTreeSet::from([sym('a')]),
            vec![
                Production { head: 0, body: vec![GrammarSym::Nonterminal(0), GrammarSym::Terminal(sym('a'))] },
                Production { head: 0, body: vec![] },
            ],
            0,
        )
        .unwrap();
        assert!(recognize(&g, &w("")));
        assert!(recognize(&g, &w("aaaa")));
        assert!(!recognize(&g, &w("ab")));
    }

    #[test]
    fn hidden_left_recursion_through_nullable() {
        // N0 -> N1 N0 a | %eps ; N1 -> %eps
        let g = Grammar::new(
            vec!["N0".into(), "N1".into()],
            BTreeSet::from([sym('a')]),
            vec![
                Production {
                    head: 0,
                    body: vec![
                        GrammarSym::Nonterminal(1),
                        GrammarSym::Nonterminal(0),
                        GrammarSym::Terminal(sym('a')),
                    ],
                },
                Production { head: 0, body: vec![] },
                Production { head: 1, body: vec![] },
            ],
            0,
        )
        .unwrap();
        assert!(recognize(&g, &w("aaa")));
        assert!(!recognize(&g, &w("b")));
    }

    #[test]
    fn no_productions_means_empty_language() {
        let g = Grammar::new(vec!["N0".into()], BTreeSet::new(), vec![], 0).unwrap();
        assert!(!recognize(&g, &w("")));
        assert!(!recognize(&g, &w("a")));
    }
}
