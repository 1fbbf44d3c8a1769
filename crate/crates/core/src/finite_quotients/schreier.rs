//! Reidemeister–Schreier rewriting over a closed coset table.

use std::collections::VecDeque;

use super::coset::CosetTable;
use crate::presentations::{FinitePresentation, Word};

/// Schreier transversal data: for each `(coset, generator)` either the index
/// of its Schreier generator or `None` when it is a tree edge.
struct Transversal {
    reps: Vec<Word>,
    gen_index: Vec<Vec<Option<usize>>>,
    count: usize,
}

fn transversal(t: &CosetTable) -> Transversal {
    let n = t.index();
    let k = t.presentation().ngens();
    let mut reps: Vec<Option<Word>> = vec![None; n];
    let mut tree = vec![vec![false; k]; n];
    reps[0] = Some(Word::identity());
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        for g in 0..k {
            for sign in [1i64, -1] {
                let d = t.act_letter(c, g, sign);
                if reps[d].is_some() {
                    continue;
                }
                let rc = reps[c].clone().unwrap();
                reps[d] = Some(&rc * &Word::power_of(g, sign));
                if sign > 0 {
                    tree[c][g] = true;
                } else {
                    tree[d][g] = true;
                }
                queue.push_back(d);
            }
        }
    }
    let mut gen_index = vec![vec![None; k]; n];
    let mut count = 0;
    for c in 0..n {
        for g in 0..k {
            if !tree[c][g] {
                gen_index[c][g] = Some(count);
                count += 1;
            }
        }
    }
    Transversal { reps: reps.into_iter().map(Option::unwrap).collect(), gen_index, count }
}

/// Subgroup words `rep(c) · g · rep(c·g)⁻¹` for each Schreier generator, in
/// the order used by [`reidemeister_schreier`].
pub fn schreier_generator_words(t: &CosetTable) -> Vec<Word> {
    let tr = transversal(t);
    let mut out = Vec::with_capacity(tr.count);
    for (c, row) in tr.gen_index.iter().enumerate() {
        for (g, slot) in row.iter().enumerate() {
            if slot.is_some() {
                let d = t.act_letter(c, g, 1);
                out.push(&(&tr.reps[c] * &Word::gen(g)) * &tr.reps[d].inverse());
            }
        }
    }
    out
}

/// Presentation of the subgroup on Schreier generators `y1, y2, …` (nontrivial
/// `(coset, generator)` pairs ordered by coset then generator), with every
/// relator rewritten from every coset. Trivial rewrites are dropped.
pub fn reidemeister_schreier(t: &CosetTable) -> FinitePresentation {
    let tr = transversal(t);
    let mut rels = Vec::new();
    for c in 0..t.index() {
        for r in t.presentation().relators() {
            let mut coset = c;
            let mut raw = Vec::new();
            for (g, sign) in r.letters() {
                if sign > 0 {
                    if let Some(y) = tr.gen_index[coset][g] {
                        raw.push((y, 1));
                    }
                    coset = t.act_letter(coset, g, 1);
                } else {
                    let prev = t.act_letter(coset, g, -1);
                    if let Some(y) = tr.gen_index[prev][g] {
                        raw.push((y, -1));
                    }
                    coset = prev;
                }
            }
            debug_assert_eq!(coset, c);
            let w = Word::from_letters(raw);
            if !w.is_identity() {
                rels.push(w);
            }
        }
    }
    let names: Vec<String> = (1..=tr.count).map(|i| format!("y{i}")).collect();
    FinitePresentation::new(names, rels).expect("Schreier generators are valid names")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_quotients::coset::todd_coxeter;
    use crate::presentations::{parse_presentation, parse_word_list, tietze_simplify};

    #[test]
    fn free_subgroup_rank() {
        let f2 = parse_presentation("< s t | >").unwrap();
        let h = parse_word_list("s^2, t, s t s^-1", &["s", "t"]).unwrap();
        let t = todd_coxeter(&f2, &h, 100).unwrap();
        let q = reidemeister_schreier(&t);
        assert_eq!((q.ngens(), q.nrels()), (3, 0));
        let words = schreier_generator_words(&t);
        assert_eq!(words.len(), 3);
        for w in &words {
            assert_eq!(t.act(0, w), 0);
        }
    }

    #[test]
    fn nielsen_schreier_count() {
        let f3 = parse_presentation("< a b c | >").unwrap();
        let h = parse_word_list("a^3, b, c, a b a^-1, a c a^-1, a^2 b a^-2, a^2 c a^-2", &["a", "b", "c"]).unwrap();
        let t = todd_coxeter(&f3, &h, 100).unwrap();
        assert_eq!(t.index(), 3);
        assert_eq!(reidemeister_schreier(&t).ngens(), 3 * 2 + 1);
    }

    #[test]
    fn index_one_is_isomorphic() {
        let g = parse_presentation("< a b | a^2, b^3, (a b)^5 >").unwrap();
        let t = todd_coxeter(&g, &parse_word_list("a, b", &["a", "b"]).unwrap(), 100).unwrap();
        let q = reidemeister_schreier(&t);
        assert_eq!(q.ngens(), 2);
        assert_eq!(q.nrels(), 3);
        assert_eq!(todd_coxeter(&q, &[], 1000).unwrap().index(), 60);
    }

    #[test]
    fn index_two_in_product_of_free_groups() {
        let g = parse_presentation("< a b c d | [a,c], [a,d], [b,c], [b,d] >").unwrap();
        let names = ["a", "b", "c", "d"];
        let h = parse_word_list("a^2, b, a b a^-1, c, d", &names).unwrap();
        let t = todd_coxeter(&g, &h, 1000).unwrap();
        assert_eq!(t.index(), 2);
        let q = reidemeister_schreier(&t);
        assert_eq!((q.ngens(), q.nrels()), (7, 8));
        let s = tietze_simplify(&q, 100);
        assert!(s.ngens() <= 7);
    }

    #[test]
    fn finite_subgroup_order() {
        // index-5 subgroup of A5 is A4 of order 12
        let g = parse_presentation("< s t | s^2, t^3, (s t)^5 >").unwrap();
        let h = parse_word_list("t, s t s t^-1 s", &["s", "t"]).unwrap();
        let t = todd_coxeter(&g, &h, 1000).unwrap();
        let q = reidemeister_schreier(&t);
        let order = todd_coxeter(&q, &[], 10_000).unwrap().index();
        assert_eq!(order * t.index(), 60);
    }
}
