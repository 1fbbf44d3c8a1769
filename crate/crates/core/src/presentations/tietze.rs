//! Greedy, budget-bounded Tietze simplification.
//!
//! Moves used, each costing one unit of budget:
//! - cyclic reduction of relators, dropping trivial and duplicate relators
//!   (duplicates up to rotation and inversion);
//! - eliminating a generator that occurs exactly once in some relator,
//!   accepted only if total relator length does not grow;
//! - replacing more than half of a relator `s` found inside another relator
//!   by the inverse of the remainder of `s` (strictly shortening).

use std::collections::HashSet;

use super::{canonical_cyclic, FinitePresentation, Word};

/// Substring search is skipped above this total relator length.
const SUBSTITUTION_LENGTH_CAP: usize = 4000;

pub fn tietze_simplify(p: &FinitePresentation, budget: usize) -> FinitePresentation {
    if budget == 0 {
        return p.clone();
    }
    let mut alive = vec![true; p.ngens()];
    let mut rels: Vec<Word> = p.relators().to_vec();
    let mut steps = 0;
    while steps < budget {
        if let Some(next) = normalize(&rels) {
            rels = next;
            steps += 1;
            continue;
        }
        if let Some((next, g)) = best_elimination(&rels, &alive) {
            rels = next;
            alive[g] = false;
            steps += 1;
            continue;
        }
        if let Some(next) = substitution(&rels) {
            rels = next;
            steps += 1;
            continue;
        }
        break;
    }
    let mut new_id = vec![usize::MAX; p.ngens()];
    let mut names = Vec::new();
    for (g, gen) in p.generators().iter().enumerate() {
        if alive[g] {
            new_id[g] = names.len();
            names.push(gen.name().to_string());
        }
    }
    let rels = rels.iter().map(|r| r.map_generators(|g| new_id[g])).collect();
    FinitePresentation::new_dropping_trivial(names, rels).expect("Tietze moves keep presentations valid")
}

fn total(rels: &[Word]) -> usize {
    rels.iter().map(Word::len).sum()
}

/// Cyclically reduce, drop trivial relators and duplicates. `None` when
/// nothing changes.
fn normalize(rels: &[Word]) -> Option<Vec<Word>> {
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(rels.len());
    for r in rels {
        let c = r.cyclically_reduced();
        if c.is_identity() {
            continue;
        }
        let key = canonical_cyclic(&c).min(canonical_cyclic(&c.inverse()));
        if seen.insert(key) {
            out.push(c);
        }
    }
    if out.as_slice() == rels {
        None
    } else {
        Some(out)
    }
}

fn best_elimination(rels: &[Word], alive: &[bool]) -> Option<(Vec<Word>, usize)> {
    let current = total(rels);
    let mut best: Option<(usize, Vec<Word>, usize)> = None;
    for (i, r) in rels.iter().enumerate() {
        let letters = r.signed_letters();
        for g in 0..alive.len() {
            if !alive[g] || r.occurrences(g) != 1 {
                continue;
            }
            let pos = letters.iter().position(|&l| l.unsigned_abs() as usize == g + 1).unwrap();
            // r rotated to g^e w, so g = w^{-e}
            let e = letters[pos].signum();
            let rest: Vec<i64> = letters[pos + 1..].iter().chain(&letters[..pos]).copied().collect();
            let rest = Word::from_signed_letters(&rest);
            let value = if e > 0 { rest.inverse() } else { rest };
            let mut images: Vec<Word> = (0..alive.len()).map(Word::gen).collect();
            images[g] = value;
            let next: Vec<Word> = rels
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .map(|(_, s)| s.substitute(&images).cyclically_reduced())
                .filter(|s| !s.is_identity())
                .collect();
            let len = total(&next);
            if len > current {
                continue;
            }
            if best.as_ref().is_none_or(|(b, _, _)| len < *b) {
                best = Some((len, next, g));
            }
        }
    }
    best.map(|(_, rels, g)| (rels, g))
}

fn substitution(rels: &[Word]) -> Option<Vec<Word>> {
    if total(rels) > SUBSTITUTION_LENGTH_CAP {
        return None;
    }
    let letters: Vec<Vec<i64>> = rels.iter().map(Word::signed_letters).collect();
    for (i, target) in letters.iter().enumerate() {
        let n = target.len();
        for (j, source) in letters.iter().enumerate() {
            if i == j || source.len() > n + 1 {
                continue;
            }
            let inv: Vec<i64> = source.iter().rev().map(|l| -l).collect();
            for s in [source, &inv] {
                let len = s.len();
                for rot in 0..len {
                    let sr: Vec<i64> = s[rot..].iter().chain(&s[..rot]).copied().collect();
                    for start in 0..n {
                        let mut p = 0;
                        while p < len && p < n && target[(start + p) % n] == sr[p] {
                            p += 1;
                        }
                        if 2 * p <= len {
                            continue;
                        }
                        // target = sr[..p] · tail and sr[..p] = (sr[p..])^{-1}
                        let tail = (p..n).map(|k| target[(start + k) % n]);
                        let replacement = sr[p..].iter().rev().map(|l| -l);
                        let new_letters: Vec<i64> = replacement.chain(tail).collect();
                        let w = Word::from_signed_letters(&new_letters).cyclically_reduced();
                        let mut out = rels.to_vec();
                        if w.is_identity() {
                            out.remove(i);
                        } else {
                            out[i] = w;
                        }
                        return Some(out);
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::parse_presentation;

    fn p(s: &str) -> FinitePresentation {
        parse_presentation(s).unwrap()
    }

    #[test]
    fn eliminates_defined_generator() {
        assert_eq!(tietze_simplify(&p("< a b | b a^-2 >"), 10).render(), "< a | >");
    }

    #[test]
    fn removes_duplicates() {
        assert_eq!(tietze_simplify(&p("< a | a^2, a^2 >"), 10).render(), "< a | a^2 >");
        assert_eq!(tietze_simplify(&p("< a b | a b a^-1, b^-1 >"), 1).nrels(), 1);
    }

    #[test]
    fn zero_budget_is_identity() {
        for s in ["< a b | b a^-2 >", "< a | a^2, a^2 >", "< x y | x y x^-1 y^-2, [x, y] >"] {
            assert_eq!(tietze_simplify(&p(s), 0), p(s));
        }
    }

    #[test]
    fn shortens_with_substitution() {
        // x y x y x^-1 contains more than half of x y x y
        let q = tietze_simplify(&p("< x y | x y x y, x y x y x^2 >"), 10);
        assert!(q.total_length() < 10);
    }

    #[test]
    fn never_grows() {
        let inputs = [
            "< a b c | a b c, a^2 b^2 c^2, [a, c] >",
            "< a b | a^3, b^2, (a b)^5 >",
            "< s t u | s t^-1 u, [s, t] u^2 >",
        ];
        for s in inputs {
            let q = p(s);
            let r = tietze_simplify(&q, 50);
            assert!(r.ngens() <= q.ngens());
            assert!(r.total_length() <= q.total_length());
        }
    }
}
