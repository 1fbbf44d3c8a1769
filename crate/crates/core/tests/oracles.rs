//! Search results against brute force over all generator images.

use proptest::prelude::*;

use fpgroup::finite_quotients::{
    catalog_group, count_homs, find_epi, todd_coxeter, PermGroup, Permutation, SearchConfig, SearchStatus,
};
use fpgroup::homology::abelianization_invariants;
use fpgroup::presentations::{parse_presentation, FinitePresentation, Word};

fn elements(s: &PermGroup) -> Vec<Permutation> {
    let t = s.table();
    (0..t.order()).map(|i| t.element(i as u16).clone()).collect()
}

fn satisfies(p: &FinitePresentation, images: &[&Permutation]) -> bool {
    let id = Permutation::identity(images[0].degree());
    p.relators().iter().all(|r| {
        r.letters()
            .fold(id.clone(), |acc, (g, e)| acc.then(&if e > 0 { images[g].clone() } else { images[g].inverse() }))
            .is_identity()
    })
}

fn brute_two_generator(p: &FinitePresentation, s: &PermGroup) -> (u128, u128) {
    let els = elements(s);
    let (mut hom, mut epi) = (0, 0);
    for x in &els {
        for y in &els {
            if satisfies(p, &[x, y]) {
                hom += 1;
                if s.is_generated_by(&[x.clone(), y.clone()]) {
                    epi += 1;
                }
            }
        }
    }
    (hom, epi)
}

fn word_strategy() -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0..2usize, prop::sample::select(vec![-1i64, 1])), 1..10)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn two_generator_counts_match_brute_force(rels in prop::collection::vec(word_strategy(), 0..3)) {
        let rels: Vec<Word> = rels.into_iter().map(Word::from_letters).filter(|w| !w.is_identity()).collect();
        let p = FinitePresentation::new(vec!["a", "b"], rels).unwrap();
        let s = catalog_group("A5").unwrap();
        let (hom, epi) = brute_two_generator(&p, &s);
        for symmetry in [false, true] {
            let config = SearchConfig { workers: 2, node_limit: None, symmetry };
            let out = count_homs(&p, &s, &config, true);
            prop_assert_eq!(out.status, SearchStatus::Complete);
            prop_assert_eq!((out.hom_count, out.epi_count), (hom, epi));
        }
        let found = find_epi(&p, &s, &SearchConfig::default()).witness;
        prop_assert_eq!(found.is_some(), epi > 0);
        if let Some(w) = found {
            let refs: Vec<&Permutation> = w.iter().collect();
            prop_assert!(satisfies(&p, &refs) && s.is_generated_by(&w));
        }
    }
}

#[test]
fn psl27_counts_match_brute_force() {
    let s = catalog_group("PSL2_7").unwrap();
    for text in ["< a b | a^2, b^3, (a b)^7 >", "< a b | a^2, b^3 >", "< a b | a^3, b^3, (a b)^4 >"] {
        let p = parse_presentation(text).unwrap();
        let out = count_homs(&p, &s, &SearchConfig::default(), true);
        assert_eq!((out.hom_count, out.epi_count), brute_two_generator(&p, &s), "{text}");
    }
}

#[test]
fn coset_index_matches_known_orders() {
    for (text, order) in [
        ("< a b | a^2, b^3, (a b)^5 >", 60),
        ("< a b | a^2, b^3, (a b)^4 >", 24),
        ("< a b | a^2, b^2, (a b)^6 >", 12),
        ("< a b | a^7, b^2, b a b^-1 a >", 14),
        ("< x y | x^2, y^2, (x y)^3, x^-1 y^-1 x y x y >", 6),
        ("< x y | x^3, y^3, x y >", 3),
    ] {
        let p = parse_presentation(text).unwrap();
        assert_eq!(todd_coxeter(&p, &[], 10_000).unwrap().index(), order, "{text}");
    }
}

#[test]
fn abelian_quotient_orders_agree_with_h1() {
    // order of the abelianized presentation by coset enumeration
    for text in ["< a b | a^4, b^6 >", "< a b | a^2 b^3, a^3 b^2 >", "< a b c | a^2, b^2 c^4, a c^6 >"] {
        let p = parse_presentation(text).unwrap();
        let h1 = abelianization_invariants(&p);
        assert_eq!(h1.free_rank, 0, "{text}");
        let order: u64 = h1.torsion.iter().map(|t| u64::try_from(t.clone()).unwrap()).product();
        let mut rels = p.relators().to_vec();
        for i in 0..p.ngens() {
            for j in i + 1..p.ngens() {
                rels.push(Word::commutator(&Word::gen(i), &Word::gen(j)));
            }
        }
        let ab = FinitePresentation::new(p.names(), rels).unwrap();
        assert_eq!(todd_coxeter(&ab, &[], 10_000).unwrap().index() as u64, order, "{text}");
    }
}
