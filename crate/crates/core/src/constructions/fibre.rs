use serde::Serialize;

use super::rips::RipsOutput;
use crate::error::{Error, Result};
use crate::finite_quotients::{reidemeister_schreier, todd_coxeter};
use crate::presentations::{tietze_simplify, FinitePresentation, Word};

/// Tietze steps spent on the rewritten fibre product presentation.
pub const FIBRE_TIETZE_BUDGET: usize = 10_000;

#[derive(Clone, Debug, Serialize)]
pub struct FibreProductGenerators {
    /// `H × H`, left factor first.
    pub ambient: FinitePresentation,
    /// Diagonal words `(h, h)` for each generator of `H`, then `(k, 1)` for
    /// each kernel generator `k`.
    #[serde(serialize_with = "serialize_words_in_ambient")]
    pub generators: Vec<Word>,
}

fn serialize_words_in_ambient<S: serde::Serializer>(words: &[Word], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(words.len()))?;
    for w in words {
        seq.serialize_element(&w.signed_letters())?;
    }
    seq.end()
}

impl FibreProductGenerators {
    pub fn rendered(&self) -> Vec<String> {
        self.generators.iter().map(|w| self.ambient.render_word(w)).collect()
    }
}

/// Generators of the fibre product `P = {(u, v) : p(u) = p(v)}` inside
/// `H × H` for a kernel `N` normally generated by `kernel`.
pub fn fibre_generators(h: &FinitePresentation, kernel: &[Word]) -> Result<FibreProductGenerators> {
    for k in kernel {
        h.check_word(k)?;
    }
    let ambient = h.direct_product(h);
    let n = h.ngens();
    let mut generators: Vec<Word> = (0..n).map(|g| &Word::gen(g) * &Word::gen(n + g)).collect();
    generators.extend(kernel.iter().cloned());
    Ok(FibreProductGenerators { ambient, generators })
}

pub fn fibre_product_generators(r: &RipsOutput) -> FibreProductGenerators {
    fibre_generators(&r.h, &r.kernel_generators).expect("kernel generators are words in H")
}

#[derive(Clone, Debug, Serialize)]
pub struct FiniteFibreProduct {
    /// `|Q|`, which is also the index of `P` in `H × H`.
    pub quotient_order: usize,
    /// Reidemeister–Schreier output before simplification.
    pub rewritten: FinitePresentation,
    pub presentation: FinitePresentation,
    pub generators: FibreProductGenerators,
}

/// Presentation of the fibre product of `H → Q = H/⟨⟨kernel⟩⟩` when `Q` is
/// finite, by coset enumeration in `H × H`, rewriting and simplification.
pub fn fibre_product_finite_quotient(
    h: &FinitePresentation,
    kernel: &[Word],
    max_cosets: usize,
) -> Result<FiniteFibreProduct> {
    let mut q_rels = h.relators().to_vec();
    q_rels.extend(kernel.iter().filter(|k| !k.is_identity()).cloned());
    let q = FinitePresentation::new(h.names(), q_rels)?;
    let quotient_order = todd_coxeter(&q, &[], max_cosets)?.index();
    let generators = fibre_generators(h, kernel)?;
    let table = todd_coxeter(&generators.ambient, &generators.generators, max_cosets)?;
    if table.index() != quotient_order {
        return Err(Error::Inconsistent(format!(
            "fibre product index {} differs from quotient order {quotient_order}",
            table.index()
        )));
    }
    let rewritten = reidemeister_schreier(&table);
    let presentation = tietze_simplify(&rewritten, FIBRE_TIETZE_BUDGET);
    Ok(FiniteFibreProduct { quotient_order, rewritten, presentation, generators })
}

pub fn fibre_product_presentation_finite_quotient(
    h: &FinitePresentation,
    kernel: &[Word],
    max_cosets: usize,
) -> Result<FinitePresentation> {
    fibre_product_finite_quotient(h, kernel, max_cosets).map(|f| f.presentation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::rips_construction;
    use crate::homology::abelianization_invariants;
    use crate::presentations::{parse_presentation, parse_word_list};

    #[test]
    fn rips_fibre_generators() {
        let q = parse_presentation("< x | x^2 >").unwrap();
        let r = rips_construction(&q, 0).unwrap();
        let g = fibre_product_generators(&r);
        assert_eq!(g.ambient.ngens(), 8);
        assert_eq!(g.generators.len(), 4 + 3);
        assert_eq!(g.rendered()[0], "x_1 x_2");
        assert_eq!(g.rendered()[4], "a_1");
    }

    #[test]
    fn free_group_over_z2() {
        let h = parse_presentation("< s t | >").unwrap();
        let k = parse_word_list("s^2, t, s t s^-1", &["s", "t"]).unwrap();
        let f = fibre_product_finite_quotient(&h, &k, 1000).unwrap();
        assert_eq!(f.quotient_order, 2);
        assert_eq!(f.rewritten.ngens(), 7);
        assert_eq!(f.rewritten.nrels(), 8);
        assert!(f.presentation.ngens() <= 7);
        // P surjects onto each factor and H1 has rank at least 4
        assert!(abelianization_invariants(&f.presentation).free_rank >= 4);
    }

    #[test]
    fn trivial_quotient_gives_product() {
        let h = parse_presentation("< s | s^2 >").unwrap();
        let k = parse_word_list("s", &["s"]).unwrap();
        let f = fibre_product_finite_quotient(&h, &k, 100).unwrap();
        assert_eq!(f.quotient_order, 1);
        assert_eq!(todd_coxeter(&f.presentation, &[], 100).unwrap().index(), 4);
    }

    #[test]
    fn infinite_quotient_fails() {
        let h = parse_presentation("< s t | >").unwrap();
        let e = fibre_product_presentation_finite_quotient(&h, &[], 1000).unwrap_err();
        assert!(matches!(e, Error::CosetLimitExceeded(1000)));
    }
}
