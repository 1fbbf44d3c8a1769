use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::homology::{abelianization_invariants, solve_integer_system};
use crate::presentations::{FinitePresentation, Word};

/// For each generator `a`, the word `c_a = a · ∏ r_i^{λ_i}` with zero
/// exponent sums, where `λ` solves `Mᵀλ = −e_a` for the exponent matrix `M`.
pub fn commutator_defect_words(p: &FinitePresentation) -> Result<Vec<Word>> {
    let h1 = abelianization_invariants(p);
    if !h1.is_trivial() {
        return Err(Error::NotPerfect(h1));
    }
    let m = p.exponent_matrix();
    let mut out = Vec::with_capacity(p.ngens());
    for a in 0..p.ngens() {
        let mut rhs = vec![BigInt::zero(); p.ngens()];
        rhs[a] = BigInt::from(-1);
        let lambda = solve_integer_system(&m, &rhs).ok_or_else(|| Error::NotPerfect(h1.clone()))?;
        let mut c = Word::gen(a);
        for (r, l) in p.relators().iter().zip(&lambda) {
            if l.is_zero() {
                continue;
            }
            let k = l
                .to_i64()
                .ok_or_else(|| Error::InvalidArgument(format!("relator exponent {l} does not fit in 64 bits")))?;
            c = &c * &r.pow(k);
        }
        out.push(c);
    }
    Ok(out)
}

/// Presentation of the universal central extension of a perfect group:
/// `[a, r]` for every generator `a` and relator `r`, then `a⁻¹·c_a` for every
/// generator. Commutators that are freely trivial (a relator that is a power
/// of `a`) are left out.
pub fn uce_presentation(p: &FinitePresentation) -> Result<FinitePresentation> {
    let defects = commutator_defect_words(p)?;
    let mut relators = Vec::with_capacity(p.ngens() * (1 + p.nrels()));
    for a in 0..p.ngens() {
        for r in p.relators() {
            relators.push(Word::commutator(&Word::gen(a), r));
        }
    }
    for (a, c) in defects.iter().enumerate() {
        relators.push(&Word::gen(a).inverse() * c);
    }
    FinitePresentation::new_dropping_trivial(p.names(), relators)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{higman, parse_presentation};

    #[test]
    fn higman_defect_words() {
        let h = higman();
        let c = commutator_defect_words(&h).unwrap();
        assert_eq!(h.render_word(&c[0]), "a1 a2^-1 a1 a2 a1^-2");
        for w in &c {
            for g in 0..4 {
                assert_eq!(w.exponent_sum(g), 0);
            }
        }
    }

    #[test]
    fn higman_relator_count() {
        let u = uce_presentation(&higman()).unwrap();
        assert_eq!(u.nrels(), 20);
        assert_eq!(u.ngens(), 4);
        assert!(abelianization_invariants(&u).is_trivial());
    }

    #[test]
    fn rejects_imperfect() {
        let f2 = parse_presentation("< a b | >").unwrap();
        assert!(matches!(uce_presentation(&f2), Err(Error::NotPerfect(_))));
    }

    #[test]
    fn non_diagonal_solve() {
        // perfect presentation where the exponent matrix is not diagonal
        let p = parse_presentation("< a b | a^2 b^3, a^3 b^5 >").unwrap();
        let c = commutator_defect_words(&p).unwrap();
        for w in &c {
            assert_eq!((w.exponent_sum(0), w.exponent_sum(1)), (0, 0));
        }
        assert_eq!(uce_presentation(&p).unwrap().nrels(), 6);
    }
}
