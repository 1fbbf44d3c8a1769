use serde::Serialize;

use super::{fingerprint_with, Fingerprint, FingerprintMatch, PipelineConfig, CITED_ASSUMPTIONS, TOOL_VERSION};
use crate::constructions::{enumerate_tubular_bundles, j_construction, tubular_bundle_presentation, uce_presentation};
use crate::error::{Error, Result};
use crate::finite_quotients::{catalog_up_to, simple_quotients_up_to, QuotientReport, QuotientVerdict};
use crate::homology::abelianization_invariants;
use crate::presentations::{higman, FinitePresentation, Word};

#[derive(Clone, Debug, Serialize)]
pub struct BundleEntry {
    pub index: u128,
    pub shifts: Vec<Vec<i64>>,
    pub presentation: FinitePresentation,
    pub generator_count: usize,
    pub relator_count: usize,
    pub expected_generator_count: usize,
    pub expected_relator_count: usize,
    pub fingerprint: Fingerprint,
    pub comparison: FingerprintMatch,
}

#[derive(Clone, Debug, Serialize)]
pub struct UceReport {
    pub tool_version: &'static str,
    pub config: PipelineConfig,
    pub input: FinitePresentation,
    pub n: usize,
    pub m: usize,
    pub j_presentation: FinitePresentation,
    pub euler_characteristic: i64,
    /// `m − n + 1`
    pub expected_euler_characteristic: i64,
    pub uce_presentation: FinitePresentation,
    pub uce_relator_count: usize,
    /// `|A|(1 + |R|)` for the J-construction output.
    pub expected_uce_relator_count: usize,
    pub uce_fingerprint: Fingerprint,
    pub uce_quotients: QuotientReport,
    pub d: usize,
    pub height: u32,
    pub bundle_count: u128,
    pub bundles: Vec<BundleEntry>,
    /// Indices of bundles whose fingerprint agrees with the UCE's. Agreement
    /// is necessary for isomorphism, not sufficient.
    pub candidates: Vec<u128>,
    pub inconclusive: bool,
    pub assumptions: Vec<String>,
}

/// J-construction over Higman's group with loop `a1`, its universal central
/// extension, and the tubular bundles of type `(m − n; n, m)` up to the
/// configured shift height, compared by fingerprint.
pub fn pipeline_theorem_b(p: &FinitePresentation, config: &PipelineConfig) -> Result<UceReport> {
    let groups = catalog_up_to(config.bound)?;
    let h1 = abelianization_invariants(p);
    if !h1.is_trivial() {
        return Err(Error::NotPerfect(h1));
    }
    let (n, m) = (p.ngens(), p.nrels());
    let x = higman();
    let j = j_construction(p, &x, "a1")?;
    let expected_chi = m as i64 - n as i64 + 1;
    if j.euler_characteristic() != expected_chi {
        return Err(Error::Inconsistent(format!(
            "J-construction has Euler characteristic {}, expected {expected_chi}",
            j.euler_characteristic()
        )));
    }
    let uce = uce_presentation(&j)?;
    let uce_fingerprint = fingerprint_with(&uce, &groups, config.bound, &config.search);
    let uce_quotients = simple_quotients_up_to(&uce, config.bound, &config.search)?;
    // a perfect presentation has at least as many relators as generators
    let d = m - n;
    let c = Word::gen(0);
    let rho = p.relators().to_vec();
    let bundles_iter = enumerate_tubular_bundles(&x, &c, d, n, m, &rho, config.height)?;
    let bundle_count = bundles_iter.total();
    let vertex_gens = m * x.ngens();
    let expected_generator_count = n + d + vertex_gens;
    let expected_relator_count = d * d.saturating_sub(1) / 2 + d * (n + vertex_gens) + m * x.nrels() + m;

    let mut bundles = Vec::new();
    let mut candidates = Vec::new();
    let mut inconclusive =
        !uce_fingerprint.is_complete() || uce_quotients.verdict == QuotientVerdict::Inconclusive;
    for (index, b) in bundles_iter.enumerate() {
        let presentation = tubular_bundle_presentation(&b)?;
        let fingerprint = fingerprint_with(&presentation, &groups, config.bound, &config.search);
        let comparison = fingerprint.compare(&uce_fingerprint);
        match comparison {
            FingerprintMatch::Candidate => candidates.push(index as u128),
            FingerprintMatch::Undetermined => inconclusive = true,
            FingerprintMatch::Distinct => {}
        }
        bundles.push(BundleEntry {
            index: index as u128,
            shifts: b.shifts,
            generator_count: presentation.ngens(),
            relator_count: presentation.nrels(),
            expected_generator_count,
            expected_relator_count,
            presentation,
            fingerprint,
            comparison,
        });
    }

    Ok(UceReport {
        tool_version: TOOL_VERSION,
        config: config.clone(),
        input: p.clone(),
        n,
        m,
        euler_characteristic: j.euler_characteristic(),
        expected_euler_characteristic: expected_chi,
        uce_relator_count: uce.nrels(),
        expected_uce_relator_count: j.ngens() * (1 + j.nrels()),
        j_presentation: j,
        uce_presentation: uce,
        uce_fingerprint,
        uce_quotients,
        d,
        height: config.height,
        bundle_count,
        bundles,
        candidates,
        inconclusive,
        assumptions: CITED_ASSUMPTIONS.iter().map(|s| s.to_string()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::parse_presentation;

    fn config(height: u32) -> PipelineConfig {
        PipelineConfig { bound: 60, height, ..PipelineConfig::default() }
    }

    #[test]
    fn one_relator_degenerates() {
        let p = parse_presentation("< x | x >").unwrap();
        let r = pipeline_theorem_b(&p, &config(2)).unwrap();
        assert_eq!(r.d, 0);
        assert_eq!(r.bundle_count, 1);
        assert_eq!(r.euler_characteristic, 1);
        assert_eq!(r.candidates, vec![0]);
        assert!(!r.inconclusive);
    }

    #[test]
    fn torus_bundles_are_not_candidates() {
        let p = parse_presentation("< x y | x, y, x y >").unwrap();
        let r = pipeline_theorem_b(&p, &config(0)).unwrap();
        assert_eq!(r.d, 1);
        assert_eq!(r.bundle_count, 1);
        assert_eq!(r.uce_relator_count, r.expected_uce_relator_count);
        let b = &r.bundles[0];
        assert_eq!(b.fingerprint.h1.to_string(), "Z");
        assert_eq!(b.comparison, FingerprintMatch::Distinct);
        assert!(r.candidates.is_empty());
        assert_eq!((b.generator_count, b.relator_count), (b.expected_generator_count, b.expected_relator_count));
    }

    #[test]
    fn rejects_imperfect() {
        let p = parse_presentation("< x | x^2 >").unwrap();
        assert!(matches!(pipeline_theorem_b(&p, &config(0)), Err(Error::NotPerfect(_))));
    }
}
