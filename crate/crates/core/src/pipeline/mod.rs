//! End-to-end reductions with JSON reports: the Grothendieck-pair pipeline
//! built on the Rips construction and fibre products, and the bundle search
//! against universal central extensions.

mod grothendieck;
mod theorem_b;

use serde::{Deserialize, Serialize};

pub use grothendieck::{pipeline_grothendieck, EpiCell, PairEpiRow, PairReport, PairVerdict, RipsSummary};
pub use theorem_b::{pipeline_theorem_b, BundleEntry, UceReport};

use crate::error::Result;
use crate::finite_quotients::{catalog_up_to, count_homs, PermGroup, SearchConfig, SearchStatus, CATALOG_BOUND};
use crate::homology::{abelianization_invariants, h2_rank_2complex, AbelianInvariants};
use crate::presentations::FinitePresentation;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Assumptions every report states rather than verifies.
pub const CITED_ASSUMPTIONS: [&str; 2] = [
    "residual finiteness of the Rips group and its fibre product is cited, not verified",
    "h2_rank is the rank of H2 of the presentation 2-complex; it equals group H2 only for aspherical presentations",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub bound: u64,
    pub height: u32,
    pub seed: u64,
    pub max_cosets: usize,
    pub search: SearchConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            bound: CATALOG_BOUND,
            height: 2,
            seed: 0,
            max_cosets: 100_000,
            search: SearchConfig { node_limit: Some(500_000_000), ..SearchConfig::default() },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FingerprintEntry {
    pub group: String,
    pub epi_count: u128,
    pub status: SearchStatus,
}

/// Invariants of a presentation. H1 and the epimorphism counts are group
/// invariants; `h2_rank` and the Euler characteristic depend on the
/// presentation and are carried as data only.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fingerprint {
    pub h1: AbelianInvariants,
    pub h2_rank: usize,
    pub euler_characteristic: i64,
    pub bound: u64,
    pub epi_counts: Vec<FingerprintEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FingerprintMatch {
    /// The invariants differ, so the groups are not isomorphic.
    Distinct,
    /// Every compared invariant agrees.
    Candidate,
    /// Some count is incomplete and the rest agree.
    Undetermined,
}

impl Fingerprint {
    pub fn is_complete(&self) -> bool {
        self.epi_counts.iter().all(|e| e.status == SearchStatus::Complete)
    }

    /// Compares H1 and completed epimorphism counts.
    pub fn compare(&self, other: &Fingerprint) -> FingerprintMatch {
        if self.h1 != other.h1 {
            return FingerprintMatch::Distinct;
        }
        let mut open = self.bound != other.bound || self.epi_counts.len() != other.epi_counts.len();
        for (a, b) in self.epi_counts.iter().zip(&other.epi_counts) {
            if a.status == SearchStatus::Complete && b.status == SearchStatus::Complete {
                if a.epi_count != b.epi_count {
                    return FingerprintMatch::Distinct;
                }
            } else {
                open = true;
            }
        }
        if open {
            FingerprintMatch::Undetermined
        } else {
            FingerprintMatch::Candidate
        }
    }
}

pub(crate) fn fingerprint_with(p: &FinitePresentation, groups: &[PermGroup], bound: u64, config: &SearchConfig) -> Fingerprint {
    let epi_counts = groups
        .iter()
        .map(|s| {
            let out = count_homs(p, s, config, true);
            FingerprintEntry { group: s.name().to_string(), epi_count: out.epi_count, status: out.status }
        })
        .collect();
    Fingerprint {
        h1: abelianization_invariants(p),
        h2_rank: h2_rank_2complex(p),
        euler_characteristic: p.euler_characteristic(),
        bound,
        epi_counts,
    }
}

pub fn fingerprint(p: &FinitePresentation, bound: u64, config: &SearchConfig) -> Result<Fingerprint> {
    let groups = catalog_up_to(bound)?;
    Ok(fingerprint_with(p, &groups, bound, config))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{higman, parse_presentation, tietze_simplify};

    fn config() -> SearchConfig {
        SearchConfig::default()
    }

    #[test]
    fn higman_fingerprint() {
        let f = fingerprint(&higman(), 504, &config()).unwrap();
        assert!(f.h1.is_trivial());
        assert_eq!((f.h2_rank, f.euler_characteristic), (0, 1));
        assert_eq!(f.epi_counts.len(), 4);
        assert!(f.epi_counts.iter().all(|e| e.epi_count == 0 && e.status == SearchStatus::Complete));
    }

    #[test]
    fn free_group_fingerprint() {
        let f = fingerprint(&parse_presentation("< a b | >").unwrap(), 60, &config()).unwrap();
        assert_eq!(f.h1.to_string(), "Z^2");
        assert_eq!((f.h2_rank, f.euler_characteristic), (0, -1));
        assert_eq!(f.epi_counts[0].epi_count, 2280);
    }

    #[test]
    fn tietze_preserves_fingerprint() {
        let p = parse_presentation("< a b c | c a^-1 b, a^2 b^-3, (a b)^5 c^-2 >").unwrap();
        let q = tietze_simplify(&p, 100);
        assert!(q.ngens() < p.ngens());
        let (fp, fq) = (fingerprint(&p, 168, &config()).unwrap(), fingerprint(&q, 168, &config()).unwrap());
        assert_eq!(fp, fq);
        assert_eq!(fp.compare(&fq), FingerprintMatch::Candidate);
    }

    #[test]
    fn comparison() {
        let a = fingerprint(&parse_presentation("< a b | >").unwrap(), 60, &config()).unwrap();
        let b = fingerprint(&parse_presentation("< a b | a^2 >").unwrap(), 60, &config()).unwrap();
        assert_eq!(a.compare(&b), FingerprintMatch::Distinct);
        assert!(fingerprint(&higman(), 2521, &config()).is_err());
    }
}
