//! Permutation groups, the simple-group catalog, coset enumeration and
//! homomorphism counting.

mod catalog;
mod coset;
mod perm;
mod schreier;
mod search;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use catalog::{alternating_group, catalog_group, catalog_up_to, psl2, SmallField, CATALOG_BOUND};
pub use coset::{todd_coxeter, CosetTable};
pub use perm::{ClassData, Elem, ElementTable, PermGroup, Permutation, MAX_TABLE_ORDER};
pub use schreier::{reidemeister_schreier, schreier_generator_words};
pub use search::{
    count_homs, epi_count, epi_exists, find_epi, hom_count, CountOutcome, ExistsOutcome, SearchConfig, SearchStatus,
};

use crate::error::{Error, Result};
use crate::homology::{abelianization_invariants, AbelianInvariants};
use crate::presentations::FinitePresentation;

/// `|Epi(P,S)| = 2·|Epi(H,S)| − |Epi(Q,S)|` for the fibre product `P` of
/// `H → Q` with itself.
pub fn fibre_epi_count_formula(epi_h: u128, epi_q: u128) -> Result<u128> {
    (2 * epi_h)
        .checked_sub(epi_q)
        .ok_or_else(|| Error::Inconsistent(format!("2·{epi_h} − {epi_q} is negative")))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpiCountEntry {
    pub group: String,
    pub order: usize,
    pub hom_count: u128,
    pub epi_count: u128,
    pub status: SearchStatus,
    pub elapsed_ms: u128,
    pub nodes_explored: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpiCountReport {
    pub presentation: String,
    pub entries: Vec<EpiCountEntry>,
    pub config: SearchConfig,
}

impl EpiCountReport {
    pub fn new(p: &FinitePresentation, groups: &[PermGroup], config: &SearchConfig) -> Self {
        let entries = groups
            .iter()
            .map(|s| {
                let out = count_homs(p, s, config, true);
                EpiCountEntry {
                    group: s.name().to_string(),
                    order: s.order(),
                    hom_count: out.hom_count,
                    epi_count: out.epi_count,
                    status: out.status,
                    elapsed_ms: out.elapsed.as_millis(),
                    nodes_explored: out.nodes,
                }
            })
            .collect();
        EpiCountReport { presentation: p.render(), entries, config: config.clone() }
    }

    pub fn is_complete(&self) -> bool {
        self.entries.iter().all(|e| e.status == SearchStatus::Complete)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum QuotientSearch {
    Found { witness: Vec<Permutation> },
    None,
    Inconclusive { nodes_explored: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuotientEntry {
    pub group: String,
    pub order: usize,
    #[serde(flatten)]
    pub search: QuotientSearch,
    pub elapsed_ms: u128,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuotientVerdict {
    NontrivialQuotient,
    NoNontrivialQuotientUpTo,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuotientReport {
    pub bound: u64,
    pub h1: AbelianInvariants,
    /// A prime `p` with `P ↠ ℤ/p`, when H1 is nontrivial.
    pub cyclic_quotient: Option<u64>,
    pub groups: Vec<QuotientEntry>,
    pub verdict: QuotientVerdict,
}

fn smallest_prime_factor(d: &BigInt) -> u64 {
    let mut p = 2u64;
    loop {
        if (d % BigInt::from(p)).is_zero() {
            return p;
        }
        p += 1;
    }
}

/// Looks for finite simple quotients: cyclic ones via H1, nonabelian ones in
/// the catalog up to order `bound`.
pub fn simple_quotients_up_to(p: &FinitePresentation, bound: u64, config: &SearchConfig) -> Result<QuotientReport> {
    let groups = catalog_up_to(bound)?;
    let h1 = abelianization_invariants(p);
    let cyclic_quotient = if h1.free_rank > 0 {
        Some(2)
    } else {
        h1.torsion.iter().find(|d| !d.is_one()).map(smallest_prime_factor)
    };
    let mut entries = Vec::with_capacity(groups.len());
    for s in &groups {
        let out = find_epi(p, s, config);
        let search = match (out.witness, out.status) {
            (Some(witness), _) => QuotientSearch::Found { witness },
            (None, SearchStatus::Complete) => QuotientSearch::None,
            (None, SearchStatus::Inconclusive) => QuotientSearch::Inconclusive { nodes_explored: out.nodes },
        };
        entries.push(QuotientEntry {
            group: s.name().to_string(),
            order: s.order(),
            search,
            elapsed_ms: out.elapsed.as_millis(),
        });
    }
    let found = cyclic_quotient.is_some() || entries.iter().any(|e| matches!(e.search, QuotientSearch::Found { .. }));
    let open = entries.iter().any(|e| matches!(e.search, QuotientSearch::Inconclusive { .. }));
    let verdict = if found {
        QuotientVerdict::NontrivialQuotient
    } else if open {
        QuotientVerdict::Inconclusive
    } else {
        QuotientVerdict::NoNontrivialQuotientUpTo
    };
    Ok(QuotientReport { bound, h1, cyclic_quotient, groups: entries, verdict })
}

/// Order of a group given by a presentation, if coset enumeration closes.
pub fn presented_order(p: &FinitePresentation, max_cosets: usize) -> Result<usize> {
    todd_coxeter(p, &[], max_cosets).map(|t| t.index())
}

/// `|S|^n`, the hom count from a free group of rank `n`.
pub fn free_hom_count(order: usize, rank: usize) -> Option<u128> {
    (order as u128).checked_pow(rank.to_u32()?)
}
