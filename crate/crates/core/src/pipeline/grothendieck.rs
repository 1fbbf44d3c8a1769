use serde::Serialize;

use super::{PipelineConfig, CITED_ASSUMPTIONS, TOOL_VERSION};
use crate::constructions::{fibre_product_generators, rips_construction};
use crate::error::{Error, Result};
use crate::finite_quotients::{
    catalog_up_to, count_homs, fibre_epi_count_formula, simple_quotients_up_to, PermGroup, Permutation,
    QuotientReport, QuotientSearch, QuotientVerdict, SearchStatus,
};
use crate::homology::{abelianization_invariants, h2_rank_2complex, AbelianInvariants};
use crate::presentations::FinitePresentation;

#[derive(Clone, Debug, Serialize)]
pub struct RipsSummary {
    pub presentation: FinitePresentation,
    pub generator_count: usize,
    pub relator_count: usize,
    /// `|y| + 6|x|` for the input presentation.
    pub expected_relator_count: usize,
    pub filler_offset: u64,
    pub small_cancellation_ratio: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct EpiCell {
    pub count: u128,
    pub status: SearchStatus,
    /// `enumeration` or `formula`.
    pub method: &'static str,
    pub nodes_explored: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairEpiRow {
    pub group: String,
    pub order: usize,
    pub q: EpiCell,
    pub h: EpiCell,
    /// `2·|Epi(H,S)|`, valid for nonabelian simple `S`.
    pub h_times_h: EpiCell,
    /// `2·|Epi(H,S)| − |Epi(Q,S)|` when both inputs are complete.
    pub fibre_product: Option<u128>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PairVerdict {
    /// `Q ↠ S`, so the fibre product and `H × H` have different numbers of
    /// epimorphisms onto `S` and their profinite completions differ.
    EpiWitnessFound { group: String, witness: Vec<Permutation> },
    /// No finite simple quotient of `Q` up to the bound.
    NoObstructionUpTo { bound: u64 },
    Inconclusive { reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub tool_version: &'static str,
    pub config: PipelineConfig,
    pub input: FinitePresentation,
    pub h1: AbelianInvariants,
    pub h2_rank: usize,
    pub rips: RipsSummary,
    pub ambient: FinitePresentation,
    pub fibre_generators: Vec<String>,
    pub epi_table: Vec<PairEpiRow>,
    pub quotients: QuotientReport,
    pub verdict: PairVerdict,
    pub assumptions: Vec<String>,
}

impl PairReport {
    pub fn is_inconclusive(&self) -> bool {
        matches!(self.verdict, PairVerdict::Inconclusive { .. })
    }
}

/// Whether the images satisfy every relator of `q` and generate `s`.
pub(crate) fn witness_is_valid(q: &FinitePresentation, s: &PermGroup, images: &[Permutation]) -> bool {
    if images.len() != q.ngens() {
        return false;
    }
    let id = Permutation::identity(s.degree());
    let holds = q.relators().iter().all(|r| {
        r.letters()
            .fold(id.clone(), |acc, (g, sign)| {
                let p = if sign > 0 { images[g].clone() } else { images[g].inverse() };
                acc.then(&p)
            })
            .is_identity()
    });
    holds && s.is_generated_by(images)
}

fn enumerate(p: &FinitePresentation, s: &PermGroup, config: &PipelineConfig) -> EpiCell {
    let out = count_homs(p, s, &config.search, true);
    EpiCell { count: out.epi_count, status: out.status, method: "enumeration", nodes_explored: out.nodes }
}

/// Rips construction, fibre product data and the finite simple quotient
/// evidence for a perfect presentation `Q`.
pub fn pipeline_grothendieck(q: &FinitePresentation, config: &PipelineConfig) -> Result<PairReport> {
    let groups = catalog_up_to(config.bound)?;
    let h1 = abelianization_invariants(q);
    if !h1.is_trivial() {
        return Err(Error::NotPerfect(h1));
    }
    let rips = rips_construction(q, config.seed)?;
    let fibre = fibre_product_generators(&rips);
    let quotients = simple_quotients_up_to(q, config.bound, &config.search)?;

    let mut epi_table = Vec::with_capacity(groups.len());
    for s in &groups {
        let qc = enumerate(q, s, config);
        let hc = enumerate(&rips.h, s, config);
        let hh = EpiCell { count: 2 * hc.count, status: hc.status, method: "formula", nodes_explored: 0 };
        let fibre_product = if qc.status == SearchStatus::Complete && hc.status == SearchStatus::Complete {
            Some(fibre_epi_count_formula(hc.count, qc.count)?)
        } else {
            None
        };
        epi_table.push(PairEpiRow {
            group: s.name().to_string(),
            order: s.order(),
            q: qc,
            h: hc,
            h_times_h: hh,
            fibre_product,
        });
    }

    let witness = quotients.groups.iter().zip(&groups).find_map(|(e, s)| match &e.search {
        QuotientSearch::Found { witness } => Some((s, witness.clone())),
        _ => None,
    });
    let verdict = match (witness, quotients.verdict) {
        (Some((s, w)), _) => {
            if !witness_is_valid(q, s, &w) {
                return Err(Error::Inconsistent(format!("witness for {} does not re-validate", s.name())));
            }
            PairVerdict::EpiWitnessFound { group: s.name().to_string(), witness: w }
        }
        (None, QuotientVerdict::NoNontrivialQuotientUpTo) => PairVerdict::NoObstructionUpTo { bound: config.bound },
        (None, _) => PairVerdict::Inconclusive {
            reason: format!("quotient search hit the node limit {:?}", config.search.node_limit),
        },
    };

    Ok(PairReport {
        tool_version: TOOL_VERSION,
        config: config.clone(),
        input: q.clone(),
        h1: abelianization_invariants(q),
        h2_rank: h2_rank_2complex(q),
        rips: RipsSummary {
            generator_count: rips.h.ngens(),
            relator_count: rips.h.nrels(),
            expected_relator_count: q.nrels() + 6 * q.ngens(),
            filler_offset: rips.offset,
            small_cancellation_ratio: rips.ratio.clone(),
            presentation: rips.h.clone(),
        },
        ambient: fibre.ambient.clone(),
        fibre_generators: fibre.rendered(),
        epi_table,
        quotients,
        verdict,
        assumptions: CITED_ASSUMPTIONS.iter().map(|s| s.to_string()).collect(),
    })
}
