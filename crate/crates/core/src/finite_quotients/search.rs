//! Depth-first enumeration of homomorphisms from a finitely presented group
//! into a tabulated permutation group.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::perm::{Elem, ElementTable, PermGroup, Permutation};
use crate::presentations::FinitePresentation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub workers: usize,
    /// Abort after this many assignments; the result is then inconclusive.
    pub node_limit: Option<u64>,
    /// Fix the first image up to conjugacy and the second up to the
    /// centralizer of the first, weighting by orbit sizes.
    pub symmetry: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            node_limit: None,
            symmetry: true,
        }
    }
}

impl SearchConfig {
    pub fn with_workers(workers: usize) -> Self {
        SearchConfig { workers, ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchStatus {
    Complete,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct CountOutcome {
    pub hom_count: u128,
    pub epi_count: u128,
    pub status: SearchStatus,
    pub nodes: u64,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct ExistsOutcome {
    /// Images of the generators, in presentation order.
    pub witness: Option<Vec<Permutation>>,
    pub status: SearchStatus,
    pub nodes: u64,
    pub elapsed: Duration,
}

/// Number of homomorphisms `P → S`.
pub fn hom_count(p: &FinitePresentation, s: &PermGroup) -> u128 {
    count_homs(p, s, &SearchConfig::default(), false).hom_count
}

/// Number of surjective homomorphisms `P → S`.
pub fn epi_count(p: &FinitePresentation, s: &PermGroup) -> u128 {
    count_homs(p, s, &SearchConfig::default(), true).epi_count
}

/// A surjection `P → S` given by generator images, if one exists.
pub fn epi_exists(p: &FinitePresentation, s: &PermGroup) -> Option<Vec<Permutation>> {
    find_epi(p, s, &SearchConfig::default()).witness
}

/// Generator order putting generators that close relators early first.
fn relator_aware_order(p: &FinitePresentation) -> Vec<usize> {
    let n = p.ngens();
    let rel_gens: Vec<Vec<usize>> = p
        .relators()
        .iter()
        .map(|r| (0..n).filter(|&g| r.contains_generator(g)).collect())
        .collect();
    let mut chosen = Vec::with_capacity(n);
    let mut used = vec![false; n];
    while chosen.len() < n {
        let mut best: Option<((usize, usize, usize), usize)> = None;
        for g in (0..n).filter(|&g| !used[g]) {
            // relators completed by g, relators touched, and stable tiebreak
            let mut closes = 0;
            let mut touches = 0;
            for gens in &rel_gens {
                if gens.contains(&g) {
                    touches += 1;
                    if gens.iter().all(|&h| h == g || used[h]) {
                        closes += 1;
                    }
                }
            }
            let key = (closes, touches, n - g);
            if best.is_none_or(|(k, _)| key > k) {
                best = Some((key, g));
            }
        }
        let g = best.unwrap().1;
        used[g] = true;
        chosen.push(g);
    }
    chosen
}

/// A relator over search depths: `(depth, exponent)` syllables.
type DepthWord = Vec<(usize, i64)>;

struct Plan {
    order: Vec<usize>,
    /// Relators whose deepest generator sits at each depth.
    checks: Vec<Vec<DepthWord>>,
}

impl Plan {
    fn new(p: &FinitePresentation) -> Self {
        let order = relator_aware_order(p);
        let mut depth_of = vec![0; p.ngens()];
        for (d, &g) in order.iter().enumerate() {
            depth_of[g] = d;
        }
        let mut checks = vec![Vec::new(); p.ngens()];
        for r in p.relators() {
            let r = r.cyclically_reduced();
            if r.is_identity() {
                continue;
            }
            let w: DepthWord = r.syllables().iter().map(|s| (depth_of[s.gen], s.exp)).collect();
            let deepest = w.iter().map(|s| s.0).max().unwrap();
            checks[deepest].push(w);
        }
        Plan { order, checks }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    CountHoms,
    CountEpis,
    Exists,
}

struct Search<'a> {
    t: &'a ElementTable,
    plan: &'a Plan,
    mode: Mode,
    limit: Option<u64>,
    nodes: &'a AtomicU64,
    abort: &'a AtomicBool,
}

struct Worker {
    img: Vec<Elem>,
    /// Whether the prefix `img[..=d]` already generates, once known.
    generates_prefix: Vec<Option<bool>>,
    scratch: Vec<u32>,
    stamp: u32,
    local_nodes: u64,
    homs: u128,
    epis: u128,
}

const FLUSH: u64 = 1 << 12;

impl Search<'_> {
    fn relators_hold(&self, depth: usize, img: &[Elem]) -> bool {
        self.plan.checks[depth].iter().all(|w| {
            let mut acc: Elem = 0;
            for &(d, e) in w {
                acc = self.t.mul(acc, self.t.pow(img[d], e));
            }
            acc == 0
        })
    }

    fn tick(&self, w: &mut Worker) -> bool {
        w.local_nodes += 1;
        if w.local_nodes.is_multiple_of(FLUSH) {
            let total = self.nodes.fetch_add(FLUSH, Ordering::Relaxed) + FLUSH;
            if self.limit.is_some_and(|l| total > l) {
                self.abort.store(true, Ordering::Relaxed);
            }
        }
        !self.abort.load(Ordering::Relaxed)
    }

    fn surjective(&self, w: &mut Worker) -> bool {
        let n = w.img.len();
        for d in 0..n {
            let known = match w.generates_prefix[d] {
                Some(b) => b,
                None => {
                    let b = self.t.subgroup_size(&w.img[..=d], &mut w.scratch, &mut w.stamp) == self.t.order();
                    w.generates_prefix[d] = Some(b);
                    b
                }
            };
            if known {
                return true;
            }
        }
        false
    }

    fn set(&self, w: &mut Worker, depth: usize, x: Elem) {
        w.img[depth] = x;
        for slot in &mut w.generates_prefix[depth..] {
            *slot = None;
        }
    }

    /// Returns `true` to stop the whole search (witness found or aborted).
    fn dfs(&self, w: &mut Worker, depth: usize, weight: u128) -> bool {
        let n = w.img.len();
        if depth == n {
            match self.mode {
                Mode::CountHoms => w.homs += weight,
                Mode::CountEpis => {
                    w.homs += weight;
                    if self.surjective(w) {
                        w.epis += weight;
                    }
                }
                Mode::Exists => return self.surjective(w),
            }
            return false;
        }
        for x in 0..self.t.order() as Elem {
            if !self.tick(w) {
                return true;
            }
            self.set(w, depth, x);
            if !self.relators_hold(depth, &w.img) {
                continue;
            }
            if self.dfs(w, depth + 1, weight) {
                return true;
            }
        }
        false
    }

    fn worker(&self, n: usize) -> Worker {
        Worker {
            img: vec![0; n],
            generates_prefix: vec![None; n],
            scratch: Vec::new(),
            stamp: 0,
            local_nodes: 0,
            homs: 0,
            epis: 0,
        }
    }

    /// Runs one work item: a fixed prefix of images with a weight.
    fn run_item(&self, prefix: &[Elem], weight: u128) -> (Worker, bool) {
        let n = self.plan.order.len();
        let mut w = self.worker(n);
        if self.abort.load(Ordering::Relaxed) {
            return (w, true);
        }
        for (d, &x) in prefix.iter().enumerate() {
            self.set(&mut w, d, x);
            if !self.relators_hold(d, &w.img) {
                return (w, false);
            }
        }
        let stop = self.dfs(&mut w, prefix.len(), weight);
        let total = self.nodes.fetch_add(w.local_nodes % FLUSH, Ordering::Relaxed) + w.local_nodes % FLUSH;
        if self.limit.is_some_and(|l| total > l) {
            self.abort.store(true, Ordering::Relaxed);
        }
        (w, stop)
    }
}

/// Work items: image prefixes with multiplicities.
fn work_items(t: &ElementTable, ngens: usize, symmetry: bool) -> Vec<(Vec<Elem>, u128)> {
    if ngens == 0 {
        return vec![(vec![], 1)];
    }
    if !symmetry {
        return (0..t.order() as Elem).map(|x| (vec![x], 1)).collect();
    }
    let mut items = Vec::new();
    for class in t.classes() {
        if ngens == 1 {
            items.push((vec![class.rep], class.size as u128));
            continue;
        }
        for &(h, orbit) in &class.centralizer_orbits {
            items.push((vec![class.rep, h], class.size as u128 * orbit as u128));
        }
    }
    items
}

fn pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool")
}

fn to_presentation_order(plan: &Plan, t: &ElementTable, img: &[Elem]) -> Vec<Permutation> {
    let mut out = vec![None; img.len()];
    for (d, &g) in plan.order.iter().enumerate() {
        out[g] = Some(t.element(img[d]).clone());
    }
    out.into_iter().map(Option::unwrap).collect()
}

/// Counts homomorphisms and, if `epis` is set, surjections.
pub fn count_homs(p: &FinitePresentation, s: &PermGroup, config: &SearchConfig, epis: bool) -> CountOutcome {
    let start = Instant::now();
    let t = s.table();
    let plan = Plan::new(p);
    let nodes = AtomicU64::new(0);
    let abort = AtomicBool::new(false);
    let search = Search {
        t: &t,
        plan: &plan,
        mode: if epis { Mode::CountEpis } else { Mode::CountHoms },
        limit: config.node_limit,
        nodes: &nodes,
        abort: &abort,
    };
    let items = work_items(&t, p.ngens(), config.symmetry);
    let (homs, epi) = pool(config.workers).install(|| {
        items
            .par_iter()
            .map(|(prefix, weight)| {
                let (w, _) = search.run_item(prefix, *weight);
                (w.homs, w.epis)
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    });
    let status = if abort.load(Ordering::Relaxed) { SearchStatus::Inconclusive } else { SearchStatus::Complete };
    CountOutcome {
        hom_count: homs,
        epi_count: if epis { epi } else { 0 },
        status,
        nodes: nodes.load(Ordering::Relaxed),
        elapsed: start.elapsed(),
    }
}

/// Searches for one surjection. Deterministic: the witness is the first in
/// work-item order regardless of worker count.
pub fn find_epi(p: &FinitePresentation, s: &PermGroup, config: &SearchConfig) -> ExistsOutcome {
    let start = Instant::now();
    let t = s.table();
    let plan = Plan::new(p);
    let nodes = AtomicU64::new(0);
    let abort = AtomicBool::new(false);
    let search = Search {
        t: &t,
        plan: &plan,
        mode: Mode::Exists,
        limit: config.node_limit,
        nodes: &nodes,
        abort: &abort,
    };
    let items = work_items(&t, p.ngens(), config.symmetry);
    // a per-item abort flag would let other items race ahead; keep the shared
    // flag only for the node limit so the first witness in order wins
    let witness = pool(config.workers).install(|| {
        items.par_iter().find_map_first(|(prefix, _)| {
            let (w, stop) = search.run_item(prefix, 1);
            (stop && !abort.load(Ordering::Relaxed)).then(|| w.img.clone())
        })
    });
    let aborted = abort.load(Ordering::Relaxed);
    let status = if witness.is_none() && aborted { SearchStatus::Inconclusive } else { SearchStatus::Complete };
    ExistsOutcome {
        witness: witness.map(|img| to_presentation_order(&plan, &t, &img)),
        status,
        nodes: nodes.load(Ordering::Relaxed),
        elapsed: start.elapsed(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_quotients::catalog::alternating_group;
    use crate::presentations::parse_presentation;

    fn p(s: &str) -> FinitePresentation {
        parse_presentation(s).unwrap()
    }

    #[test]
    fn free_group_counts() {
        let a5 = alternating_group(5).unwrap();
        assert_eq!(hom_count(&p("< a b | >"), &a5), 3600);
        assert_eq!(epi_count(&p("< a b | >"), &a5), 2280);
        assert_eq!(hom_count(&p("< | >"), &a5), 1);
        assert_eq!(epi_count(&p("< | >"), &a5), 0);
    }

    #[test]
    fn cyclic_counts() {
        let a5 = alternating_group(5).unwrap();
        let q = p("< a | a^5 >");
        assert_eq!(hom_count(&q, &a5), 25);
        assert_eq!(epi_count(&q, &a5), 0);
        assert!(epi_exists(&q, &a5).is_none());
    }

    #[test]
    fn triangle_group_onto_a5() {
        let a5 = alternating_group(5).unwrap();
        let q = p("< s t | s^2, t^3, (s t)^5 >");
        assert_eq!(epi_count(&q, &a5), 120);
        let w = epi_exists(&q, &a5).unwrap();
        assert!(a5.is_generated_by(&w));
        let (s, t) = (&w[0], &w[1]);
        assert!(s.then(s).is_identity());
        assert!(t.then(t).then(t).is_identity());
    }

    #[test]
    fn symmetry_and_workers_do_not_change_counts() {
        let a5 = alternating_group(5).unwrap();
        let q = p("< s t | s^2, t^3, (s t)^5 >");
        for symmetry in [false, true] {
            for workers in [1, 3] {
                let c = SearchConfig { workers, node_limit: None, symmetry };
                let out = count_homs(&q, &a5, &c, true);
                assert_eq!((out.hom_count, out.epi_count), (121, 120));
            }
        }
    }

    #[test]
    fn node_limit_is_inconclusive() {
        let a5 = alternating_group(5).unwrap();
        let c = SearchConfig { workers: 1, node_limit: Some(10), symmetry: false };
        let out = count_homs(&p("< a b c | >"), &a5, &c, true);
        assert_eq!(out.status, SearchStatus::Inconclusive);
    }

    #[test]
    fn ordering_prefers_closing_relators() {
        let q = p("< a b c | c^2, [c, b] >");
        assert_eq!(relator_aware_order(&q), vec![2, 1, 0]);
    }
}
