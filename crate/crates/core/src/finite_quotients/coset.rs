//! HLT coset enumeration.

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::presentations::{FinitePresentation, Word};

const NONE: usize = usize::MAX;

/// Closed coset table. Column `2g` is generator `g`, column `2g+1` its
/// inverse. Coset 0 is the subgroup.
#[derive(Clone, Debug)]
pub struct CosetTable {
    presentation: FinitePresentation,
    subgroup_gens: Vec<Word>,
    table: Vec<Vec<usize>>,
}

impl CosetTable {
    pub fn presentation(&self) -> &FinitePresentation {
        &self.presentation
    }

    pub fn subgroup_gens(&self) -> &[Word] {
        &self.subgroup_gens
    }

    pub fn index(&self) -> usize {
        self.table.len()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// Image of coset `c` under generator `gen` raised to `sign` (±1).
    pub fn act_letter(&self, c: usize, gen: usize, sign: i64) -> usize {
        self.table[c][2 * gen + usize::from(sign < 0)]
    }

    pub fn act(&self, c: usize, w: &Word) -> usize {
        w.letters().fold(c, |c, (g, s)| self.act_letter(c, g, s))
    }
}

impl Serialize for CosetTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let gens: Vec<String> = self.subgroup_gens.iter().map(|w| self.presentation.render_word(w)).collect();
        let mut st = serializer.serialize_struct("CosetTable", 4)?;
        st.serialize_field("presentation", &self.presentation)?;
        st.serialize_field("subgroup_gens", &gens)?;
        st.serialize_field("index", &self.index())?;
        st.serialize_field("table", &self.table)?;
        st.end()
    }
}

struct Enumerator {
    cols: usize,
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    max: usize,
}

impl Enumerator {
    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut x = c;
        while self.parent[x] != r {
            let next = self.parent[x];
            self.parent[x] = r;
            x = next;
        }
        r
    }

    fn live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> Result<()> {
        if self.table.len() >= self.max {
            return Err(Error::CosetLimitExceeded(self.max));
        }
        let k = self.table.len();
        self.table.push(vec![NONE; self.cols]);
        self.parent.push(k);
        self.table[c][x] = k;
        self.table[k][x ^ 1] = c;
        Ok(())
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        self.parent[hi] = lo;
        queue.push(hi);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for x in 0..self.cols {
                let f = self.table[e][x];
                if f == NONE {
                    continue;
                }
                self.table[f][x ^ 1] = NONE;
                let (e1, f1) = (self.rep(e), self.rep(f));
                if self.table[e1][x] != NONE {
                    let t = self.table[e1][x];
                    self.merge(f1, t, &mut queue);
                } else if self.table[f1][x ^ 1] != NONE {
                    let t = self.table[f1][x ^ 1];
                    self.merge(e1, t, &mut queue);
                } else {
                    self.table[e1][x] = f1;
                    self.table[f1][x ^ 1] = e1;
                }
            }
        }
    }

    /// Scan `w` (as columns) from coset `c`, defining cosets as needed.
    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<()> {
        if w.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len() - 1);
        loop {
            while i <= j && self.table[f][w[i]] != NONE {
                f = self.table[f][w[i]];
                i += 1;
                if i > j {
                    break;
                }
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i && self.table[b][w[j] ^ 1] != NONE {
                b = self.table[b][w[j] ^ 1];
                if j == i {
                    // whole word traced from both ends
                    self.coincidence(f, b);
                    return Ok(());
                }
                j -= 1;
            }
            if i == j {
                self.table[f][w[i]] = b;
                self.table[b][w[i] ^ 1] = f;
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }
}

fn columns(w: &Word) -> Vec<usize> {
    w.letters().map(|(g, s)| 2 * g + usize::from(s < 0)).collect()
}

/// Enumerates the cosets of `⟨subgroup_gens⟩` in the group presented by `p`,
/// failing once more than `max_cosets` cosets would be defined.
pub fn todd_coxeter(p: &FinitePresentation, subgroup_gens: &[Word], max_cosets: usize) -> Result<CosetTable> {
    for w in subgroup_gens {
        p.check_word(w)?;
    }
    if max_cosets == 0 {
        return Err(Error::InvalidArgument("max_cosets must be at least 1".into()));
    }
    let cols = 2 * p.ngens();
    let mut e = Enumerator { cols, table: vec![vec![NONE; cols]], parent: vec![0], max: max_cosets };
    let rels: Vec<Vec<usize>> = p.relators().iter().map(|r| columns(&r.cyclically_reduced())).collect();
    for w in subgroup_gens {
        let w = columns(w);
        let c = e.rep(0);
        e.scan_and_fill(c, &w)?;
    }
    let mut c = 0;
    while c < e.table.len() {
        for r in &rels {
            if !e.live(c) {
                break;
            }
            e.scan_and_fill(c, r)?;
        }
        if e.live(c) {
            for x in 0..cols {
                if e.table[c][x] == NONE {
                    e.define(c, x)?;
                }
            }
        }
        c += 1;
    }
    // renumber live cosets in order of appearance
    let mut new_id = vec![NONE; e.table.len()];
    let mut count = 0;
    for (c, slot) in new_id.iter_mut().enumerate() {
        if e.parent[c] == c {
            *slot = count;
            count += 1;
        }
    }
    let table: Vec<Vec<usize>> = (0..e.table.len())
        .filter(|&c| e.parent[c] == c)
        .map(|c| e.table[c].iter().map(|&d| new_id[d]).collect())
        .collect();
    debug_assert!(table.iter().flatten().all(|&d| d != NONE));
    Ok(CosetTable { presentation: p.clone(), subgroup_gens: subgroup_gens.to_vec(), table })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{parse_presentation, parse_word_list};

    fn p(s: &str) -> FinitePresentation {
        parse_presentation(s).unwrap()
    }

    fn assert_closed(t: &CosetTable) {
        let p = t.presentation();
        for c in 0..t.index() {
            for g in 0..p.ngens() {
                let d = t.act_letter(c, g, 1);
                assert!(d < t.index());
                assert_eq!(t.act_letter(d, g, -1), c);
            }
            for r in p.relators() {
                assert_eq!(t.act(c, r), c);
            }
        }
        for h in t.subgroup_gens() {
            assert_eq!(t.act(0, h), 0);
        }
    }

    #[test]
    fn index_two_in_free_group() {
        let f2 = p("< s t | >");
        let h = parse_word_list("s^2, t, s t s^-1", &["s", "t"]).unwrap();
        let t = todd_coxeter(&f2, &h, 100).unwrap();
        assert_eq!(t.index(), 2);
        assert_closed(&t);
    }

    #[test]
    fn triangle_group_has_order_sixty() {
        let t = todd_coxeter(&p("< s t | s^2, t^3, (s t)^5 >"), &[], 10_000).unwrap();
        assert_eq!(t.index(), 60);
        assert_closed(&t);
    }

    #[test]
    fn infinite_index_hits_limit() {
        let e = todd_coxeter(&p("< s t | >"), &[], 1000).unwrap_err();
        assert!(matches!(e, Error::CosetLimitExceeded(1000)));
    }

    #[test]
    fn index_invariant_under_relator_permutation() {
        let a = todd_coxeter(&p("< a b | a^3, b^3, (a b)^3, (a b^-1)^2 >"), &[], 10_000).unwrap();
        let b = todd_coxeter(&p("< a b | (a b^-1)^2, (a b)^3, b^3, a^3 >"), &[], 10_000).unwrap();
        assert_eq!(a.index(), b.index());
        assert_closed(&a);
    }

    #[test]
    fn small_groups() {
        assert_eq!(todd_coxeter(&p("< a | a^7 >"), &[], 100).unwrap().index(), 7);
        assert_eq!(todd_coxeter(&p("< a b | a^2, b^2, (a b)^4 >"), &[], 100).unwrap().index(), 8);
        assert_eq!(todd_coxeter(&p("< a b | a, b >"), &[], 100).unwrap().index(), 1);
        let q = p("< a b | a^2, b^3, (a b)^4 >");
        let a = parse_word_list("a", &["a", "b"]).unwrap();
        assert_eq!(todd_coxeter(&q, &a, 1000).unwrap().index(), 12);
    }
}
