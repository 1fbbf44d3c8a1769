use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Permutation of `0..degree`, stored as the image of each point.
///
/// Products compose left to right: `p.then(q)` applies `p` first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n > 255 {
            return Err(Error::InvalidPermutation(format!("degree {n} exceeds 255")));
        }
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images: images.into_iter().map(|x| x as u8).collect() })
    }

    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree as u8).collect() }
    }

    /// Permutation from disjoint cycles on `0..degree`.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                let y = cycle[(k + 1) % cycle.len()];
                if x >= degree || y >= degree {
                    return Err(Error::InvalidPermutation(format!("point out of range in {cycle:?}")));
                }
                images[x] = y;
            }
        }
        Permutation::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation { images: self.images.iter().map(|&x| other.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation, `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut any = false;
        for start in 0..n {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            any = true;
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            let s: Vec<String> = cycle.iter().map(ToString::to_string).collect();
            write!(f, "({})", s.join(","))?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

/// Element index inside an [`ElementTable`]; 0 is the identity.
pub type Elem = u16;

/// Finite permutation group on `degree` points.
#[derive(Clone, Debug)]
pub struct PermGroup {
    name: String,
    degree: usize,
    generators: Vec<Permutation>,
    order: usize,
    table: Arc<OnceLock<Arc<ElementTable>>>,
}

/// Largest group we are willing to tabulate.
pub const MAX_TABLE_ORDER: usize = 20_000;

impl PermGroup {
    /// Builds the group and computes its order by closure.
    pub fn new(name: impl Into<String>, degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if generators.iter().any(|g| g.degree() != degree) {
            return Err(Error::InvalidPermutation("generator degree mismatch".into()));
        }
        let order = closure(degree, &generators, MAX_TABLE_ORDER + 1).len();
        if order > MAX_TABLE_ORDER {
            return Err(Error::InvalidArgument(format!("group order exceeds {MAX_TABLE_ORDER}")));
        }
        Ok(PermGroup {
            name: name.into(),
            degree,
            generators,
            order,
            table: Arc::new(OnceLock::new()),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Multiplication table and derived data, built on first use and shared
    /// between clones.
    pub fn table(&self) -> Arc<ElementTable> {
        self.table
            .get_or_init(|| Arc::new(ElementTable::build(self.degree, &self.generators)))
            .clone()
    }

    /// Whether the given permutations generate the whole group.
    pub fn is_generated_by(&self, perms: &[Permutation]) -> bool {
        closure(self.degree, perms, self.order + 1).len() == self.order
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.table().index_of(p).is_some()
    }
}

/// All elements of `⟨gens⟩`, stopping once more than `limit` are found.
fn closure(degree: usize, gens: &[Permutation], limit: usize) -> Vec<Permutation> {
    let id = Permutation::identity(degree);
    let mut seen: HashMap<Permutation, ()> = HashMap::new();
    seen.insert(id.clone(), ());
    let mut elems = vec![id];
    let mut i = 0;
    while i < elems.len() && elems.len() <= limit {
        for g in gens {
            let y = elems[i].then(g);
            if !seen.contains_key(&y) {
                seen.insert(y.clone(), ());
                elems.push(y);
            }
        }
        i += 1;
    }
    elems
}

/// Cayley table of a small group with cached conjugacy data.
#[derive(Debug)]
pub struct ElementTable {
    n: usize,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, Elem>,
    mul: Vec<Elem>,
    inv: Vec<Elem>,
    elt_order: Vec<u32>,
    gens: Vec<Elem>,
    classes: OnceLock<Vec<ClassData>>,
}

/// A conjugacy class representative, the class size, and the orbits of its
/// centralizer acting on the group by conjugation.
#[derive(Clone, Debug)]
pub struct ClassData {
    pub rep: Elem,
    pub size: u64,
    /// `(orbit representative, orbit size)`
    pub centralizer_orbits: Vec<(Elem, u64)>,
}

impl ElementTable {
    fn build(degree: usize, generators: &[Permutation]) -> Self {
        let elements = closure(degree, generators, usize::MAX);
        let n = elements.len();
        assert!(n <= Elem::MAX as usize, "group too large to tabulate");
        let index: HashMap<Permutation, Elem> =
            elements.iter().enumerate().map(|(i, p)| (p.clone(), i as Elem)).collect();
        let gens: Vec<Elem> = generators.iter().map(|g| index[g]).collect();
        // right multiplication by generators, then BFS parents to fill rows
        let k = generators.len();
        let mut right = vec![0 as Elem; n * k];
        for (i, e) in elements.iter().enumerate() {
            for (j, g) in generators.iter().enumerate() {
                right[i * k + j] = index[&e.then(g)];
            }
        }
        let mut parent = vec![(0usize, 0usize); n];
        let mut done = vec![false; n];
        done[0] = true;
        let mut order = vec![0usize];
        let mut qi = 0;
        while qi < order.len() {
            let x = order[qi];
            qi += 1;
            for j in 0..k {
                let y = right[x * k + j] as usize;
                if !done[y] {
                    done[y] = true;
                    parent[y] = (x, j);
                    order.push(y);
                }
            }
        }
        let mut mul = vec![0 as Elem; n * n];
        for i in 0..n {
            let row = &mut mul[i * n..(i + 1) * n];
            row[0] = i as Elem;
            for &y in &order[1..] {
                let (x, j) = parent[y];
                row[y] = right[row[x] as usize * k + j];
            }
        }
        let mut inv = vec![0 as Elem; n];
        for i in 0..n {
            let j = (0..n).find(|&j| mul[i * n + j] == 0).unwrap();
            inv[i] = j as Elem;
        }
        let mut elt_order = vec![1u32; n];
        for i in 1..n {
            let mut x = i;
            let mut o = 1;
            while x != 0 {
                x = mul[x * n + i] as usize;
                o += 1;
            }
            elt_order[i] = o;
        }
        ElementTable {
            n,
            elements,
            index,
            mul,
            inv,
            elt_order,
            gens,
            classes: OnceLock::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.n + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a as usize]
    }

    pub fn element_order(&self, a: Elem) -> u32 {
        self.elt_order[a as usize]
    }

    #[inline]
    pub fn pow(&self, a: Elem, e: i64) -> Elem {
        let ord = self.elt_order[a as usize] as i64;
        let mut k = e.rem_euclid(ord);
        let mut base = a;
        let mut acc: Elem = 0;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn element(&self, a: Elem) -> &Permutation {
        &self.elements[a as usize]
    }

    pub fn index_of(&self, p: &Permutation) -> Option<Elem> {
        self.index.get(p).copied()
    }

    pub fn generators(&self) -> &[Elem] {
        &self.gens
    }

    /// `x⁻¹ a x`
    #[inline]
    pub fn conjugate(&self, a: Elem, x: Elem) -> Elem {
        self.mul(self.mul(self.inv(x), a), x)
    }

    /// Size of `⟨elems⟩`, stopping early once the subgroup exceeds half the
    /// group (it is then the whole group). Returns `order()` in that case.
    pub fn subgroup_size(&self, elems: &[Elem], scratch: &mut Vec<u32>, stamp: &mut u32) -> usize {
        if scratch.len() != self.n {
            scratch.clear();
            scratch.resize(self.n, 0);
            *stamp = 0;
        }
        *stamp = stamp.wrapping_add(1);
        if *stamp == 0 {
            scratch.iter_mut().for_each(|s| *s = 0);
            *stamp = 1;
        }
        let s = *stamp;
        let mut members: Vec<Elem> = vec![0];
        scratch[0] = s;
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            i += 1;
            for &g in elems {
                let y = self.mul(x, g);
                if scratch[y as usize] != s {
                    scratch[y as usize] = s;
                    members.push(y);
                    if 2 * members.len() > self.n {
                        return self.n;
                    }
                }
            }
        }
        members.len()
    }

    pub fn generates(&self, elems: &[Elem]) -> bool {
        let mut scratch = Vec::new();
        let mut stamp = 0;
        self.subgroup_size(elems, &mut scratch, &mut stamp) == self.n
    }

    /// Conjugacy classes in order of first appearance of their least element.
    pub fn classes(&self) -> &[ClassData] {
        self.classes.get_or_init(|| self.compute_classes())
    }

    fn compute_classes(&self) -> Vec<ClassData> {
        let n = self.n;
        let mut class_of = vec![usize::MAX; n];
        let mut out = Vec::new();
        for g in 0..n {
            if class_of[g] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut size = 0u64;
            for x in 0..n {
                let c = self.conjugate(g as Elem, x as Elem) as usize;
                if class_of[c] == usize::MAX {
                    class_of[c] = id;
                    size += 1;
                }
            }
            let centralizer: Vec<Elem> =
                (0..n as Elem).filter(|&x| self.mul(g as Elem, x) == self.mul(x, g as Elem)).collect();
            let mut orbit_seen = vec![false; n];
            let mut orbits = Vec::new();
            for h in 0..n {
                if orbit_seen[h] {
                    continue;
                }
                let mut size = 0u64;
                for &c in &centralizer {
                    let y = self.conjugate(h as Elem, c) as usize;
                    if !orbit_seen[y] {
                        orbit_seen[y] = true;
                        size += 1;
                    }
                }
                orbits.push((h as Elem, size));
            }
            out.push(ClassData { rep: g as Elem, size, centralizer_orbits: orbits });
        }
        out
    }

    /// Whether the group is nonabelian and simple: every nontrivial class
    /// has normal closure equal to the whole group.
    pub fn is_nonabelian_simple(&self) -> bool {
        if self.n < 2 {
            return false;
        }
        let abelian = (0..self.n as Elem).all(|a| self.gens.iter().all(|&g| self.mul(a, g) == self.mul(g, a)));
        if abelian {
            return false;
        }
        self.classes().iter().filter(|c| c.rep != 0).all(|c| {
            let class: Vec<Elem> = (0..self.n as Elem).map(|x| self.conjugate(c.rep, x)).collect();
            self.generates(&class)
        })
    }
}
