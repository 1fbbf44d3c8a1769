use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentations::{parse_presentation, parse_word, FinitePresentation, Word};

/// A tubular bundle of type `(d; n, m)`: vertex complexes `V_i` with loops
/// `c_i`, attached to the rose on `a_1…a_n` along `ρ(i)` with torus shift
/// `z_i ∈ ℤ^d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BundleJson", into = "BundleJson")]
pub struct TubularBundleData {
    pub d: usize,
    pub n: usize,
    pub m: usize,
    pub vertices: Vec<FinitePresentation>,
    /// `c_i` as a word in the generators of `V_i`.
    pub loops: Vec<Word>,
    /// `ρ(i)` as a word in `a_1…a_n`.
    pub rho: Vec<Word>,
    pub shifts: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct BundleJson {
    d: usize,
    n: usize,
    m: usize,
    vertices: Vec<String>,
    loops: Vec<String>,
    rho: Vec<String>,
    shifts: Vec<Vec<i64>>,
}

fn rose_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("a{i}")).collect()
}

impl TryFrom<BundleJson> for TubularBundleData {
    type Error = Error;

    fn try_from(j: BundleJson) -> Result<Self> {
        let vertices = j.vertices.iter().map(|s| parse_presentation(s)).collect::<Result<Vec<_>>>()?;
        if j.loops.len() != vertices.len() {
            return Err(Error::MalformedBundle(format!(
                "{} loops for {} vertex spaces",
                j.loops.len(),
                vertices.len()
            )));
        }
        let loops = j
            .loops
            .iter()
            .zip(&vertices)
            .map(|(s, v)| parse_word(s, &v.names()))
            .collect::<Result<Vec<_>>>()?;
        let rose = rose_names(j.n);
        let rho = j.rho.iter().map(|s| parse_word(s, &rose)).collect::<Result<Vec<_>>>()?;
        let data = TubularBundleData { d: j.d, n: j.n, m: j.m, vertices, loops, rho, shifts: j.shifts };
        data.validate()?;
        Ok(data)
    }
}

impl From<TubularBundleData> for BundleJson {
    fn from(b: TubularBundleData) -> Self {
        let rose = rose_names(b.n);
        BundleJson {
            d: b.d,
            n: b.n,
            m: b.m,
            loops: b.loops.iter().zip(&b.vertices).map(|(c, v)| v.render_word(c)).collect(),
            vertices: b.vertices.iter().map(FinitePresentation::render).collect(),
            rho: b.rho.iter().map(|w| w.render(&rose)).collect(),
            shifts: b.shifts,
        }
    }
}

impl TubularBundleData {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::MalformedBundle(msg));
        if self.n == 0 || self.m == 0 {
            return bad("n and m must be positive".into());
        }
        for (what, len) in [
            ("vertex spaces", self.vertices.len()),
            ("loops", self.loops.len()),
            ("rho words", self.rho.len()),
            ("shift vectors", self.shifts.len()),
        ] {
            if len != self.m {
                return bad(format!("{len} {what} for m = {}", self.m));
            }
        }
        for (i, z) in self.shifts.iter().enumerate() {
            if z.len() != self.d {
                return bad(format!("shift {} has length {}, expected d = {}", i + 1, z.len(), self.d));
            }
        }
        for (i, (c, v)) in self.loops.iter().zip(&self.vertices).enumerate() {
            if c.is_identity() {
                return bad(format!("loop {} is trivial", i + 1));
            }
            v.check_word(c)?;
        }
        for (i, r) in self.rho.iter().enumerate() {
            if r.is_identity() {
                return bad(format!("rho({}) is trivial", i + 1));
            }
            if r.max_generator().is_some_and(|g| g >= self.n) {
                return bad(format!("rho({}) uses a generator beyond a{}", i + 1, self.n));
            }
        }
        Ok(())
    }
}

/// Fundamental group presentation: generators `a_1…a_n, t_1…t_d` and the
/// generators of each `V_i` suffixed `_i`; relators `[t_j, t_k]` (`j < k`),
/// `[t_j, g]` for every other generator `g`, the relators of each `V_i`, and
/// `ρ(i)⁻¹ · c_i · t^{z_i}` for each `i`.
pub fn tubular_bundle_presentation(b: &TubularBundleData) -> Result<FinitePresentation> {
    b.validate()?;
    let (d, n) = (b.d, b.n);
    let mut names = rose_names(n);
    names.extend((1..=d).map(|j| format!("t{j}")));
    let mut offsets = Vec::with_capacity(b.m);
    for (i, v) in b.vertices.iter().enumerate() {
        offsets.push(names.len());
        for g in v.names() {
            let name = format!("{g}_{}", i + 1);
            if names.contains(&name) {
                return Err(Error::NameCollision(name));
            }
            names.push(name);
        }
    }
    let t = |j: usize| Word::gen(n + j);
    let total = names.len();
    let mut relators = Vec::new();
    for j in 0..d {
        for k in j + 1..d {
            relators.push(Word::commutator(&t(j), &t(k)));
        }
    }
    for j in 0..d {
        for g in (0..n).chain(n + d..total) {
            relators.push(Word::commutator(&t(j), &Word::gen(g)));
        }
    }
    for (v, &off) in b.vertices.iter().zip(&offsets) {
        relators.extend(v.relators().iter().map(|r| r.map_generators(|g| g + off)));
    }
    for i in 0..b.m {
        let c = b.loops[i].map_generators(|g| g + offsets[i]);
        let mut w = &b.rho[i].inverse() * &c;
        for (j, &z) in b.shifts[i].iter().enumerate() {
            w = &w * &Word::power_of(n + j, z);
        }
        relators.push(w);
    }
    FinitePresentation::new(names, relators)
}

/// All bundles over copies of `(x, c)` with fixed `rho` and shifts of
/// max-norm at most `height`, ordered lexicographically by the concatenated
/// shift matrix `z_1 ‖ z_2 ‖ …` with entries running `−height..=height`.
#[derive(Clone, Debug)]
pub struct TubularBundleEnumeration {
    template: TubularBundleData,
    height: i64,
    len: u128,
    next: u128,
}

pub fn enumerate_tubular_bundles(
    x: &FinitePresentation,
    c: &Word,
    d: usize,
    n: usize,
    m: usize,
    rho: &[Word],
    height: u32,
) -> Result<TubularBundleEnumeration> {
    let template = TubularBundleData {
        d,
        n,
        m,
        vertices: vec![x.clone(); m],
        loops: vec![c.clone(); m],
        rho: rho.to_vec(),
        shifts: vec![vec![0; d]; m],
    };
    template.validate()?;
    let base = 2 * height as u128 + 1;
    let len = u32::try_from(d * m)
        .ok()
        .and_then(|e| base.checked_pow(e))
        .ok_or_else(|| Error::InvalidArgument("bundle count overflows".into()))?;
    Ok(TubularBundleEnumeration { template, height: height as i64, len, next: 0 })
}

impl TubularBundleEnumeration {
    pub fn total(&self) -> u128 {
        self.len
    }

    /// The bundle at position `index` in the enumeration order.
    pub fn get(&self, index: u128) -> Option<TubularBundleData> {
        if index >= self.len {
            return None;
        }
        let (d, m) = (self.template.d, self.template.m);
        let base = 2 * self.height as u128 + 1;
        let mut digits = vec![0i64; d * m];
        let mut rest = index;
        for slot in digits.iter_mut().rev() {
            *slot = (rest % base) as i64 - self.height;
            rest /= base;
        }
        let mut b = self.template.clone();
        b.shifts = digits.chunks(d.max(1)).take(m).map(|c| c[..d].to_vec()).collect();
        if d == 0 {
            b.shifts = vec![Vec::new(); m];
        }
        Some(b)
    }
}

impl Iterator for TubularBundleEnumeration {
    type Item = TubularBundleData;

    fn next(&mut self) -> Option<TubularBundleData> {
        let b = self.get(self.next)?;
        self.next += 1;
        Some(b)
    }

    fn nth(&mut self, k: usize) -> Option<TubularBundleData> {
        self.next = self.next.saturating_add(k as u128);
        self.next()
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.len - self.next.min(self.len);
        let l = usize::try_from(left).unwrap_or(usize::MAX);
        (l, usize::try_from(left).ok())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::abelianization_invariants;
    use crate::presentations::higman;

    fn toy() -> TubularBundleData {
        TubularBundleData {
            d: 1,
            n: 1,
            m: 1,
            vertices: vec![parse_presentation("< g | g >").unwrap()],
            loops: vec![Word::gen(0)],
            rho: vec![Word::gen(0)],
            shifts: vec![vec![1]],
        }
    }

    #[test]
    fn toy_bundle() {
        let p = tubular_bundle_presentation(&toy()).unwrap();
        assert_eq!(p.render(), "< a1 t1 g_1 | t1 a1 t1^-1 a1^-1, t1 g_1 t1^-1 g_1^-1, g_1, a1^-1 g_1 t1 >");
        assert_eq!(abelianization_invariants(&p).to_string(), "Z");
    }

    #[test]
    fn counts() {
        let b = TubularBundleData {
            d: 2,
            n: 2,
            m: 2,
            vertices: vec![higman(), parse_presentation("< u v | u^2 v^-3 >").unwrap()],
            loops: vec![Word::gen(0), Word::gen(1)],
            rho: vec![Word::gen(0), &Word::gen(0) * &Word::gen(1)],
            shifts: vec![vec![1, 0], vec![-2, 3]],
        };
        let p = tubular_bundle_presentation(&b).unwrap();
        assert_eq!(p.ngens(), 2 + 2 + 4 + 2);
        assert_eq!(p.nrels(), 1 + 2 * (2 + 6) + 5 + 2);
    }

    #[test]
    fn zero_shift_over_higman_splits_torus() {
        for d in 1..=3 {
            let b = TubularBundleData {
                d,
                n: 1,
                m: 1,
                vertices: vec![higman()],
                loops: vec![Word::gen(0)],
                rho: vec![Word::gen(0)],
                shifts: vec![vec![0; d]],
            };
            let p = tubular_bundle_presentation(&b).unwrap();
            let h1 = abelianization_invariants(&p);
            assert_eq!(h1.free_rank, d);
            assert!(h1.torsion.is_empty());
        }
    }

    #[test]
    fn malformed() {
        let mut b = toy();
        b.shifts = vec![vec![1, 2]];
        assert!(matches!(tubular_bundle_presentation(&b), Err(Error::MalformedBundle(_))));
        let mut b = toy();
        b.rho = vec![Word::identity()];
        assert!(b.validate().is_err());
        let mut b = toy();
        b.m = 2;
        assert!(b.validate().is_err());
    }

    #[test]
    fn json_roundtrip() {
        let b = toy();
        let s = serde_json::to_string(&b).unwrap();
        assert_eq!(s, r#"{"d":1,"n":1,"m":1,"vertices":["< g | g >"],"loops":["g"],"rho":["a1"],"shifts":[[1]]}"#);
        let back: TubularBundleData = serde_json::from_str(&s).unwrap();
        assert_eq!(back, b);
        let bad = r#"{"d":2,"n":1,"m":1,"vertices":["< g | g >"],"loops":["g"],"rho":["a1"],"shifts":[[1]]}"#;
        assert!(serde_json::from_str::<TubularBundleData>(bad).is_err());
    }

    #[test]
    fn enumeration_counts_and_order() {
        let x = higman();
        let c = Word::gen(0);
        let rho1 = vec![Word::gen(0)];
        let e = enumerate_tubular_bundles(&x, &c, 1, 1, 1, &rho1, 1).unwrap();
        let shifts: Vec<Vec<Vec<i64>>> = e.map(|b| b.shifts).collect();
        assert_eq!(shifts, vec![vec![vec![-1]], vec![vec![0]], vec![vec![1]]]);
        let rho2 = vec![Word::gen(0), Word::gen(1)];
        let e = enumerate_tubular_bundles(&x, &c, 2, 2, 2, &rho2, 1).unwrap();
        assert_eq!(e.total(), 81);
        assert_eq!(e.clone().count(), 81);
        let first = e.get(0).unwrap();
        assert_eq!(first.shifts, vec![vec![-1, -1], vec![-1, -1]]);
        assert_eq!(e.get(1).unwrap().shifts, vec![vec![-1, -1], vec![-1, 0]]);
        let zero = enumerate_tubular_bundles(&x, &c, 2, 1, 1, &rho1, 0).unwrap();
        assert_eq!(zero.collect::<Vec<_>>().iter().map(|b| b.shifts.clone()).collect::<Vec<_>>(), vec![vec![vec![0, 0]]]);
        let flat = enumerate_tubular_bundles(&x, &c, 0, 1, 1, &rho1, 3).unwrap();
        assert_eq!(flat.total(), 1);
    }
}
