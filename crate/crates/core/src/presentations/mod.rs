//! Words, finite presentations and the basic operations on them.
//!
//! Generators are interned per presentation: a [`Word`] stores generator
//! indices, and the owning [`FinitePresentation`] maps them back to names.

mod parse;
mod tietze;
mod word;

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::homology::IntMatrix;

pub use parse::{parse_presentation, parse_word, parse_word_list};
pub use tietze::tietze_simplify;
pub use word::{free_reduce, Syllable, Word};

/// A generator name: ASCII letters, digits and `_`, not starting with a digit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator(String);

impl Generator {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if is_identifier(&name) {
            Ok(Generator(name))
        } else {
            Err(Error::InvalidGeneratorName(name))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for Generator {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// `⟨ generators | relators ⟩` with relators stored freely reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinitePresentation {
    generators: Vec<Generator>,
    relators: Vec<Word>,
}

impl FinitePresentation {
    /// Validates names and relators. Relators are freely reduced; an empty
    /// relator is an error.
    pub fn new<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        relators: Vec<Word>,
    ) -> Result<Self> {
        let generators = names
            .into_iter()
            .map(Generator::new)
            .collect::<Result<Vec<_>>>()?;
        let mut seen = HashSet::new();
        for g in &generators {
            if !seen.insert(g.name()) {
                return Err(Error::DuplicateGenerator(g.name().to_string()));
            }
        }
        let count = generators.len();
        for (i, r) in relators.iter().enumerate() {
            if r.is_identity() {
                return Err(Error::EmptyRelator(i));
            }
            if let Some(index) = r.max_generator().filter(|&m| m >= count) {
                return Err(Error::GeneratorOutOfRange { index, count });
            }
        }
        Ok(FinitePresentation { generators, relators })
    }

    /// Like [`new`](Self::new) but silently drops relators that reduce to the
    /// identity.
    pub fn new_dropping_trivial<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        relators: Vec<Word>,
    ) -> Result<Self> {
        let relators = relators.into_iter().filter(|r| !r.is_identity()).collect();
        Self::new(names, relators)
    }

    pub fn free(names: &[&str]) -> Result<Self> {
        Self::new(names.iter().copied(), Vec::new())
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn names(&self) -> Vec<&str> {
        self.generators.iter().map(|g| g.name()).collect()
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn nrels(&self) -> usize {
        self.relators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name() == name)
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }

    pub fn render_word(&self, w: &Word) -> String {
        w.render(&self.generators)
    }

    /// Normalized text form, e.g. `< a b | a b a^-1 b^-1 >`.
    pub fn render(&self) -> String {
        let gens = self.names().join(" ");
        let rels: Vec<String> = self.relators.iter().map(|r| self.render_word(r)).collect();
        match (gens.is_empty(), rels.is_empty()) {
            (true, true) => "< | >".to_string(),
            (true, false) => format!("< | {} >", rels.join(", ")),
            (false, true) => format!("< {gens} | >"),
            (false, false) => format!("< {gens} | {} >", rels.join(", ")),
        }
    }

    /// `M[i][j]` = exponent sum of generator `j` in relator `i`.
    pub fn exponent_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.nrels(), self.ngens());
        for (i, r) in self.relators.iter().enumerate() {
            for s in r.syllables() {
                let e = m.get(i, s.gen) + BigInt::from(s.exp);
                m.set(i, s.gen, e);
            }
        }
        m
    }

    /// Euler characteristic of the presentation 2-complex, `1 - |A| + |R|`.
    pub fn euler_characteristic(&self) -> i64 {
        1 - self.ngens() as i64 + self.nrels() as i64
    }

    /// Same presentation with every generator renamed `g` -> `g{suffix}`.
    pub fn with_suffix(&self, suffix: &str) -> Result<Self> {
        let names = self.generators.iter().map(|g| format!("{}{suffix}", g.name()));
        Self::new(names, self.relators.clone())
    }

    /// Presentation of the direct product: both relator sets plus `[g1, g2]`
    /// for every pair of generators from different factors. Generator names
    /// are kept when disjoint, otherwise suffixed `_1`/`_2`.
    pub fn direct_product(&self, other: &FinitePresentation) -> FinitePresentation {
        let (left, right) = disjoint_names(&self.names(), &other.names());
        let offset = self.ngens();
        let mut relators: Vec<Word> = self.relators.clone();
        relators.extend(other.relators.iter().map(|r| r.map_generators(|g| g + offset)));
        for g1 in 0..self.ngens() {
            for g2 in 0..other.ngens() {
                relators.push(Word::commutator(&Word::gen(g1), &Word::gen(offset + g2)));
            }
        }
        FinitePresentation::new(left.into_iter().chain(right), relators)
            .expect("direct product of valid presentations is valid")
    }

    /// Checks that every word only uses generators of this presentation.
    pub fn check_word(&self, w: &Word) -> Result<()> {
        match w.max_generator() {
            Some(index) if index >= self.ngens() => {
                Err(Error::GeneratorOutOfRange { index, count: self.ngens() })
            }
            _ => Ok(()),
        }
    }
}

/// Pick names for two generator lists so the union has no duplicates.
fn disjoint_names(left: &[&str], right: &[&str]) -> (Vec<String>, Vec<String>) {
    let clash = |l: &[String], r: &[String]| {
        let set: HashSet<&String> = l.iter().collect();
        r.iter().any(|n| set.contains(n))
    };
    let plain_l: Vec<String> = left.iter().map(|s| s.to_string()).collect();
    let plain_r: Vec<String> = right.iter().map(|s| s.to_string()).collect();
    if !clash(&plain_l, &plain_r) {
        return (plain_l, plain_r);
    }
    let mut round = 0usize;
    loop {
        let (sl, sr) = if round == 0 {
            ("_1".to_string(), "_2".to_string())
        } else {
            (format!("_1x{round}"), format!("_2x{round}"))
        };
        let l: Vec<String> = left.iter().map(|s| format!("{s}{sl}")).collect();
        let r: Vec<String> = right.iter().map(|s| format!("{s}{sr}")).collect();
        let all: HashSet<&String> = l.iter().chain(r.iter()).collect();
        if all.len() == l.len() + r.len() {
            return (l, r);
        }
        round += 1;
    }
}

impl fmt::Display for FinitePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl std::str::FromStr for FinitePresentation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_presentation(s)
    }
}

impl Serialize for FinitePresentation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.render())
    }
}

impl<'de> Deserialize<'de> for FinitePresentation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_presentation(&s).map_err(serde::de::Error::custom)
    }
}

/// Homomorphism of free groups given by generator images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMap {
    source: FinitePresentation,
    target: FinitePresentation,
    images: Vec<Word>,
}

impl GeneratorMap {
    pub fn new(
        source: FinitePresentation,
        target: FinitePresentation,
        images: Vec<Word>,
    ) -> Result<Self> {
        if images.len() != source.ngens() {
            return Err(Error::InvalidArgument(format!(
                "{} images given for {} source generators",
                images.len(),
                source.ngens()
            )));
        }
        for w in &images {
            target.check_word(w)?;
        }
        Ok(GeneratorMap { source, target, images })
    }

    pub fn source(&self) -> &FinitePresentation {
        &self.source
    }

    pub fn target(&self) -> &FinitePresentation {
        &self.target
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn apply(&self, w: &Word) -> Word {
        w.substitute(&self.images)
    }

    /// Indices of source relators whose image is neither freely trivial nor a
    /// cyclic conjugate of a target relator or its inverse. Empty means the
    /// map is verified to be a homomorphism.
    pub fn unverified_relators(&self) -> Vec<usize> {
        let targets: HashSet<Vec<i64>> = self
            .target
            .relators()
            .iter()
            .flat_map(|r| [canonical_cyclic(r), canonical_cyclic(&r.inverse())])
            .collect();
        self.source
            .relators()
            .iter()
            .enumerate()
            .filter_map(|(i, r)| {
                let img = self.apply(r).cyclically_reduced();
                if img.is_identity() || targets.contains(&canonical_cyclic(&img)) {
                    None
                } else {
                    Some(i)
                }
            })
            .collect()
    }
}

/// Lexicographically least rotation of the cyclic reduction, as signed letters.
pub(crate) fn canonical_cyclic(w: &Word) -> Vec<i64> {
    let letters = w.cyclically_reduced().signed_letters();
    let n = letters.len();
    (0..n)
        .map(|k| letters[k..].iter().chain(&letters[..k]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

/// Higman's four-generator group with no nontrivial finite quotients.
pub fn higman() -> FinitePresentation {
    parse_presentation(
        "< a1 a2 a3 a4 | a2^-1 a1 a2 a1^-2, a3^-1 a2 a3 a2^-2, a4^-1 a3 a4 a3^-2, a1^-1 a4 a1 a4^-2 >",
    )
    .expect("static presentation")
}
