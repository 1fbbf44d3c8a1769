use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

/// A maximal run `gen^exp` inside a reduced word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Syllable {
    pub gen: usize,
    pub exp: i64,
}

impl Syllable {
    pub fn new(gen: usize, exp: i64) -> Self {
        Syllable { gen, exp }
    }
}

/// A freely reduced word over generator ids.
///
/// Adjacent syllables always carry distinct generators and every exponent is
/// nonzero, so structural equality is equality in the free group.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Word {
    syllables: Vec<Syllable>,
}

/// Freely reduce a raw syllable list; with `cyclic` also conjugate away
/// cancelling ends.
pub fn free_reduce(raw: &[(usize, i64)], cyclic: bool) -> Word {
    let mut out: Vec<Syllable> = Vec::with_capacity(raw.len());
    for &(gen, exp) in raw {
        push_syllable(&mut out, gen, exp);
    }
    let w = Word { syllables: out };
    if cyclic {
        w.cyclically_reduced()
    } else {
        w
    }
}

fn push_syllable(out: &mut Vec<Syllable>, gen: usize, exp: i64) {
    if exp == 0 {
        return;
    }
    match out.last_mut() {
        Some(top) if top.gen == gen => {
            top.exp += exp;
            if top.exp == 0 {
                out.pop();
            }
        }
        _ => out.push(Syllable { gen, exp }),
    }
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn gen(gen: usize) -> Self {
        Word::power_of(gen, 1)
    }

    pub fn power_of(gen: usize, exp: i64) -> Self {
        if exp == 0 {
            Word::identity()
        } else {
            Word { syllables: vec![Syllable { gen, exp }] }
        }
    }

    pub fn from_syllables<I: IntoIterator<Item = (usize, i64)>>(raw: I) -> Self {
        let raw: Vec<_> = raw.into_iter().collect();
        free_reduce(&raw, false)
    }

    /// Build from letters given as `(gen, ±1)`.
    pub fn from_letters<I: IntoIterator<Item = (usize, i64)>>(letters: I) -> Self {
        let mut out = Vec::new();
        for (g, s) in letters {
            push_syllable(&mut out, g, s);
        }
        Word { syllables: out }
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.syllables.iter().map(|s| s.exp.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Letters as `(gen, ±1)`.
    pub fn letters(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.syllables.iter().flat_map(|s| {
            let sign = s.exp.signum();
            std::iter::repeat_n((s.gen, sign), s.exp.unsigned_abs() as usize)
        })
    }

    pub fn inverse(&self) -> Word {
        Word {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable { gen: s.gen, exp: -s.exp })
                .collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Vec::with_capacity(base.syllables.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            for s in &base.syllables {
                push_syllable(&mut out, s.gen, s.exp);
            }
        }
        Word { syllables: out }
    }

    /// `u v u⁻¹ v⁻¹`
    pub fn commutator(u: &Word, v: &Word) -> Word {
        &(&(u * v) * &u.inverse()) * &v.inverse()
    }

    pub fn exponent_sum(&self, gen: usize) -> i64 {
        self.syllables.iter().filter(|s| s.gen == gen).map(|s| s.exp).sum()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.syllables.iter().map(|s| s.gen).max()
    }

    pub fn contains_generator(&self, gen: usize) -> bool {
        self.syllables.iter().any(|s| s.gen == gen)
    }

    /// Number of letters `gen^{±1}` in the word.
    pub fn occurrences(&self, gen: usize) -> usize {
        self.syllables
            .iter()
            .filter(|s| s.gen == gen)
            .map(|s| s.exp.unsigned_abs() as usize)
            .sum()
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.syllables.first(), self.syllables.last()) {
            (Some(f), Some(l)) if self.syllables.len() > 1 => {
                !(f.gen == l.gen && f.exp.signum() != l.exp.signum())
            }
            _ => true,
        }
    }

    /// Cyclic reduction (conjugation removing cancelling ends).
    pub fn cyclically_reduced(&self) -> Word {
        let mut s = self.syllables.clone();
        loop {
            if s.len() < 2 {
                break;
            }
            let last = s.len() - 1;
            let (f, l) = (s[0], s[last]);
            if f.gen != l.gen || f.exp.signum() == l.exp.signum() {
                break;
            }
            let k = f.exp.abs().min(l.exp.abs());
            s[0].exp -= f.exp.signum() * k;
            s[last].exp -= l.exp.signum() * k;
            if s[last].exp == 0 {
                s.pop();
            }
            if s[0].exp == 0 {
                s.remove(0);
            }
        }
        Word { syllables: s }
    }

    /// Replace every generator `g` by `images[g]`.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Vec::new();
        for s in &self.syllables {
            let image = &images[s.gen];
            if image.syllables.len() == 1 {
                let t = image.syllables[0];
                push_syllable(&mut out, t.gen, t.exp * s.exp);
                continue;
            }
            for t in image.pow(s.exp).syllables {
                push_syllable(&mut out, t.gen, t.exp);
            }
        }
        Word { syllables: out }
    }

    /// Rename generator ids; the map must be injective on the ids used.
    pub fn map_generators(&self, f: impl Fn(usize) -> usize) -> Word {
        Word::from_syllables(self.syllables.iter().map(|s| (f(s.gen), s.exp)))
    }

    /// Letters encoded as nonzero integers `±(gen + 1)`.
    pub fn signed_letters(&self) -> Vec<i64> {
        self.letters().map(|(g, s)| s * (g as i64 + 1)).collect()
    }

    pub fn from_signed_letters(letters: &[i64]) -> Word {
        Word::from_letters(letters.iter().map(|&l| ((l.unsigned_abs() - 1) as usize, l.signum())))
    }

    pub fn render(&self, names: &[impl AsRef<str>]) -> String {
        let mut parts = Vec::with_capacity(self.syllables.len());
        for s in &self.syllables {
            let name = names[s.gen].as_ref();
            if s.exp == 1 {
                parts.push(name.to_string());
            } else {
                parts.push(format!("{name}^{}", s.exp));
            }
        }
        parts.join(" ")
    }
}

impl Mul for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        let mut out = self.syllables.clone();
        for s in &rhs.syllables {
            push_syllable(&mut out, s.gen, s.exp);
        }
        Word { syllables: out }
    }
}

impl Mul for Word {
    type Output = Word;

    fn mul(self, rhs: Word) -> Word {
        &self * &rhs
    }
}

impl fmt::Display for Word {
    /// Renders with placeholder names `g0, g1, ...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..=self.max_generator().unwrap_or(0)).map(|i| format!("g{i}")).collect();
        f.write_str(&self.render(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cancellation() {
        let w = free_reduce(&[(0, 1), (0, -1), (1, 1)], false);
        assert_eq!(w, Word::gen(1));
    }

    #[test]
    fn cyclic_conjugate() {
        let w = free_reduce(&[(1, 1), (0, 1), (1, -1)], true);
        assert_eq!(w, Word::gen(0));
        let w = free_reduce(&[(0, 2), (1, 1), (0, -1)], true);
        assert_eq!(w, Word::from_syllables([(0, 1), (1, 1)]));
    }

    #[test]
    fn empty_input() {
        assert!(free_reduce(&[], false).is_identity());
        assert!(free_reduce(&[], true).is_identity());
    }

    #[test]
    fn commutator_shape() {
        let c = Word::commutator(&Word::gen(0), &Word::gen(1));
        assert_eq!(c.signed_letters(), vec![1, 2, -1, -2]);
        assert!(Word::commutator(&Word::gen(0), &Word::power_of(0, 2)).is_identity());
    }

    fn raw_word() -> impl Strategy<Value = Vec<(usize, i64)>> {
        prop::collection::vec((0usize..3, -3i64..=3), 0..12)
    }

    proptest! {
        #[test]
        fn reduction_is_idempotent(raw in raw_word(), cyclic in any::<bool>()) {
            let w = free_reduce(&raw, cyclic);
            let raw2: Vec<_> = w.syllables().iter().map(|s| (s.gen, s.exp)).collect();
            prop_assert_eq!(free_reduce(&raw2, cyclic), w.clone());
            if cyclic {
                prop_assert!(w.is_cyclically_reduced());
            }
        }

        #[test]
        fn group_axioms(a in raw_word(), b in raw_word(), c in raw_word()) {
            let (u, v, w) = (Word::from_syllables(a), Word::from_syllables(b), Word::from_syllables(c));
            prop_assert_eq!(&(&u * &v) * &w, &u * &(&v * &w));
            prop_assert!((&u * &u.inverse()).is_identity());
            prop_assert!((&u.inverse() * &u).is_identity());
        }

        #[test]
        fn letters_roundtrip(a in raw_word()) {
            let u = Word::from_syllables(a);
            prop_assert_eq!(Word::from_signed_letters(&u.signed_letters()), u.clone());
            prop_assert_eq!(u.letters().count(), u.len());
        }
    }
}
