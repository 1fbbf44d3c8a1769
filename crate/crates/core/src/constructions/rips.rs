use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::small_cancellation::small_cancellation_ratio;
use crate::error::{Error, Result};
use crate::presentations::{FinitePresentation, GeneratorMap, Word};

/// Blocks `b a^e` per filler word.
const BLOCKS: u64 = 20;
/// Offsets are doubled until this bound, then the scheme gives up.
const MAX_OFFSET: u64 = 1 << 16;

#[derive(Clone, Debug, Serialize)]
pub struct RipsOutput {
    /// `⟨x̲, a, b, c | …⟩`
    pub h: FinitePresentation,
    /// The fresh generators `a, b, c` as words in `h`.
    pub kernel_generators: Vec<Word>,
    /// `h → q` sending each `x` to itself and `a, b, c` to 1.
    #[serde(skip)]
    pub quotient_map: GeneratorMap,
    /// Base offset of the filler words that passed the metric check.
    pub offset: u64,
    pub ratio: String,
}

/// `∏_{i=1}^{BLOCKS} b a^{ℓ + BLOCKS·k + i}` over generators `a`, `b`.
fn filler_word(a: usize, b: usize, offset: u64, k: u64) -> Word {
    let mut syl = Vec::with_capacity(2 * BLOCKS as usize);
    for i in 1..=BLOCKS {
        syl.push((b, 1));
        syl.push((a, (offset + BLOCKS * k + i) as i64));
    }
    Word::from_syllables(syl)
}

fn fresh_name(base: &str, taken: &[&str]) -> String {
    if !taken.contains(&base) {
        return base.to_string();
    }
    (1..).map(|i| format!("{base}_{i}")).find(|n| !taken.contains(&n.as_str())).unwrap()
}

/// Rips construction: `H` on `x̲ ∪ {a,b,c}` with relators
/// `x^ε g x^{−ε} W⁻¹` (`ε = ±1`, `g ∈ {a,b,c}`) and `y_j W⁻¹`, each with its
/// own filler word `W`. The assignment of filler words is shuffled by `seed`;
/// the base offset starts at `1 + seed mod 8` and doubles until the result
/// is `C'(1/6)`.
pub fn rips_construction(q: &FinitePresentation, seed: u64) -> Result<RipsOutput> {
    let n = q.ngens();
    let taken = q.names();
    let a_name = fresh_name("a", &taken);
    let b_name = fresh_name("b", &taken);
    let c_name = fresh_name("c", &taken);
    let mut names: Vec<String> = taken.iter().map(|s| s.to_string()).collect();
    names.extend([a_name, b_name, c_name]);
    let (a, b, c) = (n, n + 1, n + 2);

    let mut heads: Vec<Word> = Vec::with_capacity(6 * n + q.nrels());
    for x in 0..n {
        for eps in [1, -1] {
            for g in [a, b, c] {
                let xe = Word::power_of(x, eps);
                heads.push(&(&xe * &Word::gen(g)) * &xe.inverse());
            }
        }
    }
    heads.extend(q.relators().iter().cloned());

    let mut slots: Vec<u64> = (0..heads.len() as u64).collect();
    slots.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let mut offset = 1 + seed % 8;
    loop {
        let relators: Vec<Word> = heads
            .iter()
            .zip(&slots)
            .map(|(h, &k)| h * &filler_word(a, b, offset, k).inverse())
            .collect();
        let h = FinitePresentation::new(names.clone(), relators)?;
        let ratio = small_cancellation_ratio(&h);
        if ratio < Ratio::new(1, 6) {
            let mut images: Vec<Word> = (0..n).map(Word::gen).collect();
            images.extend([Word::identity(), Word::identity(), Word::identity()]);
            let quotient_map = GeneratorMap::new(h.clone(), q.clone(), images)?;
            return Ok(RipsOutput {
                kernel_generators: vec![Word::gen(a), Word::gen(b), Word::gen(c)],
                h,
                quotient_map,
                offset,
                ratio: ratio.to_string(),
            });
        }
        if offset * 2 > MAX_OFFSET {
            return Err(Error::SchemeExhausted { offset });
        }
        offset *= 2;
    }
}
