use crate::error::{Error, Result};
use crate::presentations::{FinitePresentation, Word};

/// Replaces each relator `r_i` of `p` by a fresh copy of `j` glued along
/// `alpha`: the result is `⟨B_1…B_m, a_1…a_n | S_1…S_m, r_1·α_1⁻¹, …⟩` where
/// copy `i` of `j` has its generators suffixed `_i`.
pub fn j_construction(p: &FinitePresentation, j: &FinitePresentation, alpha: &str) -> Result<FinitePresentation> {
    let alpha = j.generator_index(alpha).ok_or_else(|| Error::UnknownGenerator(alpha.to_string()))?;
    let m = p.nrels();
    if m == 0 {
        return Err(Error::InvalidArgument("J-construction needs at least one relator".into()));
    }
    let k = j.ngens();
    let mut names: Vec<String> = Vec::with_capacity(m * k + p.ngens());
    let mut relators = Vec::with_capacity(m * j.nrels() + m);
    for i in 0..m {
        let offset = i * k;
        names.extend(j.names().iter().map(|g| format!("{g}_{}", i + 1)));
        relators.extend(j.relators().iter().map(|s| s.map_generators(|g| g + offset)));
    }
    let base = m * k;
    for name in p.names() {
        if names.iter().any(|n| n == name) {
            return Err(Error::NameCollision(name.to_string()));
        }
        names.push(name.to_string());
    }
    for (i, r) in p.relators().iter().enumerate() {
        let r = r.map_generators(|g| g + base);
        relators.push(&r * &Word::gen(i * k + alpha).inverse());
    }
    FinitePresentation::new(names, relators)
}
