use std::sync::OnceLock;

use super::perm::{PermGroup, Permutation};
use crate::error::{Error, Result};

/// Largest order for which the catalog is complete.
pub const CATALOG_BOUND: u64 = 2520;

/// Groups that appear twice in the natural families; the second name is kept.
const COINCIDENCES: [(&str, &str); 2] = [("PSL2_5", "A5"), ("PSL2_9", "A6")];

pub fn alternating_group(n: usize) -> Result<PermGroup> {
    if n < 3 {
        return Err(Error::DegreeTooSmall(n));
    }
    let three = Permutation::from_cycles(n, &[&[0, 1, 2]])?;
    let long: Vec<usize> = if n % 2 == 1 { (0..n).collect() } else { (1..n).collect() };
    let long = Permutation::from_cycles(n, &[&long])?;
    PermGroup::new(format!("A{n}"), n, vec![three, long])
}

/// Finite field of order `q` as lookup tables over `0..q`.
#[derive(Clone, Debug)]
pub struct SmallField {
    q: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
}

impl SmallField {
    pub fn new(q: u64) -> Result<Self> {
        // (characteristic, degree, x^degree expressed in lower powers)
        let (p, k, reduction): (usize, usize, Vec<usize>) = match q {
            5 | 7 | 11 | 13 | 17 => (q as usize, 1, vec![]),
            8 => (2, 3, vec![1, 1, 0]),
            9 => (3, 2, vec![2, 0]),
            _ => return Err(Error::UnsupportedField(q)),
        };
        let q = q as usize;
        let digits = |mut x: usize| -> Vec<usize> {
            (0..k)
                .map(|_| {
                    let d = x % p;
                    x /= p;
                    d
                })
                .collect()
        };
        let number = |ds: &[usize]| ds.iter().rev().fold(0, |acc, &d| acc * p + d);
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                let (da, db) = (digits(a), digits(b));
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = number(&sum);
                if k == 1 {
                    mul[a * q + b] = a * b % p;
                    continue;
                }
                let mut prod = vec![0; 2 * k - 1];
                for i in 0..k {
                    for j in 0..k {
                        prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
                    }
                }
                for deg in (k..2 * k - 1).rev() {
                    let c = prod[deg];
                    prod[deg] = 0;
                    for (i, r) in reduction.iter().enumerate() {
                        prod[deg - k + i] = (prod[deg - k + i] + c * r) % p;
                    }
                }
                mul[a * q + b] = number(&prod[..k]);
            }
        }
        Ok(SmallField { q, add, mul })
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b]
    }

    pub fn neg(&self, a: usize) -> usize {
        (0..self.q).find(|&b| self.add(a, b) == 0).unwrap()
    }

    pub fn inv(&self, a: usize) -> Option<usize> {
        (1..self.q).find(|&b| self.mul(a, b) == 1)
    }

    /// Least element of multiplicative order `q − 1`.
    pub fn primitive_element(&self) -> usize {
        (2..self.q)
            .find(|&w| {
                let mut x = w;
                let mut k = 1;
                while x != 1 {
                    x = self.mul(x, w);
                    k += 1;
                }
                k == self.q - 1
            })
            .unwrap_or(1)
    }
}

/// PSL(2,q) acting on the projective line, points `0..q` with `q` standing
/// for infinity. Generated by `x ↦ x+1`, `x ↦ −1/x` and `x ↦ ω²x`.
pub fn psl2(q: u64) -> Result<PermGroup> {
    let field = SmallField::new(q)?;
    let q = field.order();
    let inf = q;
    let translate: Vec<usize> = (0..=q).map(|x| if x == inf { inf } else { field.add(x, 1) }).collect();
    let invert: Vec<usize> = (0..=q)
        .map(|x| match x {
            _ if x == inf => 0,
            0 => inf,
            _ => field.neg(field.inv(x).unwrap()),
        })
        .collect();
    let w = field.primitive_element();
    let w2 = field.mul(w, w);
    let scale: Vec<usize> = (0..=q).map(|x| if x == inf { inf } else { field.mul(w2, x) }).collect();
    let gens = vec![Permutation::new(translate)?, Permutation::new(invert)?, Permutation::new(scale)?];
    PermGroup::new(format!("PSL2_{q}"), q + 1, gens)
}

fn full_catalog() -> &'static [PermGroup] {
    static CATALOG: OnceLock<Vec<PermGroup>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let mut groups = vec![
            alternating_group(5).unwrap(),
            psl2(7).unwrap(),
            alternating_group(6).unwrap(),
            psl2(8).unwrap(),
            psl2(11).unwrap(),
            psl2(13).unwrap(),
            psl2(17).unwrap(),
            alternating_group(7).unwrap(),
        ];
        groups.sort_by_key(|g| g.order());
        groups
    })
}

/// Every nonabelian simple group of order at most `n`, up to isomorphism,
/// in increasing order.
pub fn catalog_up_to(n: u64) -> Result<Vec<PermGroup>> {
    if n > CATALOG_BOUND {
        return Err(Error::CatalogBound(n));
    }
    Ok(full_catalog().iter().filter(|g| g.order() as u64 <= n).cloned().collect())
}

/// Catalog group by name, e.g. `A5` or `PSL2_7`. Aliases such as `PSL2_5`
/// resolve to the catalog representative.
pub fn catalog_group(name: &str) -> Result<PermGroup> {
    let canonical = COINCIDENCES.iter().find(|(alias, _)| *alias == name).map_or(name, |(_, c)| *c);
    full_catalog()
        .iter()
        .find(|g| g.name() == canonical)
        .cloned()
        .ok_or_else(|| Error::UnknownGroup(name.to_string()))
}
