//! Exact integer linear algebra: Smith normal form, abelian invariants of
//! presentations and integer solving of `Mᵀλ = b`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::presentations::FinitePresentation;

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let data = rows.iter().flat_map(|r| r.iter().cloned().map(Into::into)).collect();
        IntMatrix { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        self.data[i * self.cols + j].clone()
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.entry(k, j);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.entry(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * q;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * q;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self.data[r * self.cols + j];
            self.data[r * self.cols + j] = v;
        }
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for row in self.to_rows() {
            let row: Vec<serde_json::Value> = row.iter().map(bigint_json).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

fn bigint_json(v: &BigInt) -> serde_json::Value {
    match v.to_i64() {
        Some(x) => serde_json::Value::from(x),
        None => serde_json::Value::from(v.to_string()),
    }
}

pub(crate) fn serialize_bigints<S: Serializer>(v: &[BigInt], serializer: S) -> Result<S::Ok, S::Error> {
    let mut seq = serializer.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&bigint_json(x))?;
    }
    seq.end()
}

/// `U·M·V = D` with `U`, `V` unimodular and `D` diagonal, `d₁ | d₂ | …`, `dᵢ ≥ 0`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.get(i, i)).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Smith normal form by pivoting on the entry of least absolute value.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    for k in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = min_pivot(&a, k) else {
                return SmithDecomposition { u, d: a, v };
            };
            a.swap_rows(k, pi);
            u.swap_rows(k, pi);
            a.swap_cols(k, pj);
            v.swap_cols(k, pj);
            let p = a.get(k, k);
            let mut clean = true;
            for i in k + 1..rows {
                if a.entry(i, k).is_zero() {
                    continue;
                }
                let q = -(a.entry(i, k) / &p);
                a.add_row(i, k, &q);
                u.add_row(i, k, &q);
                clean &= a.entry(i, k).is_zero();
            }
            for j in k + 1..cols {
                if a.entry(k, j).is_zero() {
                    continue;
                }
                let q = -(a.entry(k, j) / &p);
                a.add_col(j, k, &q);
                v.add_col(j, k, &q);
                clean &= a.entry(k, j).is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into row k and retry
            let offending = (k + 1..rows)
                .find(|&i| (k + 1..cols).any(|j| !a.entry(i, j).is_multiple_of(&p)));
            match offending {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row(k, i, &one);
                    u.add_row(k, i, &one);
                }
                None => break,
            }
        }
        if a.entry(k, k).is_negative() {
            a.negate_row(k);
            u.negate_row(k);
        }
    }
    SmithDecomposition { u, d: a, v }
}

fn min_pivot(a: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in k..a.rows {
        for j in k..a.cols {
            let x = a.entry(i, j);
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                best = Some((i, j, ax));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Finitely generated abelian group `ℤ^free_rank ⊕ ⊕ ℤ/tᵢ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AbelianInvariants {
    #[serde(serialize_with = "serialize_bigints")]
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

impl AbelianInvariants {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Cokernel of the row space of `m`, i.e. `ℤ^cols / rowspace(m)`.
    pub fn of_relation_matrix(m: &IntMatrix) -> Self {
        let snf = smith_normal_form(m);
        let diag = snf.diagonal();
        let rank = diag.iter().filter(|d| !d.is_zero()).count();
        let torsion = diag.into_iter().filter(|d| *d > BigInt::one()).collect();
        AbelianInvariants { torsion, free_rank: m.cols() - rank }
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|t| format!("Z/{t}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// `H₁` of the presented group.
pub fn abelianization_invariants(p: &FinitePresentation) -> AbelianInvariants {
    AbelianInvariants::of_relation_matrix(&p.exponent_matrix())
}

/// Rank of `ker ∂₂` of the presentation 2-complex, `|R| - rank(M)`.
///
/// This equals the rank of `H₂` of the group only when the presentation
/// complex is aspherical.
pub fn h2_rank_2complex(p: &FinitePresentation) -> usize {
    let snf = smith_normal_form(&p.exponent_matrix());
    p.nrels() - snf.rank()
}

/// Solve `Mᵀλ = b` over ℤ. Free coordinates of the solution are set to zero.
pub fn solve_integer_system(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let a = m.transpose();
    assert_eq!(a.rows(), b.len(), "dimension mismatch");
    let snf = smith_normal_form(&a);
    let ub = snf.u.mul_vec(b);
    let diag = snf.diagonal();
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, c) in ub.iter().enumerate() {
        let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            if !c.is_zero() {
                return None;
            }
        } else {
            let (q, r) = c.div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(snf.v.mul_vec(&y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{higman, parse_presentation};
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_decomposition(m: &IntMatrix) {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert_eq!(det(&s.u).abs(), BigInt::one());
        assert_eq!(det(&s.v).abs(), BigInt::one());
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.entry(i, j).is_zero());
                }
            }
        }
        let diag = s.diagonal();
        assert!(diag.iter().all(|d| !d.is_negative()));
        for w in diag.windows(2) {
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
    }

    /// Exact determinant by rational elimination.
    fn det(m: &IntMatrix) -> BigInt {
        let n = m.rows();
        let mut a: Vec<Vec<BigRational>> =
            m.to_rows().into_iter().map(|r| r.into_iter().map(BigRational::from_integer).collect()).collect();
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return BigInt::zero();
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            det *= a[c][c].clone();
            for r in c + 1..n {
                let f = &a[r][c] / &a[c][c];
                for k in c..n {
                    let v = &f * &a[c][k];
                    a[r][k] -= v;
                }
            }
        }
        det.to_integer()
    }

    /// Rank over ℚ, independent of the Smith code path.
    fn rational_rank(m: &IntMatrix) -> usize {
        let mut a: Vec<Vec<BigRational>> =
            m.to_rows().into_iter().map(|r| r.into_iter().map(BigRational::from_integer).collect()).collect();
        let (rows, cols) = (m.rows(), m.cols());
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else { continue };
            a.swap(p, rank);
            for r in 0..rows {
                if r != rank && !a[r][c].is_zero() {
                    let f = &a[r][c] / &a[rank][c];
                    for k in c..cols {
                        let v = &f * &a[rank][k];
                        a[r][k] -= v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn minus_identity() {
        let m = higman().exponent_matrix();
        let s = smith_normal_form(&m);
        assert_eq!(s.d, IntMatrix::identity(4));
        check_decomposition(&m);
    }

    #[test]
    fn two_three() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(smith_normal_form(&m).diagonal(), ints(&[1, 6]));
        check_decomposition(&m);
    }

    #[test]
    fn zero_matrix() {
        let m = IntMatrix::zeros(1, 2);
        let s = smith_normal_form(&m);
        assert!(s.d.is_zero());
        check_decomposition(&m);
    }

    #[test]
    fn abelian_invariants_examples() {
        assert!(abelianization_invariants(&higman()).is_trivial());
        let f2 = parse_presentation("< a b | >").unwrap();
        assert_eq!(abelianization_invariants(&f2), AbelianInvariants { torsion: vec![], free_rank: 2 });
        let c2 = parse_presentation("< a | a^2 >").unwrap();
        assert_eq!(abelianization_invariants(&c2), AbelianInvariants { torsion: ints(&[2]), free_rank: 0 });
        assert_eq!(abelianization_invariants(&c2).to_string(), "Z/2");
    }

    #[test]
    fn h2_ranks() {
        assert_eq!(h2_rank_2complex(&higman()), 0);
        assert_eq!(h2_rank_2complex(&parse_presentation("< a | a^2, a^2 >").unwrap()), 1);
    }

    #[test]
    fn solve_examples() {
        let m = higman().exponent_matrix();
        assert_eq!(solve_integer_system(&m, &ints(&[-1, 0, 0, 0])), Some(ints(&[1, 0, 0, 0])));
        assert_eq!(solve_integer_system(&IntMatrix::from_rows(&[vec![2]]), &ints(&[1])), None);
        let m = IntMatrix::from_rows(&[vec![2], vec![3]]);
        let lambda = solve_integer_system(&m, &ints(&[1])).unwrap();
        assert_eq!(lambda, ints(&[-1, 1]));
    }

    #[test]
    fn json_shape() {
        let m = IntMatrix::from_rows(&[vec![1, -2], vec![0, 3]]);
        assert_eq!(serde_json::to_string(&m).unwrap(), "[[1,-2],[0,3]]");
    }

    fn small_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(-6i64..=6, c), r)
                .prop_map(|rows| IntMatrix::from_rows(&rows))
        })
    }

    proptest! {
        #[test]
        fn smith_invariants_hold(m in small_matrix()) {
            check_decomposition(&m);
        }

        #[test]
        fn smith_rank_matches_rational_rank(m in small_matrix()) {
            prop_assert_eq!(smith_normal_form(&m).rank(), rational_rank(&m));
        }

        #[test]
        fn solutions_satisfy_system(m in small_matrix(), seed in prop::collection::vec(-4i64..=4, 5)) {
            // right-hand sides both from the image (always solvable) and arbitrary
            let lam: Vec<BigInt> = ints(&seed[..m.rows()]);
            let b_image = m.transpose().mul_vec(&lam);
            let sol = solve_integer_system(&m, &b_image);
            prop_assert!(sol.is_some());
            prop_assert_eq!(m.transpose().mul_vec(&sol.unwrap()), b_image);
            let b_any: Vec<BigInt> = ints(&seed[..m.cols()]);
            match solve_integer_system(&m, &b_any) {
                Some(l) => prop_assert_eq!(m.transpose().mul_vec(&l), b_any),
                None => {
                    // either no rational solution or a torsion obstruction:
                    // check no small integer λ works
                    let n = m.rows();
                    let mut found = false;
                    let range: Vec<i64> = (-3..=3).collect();
                    let mut idx = vec![0usize; n];
                    loop {
                        let l: Vec<BigInt> = idx.iter().map(|&i| BigInt::from(range[i])).collect();
                        if m.transpose().mul_vec(&l) == b_any { found = true; break; }
                        let mut k = 0;
                        while k < n { idx[k] += 1; if idx[k] < range.len() { break; } idx[k] = 0; k += 1; }
                        if k == n { break; }
                    }
                    prop_assert!(!found);
                }
            }
        }
    }
}
