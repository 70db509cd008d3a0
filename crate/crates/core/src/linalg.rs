//! Exact vectors and matrices over Z[w] and its fraction field: hermitian
//! pairing, fraction-free determinants, Smith and Hermite normal forms, and
//! exact inverses.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::eisenstein::{EisensteinInt, EisensteinScalar};
use crate::error::{Error, Result};

pub type EVector = Vec<EisensteinInt>;
pub type KVector = Vec<EisensteinScalar>;

/// Dense row-major matrix over the Eisenstein integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<EisensteinInt>,
}

impl EMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<EisensteinInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {}x{} matrix",
                entries.len(),
                rows,
                cols
            )));
        }
        Ok(EMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        EMatrix {
            rows,
            cols,
            entries: vec![EisensteinInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = EisensteinInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<EVector>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        if rows.iter().any(|v| v.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(EMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor from i64 coordinate pairs.
    pub fn from_pairs(rows: usize, cols: usize, pairs: &[(i64, i64)]) -> Result<Self> {
        let entries = pairs
            .iter()
            .map(|&(a, b)| EisensteinInt::new(a, b))
            .collect();
        Self::new(rows, cols, entries)
    }

    pub fn row(&self, i: usize) -> &[EisensteinInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> EVector {
        self.row(i).to_vec()
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[EisensteinInt]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        let entries = self.entries.iter().map(|x| x.conj()).collect();
        EMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn conj_transpose(&self) -> Self {
        self.conj().transpose()
    }

    pub fn is_conj_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.conj_transpose()
    }

    pub fn neg(&self) -> Self {
        let entries = self.entries.iter().map(|x| -x).collect();
        EMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn mul(&self, other: &EMatrix) -> Result<EMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut m = EMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let lhs = &self[(i, k)];
                if lhs.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = lhs * &other[(k, j)];
                    m[(i, j)] += &add;
                }
            }
        }
        Ok(m)
    }

    pub fn scale(&self, s: &EisensteinInt) -> Self {
        let entries = self.entries.iter().map(|x| x * s).collect();
        EMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn vstack(&self, other: &EMatrix) -> Result<EMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(
                "vstack with different widths".into(),
            ));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        EMatrix::new(self.rows + other.rows, self.cols, entries)
    }

    pub fn take_rows(&self, range: std::ops::Range<usize>) -> EMatrix {
        let rows: Vec<EVector> = range.map(|i| self.row_vec(i)).collect();
        if rows.is_empty() {
            return EMatrix::zero(0, self.cols);
        }
        EMatrix::from_rows(rows).expect("consistent row widths")
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// row_i -= q * row_k
    fn row_sub_mul(&mut self, i: usize, k: usize, q: &EisensteinInt) {
        for c in 0..self.cols {
            let sub = q * &self[(k, c)];
            self[(i, c)] -= &sub;
        }
    }

    /// col_j -= q * col_k
    fn col_sub_mul(&mut self, j: usize, k: usize, q: &EisensteinInt) {
        for r in 0..self.rows {
            let sub = q * &self[(r, k)];
            self[(r, j)] -= &sub;
        }
    }

    /// row_i += row_k
    fn row_add(&mut self, i: usize, k: usize) {
        for c in 0..self.cols {
            let add = self[(k, c)].clone();
            self[(i, c)] += &add;
        }
    }

    fn scale_row(&mut self, i: usize, u: &EisensteinInt) {
        for c in 0..self.cols {
            self[(i, c)] *= u;
        }
    }

    /// Fraction-free Bareiss determinant.
    pub fn det(&self) -> Result<EisensteinInt> {
        if self.rows != self.cols {
            return Err(Error::NotSquare);
        }
        let n = self.rows;
        if n == 0 {
            return Ok(EisensteinInt::one());
        }
        let mut m = self.clone();
        let mut sign = false;
        let mut prev = EisensteinInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = !sign;
                    }
                    None => return Ok(EisensteinInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = num.exact_div(&prev).expect("bareiss divides exactly");
                }
                m[(i, k)] = EisensteinInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        let d = m[(n - 1, n - 1)].clone();
        Ok(if sign { -d } else { d })
    }

    /// True iff the determinant is a unit, i.e. the matrix is invertible over
    /// the ring.
    pub fn is_unimodular(&self) -> bool {
        matches!(self.det(), Ok(d) if d.norm().is_one())
    }

    pub fn to_k(&self) -> KMatrix {
        let entries = self
            .entries
            .iter()
            .map(|x| EisensteinScalar::from_int(x.clone()))
            .collect();
        KMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    /// Row-major entry slice; the canonical ordering key for group elements.
    pub fn flat(&self) -> &[EisensteinInt] {
        &self.entries
    }
}

impl Index<(usize, usize)> for EMatrix {
    type Output = EisensteinInt;
    fn index(&self, (i, j): (usize, usize)) -> &EisensteinInt {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for EMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut EisensteinInt {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Display for EMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<EisensteinInt>,
}

impl Serialize for EMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = MatrixJson::deserialize(d)?;
        EMatrix::new(m.rows, m.cols, m.entries).map_err(serde::de::Error::custom)
    }
}

/// Hermitian pairing x * gram * conj(y)^T, linear in the first argument.
pub fn hermitian_pair(
    x: &[EisensteinInt],
    y: &[EisensteinInt],
    gram: &EMatrix,
) -> Result<EisensteinInt> {
    if x.len() != gram.rows || y.len() != gram.cols {
        return Err(Error::DimensionMismatch(format!(
            "pairing of {} and {} against {}x{} gram",
            x.len(),
            y.len(),
            gram.rows,
            gram.cols
        )));
    }
    let mut acc = EisensteinInt::zero();
    for i in 0..x.len() {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..y.len() {
            let term = &x[i] * &gram[(i, j)] * y[j].conj();
            acc += &term;
        }
    }
    Ok(acc)
}

/// Hermitian pairing of fraction-field vectors against an integral gram.
pub fn hermitian_pair_k(
    x: &[EisensteinScalar],
    y: &[EisensteinScalar],
    gram: &EMatrix,
) -> Result<EisensteinScalar> {
    if x.len() != gram.rows || y.len() != gram.cols {
        return Err(Error::DimensionMismatch("k-pairing dims".into()));
    }
    let mut acc = EisensteinScalar::zero();
    for i in 0..x.len() {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..y.len() {
            let g = EisensteinScalar::from_int(gram[(i, j)].clone());
            let term = &(&x[i] * &g) * &y[j].conj();
            acc = &acc + &term;
        }
    }
    Ok(acc)
}

/// Smith normal form u * input * v = d over the Euclidean ring Z[w].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SnfResult {
    pub u: EMatrix,
    pub d: EMatrix,
    pub v: EMatrix,
}

impl SnfResult {
    /// Nonzero diagonal entries (canonical associates, divisibility chain).
    pub fn invariant_factors(&self) -> Vec<EisensteinInt> {
        let n = self.d.rows.min(self.d.cols);
        (0..n)
            .map(|i| self.d[(i, i)].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Compute the Smith normal form with transforms.
///
/// Pivot choice: smallest-norm nonzero entry of the remaining block, ties
/// broken by row-major position. Diagonal entries are normalized to their
/// canonical associates.
pub fn snf(m: &EMatrix) -> SnfResult {
    let rows = m.rows;
    let cols = m.cols;
    let mut d = m.clone();
    let mut u = EMatrix::identity(rows);
    let mut v = EMatrix::identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest-norm nonzero entry in the remaining block
        let mut pivot: Option<(usize, usize, BigInt)> = None;
        for i in t..rows {
            for j in t..cols {
                if d[(i, j)].is_zero() {
                    continue;
                }
                let n = d[(i, j)].norm();
                if pivot.as_ref().is_none_or(|(_, _, pn)| n < *pn) {
                    pivot = Some((i, j, n));
                }
            }
        }
        let Some((pi, pj, _)) = pivot else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let (q, r) = d[(i, t)].euclid_div(&d[(t, t)]).expect("nonzero pivot");
                d.row_sub_mul(i, t, &q);
                u.row_sub_mul(i, t, &q);
                if !r.is_zero() {
                    // remainder has smaller norm: promote it to pivot
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let (q, r) = d[(t, j)].euclid_div(&d[(t, t)]).expect("nonzero pivot");
                d.col_sub_mul(j, t, &q);
                v.col_sub_mul(j, t, &q);
                if !r.is_zero() {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // pivot row and column are clear; enforce pivot | remaining block
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_divisible_by(&d[(t, t)])));
            match offender {
                Some(i) => {
                    d.row_add(t, i);
                    u.row_add(t, i);
                }
                None => break,
            }
        }
        t += 1;
    }
    for k in 0..rows.min(cols) {
        if !d[(k, k)].is_zero() {
            let c = d[(k, k)].canonical_associate().expect("nonzero");
            let unit = c.exact_div(&d[(k, k)]).expect("associates divide");
            d.scale_row(k, &unit);
            u.scale_row(k, &unit);
        }
    }
    SnfResult { u, d, v }
}

/// Canonical Hermite row-echelon basis of the row span over Z[w].
///
/// Pivots are canonical associates, entries above a pivot are canonical
/// residues, zero rows are dropped: two matrices have equal row spans iff
/// their forms are identical.
pub fn hnf_row_reduce(m: &EMatrix) -> EMatrix {
    let mut a = m.clone();
    let rows = a.rows;
    let cols = a.cols;
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        loop {
            let piv = (r..rows)
                .filter(|&i| !a[(i, c)].is_zero())
                .min_by_key(|&i| a[(i, c)].norm());
            let Some(p) = piv else { break };
            a.swap_rows(r, p);
            let mut any = false;
            for i in r + 1..rows {
                if a[(i, c)].is_zero() {
                    continue;
                }
                let (q, _) = a[(i, c)].euclid_div(&a[(r, c)]).expect("nonzero pivot");
                a.row_sub_mul(i, r, &q);
                if !a[(i, c)].is_zero() {
                    any = true;
                }
            }
            if !any {
                break;
            }
        }
        if a[(r, c)].is_zero() {
            continue;
        }
        let unit = a[(r, c)]
            .canonical_associate()
            .expect("nonzero")
            .exact_div(&a[(r, c)])
            .expect("unit");
        a.scale_row(r, &unit);
        for i in 0..r {
            if a[(i, c)].is_zero() {
                continue;
            }
            let (q, _) = a[(i, c)].euclid_div(&a[(r, c)]).expect("nonzero pivot");
            a.row_sub_mul(i, r, &q);
        }
        r += 1;
    }
    a.take_rows(0..r)
}

/// True iff x lies in the Z[w]-row-span of the reduced matrix `h` (an
/// `hnf_row_reduce` output).
pub fn hnf_contains(h: &EMatrix, x: &[EisensteinInt]) -> bool {
    if x.len() != h.cols {
        return false;
    }
    let mut x = x.to_vec();
    let mut row = 0;
    for c in 0..h.cols {
        // the pivot of each row is its first nonzero entry
        let pivot_here =
            row < h.rows && !h[(row, c)].is_zero() && (0..c).all(|cc| h[(row, cc)].is_zero());
        if pivot_here {
            if !x[c].is_zero() {
                if !x[c].is_divisible_by(&h[(row, c)]) {
                    return false;
                }
                let q = x[c].exact_div(&h[(row, c)]).expect("divides");
                for cc in 0..h.cols {
                    let sub = &q * &h[(row, cc)];
                    x[cc] -= &sub;
                }
            }
            row += 1;
        } else if !x[c].is_zero() {
            return false;
        }
    }
    true
}

/// Basis of the left kernel { x : x * m = 0 } as rows, a saturated module.
pub fn left_kernel(m: &EMatrix) -> EMatrix {
    let s = snf(m);
    let r = s.rank();
    s.u.take_rows(r..m.rows)
}

/// Dense row-major matrix over the fraction field K.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<EisensteinScalar>,
}

impl KMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<EisensteinScalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch("kmatrix entries".into()));
        }
        Ok(KMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        KMatrix {
            rows,
            cols,
            entries: vec![EisensteinScalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = EisensteinScalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<KVector>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        if rows.iter().any(|v| v.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(KMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn row(&self, i: usize) -> &[EisensteinScalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> KVector {
        self.row(i).to_vec()
    }

    pub fn conj_transpose(&self) -> Self {
        let mut m = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn mul(&self, other: &KMatrix) -> Result<KMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch("kmatrix product".into()));
        }
        let mut m = KMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let term = &self[(i, k)] * &other[(k, j)];
                    m[(i, j)] = &m[(i, j)] + &term;
                }
            }
        }
        Ok(m)
    }

    /// Exact determinant, computed by clearing denominators row by row and
    /// running the fraction-free determinant over the ring.
    pub fn det(&self) -> Result<EisensteinScalar> {
        if self.rows != self.cols {
            return Err(Error::NotSquare);
        }
        let mut denom = BigInt::one();
        let mut cleared = EMatrix::zero(self.rows, self.cols);
        for i in 0..self.rows {
            let lcm: BigInt = self.row(i).iter().fold(BigInt::one(), |acc, s| {
                num_integer::Integer::lcm(&acc, s.den())
            });
            for j in 0..self.cols {
                let s = &self[(i, j)];
                let factor = (&lcm) / s.den();
                cleared[(i, j)] = s.num() * &EisensteinInt::new(factor, 0);
            }
            denom *= &lcm;
        }
        let d = cleared.det()?;
        EisensteinScalar::new(d, denom)
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<KMatrix> {
        if self.rows != self.cols {
            return Err(Error::NotSquare);
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = KMatrix::identity(n);
        for k in 0..n {
            let piv = (k..n)
                .find(|&i| !a[(i, k)].is_zero())
                .ok_or(Error::Singular)?;
            if piv != k {
                for c in 0..n {
                    a.entries.swap(k * n + c, piv * n + c);
                    inv.entries.swap(k * n + c, piv * n + c);
                }
            }
            let s = a[(k, k)].inverse()?;
            for c in 0..n {
                a[(k, c)] = &a[(k, c)] * &s;
                inv[(k, c)] = &inv[(k, c)] * &s;
            }
            for i in 0..n {
                if i == k || a[(i, k)].is_zero() {
                    continue;
                }
                let f = a[(i, k)].clone();
                for c in 0..n {
                    let t = &f * &a[(k, c)];
                    a[(i, c)] = &a[(i, c)] - &t;
                    let t = &f * &inv[(k, c)];
                    inv[(i, c)] = &inv[(i, c)] - &t;
                }
            }
        }
        Ok(inv)
    }

    /// Convert to a ring matrix if every entry is integral.
    pub fn to_integral(&self) -> Option<EMatrix> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for s in &self.entries {
            entries.push(s.to_int()?);
        }
        Some(EMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|s| s.is_integral())
    }
}

impl Index<(usize, usize)> for KMatrix {
    type Output = EisensteinScalar;
    fn index(&self, (i, j): (usize, usize)) -> &EisensteinScalar {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for KMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut EisensteinScalar {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Display for KMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for KMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("KMatrix", 3)?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("cols", &self.cols)?;
        st.serialize_field("entries", &self.entries)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ei(a: i64, b: i64) -> EisensteinInt {
        EisensteinInt::new(a, b)
    }

    fn theta() -> EisensteinInt {
        EisensteinInt::theta()
    }

    /// Gram of the ambient form on Lambda: diag(-1, 1, 1, 1, 1).
    fn lambda_gram() -> EMatrix {
        let mut g = EMatrix::identity(5);
        g[(0, 0)] = ei(-1, 0);
        g
    }

    /// Gram of D3 in the basis (1,-1,0), (0,1,-1), (0,0,theta).
    fn d3_gram() -> EMatrix {
        EMatrix::from_rows(vec![
            vec![ei(2, 0), ei(-1, 0), ei(0, 0)],
            vec![ei(-1, 0), ei(2, 0), theta()],
            vec![ei(0, 0), -theta(), ei(3, 0)],
        ])
        .unwrap()
    }

    fn h_gram() -> EMatrix {
        EMatrix::from_rows(vec![vec![ei(0, 0), theta()], vec![-theta(), ei(0, 0)]]).unwrap()
    }

    #[test]
    fn hermitian_pair_examples() {
        let g = lambda_gram();
        let w1 = vec![ei(-1, 0), ei(0, 1), ei(-1, 0), ei(0, 0), ei(-1, 0)];
        let v1 = vec![-theta(), ei(-1, -1), ei(-1, -1), ei(-1, -1), ei(0, 0)];
        // direct expansion: -(-1)(-1) + (1 + 1 + 0 + 1) = 2
        assert_eq!(hermitian_pair(&w1, &w1, &g).unwrap(), ei(2, 0));
        // orthogonality of the explicit embedding and its complement
        assert_eq!(hermitian_pair(&w1, &v1, &g).unwrap(), ei(0, 0));
        let zero = vec![ei(0, 0); 5];
        assert_eq!(hermitian_pair(&zero, &zero, &g).unwrap(), ei(0, 0));
        assert!(hermitian_pair(&w1, &zero[..3].to_vec(), &g).is_err());
    }

    #[test]
    fn det_examples() {
        // det [[0, theta], [-theta, 0]] = theta^2 = -3
        assert_eq!(h_gram().det().unwrap(), ei(-3, 0));
        // cofactor expansion gives 3 for the D3 gram
        assert_eq!(d3_gram().det().unwrap(), ei(3, 0));
        assert_eq!(EMatrix::identity(4).det().unwrap(), ei(1, 0));
        assert!(EMatrix::zero(2, 3).det().is_err());
    }

    #[test]
    fn snf_examples() {
        let id = EMatrix::identity(3);
        assert_eq!(snf(&id).d, id);

        let m = EMatrix::from_rows(vec![vec![theta()]]).unwrap();
        let s = snf(&m);
        assert_eq!(s.d[(0, 0)], ei(2, 1)); // canonical associate of theta

        // D(D3) = (E/theta)^2 forces invariant factors (1, theta, theta)
        let s = snf(&d3_gram());
        let f = s.invariant_factors();
        assert_eq!(f.len(), 3);
        assert_eq!(f[0], ei(1, 0));
        assert_eq!(f[1], ei(2, 1));
        assert_eq!(f[2], ei(2, 1));
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
        assert_eq!(s.u.mul(&d3_gram()).unwrap().mul(&s.v).unwrap(), s.d);
    }

    #[test]
    fn hnf_examples() {
        let id = EMatrix::identity(3);
        assert_eq!(hnf_row_reduce(&id), id);

        // (theta, 0, 0) lies in the span of the D3 basis rows
        let basis = EMatrix::from_rows(vec![
            vec![ei(1, 0), ei(-1, 0), ei(0, 0)],
            vec![ei(0, 0), ei(1, 0), ei(-1, 0)],
            vec![ei(0, 0), ei(0, 0), theta()],
        ])
        .unwrap();
        let extra = EMatrix::from_rows(vec![vec![theta(), ei(0, 0), ei(0, 0)]]).unwrap();
        let stacked = basis.vstack(&extra).unwrap();
        assert_eq!(hnf_row_reduce(&stacked), hnf_row_reduce(&basis));
        assert!(hnf_contains(
            &hnf_row_reduce(&basis),
            &[theta(), ei(0, 0), ei(0, 0)]
        ));
        // the mod-theta sum condition fails for e_1, so it is outside
        assert!(!hnf_contains(
            &hnf_row_reduce(&basis),
            &[ei(1, 0), ei(0, 0), ei(0, 0)]
        ));

        let z = EMatrix::zero(3, 3);
        assert_eq!(hnf_row_reduce(&z).rows, 0);
    }

    #[test]
    fn k_det_clears_denominators() {
        // det over K by clearing denominators: det(H^{-1}) = 1/det(H) = -1/3
        let hinv = h_gram().to_k().inverse().unwrap();
        let d = hinv.det().unwrap();
        assert_eq!(d, EisensteinScalar::new(ei(-1, 0), 3).unwrap());
        assert_eq!(
            h_gram().to_k().det().unwrap(),
            EisensteinScalar::from_int(ei(-3, 0))
        );
    }

    #[test]
    fn k_inverse_examples() {
        let id = KMatrix::identity(3);
        assert_eq!(id.inverse().unwrap(), id);

        // [[theta]]^-1 = [[-theta/3]] since theta^2 = -3
        let m = EMatrix::from_rows(vec![vec![theta()]]).unwrap().to_k();
        let inv = m.inverse().unwrap();
        assert_eq!(inv[(0, 0)], EisensteinScalar::new(-theta(), 3).unwrap());

        let h = h_gram().to_k();
        let hinv = h.inverse().unwrap();
        assert_eq!(h.mul(&hinv).unwrap(), KMatrix::identity(2));
        // explicit dual gram: (1/3) [[0, theta], [-theta, 0]]
        assert_eq!(hinv[(0, 1)], EisensteinScalar::new(theta(), 3).unwrap());
        assert_eq!(hinv[(1, 0)], EisensteinScalar::new(-theta(), 3).unwrap());

        assert_eq!(EMatrix::zero(2, 2).to_k().inverse(), Err(Error::Singular));
    }

    /// Independent cofactor-expansion determinant used as an oracle.
    fn det_cofactor(m: &EMatrix) -> EisensteinInt {
        let n = m.rows;
        if n == 0 {
            return ei(1, 0);
        }
        if n == 1 {
            return m[(0, 0)].clone();
        }
        let mut acc = ei(0, 0);
        for j in 0..n {
            if m[(0, j)].is_zero() {
                continue;
            }
            let minor_rows: Vec<EVector> = (1..n)
                .map(|i| {
                    (0..n)
                        .filter(|&c| c != j)
                        .map(|c| m[(i, c)].clone())
                        .collect::<Vec<_>>()
                })
                .collect();
            let minor = EMatrix::from_rows(minor_rows).unwrap();
            let term = &m[(0, j)] * &det_cofactor(&minor);
            if j % 2 == 0 {
                acc += &term;
            } else {
                acc -= &term;
            }
        }
        acc
    }

    fn arb_matrix(n: usize) -> impl Strategy<Value = EMatrix> {
        proptest::collection::vec((-3i64..=3, -3i64..=3), n * n).prop_map(move |v| {
            EMatrix::new(n, n, v.into_iter().map(|(a, b)| ei(a, b)).collect()).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn snf_contract(m in arb_matrix(4)) {
            let s = snf(&m);
            prop_assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d.clone());
            prop_assert!(s.u.is_unimodular());
            prop_assert!(s.v.is_unimodular());
            let f = s.invariant_factors();
            for w in f.windows(2) {
                prop_assert!(w[1].is_divisible_by(&w[0]));
            }
            for x in &f {
                prop_assert_eq!(x.canonical_associate().unwrap(), x.clone());
            }
            // norm of the diagonal product equals norm of det for square input
            let nd: BigInt = f.iter().map(|x| x.norm()).product();
            if f.len() == 4 {
                prop_assert_eq!(nd, m.det().unwrap().norm());
            } else {
                prop_assert_eq!(m.det().unwrap(), ei(0, 0));
            }
        }

        #[test]
        fn det_matches_cofactor_oracle(m in arb_matrix(4)) {
            prop_assert_eq!(m.det().unwrap(), det_cofactor(&m));
        }

        #[test]
        fn det_multiplicative(m in arb_matrix(3), n in arb_matrix(3)) {
            prop_assert_eq!(
                m.mul(&n).unwrap().det().unwrap(),
                &m.det().unwrap() * &n.det().unwrap()
            );
        }

        #[test]
        fn pairing_conjugate_symmetric(m in arb_matrix(3), x in proptest::collection::vec((-3i64..=3, -3i64..=3), 3), y in proptest::collection::vec((-3i64..=3, -3i64..=3), 3)) {
            // symmetrize m into a hermitian gram
            let g0 = m;
            let g = {
                let mut g = g0.clone();
                let ct = g0.conj_transpose();
                for i in 0..3 {
                    for j in 0..3 {
                        g[(i, j)] = &g0[(i, j)] + &ct[(i, j)];
                    }
                }
                g
            };
            prop_assert!(g.is_conj_symmetric());
            let xv: Vec<_> = x.into_iter().map(|(a, b)| ei(a, b)).collect();
            let yv: Vec<_> = y.into_iter().map(|(a, b)| ei(a, b)).collect();
            let p = hermitian_pair(&xv, &yv, &g).unwrap();
            let q = hermitian_pair(&yv, &xv, &g).unwrap();
            prop_assert_eq!(p.conj(), q);
            // linearity in the first argument
            let alpha = ei(1, 1);
            let ax: Vec<_> = xv.iter().map(|e| &alpha * e).collect();
            prop_assert_eq!(hermitian_pair(&ax, &yv, &g).unwrap(), &alpha * &p);
        }

        #[test]
        fn k_inverse_roundtrip(m in arb_matrix(3)) {
            prop_assume!(!m.det().unwrap().is_zero());
            let k = m.to_k();
            let inv = k.inverse().unwrap();
            prop_assert_eq!(k.mul(&inv).unwrap(), KMatrix::identity(3));
        }

        #[test]
        fn hnf_canonical_under_row_permutation(m in arb_matrix(4), perm in proptest::sample::select(vec![[1usize,0,2,3],[3,2,1,0],[2,0,3,1],[0,3,1,2]])) {
            let permuted = EMatrix::from_rows(perm.iter().map(|&i| m.row_vec(i)).collect()).unwrap();
            prop_assert_eq!(hnf_row_reduce(&m), hnf_row_reduce(&permuted));
        }

        #[test]
        fn hnf_canonical_under_unimodular(m in arb_matrix(3)) {
            // multiply by a fixed unimodular matrix: same row span, same HNF
            let t = EMatrix::from_rows(vec![
                vec![ei(1, 0), ei(0, 1), ei(0, 0)],
                vec![ei(0, 0), ei(1, 0), theta()],
                vec![ei(0, 0), ei(0, 0), ei(-1, -1)],
            ]).unwrap();
            prop_assert!(t.is_unimodular());
            let tm = t.mul(&m).unwrap();
            prop_assert_eq!(hnf_row_reduce(&m), hnf_row_reduce(&tm));
        }

        #[test]
        fn left_kernel_annihilates(m in arb_matrix(3)) {
            let k = left_kernel(&m);
            if k.rows > 0 {
                let prod = k.mul(&m).unwrap();
                prop_assert_eq!(prod, EMatrix::zero(k.rows, 3));
            }
        }
    }

    #[test]
    fn matrix_json_roundtrip() {
        let m = d3_gram();
        let s = serde_json::to_string(&m).unwrap();
        let back: EMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(m, back);
        let parsed: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(parsed["rows"], 3);
        assert_eq!(parsed["entries"][0], serde_json::json!([2, 0]));
    }
}
