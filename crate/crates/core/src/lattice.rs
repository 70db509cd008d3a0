//! Hermitian lattices over Z[w]: signatures, discriminant groups, short
//! vectors, orthogonal complements, saturation, overlattice gluing, and
//! isometry testing for definite lattices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::eisenstein::{EisensteinInt, EisensteinScalar};
use crate::error::{Error, Result};
use crate::finite::{coset_rep, FiniteHermitianSpace, SpaceElement};
use crate::linalg::{
    hermitian_pair_k, hnf_row_reduce, left_kernel, snf, EMatrix, EVector, KMatrix, KVector,
};

/// An embedding of a lattice into an ambient one: the rows of `basis` are the
/// lattice's basis vectors in ambient coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ambient {
    pub gram: EMatrix,
    pub basis: EMatrix,
}

/// A nondegenerate hermitian lattice, presented by the Gram matrix of a basis.
///
/// Vectors are coordinate rows with respect to that basis; matrices act from
/// the right (v -> v * M).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermitianLattice {
    rank: usize,
    gram: EMatrix,
    ambient: Option<Ambient>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub positives: usize,
    pub negatives: usize,
}

impl HermitianLattice {
    pub fn from_gram(gram: EMatrix) -> Result<Self> {
        if !gram.is_conj_symmetric() {
            return Err(Error::NotHermitian);
        }
        if gram.det()?.is_zero() {
            return Err(Error::DegenerateGram);
        }
        Ok(HermitianLattice {
            rank: gram.rows,
            gram,
            ambient: None,
        })
    }

    /// Build the sublattice of `ambient_gram`-space spanned by the given basis
    /// rows; the Gram matrix is computed from the embedding.
    pub fn from_ambient_basis(ambient_gram: EMatrix, basis: EMatrix) -> Result<Self> {
        if !ambient_gram.is_conj_symmetric() {
            return Err(Error::NotHermitian);
        }
        if basis.cols != ambient_gram.rows {
            return Err(Error::DimensionMismatch(
                "basis width vs ambient rank".into(),
            ));
        }
        let gram = basis.mul(&ambient_gram)?.mul(&basis.conj_transpose())?;
        if basis.rows > 0 && gram.det()?.is_zero() {
            return Err(Error::DegenerateGram);
        }
        Ok(HermitianLattice {
            rank: basis.rows,
            gram,
            ambient: Some(Ambient {
                gram: ambient_gram,
                basis,
            }),
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &EMatrix {
        &self.gram
    }

    pub fn ambient(&self) -> Option<&Ambient> {
        self.ambient.as_ref()
    }

    /// The discriminant: determinant of the Gram matrix.
    pub fn disc(&self) -> EisensteinInt {
        self.gram.det().expect("square gram")
    }

    /// Map basis coordinates to ambient coordinates.
    pub fn to_ambient(&self, v: &[EisensteinInt]) -> Result<EVector> {
        let amb = self.ambient.as_ref().ok_or(Error::NoAmbient)?;
        let row = EMatrix::from_rows(vec![v.to_vec()])?;
        Ok(row.mul(&amb.basis)?.row_vec(0))
    }

    /// Canonical Hermite form of the basis rows in ambient coordinates.
    pub fn basis_hnf(&self) -> Result<EMatrix> {
        let amb = self.ambient.as_ref().ok_or(Error::NoAmbient)?;
        Ok(hnf_row_reduce(&amb.basis))
    }

    /// The hermitian pairing of two coordinate rows.
    pub fn pair(&self, x: &[EisensteinInt], y: &[EisensteinInt]) -> Result<EisensteinInt> {
        crate::linalg::hermitian_pair(x, y, &self.gram)
    }

    /// Exact signature, by hermitian congruence diagonalization over the
    /// fraction field.
    pub fn signature(&self) -> Result<Signature> {
        let (positives, negatives) = hermitian_signature(&self.gram)?;
        Ok(Signature {
            positives,
            negatives,
        })
    }

    pub fn is_positive_definite(&self) -> Result<bool> {
        Ok(self.signature()?.positives == self.rank)
    }

    /// The discriminant group D(R) = dual/R with its torsion hermitian form.
    pub fn discriminant_group(&self) -> Result<DiscriminantGroup> {
        let s = snf(&self.gram);
        let n = self.rank;
        let gv = self.gram.mul(&s.v)?;
        // rows of (G V)^{-1} generate the dual modulo the lattice, the i-th
        // having annihilator (d_i)
        let w = if n > 0 {
            gv.to_k().inverse()?
        } else {
            KMatrix::zero(0, 0)
        };
        let mut positions = Vec::new();
        let mut factors = Vec::new();
        for i in 0..n {
            let d = s.d[(i, i)].clone();
            if !d.norm().is_one() {
                positions.push(i);
                factors.push(d);
            }
        }
        let k = positions.len();
        let mut gens = Vec::with_capacity(k);
        for &i in &positions {
            gens.push(w.row_vec(i));
        }
        let mut form = KMatrix::zero(k, k);
        for i in 0..k {
            for j in 0..k {
                form[(i, j)] = coset_rep(&hermitian_pair_k(&gens[i], &gens[j], &self.gram)?);
            }
        }
        let space = FiniteHermitianSpace::new(factors, form)?;
        Ok(DiscriminantGroup {
            space,
            generators: KMatrix::from_rows(if k > 0 { gens } else { vec![] })
                .unwrap_or_else(|_| KMatrix::zero(0, n)),
            gram: self.gram.clone(),
            snf_v: s.v,
            positions,
        })
    }

    /// True iff the lattice is unimodular (trivial discriminant group).
    pub fn is_unimodular(&self) -> Result<bool> {
        Ok(self.disc().norm().is_one())
    }

    /// Complete list of vectors of the given norm, canonically ordered.
    pub fn short_vectors(&self, norm: i64) -> Result<ShortVectorSet> {
        if !self.is_positive_definite()? {
            return Err(Error::EnumerationRequiresDefinite);
        }
        let mut vectors = enumerate_by_trace_form(&self.gram, norm);
        vectors.sort();
        Ok(ShortVectorSet {
            norm_target: norm,
            vectors,
        })
    }

    /// Minimum of (v, v) over nonzero lattice vectors.
    pub fn min_nonzero_norm(&self) -> Result<i64> {
        if !self.is_positive_definite()? {
            return Err(Error::IndefiniteLattice);
        }
        // a basis vector attains its diagonal Gram entry, bounding the search
        let bound = (0..self.rank)
            .map(|i| self.gram[(i, i)].a.clone())
            .min()
            .and_then(|b| b.to_i64())
            .ok_or_else(|| Error::InvalidInput("empty lattice has no nonzero vectors".into()))?;
        for t in 1..=bound.max(1) {
            if !self.short_vectors(t)?.vectors.is_empty() {
                return Ok(t);
            }
        }
        unreachable!("a diagonal Gram entry is an attained norm")
    }

    /// Saturation: the intersection of the K-span with the ambient lattice.
    /// The input is primitive iff this returns the same row span.
    pub fn saturation(&self) -> Result<HermitianLattice> {
        let amb = self.ambient.as_ref().ok_or(Error::NoAmbient)?;
        let s = snf(&amb.basis);
        let r = s.rank();
        let vinv =
            s.v.to_k()
                .inverse()?
                .to_integral()
                .expect("unimodular inverse is integral");
        let sat_basis = hnf_row_reduce(&vinv.take_rows(0..r));
        HermitianLattice::from_ambient_basis(amb.gram.clone(), sat_basis)
    }

    /// True iff the sublattice equals its saturation.
    pub fn is_primitive(&self) -> Result<bool> {
        let sat = self.saturation()?;
        Ok(self.basis_hnf()? == sat.basis_hnf()?)
    }
}

/// Serialization schema: {"rank": n, "gram": matrix, "ambient": optional}.
#[derive(Serialize, Deserialize)]
struct LatticeJson {
    rank: usize,
    gram: EMatrix,
    #[serde(skip_serializing_if = "Option::is_none")]
    ambient: Option<Ambient>,
}

impl Serialize for HermitianLattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LatticeJson {
            rank: self.rank,
            gram: self.gram.clone(),
            ambient: self.ambient.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermitianLattice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let j = LatticeJson::deserialize(d)?;
        let lat = match j.ambient {
            Some(a) => HermitianLattice::from_ambient_basis(a.gram, a.basis),
            None => HermitianLattice::from_gram(j.gram.clone()),
        }
        .map_err(D::Error::custom)?;
        if lat.rank != j.rank {
            return Err(D::Error::custom("rank field does not match gram"));
        }
        if lat.ambient.is_some() && lat.gram != j.gram {
            return Err(D::Error::custom("gram does not match ambient embedding"));
        }
        Ok(lat)
    }
}

/// The discriminant group of a lattice: invariant factors, torsion form, and
/// explicit dual-vector generators in basis coordinates.
#[derive(Debug, Clone)]
pub struct DiscriminantGroup {
    pub space: FiniteHermitianSpace,
    generators: KMatrix,
    gram: EMatrix,
    snf_v: EMatrix,
    positions: Vec<usize>,
}

impl DiscriminantGroup {
    pub fn order(&self) -> BigInt {
        self.space.order()
    }

    pub fn invariant_factors(&self) -> &[EisensteinInt] {
        self.space.factors()
    }

    /// Dual-vector generators as rows (basis coordinates over K).
    pub fn generators(&self) -> &KMatrix {
        &self.generators
    }

    /// Coordinates of a dual vector in the generator basis; error if the
    /// vector does not pair integrally with the lattice.
    pub fn coords_of(&self, v: &[EisensteinScalar]) -> Result<SpaceElement> {
        let row = KMatrix::from_rows(vec![v.to_vec()])?;
        let x = row.mul(&self.gram.to_k())?;
        if !x.is_integral() {
            return Err(Error::InvalidInput(
                "vector is not in the dual lattice".into(),
            ));
        }
        let xv = x.mul(&self.snf_v.to_k())?.to_integral().expect("integral");
        let raw: Vec<EisensteinInt> = self.positions.iter().map(|&i| xv[(0, i)].clone()).collect();
        Ok(self.space.canon_element(&raw))
    }

    /// The dual vector representing the given generator coordinates.
    pub fn lift(&self, coords: &[EisensteinInt]) -> KVector {
        let n = self.gram.rows;
        let mut out = vec![EisensteinScalar::zero(); n];
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = EisensteinScalar::from_int(c.clone());
            for (j, o) in out.iter_mut().enumerate() {
                let t = &cs * &self.generators[(i, j)];
                *o = &*o + &t;
            }
        }
        out
    }
}

/// Complete vectors of one norm, closed under negation, in the lexicographic
/// order of flattened coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortVectorSet {
    pub norm_target: i64,
    pub vectors: Vec<EVector>,
}

impl ShortVectorSet {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Exact signature of a hermitian Gram matrix by congruence diagonalization.
fn hermitian_signature(g: &EMatrix) -> Result<(usize, usize)> {
    let n = g.rows;
    let mut m = g.to_k();
    let mut pos = 0;
    let mut neg = 0;
    for k in 0..n {
        if m[(k, k)].is_zero() {
            // prefer a later nonzero diagonal entry
            if let Some(i) = (k + 1..n).find(|&i| !m[(i, i)].is_zero()) {
                swap_congruence(&mut m, k, i);
            } else {
                // all remaining diagonal zero: manufacture a real pivot from an
                // off-diagonal entry
                let mut found = None;
                'search: for i in k..n {
                    for j in i + 1..n {
                        if !m[(i, j)].is_zero() {
                            found = Some((i, j));
                            break 'search;
                        }
                    }
                }
                let Some((i, j)) = found else {
                    return Err(Error::DegenerateGram);
                };
                let one = EisensteinScalar::one();
                let omega = EisensteinScalar::from_int(EisensteinInt::omega());
                let omega2 = EisensteinScalar::from_int(EisensteinInt::omega().conj());
                let c = [one, omega, omega2]
                    .into_iter()
                    .find(|c| {
                        let t = &(&c.conj() * &m[(i, j)]) + &(c * &m[(j, i)]);
                        !t.is_zero()
                    })
                    .expect("some rotation of a nonzero entry has nonzero real part");
                add_row_col_congruence(&mut m, i, j, &c);
                if i != k {
                    swap_congruence(&mut m, k, i);
                }
            }
        }
        let d = m[(k, k)].clone();
        assert!(d.is_real(), "diagonal of a hermitian matrix is real");
        if d.real_sign() > 0 {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if m[(i, k)].is_zero() {
                continue;
            }
            let f = &m[(i, k)] * &d.inverse()?;
            sub_row_col_congruence(&mut m, i, k, &f);
        }
    }
    Ok((pos, neg))
}

fn swap_congruence(m: &mut KMatrix, i: usize, j: usize) {
    let n = m.rows;
    for c in 0..n {
        let t = m[(i, c)].clone();
        m[(i, c)] = m[(j, c)].clone();
        m[(j, c)] = t;
    }
    for r in 0..n {
        let t = m[(r, i)].clone();
        m[(r, i)] = m[(r, j)].clone();
        m[(r, j)] = t;
    }
}

/// row_i += c * row_j followed by col_i += conj(c) * col_j.
fn add_row_col_congruence(m: &mut KMatrix, i: usize, j: usize, c: &EisensteinScalar) {
    let n = m.rows;
    for col in 0..n {
        let t = c * &m[(j, col)];
        m[(i, col)] = &m[(i, col)] + &t;
    }
    let cc = c.conj();
    for row in 0..n {
        let t = &cc * &m[(row, j)];
        m[(row, i)] = &m[(row, i)] + &t;
    }
}

/// row_i -= f * row_k followed by col_i -= conj(f) * col_k.
fn sub_row_col_congruence(m: &mut KMatrix, i: usize, k: usize, f: &EisensteinScalar) {
    let n = m.rows;
    for col in 0..n {
        let t = f * &m[(k, col)];
        m[(i, col)] = &m[(i, col)] - &t;
    }
    let fc = f.conj();
    for row in 0..n {
        let t = &fc * &m[(row, k)];
        m[(row, i)] = &m[(row, i)] - &t;
    }
}

/// Enumerate all lattice vectors of the exact given norm through the real
/// rank-2n trace form, with exact rational bounds and integer backtracking.
fn enumerate_by_trace_form(gram: &EMatrix, norm: i64) -> Vec<EVector> {
    let n = gram.rows;
    if n == 0 || norm < 0 {
        return if norm == 0 && n == 0 {
            vec![vec![]]
        } else {
            vec![]
        };
    }
    let m = 2 * n;
    // trace form: basis e_1, w e_1, ..., e_n, w e_n
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut t = vec![vec![BigRational::zero(); m]; m];
    for i in 0..n {
        for j in 0..n {
            let a = BigRational::from(gram[(i, j)].a.clone());
            let b = BigRational::from(gram[(i, j)].b.clone());
            // Re(G), Re(w^2 G), Re(w G), Re(G)
            t[2 * i][2 * j] = &a - &b * &half;
            t[2 * i][2 * j + 1] = &b - &a * &half;
            t[2 * i + 1][2 * j] = -(&a + &b) * &half;
            t[2 * i + 1][2 * j + 1] = &a - &b * &half;
        }
    }
    // rational LDL^T
    let mut d = vec![BigRational::zero(); m];
    let mut r = vec![vec![BigRational::zero(); m]; m];
    for k in 0..m {
        d[k] = t[k][k].clone();
        assert!(d[k].is_positive(), "trace form of a definite lattice");
        for j in k + 1..m {
            r[k][j] = &t[k][j] / &d[k];
        }
        for i in k + 1..m {
            for j in i..m {
                let upd = &(&r[k][i] * &r[k][j]) * &d[k];
                t[i][j] = &t[i][j] - &upd;
                t[j][i] = t[i][j].clone();
            }
        }
    }
    let target = BigRational::from(BigInt::from(norm));
    let mut x = vec![BigInt::zero(); m];
    let mut out = Vec::new();
    search_level(m, &d, &r, &target, &mut x, &mut out, n);
    out
}

fn search_level(
    level: usize,
    d: &[BigRational],
    r: &[Vec<BigRational>],
    rem: &BigRational,
    x: &mut Vec<BigInt>,
    out: &mut Vec<EVector>,
    n: usize,
) {
    if rem.is_negative() {
        return;
    }
    if level == 0 {
        if rem.is_zero() {
            let v: EVector = (0..n)
                .map(|i| EisensteinInt {
                    a: x[2 * i].clone(),
                    b: x[2 * i + 1].clone(),
                })
                .collect();
            out.push(v);
        }
        return;
    }
    let k = level - 1;
    let center: BigRational = (k + 1..x.len())
        .map(|j| &r[k][j] * &BigRational::from(x[j].clone()))
        .sum();
    // |x_k + center| <= sqrt(rem / d_k); scan a safe integer window and filter
    let limit = rem / &d[k];
    let bound = limit.ceil().to_integer().sqrt() + BigInt::one();
    let center_floor = center.floor().to_integer();
    let lo = &center_floor - &bound - BigInt::one();
    let hi = &center_floor + &bound + BigInt::one();
    let mut xi = -hi;
    let xend = -lo;
    while xi <= xend {
        let shifted = BigRational::from(xi.clone()) + &center;
        let contrib = &(&shifted * &shifted) * &d[k];
        if contrib <= *rem {
            x[k] = xi.clone();
            let next = rem - &contrib;
            search_level(k, d, r, &next, x, out, n);
        }
        xi += BigInt::one();
    }
    x[k] = BigInt::zero();
}

/// The saturated orthogonal complement of the row span of `sub_rows` inside
/// `ambient`, carrying its ambient embedding.
pub fn orthogonal_complement(
    sub_rows: &EMatrix,
    ambient: &HermitianLattice,
) -> Result<HermitianLattice> {
    if sub_rows.cols != ambient.rank() {
        return Err(Error::DimensionMismatch("sub rows vs ambient rank".into()));
    }
    let pairing = ambient.gram().mul(&sub_rows.conj_transpose())?;
    let kernel = left_kernel(&pairing);
    let basis = hnf_row_reduce(&kernel);
    HermitianLattice::from_ambient_basis(ambient.gram().clone(), basis)
}

/// Result of gluing a lattice along an isotropic subgroup of its discriminant
/// group: the overlattice, its basis in the old coordinates, and the index.
#[derive(Debug, Clone)]
pub struct Overlattice {
    pub lattice: HermitianLattice,
    pub basis_in_old: KMatrix,
    pub index: BigInt,
}

/// Extend `l` by dual vectors whose classes span an isotropic subgroup of
/// D(l). Errors with `SubspaceNotIsotropic` if the resulting form fails to be
/// integral.
pub fn overlattice_from_isotropic(l: &HermitianLattice, lifts: &[KVector]) -> Result<Overlattice> {
    let n = l.rank();
    let gk = l.gram().to_k();
    for g in lifts {
        if g.len() != n {
            return Err(Error::DimensionMismatch("lift length".into()));
        }
        let row = KMatrix::from_rows(vec![g.clone()])?;
        if !row.mul(&gk)?.is_integral() {
            return Err(Error::InvalidInput(
                "lift is not in the dual lattice".into(),
            ));
        }
    }
    let mut den = BigInt::one();
    for g in lifts {
        for s in g {
            den = den.lcm(s.den());
        }
    }
    let mut rows: Vec<EVector> = Vec::with_capacity(n + lifts.len());
    let scale = EisensteinInt {
        a: den.clone(),
        b: BigInt::zero(),
    };
    for i in 0..n {
        let mut row = vec![EisensteinInt::zero(); n];
        row[i] = scale.clone();
        rows.push(row);
    }
    for g in lifts {
        let row: Vec<EisensteinInt> = g
            .iter()
            .map(|s| {
                let factor = (&den) / s.den();
                s.num()
                    * &EisensteinInt {
                        a: factor,
                        b: BigInt::zero(),
                    }
            })
            .collect();
        rows.push(row);
    }
    let h = hnf_row_reduce(&EMatrix::from_rows(rows)?);
    if h.rows != n {
        return Err(Error::DegenerateGram);
    }
    let mut basis = h.to_k();
    let dinv = EisensteinScalar::new(EisensteinInt::one(), den.clone())?;
    for i in 0..n {
        for j in 0..n {
            basis[(i, j)] = &basis[(i, j)] * &dinv;
        }
    }
    let gram_k = basis.mul(&gk)?.mul(&basis.conj_transpose())?;
    let gram = gram_k.to_integral().ok_or(Error::SubspaceNotIsotropic)?;
    let det_h = h.det()?;
    let (index, rem) = den.pow(2 * n as u32).div_rem(&det_h.norm());
    assert!(rem.is_zero(), "index of an overlattice divides exactly");
    Ok(Overlattice {
        lattice: HermitianLattice::from_gram(gram)?,
        basis_in_old: basis,
        index,
    })
}

/// Exact isometry witness between positive definite lattices: a matrix U with
/// U * Gram(l2) * U^* = Gram(l1) and unit determinant, or None.
pub fn is_isometric_definite(
    l1: &HermitianLattice,
    l2: &HermitianLattice,
) -> Result<Option<EMatrix>> {
    if !l1.is_positive_definite()? || !l2.is_positive_definite()? {
        return Err(Error::IndefiniteLattice);
    }
    if l1.rank() != l2.rank() {
        return Ok(None);
    }
    if l1.disc() != l2.disc() {
        return Ok(None);
    }
    if l1.gram() == l2.gram() {
        return Ok(Some(EMatrix::identity(l1.rank())));
    }
    let mut witnesses = Vec::new();
    let candidates = norm_candidates(l1.gram(), l2)?;
    basis_image_search(
        l1.gram(),
        l2.gram(),
        &candidates,
        &mut Vec::new(),
        &mut witnesses,
        false,
    )?;
    Ok(witnesses.into_iter().next())
}

/// Per-level candidate lists for the basis-image search: all vectors of `l2`
/// whose norm matches the corresponding diagonal entry of `g1`.
pub(crate) fn norm_candidates(g1: &EMatrix, l2: &HermitianLattice) -> Result<Vec<Vec<EVector>>> {
    let mut out = Vec::with_capacity(g1.rows);
    for i in 0..g1.rows {
        let norm = g1[(i, i)]
            .a
            .to_i64()
            .ok_or(Error::InvalidInput("norm exceeds i64".into()))?;
        out.push(l2.short_vectors(norm)?.vectors);
    }
    Ok(out)
}

/// Backtracking search for matrices U (rows = images of the g1-basis in
/// g2-coordinates) with U G2 U^* = G1 and unit determinant.
pub(crate) fn basis_image_search(
    g1: &EMatrix,
    g2: &EMatrix,
    candidates: &[Vec<EVector>],
    partial: &mut Vec<EVector>,
    out: &mut Vec<EMatrix>,
    all: bool,
) -> Result<()> {
    let n = g1.rows;
    let i = partial.len();
    if i == n {
        let u = EMatrix::from_rows(partial.clone())?;
        if u.det()?.norm().is_one() {
            out.push(u);
        }
        return Ok(());
    }
    for cand in &candidates[i] {
        if !all && !out.is_empty() {
            return Ok(());
        }
        let ok = (0..i).try_fold(true, |acc, j| -> Result<bool> {
            Ok(acc && crate::linalg::hermitian_pair(cand, &partial[j], g2)? == g1[(i, j)])
        })?;
        if !ok {
            continue;
        }
        partial.push(cand.clone());
        basis_image_search(g1, g2, candidates, partial, out, all)?;
        partial.pop();
    }
    Ok(())
}
