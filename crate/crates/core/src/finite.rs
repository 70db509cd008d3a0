//! Finite hermitian spaces: torsion Z[w]-modules carrying a K/Z[w]-valued
//! hermitian form. Houses the space V = D(H), twists, direct sums, brute-force
//! automorphism groups, and isotropic-subspace enumeration.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::eisenstein::{EisensteinInt, EisensteinScalar, F3};
use crate::error::{Error, Result};
use crate::linalg::{EMatrix, KMatrix};

/// Canonical representative of a K/Z[w] coset: numerator coordinates reduced
/// into [0, den).
pub fn coset_rep(s: &EisensteinScalar) -> EisensteinScalar {
    let den = s.den().clone();
    if den.is_one() {
        return EisensteinScalar::zero();
    }
    let a = s.num().a.mod_floor(&den);
    let b = s.num().b.mod_floor(&den);
    EisensteinScalar::new(EisensteinInt { a, b }, den).expect("positive denominator")
}

/// A finitely generated torsion module (E/(d_1)) x ... x (E/(d_k)) with a
/// K/E-valued hermitian form given on the generators.
///
/// The d_i are canonical associates forming a divisibility chain; elements are
/// coordinate rows with canonical Euclidean residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteHermitianSpace {
    factors: Vec<EisensteinInt>,
    form: KMatrix,
}

pub type SpaceElement = Vec<EisensteinInt>;

impl FiniteHermitianSpace {
    pub fn new(factors: Vec<EisensteinInt>, form: KMatrix) -> Result<Self> {
        let k = factors.len();
        if form.rows != k || form.cols != k {
            return Err(Error::DimensionMismatch("form must be k x k".into()));
        }
        for f in &factors {
            if f.is_zero() || f.is_unit() {
                return Err(Error::InvalidInput(
                    "invariant factors must be nonzero nonunits".into(),
                ));
            }
            if *f != f.canonical_associate()? {
                return Err(Error::InvalidInput(
                    "invariant factors must be canonical associates".into(),
                ));
            }
        }
        for w in factors.windows(2) {
            if !w[1].is_divisible_by(&w[0]) {
                return Err(Error::IncompatibleFactors(format!(
                    "{} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        let mut canon = form;
        for i in 0..k {
            for j in 0..k {
                canon[(i, j)] = coset_rep(&canon[(i, j)]);
            }
        }
        // conjugate symmetry as cosets, and each generator killed by its factor
        for i in 0..k {
            for j in 0..k {
                if canon[(i, j)] != coset_rep(&canon[(j, i)].conj()) {
                    return Err(Error::NotHermitian);
                }
                let killed = &EisensteinScalar::from_int(factors[i].clone()) * &canon[(i, j)];
                if !coset_rep(&killed).is_zero() {
                    return Err(Error::InvalidInput(
                        "form not annihilated by invariant factors".into(),
                    ));
                }
            }
        }
        Ok(FiniteHermitianSpace {
            factors,
            form: canon,
        })
    }

    /// The trivial space (discriminant group of a unimodular lattice).
    pub fn trivial() -> Self {
        FiniteHermitianSpace {
            factors: vec![],
            form: KMatrix::zero(0, 0),
        }
    }

    /// The space V = (E/(theta))^2 with form [[0, theta/3], [-theta/3, 0]].
    pub fn make_v() -> Self {
        let th = EisensteinInt::theta();
        let tc = th.canonical_associate().expect("theta nonzero");
        let t3 = EisensteinScalar::new(th, 3).expect("den 3");
        let form = KMatrix::from_rows(vec![
            vec![EisensteinScalar::zero(), t3.clone()],
            vec![-&t3, EisensteinScalar::zero()],
        ])
        .expect("2x2");
        FiniteHermitianSpace::new(vec![tc.clone(), tc], form).expect("V is well-formed")
    }

    pub fn factors(&self) -> &[EisensteinInt] {
        &self.factors
    }

    pub fn form(&self) -> &KMatrix {
        &self.form
    }

    pub fn generator_count(&self) -> usize {
        self.factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn order(&self) -> BigInt {
        self.factors.iter().map(|f| f.norm()).product()
    }

    /// Same module with the negated form.
    pub fn twist(&self) -> Self {
        let k = self.factors.len();
        let mut form = self.form.clone();
        for i in 0..k {
            for j in 0..k {
                form[(i, j)] = coset_rep(&-&form[(i, j)]);
            }
        }
        FiniteHermitianSpace {
            factors: self.factors.clone(),
            form,
        }
    }

    /// Orthogonal direct sum. The combined invariant factors are re-sorted by
    /// norm and must still form a divisibility chain.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let k1 = self.factors.len();
        let k = k1 + other.factors.len();
        let mut idx: Vec<usize> = (0..k).collect();
        let factor_at = |i: usize| -> &EisensteinInt {
            if i < k1 {
                &self.factors[i]
            } else {
                &other.factors[i - k1]
            }
        };
        idx.sort_by_key(|&i| factor_at(i).norm());
        let factors: Vec<EisensteinInt> = idx.iter().map(|&i| factor_at(i).clone()).collect();
        let mut form = KMatrix::zero(k, k);
        for (r, &i) in idx.iter().enumerate() {
            for (c, &j) in idx.iter().enumerate() {
                form[(r, c)] = match (i < k1, j < k1) {
                    (true, true) => self.form[(i, j)].clone(),
                    (false, false) => other.form[(i - k1, j - k1)].clone(),
                    _ => EisensteinScalar::zero(),
                };
            }
        }
        FiniteHermitianSpace::new(factors, form)
    }

    /// Canonical residues of the coordinate ring E/(d).
    fn residues(d: &EisensteinInt) -> Vec<EisensteinInt> {
        use num_traits::ToPrimitive;
        let n = d.norm().to_i64().expect("tiny factor");
        let mut out = std::collections::BTreeSet::new();
        for a in -n..=n {
            for b in -n..=n {
                let (_, r) = EisensteinInt::new(a, b)
                    .euclid_div(d)
                    .expect("nonzero factor");
                out.insert(r);
            }
        }
        let v: Vec<_> = out.into_iter().collect();
        debug_assert_eq!(BigInt::from(v.len()), d.norm());
        v
    }

    /// Reduce raw coordinates to canonical residues.
    pub fn canon_element(&self, raw: &[EisensteinInt]) -> SpaceElement {
        raw.iter()
            .zip(&self.factors)
            .map(|(x, d)| x.euclid_div(d).expect("nonzero factor").1)
            .collect()
    }

    /// All elements in a deterministic order.
    pub fn elements(&self) -> Vec<SpaceElement> {
        let mut out: Vec<SpaceElement> = vec![vec![]];
        for d in &self.factors {
            let res = Self::residues(d);
            let mut next = Vec::with_capacity(out.len() * res.len());
            for prefix in &out {
                for r in &res {
                    let mut e = prefix.clone();
                    e.push(r.clone());
                    next.push(e);
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    pub fn add_elements(&self, x: &[EisensteinInt], y: &[EisensteinInt]) -> SpaceElement {
        let raw: Vec<EisensteinInt> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        self.canon_element(&raw)
    }

    pub fn scale_element(&self, c: &EisensteinInt, x: &[EisensteinInt]) -> SpaceElement {
        let raw: Vec<EisensteinInt> = x.iter().map(|a| c * a).collect();
        self.canon_element(&raw)
    }

    pub fn is_zero_element(&self, x: &[EisensteinInt]) -> bool {
        x.iter().all(|e| e.is_zero())
    }

    /// The K/E-valued hermitian pairing of two elements.
    pub fn pair(&self, x: &[EisensteinInt], y: &[EisensteinInt]) -> EisensteinScalar {
        let mut acc = EisensteinScalar::zero();
        for i in 0..self.factors.len() {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.factors.len() {
                let term = &(&EisensteinScalar::from_int(x[i].clone()) * &self.form[(i, j)])
                    * &EisensteinScalar::from_int(y[j].conj());
                acc = &acc + &term;
            }
        }
        coset_rep(&acc)
    }

    /// Apply an endomorphism matrix (rows = images of generators) to an element.
    pub fn apply(&self, x: &[EisensteinInt], m: &EMatrix) -> SpaceElement {
        let k = self.factors.len();
        let mut raw = vec![EisensteinInt::zero(); k];
        for i in 0..k {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..k {
                let t = &x[i] * &m[(i, j)];
                raw[j] += &t;
            }
        }
        self.canon_element(&raw)
    }

    /// Reduce a matrix of generator images to canonical residues columnwise.
    pub fn canon_matrix(&self, m: &EMatrix) -> EMatrix {
        let k = self.factors.len();
        let mut out = EMatrix::zero(k, k);
        for i in 0..k {
            for j in 0..k {
                out[(i, j)] = m[(i, j)]
                    .euclid_div(&self.factors[j])
                    .expect("factor nonzero")
                    .1;
            }
        }
        out
    }

    /// True iff all invariant factors are associates of theta, i.e. the space
    /// is an F_3 vector space.
    pub fn is_f3_space(&self) -> bool {
        let tc = EisensteinInt::theta().canonical_associate().expect("theta");
        self.factors.iter().all(|f| *f == tc)
    }

    /// Full automorphism group by brute-force search over generator images.
    pub fn aut_group(&self) -> Result<SpaceAutGroup> {
        use num_traits::ToPrimitive;
        let order = self.order();
        if order.to_u64().is_none_or(|o| o > 10_000) {
            return Err(Error::SpaceTooLarge(order.to_u64().unwrap_or(u64::MAX)));
        }
        let mut elements = self.hom_search_from(self, true);
        elements.sort_by(|a, b| a.flat().cmp(b.flat()));
        Ok(SpaceAutGroup {
            space: self.clone(),
            elements,
        })
    }

    /// Order of the full automorphism group, without materializing it.
    pub fn aut_order(&self) -> Result<u64> {
        use num_traits::ToPrimitive;
        let order = self.order();
        if order.to_u64().is_none_or(|o| o > 10_000) {
            return Err(Error::SpaceTooLarge(order.to_u64().unwrap_or(u64::MAX)));
        }
        if let Some(b) = self.f3_form() {
            return Ok(self.f3_hom_search_raw(&b, &b, true).len() as u64);
        }
        Ok(self.hom_search_from(self, true).len() as u64)
    }

    /// An isomorphism of finite hermitian spaces onto `other`, if one exists.
    /// Rows of the witness are the images of self's generators in other's
    /// coordinates.
    pub fn isomorphism_to(&self, other: &Self) -> Option<EMatrix> {
        if self.factors != other.factors {
            return None;
        }
        other.hom_search_from(self, false).into_iter().next()
    }

    /// For a theta-exponent space the form values are multiples of theta/3;
    /// returns the F_3 matrix of those multiples (an alternating form).
    pub fn f3_form(&self) -> Option<Vec<Vec<u8>>> {
        if !self.is_f3_space() {
            return None;
        }
        let k = self.factors.len();
        let theta_third = EisensteinScalar::new(EisensteinInt::theta(), 3).ok()?;
        let reps: [EisensteinScalar; 3] = [
            EisensteinScalar::zero(),
            coset_rep(&theta_third),
            coset_rep(&(&theta_third + &theta_third)),
        ];
        let mut out = vec![vec![0u8; k]; k];
        for i in 0..k {
            for j in 0..k {
                let c = reps.iter().position(|r| *r == self.form[(i, j)])?;
                out[i][j] = c as u8;
            }
        }
        Some(out)
    }

    /// Search form-preserving module isomorphisms from `source` into `self`;
    /// stops at the first hit unless `all` is set.
    fn hom_search_from(&self, source: &Self, all: bool) -> Vec<EMatrix> {
        let k = source.factors.len();
        if k == 0 {
            return vec![EMatrix::zero(0, 0)];
        }
        if self.factors == source.factors {
            if let (Some(bt), Some(bs)) = (self.f3_form(), source.f3_form()) {
                return self.f3_hom_search(&bt, &bs, all);
            }
        }
        let candidates = self.elements();
        let mut images: Vec<SpaceElement> = Vec::with_capacity(k);
        let mut out = Vec::new();
        self.search_level(source, &candidates, &mut images, &mut out, all);
        out
    }

    /// Fast path over F_3: candidates and pairings in u8 arithmetic, with a
    /// precomputed pairing table.
    fn f3_hom_search(&self, b_target: &[Vec<u8>], b_source: &[Vec<u8>], all: bool) -> Vec<EMatrix> {
        let k = self.factors.len();
        self.f3_hom_search_raw(b_target, b_source, all)
            .into_iter()
            .map(|rows| {
                let raw: Vec<SpaceElement> = rows
                    .iter()
                    .map(|&r| {
                        let mut n = r;
                        (0..k)
                            .map(|_| {
                                let d = (n % 3) as i64;
                                n /= 3;
                                EisensteinInt::new(d, 0)
                            })
                            .collect()
                    })
                    .collect();
                self.canon_matrix(&EMatrix::from_rows(raw).expect("rectangular"))
            })
            .collect()
    }

    /// The search itself; results are rows of element indices (base-3 digit
    /// encodings of the generator images).
    fn f3_hom_search_raw(
        &self,
        b_target: &[Vec<u8>],
        b_source: &[Vec<u8>],
        all: bool,
    ) -> Vec<Vec<usize>> {
        let k = self.factors.len();
        let total = 3usize.pow(k as u32);
        let elems: Vec<Vec<u8>> = (0..total)
            .map(|mut n| {
                (0..k)
                    .map(|_| {
                        let d = (n % 3) as u8;
                        n /= 3;
                        d
                    })
                    .collect()
            })
            .collect();
        let mut table = vec![0u8; total * total];
        for (i, x) in elems.iter().enumerate() {
            for (j, y) in elems.iter().enumerate() {
                table[i * total + j] = f3_pair(b_target, x, y);
            }
        }
        let mut images: Vec<usize> = Vec::with_capacity(k);
        let mut found: Vec<Vec<usize>> = Vec::new();
        f3_search_level(&table, total, b_source, &mut images, &mut found, all);
        found
    }

    fn search_level(
        &self,
        source: &Self,
        candidates: &[SpaceElement],
        images: &mut Vec<SpaceElement>,
        out: &mut Vec<EMatrix>,
        all: bool,
    ) {
        let k = source.factors.len();
        let i = images.len();
        if i == k {
            let m = EMatrix::from_rows(images.clone()).expect("rectangular");
            let m = self.canon_matrix(&m);
            if self.is_bijective(&m) {
                out.push(m);
            }
            return;
        }
        for cand in candidates {
            if !(all || out.is_empty()) {
                return;
            }
            // the assignment gen_i -> cand must kill the annihilator of gen_i
            if !self.is_zero_element(&self.scale_element(&source.factors[i], cand)) {
                continue;
            }
            if self.pair(cand, cand) != source.form[(i, i)] {
                continue;
            }
            let ok = (0..i).all(|j| {
                self.pair(&images[j], cand) == source.form[(j, i)]
                    && self.pair(cand, &images[j]) == source.form[(i, j)]
            });
            if !ok {
                continue;
            }
            images.push(cand.clone());
            self.search_level(source, candidates, images, out, all);
            images.pop();
        }
    }

    fn is_bijective(&self, m: &EMatrix) -> bool {
        if self.is_f3_space() {
            let k = self.factors.len();
            let f3: Vec<Vec<F3>> = (0..k)
                .map(|i| (0..k).map(|j| m[(i, j)].reduce_mod_theta()).collect())
                .collect();
            !f3_det(&f3).is_zero()
        } else {
            let elems = self.elements();
            let mut seen = std::collections::BTreeSet::new();
            for e in &elems {
                seen.insert(self.apply(e, m));
            }
            seen.len() == elems.len()
        }
    }

    /// Canonical residue of a mod-3 digit: 0, 1, or -1.
    fn residue_of_digit(&self, d: u8, pos: usize) -> EisensteinInt {
        EisensteinInt::new(d as i64, 0)
            .euclid_div(&self.factors[pos])
            .expect("factor nonzero")
            .1
    }

    /// F_3 digits of an element of a theta-exponent space.
    pub fn element_digits(&self, e: &[EisensteinInt]) -> Vec<u8> {
        e.iter().map(|x| x.reduce_mod_theta().0).collect()
    }

    /// All isotropic F_3-subspaces of the given dimension. Requires every
    /// invariant factor to be an associate of theta.
    pub fn isotropic_subspaces(&self, dim: usize) -> Result<Vec<TorsionSubgroup>> {
        let b = self.f3_form().ok_or(Error::MixedInvariantFactors)?;
        let k = self.factors.len();
        let total = 3usize.pow(k as u32);
        let digits = |mut n: usize| -> Vec<u8> {
            (0..k)
                .map(|_| {
                    let d = (n % 3) as u8;
                    n /= 3;
                    d
                })
                .collect()
        };
        let nonzero: Vec<Vec<u8>> = (1..total)
            .map(digits)
            .filter(|e| e.iter().any(|&d| d != 0))
            .collect();
        let mut seen: std::collections::BTreeSet<Vec<Vec<u8>>> = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        let mut gens: Vec<Vec<u8>> = Vec::new();
        self.isotropic_search_f3(&b, &nonzero, dim, &mut gens, &mut seen, &mut out);
        Ok(out)
    }

    fn isotropic_search_f3(
        &self,
        b: &[Vec<u8>],
        nonzero: &[Vec<u8>],
        dim: usize,
        gens: &mut Vec<Vec<u8>>,
        seen: &mut std::collections::BTreeSet<Vec<Vec<u8>>>,
        out: &mut Vec<TorsionSubgroup>,
    ) {
        let k = self.factors.len();
        if gens.len() == dim {
            // span all F_3 combinations of the generators
            let mut span: std::collections::BTreeSet<Vec<u8>> = std::collections::BTreeSet::new();
            let combos = 3usize.pow(dim as u32);
            for mut c in 0..combos {
                let mut v = vec![0u8; k];
                for g in gens.iter() {
                    let coef = (c % 3) as u8;
                    c /= 3;
                    for (vi, gi) in v.iter_mut().zip(g) {
                        *vi = (*vi + coef * gi) % 3;
                    }
                }
                span.insert(v);
            }
            if span.len() != combos {
                return; // dependent generators
            }
            let span_vec: Vec<Vec<u8>> = span.into_iter().collect();
            if !seen.insert(span_vec.clone()) {
                return;
            }
            let to_elem = |d: &Vec<u8>| -> SpaceElement {
                d.iter()
                    .enumerate()
                    .map(|(i, &x)| self.residue_of_digit(x, i))
                    .collect()
            };
            let gens_e: Vec<SpaceElement> = gens.iter().map(to_elem).collect();
            let mut elements: Vec<SpaceElement> = span_vec.iter().map(to_elem).collect();
            elements.sort();
            out.push(TorsionSubgroup {
                gens: gens_e,
                elements,
            });
            return;
        }
        for cand in nonzero {
            if f3_pair(b, cand, cand) != 0 {
                continue;
            }
            let ok = gens
                .iter()
                .all(|g| f3_pair(b, g, cand) == 0 && f3_pair(b, cand, g) == 0);
            if !ok {
                continue;
            }
            gens.push(cand.clone());
            self.isotropic_search_f3(b, nonzero, dim, gens, seen, out);
            gens.pop();
        }
    }

    /// The subgroup generated by the given elements, with its element list
    /// materialized and canonically sorted.
    pub fn subgroup_from_gens(&self, gens: Vec<SpaceElement>) -> TorsionSubgroup {
        let gens: Vec<SpaceElement> = gens.iter().map(|g| self.canon_element(g)).collect();
        let zero = vec![EisensteinInt::zero(); self.factors.len()];
        let mut elements: std::collections::BTreeSet<SpaceElement> =
            std::collections::BTreeSet::new();
        elements.insert(zero);
        let omega = EisensteinInt::omega();
        let mut queue: Vec<SpaceElement> = gens.clone();
        while let Some(x) = queue.pop() {
            if elements.contains(&x) {
                continue;
            }
            elements.insert(x.clone());
            queue.push(self.scale_element(&omega, &x));
            for e in elements.iter().cloned().collect::<Vec<_>>() {
                queue.push(self.add_elements(&x, &e));
            }
        }
        TorsionSubgroup {
            gens,
            elements: elements.into_iter().collect(),
        }
    }

    /// True iff the form vanishes identically on the subgroup.
    pub fn is_isotropic(&self, sub: &TorsionSubgroup) -> bool {
        sub.elements
            .iter()
            .all(|x| sub.elements.iter().all(|y| self.pair(x, y).is_zero()))
    }
}

fn f3_pair(b: &[Vec<u8>], x: &[u8], y: &[u8]) -> u8 {
    let mut acc = 0u32;
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0 {
            continue;
        }
        for (j, &yj) in y.iter().enumerate() {
            acc += (xi as u32) * (b[i][j] as u32) * (yj as u32);
        }
    }
    (acc % 3) as u8
}

fn f3_search_level(
    table: &[u8],
    total: usize,
    b_source: &[Vec<u8>],
    images: &mut Vec<usize>,
    found: &mut Vec<Vec<usize>>,
    all: bool,
) {
    let k = b_source.len();
    let i = images.len();
    if i == k {
        if f3_index_rows_invertible(images, k) {
            found.push(images.clone());
        }
        return;
    }
    for cand in 0..total {
        if !(all || found.is_empty()) {
            return;
        }
        if table[cand * total + cand] != b_source[i][i] {
            continue;
        }
        let ok = (0..i).all(|j| {
            table[images[j] * total + cand] == b_source[j][i]
                && table[cand * total + images[j]] == b_source[i][j]
        });
        if !ok {
            continue;
        }
        images.push(cand);
        f3_search_level(table, total, b_source, images, found, all);
        images.pop();
    }
}

/// Allocation-free invertibility test for up to 8 generator-image rows given
/// as base-3 digit encodings.
fn f3_index_rows_invertible(rows: &[usize], k: usize) -> bool {
    debug_assert!(k <= 8);
    let mut m = [[0i32; 8]; 8];
    for (i, &r) in rows.iter().enumerate() {
        let mut n = r;
        for j in 0..k {
            m[i][j] = (n % 3) as i32;
            n /= 3;
        }
    }
    fn det_rec(m: &[[i32; 8]; 8], k: usize, row: usize, used: u32) -> i32 {
        if row == k {
            return 1;
        }
        let mut acc = 0i32;
        let mut parity = 0;
        for c in 0..k {
            if used & (1 << c) != 0 {
                continue;
            }
            if m[row][c] != 0 {
                let sub = det_rec(m, k, row + 1, used | (1 << c));
                let term = m[row][c] * sub;
                acc += if parity % 2 == 0 { term } else { -term };
            }
            parity += 1;
        }
        acc.rem_euclid(3)
    }
    det_rec(&m, k, 0, 0) % 3 != 0
}

fn f3_det(m: &[Vec<F3>]) -> F3 {
    let n = m.len();
    if n == 0 {
        return F3(1);
    }
    let mut acc = F3(0);
    let first = &m[0];
    for (j, lead) in first.iter().enumerate() {
        if lead.is_zero() {
            continue;
        }
        let minor: Vec<Vec<F3>> = (1..n)
            .map(|i| (0..n).filter(|&c| c != j).map(|c| m[i][c]).collect())
            .collect();
        let term = lead.mul(f3_det(&minor));
        acc = if j % 2 == 0 {
            acc.add(term)
        } else {
            acc.sub(term)
        };
    }
    acc
}

/// A subgroup of a finite hermitian space, identified by its sorted element
/// list; `gens` keeps the generating set it was built from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TorsionSubgroup {
    pub gens: Vec<SpaceElement>,
    pub elements: Vec<SpaceElement>,
}

/// A materialized group of form-preserving module automorphisms.
#[derive(Debug, Clone)]
pub struct SpaceAutGroup {
    pub space: FiniteHermitianSpace,
    pub elements: Vec<EMatrix>,
}

impl SpaceAutGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Multiplication with re-canonicalization of entries.
    pub fn compose(&self, a: &EMatrix, b: &EMatrix) -> EMatrix {
        self.space.canon_matrix(&a.mul(b).expect("square"))
    }

    pub fn identity(&self) -> EMatrix {
        EMatrix::identity(self.space.generator_count())
    }

    pub fn is_abelian(&self) -> bool {
        self.elements.iter().all(|a| {
            self.elements
                .iter()
                .all(|b| self.compose(a, b) == self.compose(b, a))
        })
    }

    /// Order of a single element under composition.
    pub fn element_order(&self, m: &EMatrix) -> usize {
        let id = self.identity();
        let mut p = self.space.canon_matrix(m);
        let mut n = 1;
        while p != id {
            p = self.compose(&p, m);
            n += 1;
            assert!(
                n <= self.elements.len() + 1,
                "element order exceeds group order"
            );
        }
        n
    }

    /// Number of elements of order exactly 2.
    pub fn involution_count(&self) -> usize {
        self.elements
            .iter()
            .filter(|m| self.element_order(m) == 2)
            .count()
    }

    pub fn center_order(&self) -> usize {
        self.elements
            .iter()
            .filter(|a| {
                self.elements
                    .iter()
                    .all(|b| self.compose(a, b) == self.compose(b, a))
            })
            .count()
    }

    pub fn contains(&self, m: &EMatrix) -> bool {
        let c = self.space.canon_matrix(m);
        self.elements.iter().any(|e| *e == c)
    }

    /// Orbit decomposition of the action on subgroups.
    pub fn orbits_on_subgroups(&self, objects: &[TorsionSubgroup]) -> Vec<Vec<usize>> {
        orbits_under(&self.space, &self.elements, objects)
    }

    /// True iff the action on the given objects is transitive.
    pub fn acts_transitively(&self, objects: &[TorsionSubgroup]) -> bool {
        !objects.is_empty() && orbits_under(&self.space, &self.elements, objects).len() == 1
    }
}

/// Orbit partition of subgroups under a set of automorphism matrices; each
/// orbit is a sorted list of object indices.
pub fn orbits_under(
    space: &FiniteHermitianSpace,
    matrices: &[EMatrix],
    objects: &[TorsionSubgroup],
) -> Vec<Vec<usize>> {
    if space.is_f3_space() {
        return orbits_under_f3(space, matrices, objects);
    }
    let keys: Vec<&Vec<SpaceElement>> = objects.iter().map(|o| &o.elements).collect();
    let find = |els: &Vec<SpaceElement>| keys.iter().position(|k| *k == els);
    let mut orbit_of: Vec<Option<usize>> = vec![None; objects.len()];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for start in 0..objects.len() {
        if orbit_of[start].is_some() {
            continue;
        }
        let orbit_idx = orbits.len();
        let mut members = vec![start];
        orbit_of[start] = Some(orbit_idx);
        let mut queue = vec![start];
        while let Some(i) = queue.pop() {
            for m in matrices {
                let mapped: Vec<SpaceElement> = {
                    let mut v: Vec<SpaceElement> = objects[i]
                        .elements
                        .iter()
                        .map(|e| space.apply(e, m))
                        .collect();
                    v.sort();
                    v
                };
                let j = find(&mapped).expect("action must preserve the object set");
                if orbit_of[j].is_none() {
                    orbit_of[j] = Some(orbit_idx);
                    members.push(j);
                    queue.push(j);
                }
            }
        }
        members.sort();
        orbits.push(members);
    }
    orbits
}

/// Same orbit computation with all arithmetic over F_3.
fn orbits_under_f3(
    space: &FiniteHermitianSpace,
    matrices: &[EMatrix],
    objects: &[TorsionSubgroup],
) -> Vec<Vec<usize>> {
    let k = space.generator_count();
    let obj_keys: Vec<Vec<Vec<u8>>> = objects
        .iter()
        .map(|o| {
            let mut v: Vec<Vec<u8>> = o.elements.iter().map(|e| space.element_digits(e)).collect();
            v.sort();
            v
        })
        .collect();
    let index: std::collections::BTreeMap<&Vec<Vec<u8>>, usize> = obj_keys
        .iter()
        .enumerate()
        .map(|(i, key)| (key, i))
        .collect();
    let mats: Vec<Vec<Vec<u8>>> = matrices
        .iter()
        .map(|m| {
            (0..k)
                .map(|i| (0..k).map(|j| m[(i, j)].reduce_mod_theta().0).collect())
                .collect()
        })
        .collect();
    let apply = |e: &[u8], m: &Vec<Vec<u8>>| -> Vec<u8> {
        let mut out = vec![0u8; k];
        for (i, &xi) in e.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = (*o + xi * m[i][j]) % 3;
            }
        }
        out
    };
    let mut orbit_of: Vec<Option<usize>> = vec![None; objects.len()];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for start in 0..objects.len() {
        if orbit_of[start].is_some() {
            continue;
        }
        let orbit_idx = orbits.len();
        let mut members = vec![start];
        orbit_of[start] = Some(orbit_idx);
        let mut queue = vec![start];
        while let Some(i) = queue.pop() {
            for m in &mats {
                let mut mapped: Vec<Vec<u8>> = obj_keys[i].iter().map(|e| apply(e, m)).collect();
                mapped.sort();
                let j = *index
                    .get(&mapped)
                    .expect("action must preserve the object set");
                if orbit_of[j].is_none() {
                    orbit_of[j] = Some(orbit_idx);
                    members.push(j);
                    queue.push(j);
                }
            }
        }
        members.sort();
        orbits.push(members);
    }
    orbits
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta_scalar_third() -> EisensteinScalar {
        EisensteinScalar::new(EisensteinInt::theta(), 3).unwrap()
    }

    #[test]
    fn v_form_values() {
        let v = FiniteHermitianSpace::make_v();
        assert_eq!(v.order(), BigInt::from(9));
        let g1 = v.canon_element(&[EisensteinInt::one(), EisensteinInt::zero()]);
        let g2 = v.canon_element(&[EisensteinInt::zero(), EisensteinInt::one()]);
        assert_eq!(v.pair(&g1, &g2), coset_rep(&theta_scalar_third()));
        assert!(v.pair(&g1, &g1).is_zero());
        assert!(v.pair(&g2, &g2).is_zero());
    }

    #[test]
    fn twist_is_involution() {
        let v = FiniteHermitianSpace::make_v();
        let vm = v.twist();
        let g1 = v.canon_element(&[EisensteinInt::one(), EisensteinInt::zero()]);
        let g2 = v.canon_element(&[EisensteinInt::zero(), EisensteinInt::one()]);
        assert_eq!(vm.pair(&g1, &g2), coset_rep(&-&theta_scalar_third()));
        assert_eq!(vm.twist(), v);
        assert_eq!(
            FiniteHermitianSpace::trivial().twist(),
            FiniteHermitianSpace::trivial()
        );
    }

    #[test]
    fn aut_v_is_sl2_f3_fingerprint() {
        let v = FiniteHermitianSpace::make_v();
        let aut = v.aut_group().unwrap();
        assert_eq!(aut.order(), 24);
        assert!(!aut.is_abelian());
        assert_eq!(aut.involution_count(), 1);
        assert_eq!(aut.center_order(), 2);
    }

    #[test]
    fn aut_of_trivial_space() {
        let aut = FiniteHermitianSpace::trivial().aut_group().unwrap();
        assert_eq!(aut.order(), 1);
    }

    #[test]
    fn aut_invariant_under_twist() {
        let v = FiniteHermitianSpace::make_v();
        let a1 = v.aut_group().unwrap();
        let a2 = v.twist().aut_group().unwrap();
        assert_eq!(a1.elements, a2.elements);
    }

    #[test]
    fn isotropic_lines_of_v() {
        let v = FiniteHermitianSpace::make_v();
        let lines = v.isotropic_subspaces(1).unwrap();
        // the form has zero diagonal, so both generator classes span
        // isotropic lines; the form is alternating mod E, so all 4 lines qualify
        let g1 = v.canon_element(&[EisensteinInt::one(), EisensteinInt::zero()]);
        let g2 = v.canon_element(&[EisensteinInt::zero(), EisensteinInt::one()]);
        assert!(lines.iter().any(|l| l.elements.contains(&g1)));
        assert!(lines.iter().any(|l| l.elements.contains(&g2)));
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn v_plus_v_minus_structure() {
        let v = FiniteHermitianSpace::make_v();
        let sum = v.direct_sum(&v.twist()).unwrap();
        assert_eq!(sum.order(), BigInt::from(81));
        assert_eq!(sum.generator_count(), 4);
        // W_0 = {(a, b, a, b)} is isotropic
        let one = EisensteinInt::one();
        let zero = EisensteinInt::zero();
        let w0 = sum.subgroup_from_gens(vec![
            vec![one.clone(), zero.clone(), one.clone(), zero.clone()],
            vec![zero.clone(), one.clone(), zero.clone(), one.clone()],
        ]);
        assert_eq!(w0.elements.len(), 9);
        assert!(sum.is_isotropic(&w0));
    }

    #[test]
    fn transitivity_trivial_cases() {
        let v = FiniteHermitianSpace::make_v();
        let aut = v.aut_group().unwrap();
        let whole = v.subgroup_from_gens(vec![
            vec![EisensteinInt::one(), EisensteinInt::zero()],
            vec![EisensteinInt::zero(), EisensteinInt::one()],
        ]);
        assert!(aut.acts_transitively(std::slice::from_ref(&whole)));

        let lines = v.isotropic_subspaces(1).unwrap();
        let trivial_group = SpaceAutGroup {
            space: v.clone(),
            elements: vec![EMatrix::identity(2)],
        };
        let orbits = trivial_group.orbits_on_subgroups(&lines);
        assert_eq!(orbits.len(), lines.len());
    }
}
