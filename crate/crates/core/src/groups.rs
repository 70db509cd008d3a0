//! Finite matrix groups acting on hermitian lattices: reflections,
//! triflections, breadth-first closure, automorphism groups of definite
//! lattices, and the induced action on discriminant groups.

use std::collections::{BTreeMap, BTreeSet};

use crate::eisenstein::{EisensteinInt, EisensteinScalar};
use crate::error::{Error, Result};
use crate::lattice::{basis_image_search, norm_candidates, DiscriminantGroup, HermitianLattice};
use crate::linalg::{hermitian_pair, EMatrix, EVector, KMatrix};

pub const DEFAULT_CLOSURE_CAP: usize = 100_000;

/// A finite group of exact matrices satisfying g * gram * g^* = gram, acting
/// on row vectors from the right. Elements are materialized and canonically
/// ordered (lexicographic on flattened entries).
#[derive(Debug, Clone)]
pub struct MatrixGroup {
    gram: EMatrix,
    generators: Vec<EMatrix>,
    elements: Vec<EMatrix>,
}

/// True iff m preserves the hermitian form: m * gram * m^* = gram.
pub fn is_isometry(gram: &EMatrix, m: &EMatrix) -> bool {
    m.mul(gram)
        .and_then(|p| p.mul(&m.conj_transpose()))
        .map(|p| p == *gram)
        .unwrap_or(false)
}

impl MatrixGroup {
    /// Breadth-first closure of the generators under multiplication, up to
    /// `cap` elements.
    pub fn from_generators(
        gram: EMatrix,
        generators: Vec<EMatrix>,
        cap: Option<usize>,
    ) -> Result<Self> {
        let cap = cap.unwrap_or(DEFAULT_CLOSURE_CAP);
        let n = gram.rows;
        for g in &generators {
            if g.rows != n || g.cols != n {
                return Err(Error::DimensionMismatch("generator size vs gram".into()));
            }
            if !is_isometry(&gram, g) {
                return Err(Error::InvalidInput(
                    "generator is not an isometry of the gram".into(),
                ));
            }
        }
        let mut seen: BTreeSet<Vec<EisensteinInt>> = BTreeSet::new();
        let identity = EMatrix::identity(n);
        seen.insert(identity.flat().to_vec());
        let mut queue = vec![identity];
        let mut elements = Vec::new();
        while let Some(m) = queue.pop() {
            for g in &generators {
                let next = m.mul(g)?;
                if seen.insert(next.flat().to_vec()) {
                    if seen.len() > cap {
                        return Err(Error::CapExceeded(cap));
                    }
                    queue.push(next);
                }
            }
            elements.push(m);
        }
        elements.sort_by(|a, b| a.flat().cmp(b.flat()));
        Ok(MatrixGroup {
            gram,
            generators,
            elements,
        })
    }

    /// Wrap an already-complete element list (e.g. a backtracking result).
    pub fn from_elements(gram: EMatrix, mut elements: Vec<EMatrix>) -> Result<Self> {
        for m in &elements {
            if !is_isometry(&gram, m) {
                return Err(Error::InvalidInput(
                    "element is not an isometry of the gram".into(),
                ));
            }
        }
        elements.sort_by(|a, b| a.flat().cmp(b.flat()));
        elements.dedup();
        Ok(MatrixGroup {
            gram,
            generators: elements.clone(),
            elements,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn gram(&self) -> &EMatrix {
        &self.gram
    }

    pub fn generators(&self) -> &[EMatrix] {
        &self.generators
    }

    pub fn elements(&self) -> &[EMatrix] {
        &self.elements
    }

    pub fn contains(&self, m: &EMatrix) -> bool {
        self.elements
            .binary_search_by(|e| e.flat().cmp(m.flat()))
            .is_ok()
    }

    /// Two groups are equal as element sets.
    pub fn same_elements(&self, other: &MatrixGroup) -> bool {
        self.elements.len() == other.elements.len()
            && self
                .elements
                .iter()
                .zip(&other.elements)
                .all(|(a, b)| a == b)
    }

    pub fn element_order(&self, m: &EMatrix) -> usize {
        let id = EMatrix::identity(m.rows);
        let mut p = m.clone();
        let mut k = 1;
        while p != id {
            p = p.mul(m).expect("square");
            k += 1;
            assert!(
                k <= self.elements.len() + 1,
                "element order exceeds group order"
            );
        }
        k
    }

    /// Orbit partition of the given vectors under the group action
    /// v -> v * m. Orbits are sorted lists of indices; the representative is
    /// the lexicographically minimal member, which is the smallest index when
    /// the input list is sorted.
    pub fn orbits(&self, vectors: &[EVector]) -> Result<Vec<Vec<usize>>> {
        let index: BTreeMap<&[EisensteinInt], usize> = vectors
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_slice(), i))
            .collect();
        let spread: &[EMatrix] = if self.generators.is_empty() {
            &self.elements
        } else {
            &self.generators
        };
        let mut orbit_of: Vec<Option<usize>> = vec![None; vectors.len()];
        let mut orbits = Vec::new();
        for start in 0..vectors.len() {
            if orbit_of[start].is_some() {
                continue;
            }
            let id = orbits.len();
            orbit_of[start] = Some(id);
            let mut members = vec![start];
            let mut queue = vec![start];
            while let Some(i) = queue.pop() {
                let row = EMatrix::from_rows(vec![vectors[i].clone()])?;
                for m in spread {
                    let image = row.mul(m)?.row_vec(0);
                    let j = *index
                        .get(image.as_slice())
                        .ok_or_else(|| Error::InvalidInput("orbit leaves the vector set".into()))?;
                    if orbit_of[j].is_none() {
                        orbit_of[j] = Some(id);
                        members.push(j);
                        queue.push(j);
                    }
                }
            }
            members.sort();
            orbits.push(members);
        }
        Ok(orbits)
    }
}

/// The reflection w -> w - (w, v) v in a norm-2 vector, as a matrix acting on
/// row vectors: I - gram * conj(v)^T * v.
pub fn reflection(v: &[EisensteinInt], gram: &EMatrix) -> Result<EMatrix> {
    let norm = hermitian_pair(v, v, gram)?;
    if norm != EisensteinInt::new(2, 0) {
        return Err(Error::ReflectionNorm(norm.to_string()));
    }
    let n = gram.rows;
    let mut m = EMatrix::identity(n);
    // (G v^*)_i v_j subtracted from the identity
    for i in 0..n {
        let gv: EisensteinInt = (0..n).fold(EisensteinInt::zero(), |acc, j| {
            acc + &gram[(i, j)] * v[j].conj()
        });
        for j in 0..n {
            let t = &gv * &v[j];
            m[(i, j)] -= &t;
        }
    }
    debug_assert!(is_isometry(gram, &m));
    Ok(m)
}

/// The order-3 isometry w -> w - ((1-w)/3)(w, a) a for a norm-3 vector a
/// pairing into theta*E with the whole lattice. Entries stay in the ring.
pub fn triflection(a: &[EisensteinInt], gram: &EMatrix) -> Result<EMatrix> {
    let norm = hermitian_pair(a, a, gram)?;
    if norm != EisensteinInt::new(3, 0) {
        return Err(Error::TriflectionPrecondition(format!(
            "(a,a) = {norm}, want 3"
        )));
    }
    if !pairs_into_theta(a, gram)? {
        return Err(Error::TriflectionPrecondition(
            "(a, w) not in theta*E for all lattice w".into(),
        ));
    }
    let k = triflection_k(&to_k_vec(a), gram)?;
    let m = k
        .to_integral()
        .ok_or_else(|| Error::TriflectionPrecondition("matrix is not integral".into()))?;
    debug_assert!(is_isometry(gram, &m));
    Ok(m)
}

/// Triflection over the fraction field; used directly when the coordinates
/// carry a lattice strictly smaller than E^n (e.g. ambient coordinates of D3).
pub fn triflection_k(a: &[EisensteinScalar], gram: &EMatrix) -> Result<KMatrix> {
    let n = gram.rows;
    if a.len() != n {
        return Err(Error::DimensionMismatch("vector vs gram".into()));
    }
    let norm = crate::linalg::hermitian_pair_k(a, a, gram)?;
    if norm != EisensteinScalar::from_int(EisensteinInt::new(3, 0)) {
        return Err(Error::TriflectionPrecondition(format!(
            "(a,a) = {}, want 3",
            norm
        )));
    }
    // c = (1 - w)/3
    let c = EisensteinScalar::new(EisensteinInt::new(1, -1), 3)?;
    let mut m = KMatrix::identity(n);
    for i in 0..n {
        let ga: EisensteinScalar = (0..n).fold(EisensteinScalar::zero(), |acc, j| {
            &acc + &(&EisensteinScalar::from_int(gram[(i, j)].clone()) * &a[j].conj())
        });
        for j in 0..n {
            let t = &(&c * &ga) * &a[j];
            m[(i, j)] = &m[(i, j)] - &t;
        }
    }
    Ok(m)
}

/// Check the pairing precondition (a, e_i) in theta*E for every basis vector.
pub fn pairs_into_theta(a: &[EisensteinInt], gram: &EMatrix) -> Result<bool> {
    let theta = EisensteinInt::theta();
    for i in 0..gram.rows {
        let e_i: EVector = (0..gram.rows)
            .map(|j| {
                if i == j {
                    EisensteinInt::one()
                } else {
                    EisensteinInt::zero()
                }
            })
            .collect();
        if !hermitian_pair(a, &e_i, gram)?.is_divisible_by(&theta) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn to_k_vec(v: &[EisensteinInt]) -> Vec<EisensteinScalar> {
    v.iter()
        .map(|x| EisensteinScalar::from_int(x.clone()))
        .collect()
}

/// The Weyl group: closure of the reflections in all norm-2 vectors.
pub fn weyl_group(l: &HermitianLattice, cap: Option<usize>) -> Result<MatrixGroup> {
    let sv = l.short_vectors(2)?;
    let mut gens: Vec<EMatrix> = Vec::new();
    let mut seen = BTreeSet::new();
    for v in &sv.vectors {
        let r = reflection(v, l.gram())?;
        if seen.insert(r.flat().to_vec()) {
            gens.push(r);
        }
    }
    MatrixGroup::from_generators(l.gram().clone(), gens, cap)
}

/// The full automorphism group of a positive definite lattice of small rank,
/// by backtracking over basis images among short vectors.
pub fn full_aut_definite(l: &HermitianLattice) -> Result<MatrixGroup> {
    if !l.is_positive_definite()? {
        return Err(Error::IndefiniteLattice);
    }
    let g = l.gram();
    let candidates = norm_candidates(g, l)?;
    let mut out = Vec::new();
    basis_image_search(g, g, &candidates, &mut Vec::new(), &mut out, true)?;
    MatrixGroup::from_elements(g.clone(), out)
}

/// The induced homomorphism from a group of lattice isometries to the
/// automorphisms of the discriminant group.
#[derive(Debug, Clone)]
pub struct GroupHom {
    pub disc: DiscriminantGroup,
    /// Induced matrix on discriminant generators, parallel to the source
    /// element list.
    pub element_images: Vec<EMatrix>,
    /// Deduplicated, canonically ordered image subgroup.
    pub image: Vec<EMatrix>,
    /// Indices (into the source element list) of the kernel.
    pub kernel_indices: Vec<usize>,
}

impl GroupHom {
    pub fn image_order(&self) -> usize {
        self.image.len()
    }

    pub fn kernel_order(&self) -> usize {
        self.kernel_indices.len()
    }
}

/// Compute the action of each group element on D(L).
pub fn discriminant_action(group: &MatrixGroup, l: &HermitianLattice) -> Result<GroupHom> {
    let disc = l.discriminant_group()?;
    let k = disc.space.generator_count();
    let gens = disc.generators().clone();
    let identity = EMatrix::identity(k);
    let mut element_images = Vec::with_capacity(group.order());
    let mut kernel_indices = Vec::new();
    let mut image_set: BTreeSet<Vec<EisensteinInt>> = BTreeSet::new();
    let mut image = Vec::new();
    for (idx, m) in group.elements().iter().enumerate() {
        let mk = m.to_k();
        let mut rows = Vec::with_capacity(k);
        for i in 0..k {
            let moved = KMatrix::from_rows(vec![gens.row_vec(i)])?.mul(&mk)?;
            rows.push(disc.coords_of(&moved.row_vec(0))?);
        }
        let induced = if k > 0 {
            EMatrix::from_rows(rows)?
        } else {
            EMatrix::zero(0, 0)
        };
        if induced == identity {
            kernel_indices.push(idx);
        }
        if image_set.insert(induced.flat().to_vec()) {
            image.push(induced.clone());
        }
        element_images.push(induced);
    }
    image.sort_by(|a, b| a.flat().cmp(b.flat()));
    Ok(GroupHom {
        disc,
        element_images,
        image,
        kernel_indices,
    })
}

/// Membership law for Aut(H) on a 2x2 matrix [[a, b], [c, d]]:
/// a conj(b) = conj(a) b, c conj(d) = conj(c) d, a conj(d) - b conj(c) = 1.
pub fn aut_h_membership(m: &EMatrix) -> bool {
    if m.rows != 2 || m.cols != 2 {
        return false;
    }
    let (a, b, c, d) = (&m[(0, 0)], &m[(0, 1)], &m[(1, 0)], &m[(1, 1)]);
    a * &b.conj() == &a.conj() * b
        && c * &d.conj() == &c.conj() * d
        && &(a * &d.conj()) - &(b * &c.conj()) == EisensteinInt::one()
}

/// The Gram matrix of the hyperbolic plane H.
pub fn h_gram() -> EMatrix {
    let theta = EisensteinInt::theta();
    EMatrix::from_rows(vec![
        vec![EisensteinInt::zero(), theta.clone()],
        vec![-theta, EisensteinInt::zero()],
    ])
    .expect("2x2")
}

/// Constructive transitivity on norm -3 vectors of H: a witness g in Aut(H)
/// with w1 * g = w2.
///
/// Writing w = (a + bw) q1 + (c + dw) q2, the norm is 3(ad - bc), so norm -3
/// vectors correspond to integer matrices [[a, b], [c, d]] of determinant -1,
/// on which SL2(Z) acts transitively.
pub fn map_norm_minus3(w1: &[EisensteinInt], w2: &[EisensteinInt]) -> Result<EMatrix> {
    let gram = h_gram();
    let minus3 = EisensteinInt::new(-3, 0);
    for w in [w1, w2] {
        let n = hermitian_pair(w, w, &gram)?;
        if n != minus3 {
            return Err(Error::WrongNorm {
                expected: "-3".into(),
                got: n.to_string(),
            });
        }
    }
    // integer parameter matrices, rows (a, b) and (c, d)
    let p = |w: &[EisensteinInt]| {
        EMatrix::from_rows(vec![
            vec![
                EisensteinInt {
                    a: w[0].a.clone(),
                    b: num_bigint::BigInt::from(0),
                },
                EisensteinInt {
                    a: w[0].b.clone(),
                    b: num_bigint::BigInt::from(0),
                },
            ],
            vec![
                EisensteinInt {
                    a: w[1].a.clone(),
                    b: num_bigint::BigInt::from(0),
                },
                EisensteinInt {
                    a: w[1].b.clone(),
                    b: num_bigint::BigInt::from(0),
                },
            ],
        ])
        .expect("2x2")
    };
    let p1 = p(w1);
    let p2 = p(w2);
    debug_assert_eq!(p1.det()?, EisensteinInt::new(-1, 0));
    // p1 has determinant -1, so its inverse is -adjugate, over the integers
    let p1_inv = EMatrix::from_rows(vec![
        vec![-&p1[(1, 1)], p1[(0, 1)].clone()],
        vec![p1[(1, 0)].clone(), -&p1[(0, 0)]],
    ])?;
    let g = p2.mul(&p1_inv)?.transpose();
    // verify the witness
    let moved = EMatrix::from_rows(vec![w1.to_vec()])?.mul(&g)?.row_vec(0);
    if moved != w2 || !aut_h_membership(&g) {
        return Err(Error::InvalidInput(
            "transitivity witness construction failed".into(),
        ));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ei(a: i64, b: i64) -> EisensteinInt {
        EisensteinInt::new(a, b)
    }

    fn theta() -> EisensteinInt {
        EisensteinInt::theta()
    }

    fn d3() -> HermitianLattice {
        let basis = EMatrix::from_rows(vec![
            vec![ei(1, 0), ei(-1, 0), ei(0, 0)],
            vec![ei(0, 0), ei(1, 0), ei(-1, 0)],
            vec![ei(0, 0), ei(0, 0), theta()],
        ])
        .unwrap();
        HermitianLattice::from_ambient_basis(EMatrix::identity(3), basis).unwrap()
    }

    /// D3 basis matrix in ambient coordinates.
    fn d3_basis() -> EMatrix {
        d3().ambient().unwrap().basis.clone()
    }

    #[test]
    fn reflection_examples() {
        let id3 = EMatrix::identity(3);
        // swap of slots 1, 2
        let swap = reflection(&[ei(1, 0), ei(-1, 0), ei(0, 0)], &id3).unwrap();
        let expected = EMatrix::from_rows(vec![
            vec![ei(0, 0), ei(1, 0), ei(0, 0)],
            vec![ei(1, 0), ei(0, 0), ei(0, 0)],
            vec![ei(0, 0), ei(0, 0), ei(1, 0)],
        ])
        .unwrap();
        assert_eq!(swap, expected);

        // (1, -w, 0): the swap composed with diag(w^2, w, 1)
        let r = reflection(&[ei(1, 0), ei(0, -1), ei(0, 0)], &id3).unwrap();
        let mut diag = EMatrix::identity(3);
        diag[(0, 0)] = ei(-1, -1); // w^2
        diag[(1, 1)] = ei(0, 1); // w
        assert_eq!(r, swap.mul(&diag).unwrap());

        // involution on 20 norm-2 vectors of D3 (basis coordinates)
        let d3 = d3();
        let sv = d3.short_vectors(2).unwrap();
        for v in sv.vectors.iter().take(20) {
            let r = reflection(v, d3.gram()).unwrap();
            assert_eq!(r.mul(&r).unwrap(), EMatrix::identity(3));
        }

        // wrong norm rejected
        assert!(matches!(
            reflection(&[ei(1, 0), ei(0, 0), ei(0, 0)], &id3),
            Err(Error::ReflectionNorm(_))
        ));
    }

    #[test]
    fn triflection_a1_is_diag_1_1_omega() {
        // ambient coordinates: a1 = (0, 0, theta) pairs into theta*E with E^3
        let id3 = EMatrix::identity(3);
        let a1 = [ei(0, 0), ei(0, 0), theta()];
        assert!(pairs_into_theta(&a1, &id3).unwrap());
        let m = triflection(&a1, &id3).unwrap();
        let mut expected = EMatrix::identity(3);
        expected[(2, 2)] = ei(0, 1);
        assert_eq!(m, expected);
    }

    #[test]
    fn triflection_a2_closed_form() {
        // a2 = (1, 1, w) does not pair into theta*E with all of E^3,
        // only with D3; over K the formula expands to the closed-form matrix
        let id3 = EMatrix::identity(3);
        let a2 = [ei(1, 0), ei(1, 0), ei(0, 1)];
        assert!(!pairs_into_theta(&a2, &id3).unwrap());
        let a2k: Vec<EisensteinScalar> = a2
            .iter()
            .map(|x| EisensteinScalar::from_int(x.clone()))
            .collect();
        let m = triflection_k(&a2k, &id3).unwrap();
        // (-theta/3) * [[w, w^2, 1], [w^2, w, 1], [w, w, w]]
        let s = EisensteinScalar::new(-theta(), 3).unwrap();
        let w = EisensteinScalar::from_int(ei(0, 1));
        let w2 = EisensteinScalar::from_int(ei(-1, -1));
        let one = EisensteinScalar::one();
        let closed_form = KMatrix::from_rows(vec![
            vec![&s * &w, &s * &w2, &s * &one],
            vec![&s * &w2, &s * &w, &s * &one],
            vec![&s * &w, &s * &w, &s * &w],
        ])
        .unwrap();
        assert_eq!(m, closed_form);

        // in D3 basis coordinates the entries are integral and the order is 3
        let d3 = d3();
        let a2_basis = [ei(1, 0), ei(2, 0), ei(0, -1)];
        // sanity: a2_basis maps to the ambient vector a2
        assert_eq!(d3.to_ambient(&a2_basis).unwrap(), a2.to_vec());
        assert!(pairs_into_theta(&a2_basis, d3.gram()).unwrap());
        let mb = triflection(&a2_basis, d3.gram()).unwrap();
        assert_eq!(mb.mul(&mb).unwrap().mul(&mb).unwrap(), EMatrix::identity(3));

        // basis and ambient versions agree under the change of basis
        let bk = d3_basis().to_k();
        let binv = bk.inverse().unwrap();
        let conjugated = binv.mul(&mb.to_k()).unwrap().mul(&bk).unwrap();
        assert_eq!(conjugated, m);

        // a1 in basis coordinates is e3, also of order 3
        let a1_basis = [ei(0, 0), ei(0, 0), ei(1, 0)];
        let m1 = triflection(&a1_basis, d3.gram()).unwrap();
        assert_eq!(m1.mul(&m1).unwrap().mul(&m1).unwrap(), EMatrix::identity(3));
    }

    #[test]
    fn triflection_preconditions_reported() {
        let id3 = EMatrix::identity(3);
        // wrong norm
        let e = triflection(&[ei(1, 0), ei(0, 0), ei(0, 0)], &id3).unwrap_err();
        assert!(matches!(e, Error::TriflectionPrecondition(ref m) if m.contains("want 3")));
        // norm 3 but pairing outside theta*E against E^3
        let e = triflection(&[ei(1, 0), ei(1, 0), ei(0, 1)], &id3).unwrap_err();
        assert!(matches!(e, Error::TriflectionPrecondition(ref m) if m.contains("theta")));
    }

    #[test]
    fn closure_of_coordinate_reflections_has_order_54() {
        // reflections in (1,-1,0), (0,1,-1), (1,-w,0) on ambient E^3
        let id3 = EMatrix::identity(3);
        let gens = vec![
            reflection(&[ei(1, 0), ei(-1, 0), ei(0, 0)], &id3).unwrap(),
            reflection(&[ei(0, 0), ei(1, 0), ei(-1, 0)], &id3).unwrap(),
            reflection(&[ei(1, 0), ei(0, -1), ei(0, 0)], &id3).unwrap(),
        ];
        let g = MatrixGroup::from_generators(id3, gens, None).unwrap();
        assert_eq!(g.order(), 54);
    }

    #[test]
    fn closure_of_scalars_c_and_a() {
        let id3 = EMatrix::identity(3);
        let c = EMatrix::identity(3).neg();
        let mut a = EMatrix::identity(3);
        a[(2, 2)] = ei(0, 1);
        let g = MatrixGroup::from_generators(id3, vec![c, a], None).unwrap();
        assert_eq!(g.order(), 6);
    }

    #[test]
    fn closure_cap_errors() {
        // an infinite group blows the cap: the shear [[1, 1], [0, 1]] is an
        // isometry of H of infinite order
        let shear =
            EMatrix::from_rows(vec![vec![ei(1, 0), ei(1, 0)], vec![ei(0, 0), ei(1, 0)]]).unwrap();
        assert_eq!(
            MatrixGroup::from_generators(h_gram(), vec![shear], Some(100)).unwrap_err(),
            Error::CapExceeded(100)
        );
    }

    #[test]
    fn weyl_group_examples() {
        let d3 = d3();
        let w = weyl_group(&d3, None).unwrap();
        assert_eq!(w.order(), 54);
        // transitive on the 54 norm-2 vectors
        let sv = d3.short_vectors(2).unwrap();
        let orbits = w.orbits(&sv.vectors).unwrap();
        assert_eq!(orbits.len(), 1);

        // two norm-2 vectors with pairing 1: Weyl group S3 of order 6
        let gram =
            EMatrix::from_rows(vec![vec![ei(2, 0), ei(1, 0)], vec![ei(1, 0), ei(2, 0)]]).unwrap();
        let l = HermitianLattice::from_gram(gram).unwrap();
        assert_eq!(weyl_group(&l, None).unwrap().order(), 6);

        // rank-1 lattice [[2]]: the single reflection
        let l1 =
            HermitianLattice::from_gram(EMatrix::from_rows(vec![vec![ei(2, 0)]]).unwrap()).unwrap();
        assert_eq!(weyl_group(&l1, None).unwrap().order(), 2);
    }

    #[test]
    fn full_aut_of_rank1_is_units() {
        let l =
            HermitianLattice::from_gram(EMatrix::from_rows(vec![vec![ei(2, 0)]]).unwrap()).unwrap();
        let aut = full_aut_definite(&l).unwrap();
        assert_eq!(aut.order(), 6);
    }

    #[test]
    fn aut_d3_has_order_1296_with_exact_sequence() {
        let d3 = d3();
        let aut = full_aut_definite(&d3).unwrap();
        assert_eq!(aut.order(), 1296);

        let weyl = weyl_group(&d3, None).unwrap();
        let hom = discriminant_action(&aut, &d3).unwrap();
        assert_eq!(hom.image_order(), 24);
        assert_eq!(hom.kernel_order(), 54);
        // the kernel equals the Weyl group elementwise
        let kernel: Vec<&EMatrix> = hom
            .kernel_indices
            .iter()
            .map(|&i| &aut.elements()[i])
            .collect();
        for k in &kernel {
            assert!(weyl.contains(k));
        }
        assert_eq!(kernel.len(), weyl.order());
        // and the image is all of Aut(D(D3))
        let full_disc_aut = hom.disc.space.aut_group().unwrap();
        assert_eq!(hom.image, full_disc_aut.elements);

        // Weyl group maps to the identity
        let whom = discriminant_action(&weyl, &d3).unwrap();
        assert_eq!(whom.image_order(), 1);
        assert_eq!(whom.kernel_order(), 54);
    }

    #[test]
    fn orbit_counts_under_subgroups() {
        let d3 = d3();
        let sv = d3.short_vectors(2).unwrap();
        let trivial = MatrixGroup::from_generators(d3.gram().clone(), vec![], None).unwrap();
        assert_eq!(trivial.orbits(&sv.vectors).unwrap().len(), 54);
        let c =
            MatrixGroup::from_generators(d3.gram().clone(), vec![EMatrix::identity(3).neg()], None)
                .unwrap();
        assert_eq!(c.orbits(&sv.vectors).unwrap().len(), 27);
    }

    #[test]
    fn aut_h_membership_examples() {
        // integer SL2 matrices are members
        let m =
            EMatrix::from_rows(vec![vec![ei(1, 0), ei(1, 0)], vec![ei(0, 0), ei(1, 0)]]).unwrap();
        assert!(aut_h_membership(&m));
        // w * identity is a member
        let m =
            EMatrix::from_rows(vec![vec![ei(0, 1), ei(0, 0)], vec![ei(0, 0), ei(0, 1)]]).unwrap();
        assert!(aut_h_membership(&m));
        // [[1, w], [0, 1]] fails: a conj(b) = w^2 != w = conj(a) b
        let m =
            EMatrix::from_rows(vec![vec![ei(1, 0), ei(0, 1)], vec![ei(0, 0), ei(1, 0)]]).unwrap();
        assert!(!aut_h_membership(&m));
    }

    #[test]
    fn membership_law_equals_isometry_condition() {
        // oracle pairing: the entrywise law is exactly the isometry equation
        let g = h_gram();
        let mut count = 0;
        for a in [-1i64, 0, 1] {
            for b in [-1i64, 0, 1] {
                for c in [-1i64, 0, 1] {
                    for d in [0i64, 1] {
                        for wshift in 0..2i64 {
                            let m = EMatrix::from_rows(vec![
                                vec![ei(a, wshift), ei(b, 0)],
                                vec![ei(c, 0), ei(d, wshift)],
                            ])
                            .unwrap();
                            assert_eq!(aut_h_membership(&m), is_isometry(&g, &m));
                            count += 1;
                        }
                    }
                }
            }
        }
        assert!(count > 100);
    }

    #[test]
    fn norm_formula_and_transitivity_witness() {
        let g = h_gram();
        // norm of (a+bw) q1 + (c+dw) q2 is 3(ad - bc) on a coordinate box
        for a in -2i64..=2 {
            for b in -2i64..=2 {
                for c in -2i64..=2 {
                    for d in -2i64..=2 {
                        let w = vec![ei(a, b), ei(c, d)];
                        let n = hermitian_pair(&w, &w, &g).unwrap();
                        assert_eq!(n, ei(3 * (a * d - b * c), 0));
                    }
                }
            }
        }
        // spot check from the proof: q1 - w q2 has norm -3
        let w1 = vec![ei(1, 0), ei(0, -1)];
        assert_eq!(hermitian_pair(&w1, &w1, &g).unwrap(), ei(-3, 0));

        // identity witness for w1 = w2
        let id = map_norm_minus3(&w1, &w1).unwrap();
        assert_eq!(id, EMatrix::identity(2));

        // a nontrivial pair: det [[3,2],[2,1]] = -1, so norm -3
        let w2 = vec![ei(3, 2), ei(2, 1)];
        assert_eq!(hermitian_pair(&w2, &w2, &g).unwrap(), ei(-3, 0));
        let wit = map_norm_minus3(&w1, &w2).unwrap();
        assert!(aut_h_membership(&wit));
        let moved = EMatrix::from_rows(vec![w1.clone()])
            .unwrap()
            .mul(&wit)
            .unwrap()
            .row_vec(0);
        assert_eq!(moved, w2);

        // wrong norms rejected
        assert!(matches!(
            map_norm_minus3(&[ei(1, 0), ei(0, 0)], &w1),
            Err(Error::WrongNorm { .. })
        ));
    }

    #[test]
    fn three_root_lattice_case_split() {
        // Gram [[2, 1, conj(a)], [1, 2, 1], [a, 1, 2]] for the four unit cases
        let build = |a: EisensteinInt| {
            EMatrix::from_rows(vec![
                vec![ei(2, 0), ei(1, 0), a.conj()],
                vec![ei(1, 0), ei(2, 0), ei(1, 0)],
                vec![a.clone(), ei(1, 0), ei(2, 0)],
            ])
            .unwrap()
        };
        let x = [ei(1, 0), ei(-1, 0), ei(1, 0)]; // v3 - v2 + v1 read in the basis

        // a = w: the combination has norm 1
        let g = build(ei(0, 1));
        assert_eq!(hermitian_pair(&x, &x, &g).unwrap(), ei(1, 0));

        // a = -1: the combination has norm 0 (the gram is degenerate;
        // the lattice collapses to the rank-2 S3 case tested in weyl_group_examples)
        let g = build(ei(-1, 0));
        assert_eq!(hermitian_pair(&x, &x, &g).unwrap(), ei(0, 0));
        assert_eq!(g.det().unwrap(), ei(0, 0));

        // a = -w: the lattice is a copy of D3
        let g = build(ei(0, -1));
        let l = HermitianLattice::from_gram(g).unwrap();
        let wit = crate::lattice::is_isometric_definite(&l, &d3()).unwrap();
        assert!(wit.is_some());

        // a = 1: the lattice is D3(2), whose Weyl group is strictly smaller
        // than the order-54 group (it computes to 24: the reflections come in
        // six unit-classes of signed swaps)
        let g = build(ei(1, 0));
        let l = HermitianLattice::from_gram(g.clone()).unwrap();
        let d32_basis = EMatrix::from_rows(vec![
            vec![ei(1, 0), ei(-1, 0), ei(0, 0)],
            vec![ei(0, 0), ei(1, 0), ei(-1, 0)],
            vec![ei(0, 0), ei(0, 0), ei(2, 0)],
        ])
        .unwrap();
        let d32 = HermitianLattice::from_ambient_basis(EMatrix::identity(3), d32_basis).unwrap();
        assert!(crate::lattice::is_isometric_definite(&l, &d32)
            .unwrap()
            .is_some());
        let w = weyl_group(&l, None).unwrap();
        assert_eq!(w.order(), 24);
        assert!(w.order() < 54);
    }

    #[test]
    fn aut_d32_full_group() {
        // D3(2): record the full automorphism group order alongside the Weyl
        // suborder; the group is monomial of order 144
        let d32_basis = EMatrix::from_rows(vec![
            vec![ei(1, 0), ei(-1, 0), ei(0, 0)],
            vec![ei(0, 0), ei(1, 0), ei(-1, 0)],
            vec![ei(0, 0), ei(0, 0), ei(2, 0)],
        ])
        .unwrap();
        let d32 = HermitianLattice::from_ambient_basis(EMatrix::identity(3), d32_basis).unwrap();
        let aut = full_aut_definite(&d32).unwrap();
        assert_eq!(aut.order() % weyl_group(&d32, None).unwrap().order(), 0);
        assert_eq!(aut.order(), 144);
    }
}
