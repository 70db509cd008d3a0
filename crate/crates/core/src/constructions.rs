//! The named lattices and verification constructions: Lambda, D3, H, L0, M0,
//! the unimodular glue of D3 with H, the j0 parametrization of the half-plane
//! inside the period ball, and the stabilizer trichotomy.

use num_bigint::BigInt;
use num_complex::Complex64;

use crate::eisenstein::{EisensteinInt, EisensteinScalar};
use crate::error::{Error, Result};
use crate::finite::FiniteHermitianSpace;
use crate::lattice::{
    orthogonal_complement, overlattice_from_isotropic, HermitianLattice, Overlattice,
};
use crate::linalg::{EMatrix, EVector, KMatrix, KVector};
use crate::modular::{reduce_fundamental, StabilizerClass, UpperHalfPoint};

fn ei(a: i64, b: i64) -> EisensteinInt {
    EisensteinInt::new(a, b)
}

fn theta() -> EisensteinInt {
    EisensteinInt::theta()
}

/// The standard unimodular lattice of signature (4,1):
/// (x, y) = -x1 conj(y1) + sum_{i>=2} x_i conj(y_i).
pub fn lambda() -> HermitianLattice {
    let mut g = EMatrix::identity(5);
    g[(0, 0)] = ei(-1, 0);
    HermitianLattice::from_gram(g).expect("Lambda is nondegenerate")
}

/// D3 = {x in E^3 : x1 + x2 + x3 = 0 mod theta} with its standard basis
/// (1,-1,0), (0,1,-1), (0,0,theta) inside E^3.
pub fn d3() -> HermitianLattice {
    let basis = EMatrix::from_rows(vec![
        vec![ei(1, 0), ei(-1, 0), ei(0, 0)],
        vec![ei(0, 0), ei(1, 0), ei(-1, 0)],
        vec![ei(0, 0), ei(0, 0), theta()],
    ])
    .expect("3x3");
    HermitianLattice::from_ambient_basis(EMatrix::identity(3), basis).expect("D3")
}

/// The hyperbolic plane H with Gram [[0, theta], [-theta, 0]].
pub fn h() -> HermitianLattice {
    HermitianLattice::from_gram(crate::groups::h_gram()).expect("H")
}

/// The explicit embedded image of D3 in Lambda, spanned by w1, w2, w3.
pub fn l0() -> HermitianLattice {
    HermitianLattice::from_ambient_basis(
        lambda().gram().clone(),
        EMatrix::from_rows(w_vectors().to_vec()).expect("3x5"),
    )
    .expect("L0")
}

/// The orthogonal complement of L0 in Lambda, spanned by v1, v2.
pub fn m0() -> HermitianLattice {
    HermitianLattice::from_ambient_basis(
        lambda().gram().clone(),
        EMatrix::from_rows(v_vectors().to_vec()).expect("2x5"),
    )
    .expect("M0")
}

/// w1 = (-1, w, -1, 0, -1), w2 = (0, 0, 1, -1, 0), w3 = (0, 1, -1, 0, 0).
pub fn w_vectors() -> [EVector; 3] {
    [
        vec![ei(-1, 0), ei(0, 1), ei(-1, 0), ei(0, 0), ei(-1, 0)],
        vec![ei(0, 0), ei(0, 0), ei(1, 0), ei(-1, 0), ei(0, 0)],
        vec![ei(0, 0), ei(1, 0), ei(-1, 0), ei(0, 0), ei(0, 0)],
    ]
}

/// v1 = (-theta, w^2, w^2, w^2, 0), v2 = (1, 0, 0, 0, 1).
pub fn v_vectors() -> [EVector; 2] {
    let w2 = ei(-1, -1);
    [
        vec![-theta(), w2.clone(), w2.clone(), w2, ei(0, 0)],
        vec![ei(1, 0), ei(0, 0), ei(0, 0), ei(0, 0), ei(1, 0)],
    ]
}

/// Built-in lattices accepted by the CLI wherever a lattice file is expected.
pub fn named_lattice(name: &str) -> Option<HermitianLattice> {
    match name {
        "@lambda" => Some(lambda()),
        "@d3" => Some(d3()),
        "@h" => Some(h()),
        "@L0" => Some(l0()),
        "@M0" => Some(m0()),
        _ => None,
    }
}

pub const NAMED_LATTICES: [&str; 5] = ["@lambda", "@d3", "@h", "@L0", "@M0"];

/// The generators alpha = (theta/3, theta/3, theta/3) and beta = (1, 0, 0)
/// of D(D3), written in the coordinates of the standard D3 basis.
pub fn alpha_beta_basis_coords() -> (KVector, KVector) {
    let t3 = EisensteinScalar::new(theta(), 3).expect("theta/3");
    let t23 = EisensteinScalar::new(&ei(2, 0) * &theta(), 3).expect("2theta/3");
    let alpha = vec![t3.clone(), t23, EisensteinScalar::one()];
    let beta = vec![
        EisensteinScalar::one(),
        EisensteinScalar::one(),
        EisensteinScalar::new(-theta(), 3).expect("-theta/3"),
    ];
    (alpha, beta)
}

/// Coordinates of a dual vector of D3 in the (alpha, beta) basis of D(D3):
/// the unique (c1, c2) in F_3^2 with v - c1 alpha - c2 beta in the lattice.
pub fn alpha_beta_coords(v: &[EisensteinScalar]) -> Result<(u8, u8)> {
    let (alpha, beta) = alpha_beta_basis_coords();
    for c1 in 0..3u8 {
        for c2 in 0..3u8 {
            let mut diff = v.to_vec();
            for (j, d) in diff.iter_mut().enumerate() {
                let t1 = &EisensteinScalar::from_int(ei(c1 as i64, 0)) * &alpha[j];
                let t2 = &EisensteinScalar::from_int(ei(c2 as i64, 0)) * &beta[j];
                *d = &(&*d - &t1) - &t2;
            }
            if diff.iter().all(|s| s.is_integral()) {
                return Ok((c1, c2));
            }
        }
    }
    Err(Error::InvalidInput(
        "vector is not in the dual of D3".into(),
    ))
}

/// Image of a D3-isometry (basis coordinates) on D(D3), written in the
/// (alpha, beta) basis with rows as images.
pub fn disc_image_alpha_beta(m: &EMatrix) -> Result<[[u8; 2]; 2]> {
    let (alpha, beta) = alpha_beta_basis_coords();
    let mk = m.to_k();
    let mut rows = [[0u8; 2]; 2];
    for (r, gen) in [alpha, beta].into_iter().enumerate() {
        let moved = KMatrix::from_rows(vec![gen])?.mul(&mk)?.row_vec(0);
        let (c1, c2) = alpha_beta_coords(&moved)?;
        rows[r] = [c1, c2];
    }
    Ok(rows)
}

/// Everything produced by gluing D3 + H along the anti-diagonal of
/// V + V(-1).
#[derive(Debug, Clone)]
pub struct GlueResult {
    /// The direct sum D3 + H (Gram block diagonal, rank 5).
    pub direct_sum: HermitianLattice,
    /// The two glue vectors in the dual of the direct sum.
    pub lifts: Vec<KVector>,
    /// The glued overlattice with index and basis data.
    pub overlattice: Overlattice,
    /// Image of D3 inside the overlattice (rows in overlattice coordinates).
    pub d3_image: HermitianLattice,
    /// Image of H inside the overlattice.
    pub h_image: HermitianLattice,
}

/// Glue D3 + H along the isotropic subgroup spanned by
/// (alpha, t2) and (beta, t1), where t1, t2 generate D(H).
///
/// The subgroup is the graph of an anti-isometry D(D3) -> D(H), which is
/// exactly the condition for the glue to be integral; the result is
/// unimodular of signature (4,1).
pub fn build_glue() -> Result<GlueResult> {
    let d3 = d3();
    let h = h();
    // block-diagonal Gram of the direct sum
    let n = 5;
    let mut gram = EMatrix::zero(n, n);
    for i in 0..3 {
        for j in 0..3 {
            gram[(i, j)] = d3.gram()[(i, j)].clone();
        }
    }
    for i in 0..2 {
        for j in 0..2 {
            gram[(3 + i, 3 + j)] = h.gram()[(i, j)].clone();
        }
    }
    let direct_sum = HermitianLattice::from_gram(gram)?;

    // dual generators: alpha, beta for the D3 block; rows of the inverse Gram
    // for the H block
    let (alpha, beta) = alpha_beta_basis_coords();
    let h_dual = h.gram().to_k().inverse()?;
    let t1 = h_dual.row_vec(0);
    let t2 = h_dual.row_vec(1);
    let concat = |a: &[EisensteinScalar], b: &[EisensteinScalar]| -> KVector {
        a.iter().chain(b.iter()).cloned().collect()
    };
    let lifts = vec![concat(&alpha, &t2), concat(&beta, &t1)];
    let overlattice = overlattice_from_isotropic(&direct_sum, &lifts)?;

    // old basis vectors in overlattice coordinates: rows of the inverse of
    // the new basis, which are integral since the old lattice is contained
    let binv = overlattice.basis_in_old.inverse()?;
    let binv_int = binv.to_integral().ok_or(Error::SubspaceNotIsotropic)?;
    let d3_rows = binv_int.take_rows(0..3);
    let h_rows = binv_int.take_rows(3..5);
    let d3_image =
        HermitianLattice::from_ambient_basis(overlattice.lattice.gram().clone(), d3_rows)?;
    let h_image = HermitianLattice::from_ambient_basis(overlattice.lattice.gram().clone(), h_rows)?;
    Ok(GlueResult {
        direct_sum,
        lifts,
        overlattice,
        d3_image,
        h_image,
    })
}

/// The discriminant group of the direct sum D3 + H, together with the
/// abstract model V + V(-1) and an isomorphism witness.
pub fn glue_discriminant_matches_v_pair(glue: &GlueResult) -> Result<bool> {
    let dg = glue.direct_sum.discriminant_group()?;
    if dg.order() != BigInt::from(81) {
        return Ok(false);
    }
    let v = FiniteHermitianSpace::make_v();
    let model = v.direct_sum(&v.twist())?;
    Ok(dg.space.isomorphism_to(&model).is_some())
}

/// The result of checking the explicit D3 -> Lambda embedding data.
#[derive(Debug, Clone)]
pub struct ExplicitEmbedding {
    pub l0: HermitianLattice,
    pub m0: HermitianLattice,
    /// Isometry witness taking the Gram of D3 to the Gram of L0.
    pub isometry_witness: Option<EMatrix>,
    pub l0_primitive: bool,
    pub m0_gram_is_h: bool,
    /// All pairings (w_i, v_j) vanish.
    pub pairings_zero: bool,
    /// The computed complement of L0 has the same row span as span(v1, v2).
    pub complement_matches_m0: bool,
}

pub fn verify_explicit_embedding() -> Result<ExplicitEmbedding> {
    let lam = lambda();
    let l0 = l0();
    let m0 = m0();
    let l0_gram_lattice = HermitianLattice::from_gram(l0.gram().clone())?;
    let isometry_witness = crate::lattice::is_isometric_definite(&l0_gram_lattice, &d3())?;
    let l0_primitive = l0.is_primitive()?;
    let m0_gram_is_h = m0.gram() == h().gram();
    let mut pairings_zero = true;
    for w in &w_vectors() {
        for v in &v_vectors() {
            if !crate::linalg::hermitian_pair(w, v, lam.gram())?.is_zero() {
                pairings_zero = false;
            }
        }
    }
    let complement = orthogonal_complement(&EMatrix::from_rows(w_vectors().to_vec())?, &lam)?;
    let complement_matches_m0 = complement.basis_hnf()? == m0.basis_hnf()?;
    Ok(ExplicitEmbedding {
        l0,
        m0,
        isometry_witness,
        l0_primitive,
        m0_gram_is_h,
        pairings_zero,
        complement_matches_m0,
    })
}

/// A representative vector of a negative line in Lambda x C.
#[derive(Debug, Clone)]
pub struct PeriodPoint {
    coords: [Complex64; 5],
    norm: f64,
}

impl PeriodPoint {
    /// Wrap coordinates after validating the norm is negative and matches a
    /// recomputation within 1e-9.
    pub fn new(coords: [Complex64; 5]) -> Result<Self> {
        let norm = lambda_norm(&coords);
        if !(norm < 0.0) {
            return Err(Error::InvalidInput(format!(
                "period point must span a negative line, norm = {norm}"
            )));
        }
        Ok(PeriodPoint { coords, norm })
    }

    pub fn coords(&self) -> &[Complex64; 5] {
        &self.coords
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }
}

/// The hermitian norm of Lambda x C: -|z1|^2 + sum |z_i|^2.
pub fn lambda_norm(z: &[Complex64; 5]) -> f64 {
    -z[0].norm_sqr() + z[1..].iter().map(|c| c.norm_sqr()).sum::<f64>()
}

/// The hermitian pairing of Lambda x C (linear in the first argument).
pub fn lambda_pair(x: &[Complex64; 5], y: &[Complex64; 5]) -> Complex64 {
    -x[0] * y[0].conj()
        + x[1..]
            .iter()
            .zip(y[1..].iter())
            .map(|(a, b)| a * b.conj())
            .sum::<Complex64>()
}

fn omega_c() -> Complex64 {
    Complex64::new(-0.5, 3f64.sqrt() / 2.0)
}

fn to_complex_vec(v: &[EisensteinInt]) -> [Complex64; 5] {
    let w = omega_c();
    let mut out = [Complex64::new(0.0, 0.0); 5];
    for (i, e) in v.iter().enumerate() {
        out[i] = Complex64::new(crate::eisenstein::bigint_to_f64(&e.a), 0.0)
            + Complex64::new(crate::eisenstein::bigint_to_f64(&e.b), 0.0) * w;
    }
    out
}

/// j0(tau) = tau v1 + v2: the explicit parametrization of the negative lines
/// orthogonal to L0. Norm is -2 sqrt(3) Im(tau).
pub fn j0(tau: UpperHalfPoint) -> Result<PeriodPoint> {
    let [v1, v2] = v_vectors();
    let v1c = to_complex_vec(&v1);
    let v2c = to_complex_vec(&v2);
    let t = tau.to_complex();
    let mut coords = [Complex64::new(0.0, 0.0); 5];
    for i in 0..5 {
        coords[i] = t * v1c[i] + v2c[i];
    }
    PeriodPoint::new(coords)
}

/// Stabilizer trichotomy on the lattice side, decided by fundamental-domain
/// reduction: the orbit of omega gives order 648, the orbit of i order 108,
/// and everything else the order-54 group.
pub fn stabilizer_class_lattice(tau: UpperHalfPoint) -> Result<StabilizerClass> {
    let red = reduce_fundamental(tau)?.reduced.to_complex();
    // both corners of the fundamental domain lie in the orbit of omega
    let omega_left = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
    let omega_right = Complex64::new(0.5, 3f64.sqrt() / 2.0);
    let d_omega = (red - omega_left).norm().min((red - omega_right).norm());
    let d_i = (red - Complex64::new(0.0, 1.0)).norm();
    let d = d_omega.min(d_i);
    if d <= 1e-9 {
        return Ok(if d_omega <= d_i {
            StabilizerClass::Order648
        } else {
            StabilizerClass::Order108
        });
    }
    if d < 1e-6 {
        return Err(Error::NearBoundary);
    }
    Ok(StabilizerClass::Order54)
}
