//! Modular-curve computations in floating point (E4, E6, j, fundamental
//! domain reduction) and the Hesse-pencil classification of the cubic-surface
//! automorphism groups attached to plane cubics.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// A point of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperHalfPoint {
    re: f64,
    im: f64,
}

impl UpperHalfPoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !(im > 0.0) || !re.is_finite() || !im.is_finite() {
            return Err(Error::NotInUpperHalfPlane);
        }
        Ok(UpperHalfPoint { re, im })
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    /// The corner point w = e^{2 pi i / 3} = -1/2 + i sqrt(3)/2.
    pub fn omega() -> Self {
        UpperHalfPoint {
            re: -0.5,
            im: 3f64.sqrt() / 2.0,
        }
    }

    pub fn i() -> Self {
        UpperHalfPoint { re: 0.0, im: 1.0 }
    }
}

/// One generator step of the PSL2(Z) reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Move {
    T,
    TInv,
    S,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::T => write!(f, "T"),
            Move::TInv => write!(f, "T^-1"),
            Move::S => write!(f, "S"),
        }
    }
}

/// Integer 2x2 matrix of determinant 1 acting by Moebius transformations.
pub type ModularMatrix = [[i64; 2]; 2];

pub fn moebius(m: &ModularMatrix, tau: Complex64) -> Complex64 {
    let a = m[0][0] as f64;
    let b = m[0][1] as f64;
    let c = m[1][0] as f64;
    let d = m[1][1] as f64;
    (a * tau + b) / (c * tau + d)
}

fn mat_mul(x: &ModularMatrix, y: &ModularMatrix) -> ModularMatrix {
    [
        [
            x[0][0] * y[0][0] + x[0][1] * y[1][0],
            x[0][0] * y[0][1] + x[0][1] * y[1][1],
        ],
        [
            x[1][0] * y[0][0] + x[1][1] * y[1][0],
            x[1][0] * y[0][1] + x[1][1] * y[1][1],
        ],
    ]
}

/// Result of reducing a point into the standard fundamental domain.
#[derive(Debug, Clone)]
pub struct ReductionResult {
    pub reduced: UpperHalfPoint,
    pub word: Vec<Move>,
    pub matrix: ModularMatrix,
}

const MAX_REDUCTION_STEPS: usize = 10_000;
const MAX_WORD_LEN: usize = 1_000_000;

/// Standard T/S reduction into |Re tau| <= 1/2, |tau| >= 1.
pub fn reduce_fundamental(tau: UpperHalfPoint) -> Result<ReductionResult> {
    let mut z = tau.to_complex();
    let mut word: Vec<Move> = Vec::new();
    let mut matrix: ModularMatrix = [[1, 0], [0, 1]];
    for _ in 0..MAX_REDUCTION_STEPS {
        let n = z.re.round();
        if n != 0.0 {
            let ni = n as i64;
            z -= Complex64::new(n, 0.0);
            matrix = mat_mul(&[[1, -ni], [0, 1]], &matrix);
            let step = if ni > 0 { Move::TInv } else { Move::T };
            let count = ni.unsigned_abs() as usize;
            if word.len().saturating_add(count) > MAX_WORD_LEN {
                return Err(Error::ReductionDiverged);
            }
            word.extend(std::iter::repeat_n(step, count));
        }
        if z.norm_sqr() < 1.0 - 1e-14 {
            z = -z.inv();
            matrix = mat_mul(&[[0, -1], [1, 0]], &matrix);
            word.push(Move::S);
        } else {
            let reduced = UpperHalfPoint::new(z.re, z.im)?;
            debug_assert!(reduced.re.abs() <= 0.5 + 1e-12);
            debug_assert!(reduced.to_complex().norm() >= 1.0 - 1e-12);
            debug_assert!((moebius(&matrix, tau.to_complex()) - z).norm() < 1e-9);
            return Ok(ReductionResult {
                reduced,
                word,
                matrix,
            });
        }
    }
    Err(Error::ReductionDiverged)
}

fn sigma(n: u64, k: u32) -> u64 {
    (1..=n).filter(|d| n % d == 0).map(|d| d.pow(k)).sum()
}

/// Eisenstein series E4 and E6 by q-expansion at the fundamental-domain
/// representative of tau (so |q| <= e^{-pi sqrt 3} and a dozen terms reach
/// 1e-15).
pub fn eisenstein_series(tau: UpperHalfPoint) -> Result<(Complex64, Complex64)> {
    let red = reduce_fundamental(tau)?.reduced;
    let q = (Complex64::new(0.0, 2.0 * PI) * red.to_complex()).exp();
    let mut e4 = Complex64::new(1.0, 0.0);
    let mut e6 = Complex64::new(1.0, 0.0);
    let mut qn = Complex64::new(1.0, 0.0);
    for n in 1..=60u64 {
        qn *= q;
        let t4 = 240.0 * sigma(n, 3) as f64 * qn;
        let t6 = 504.0 * sigma(n, 5) as f64 * qn;
        e4 += t4;
        e6 -= t6;
        if t4.norm() < 1e-15 && t6.norm() < 1e-15 {
            break;
        }
    }
    Ok((e4, e6))
}

/// The modular j-invariant 1728 E4^3 / (E4^3 - E6^2).
pub fn j_invariant(tau: UpperHalfPoint) -> Result<Complex64> {
    let (e4, e6) = eisenstein_series(tau)?;
    let e4c = e4 * e4 * e4;
    let den = e4c - e6 * e6;
    Ok(1728.0 * e4c / den)
}

/// The three automorphism-group orders that occur for the cubic surfaces
/// attached to smooth plane cubics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StabilizerClass {
    Order648,
    Order108,
    Order54,
}

impl StabilizerClass {
    pub fn order(&self) -> u32 {
        match self {
            StabilizerClass::Order648 => 648,
            StabilizerClass::Order108 => 108,
            StabilizerClass::Order54 => 54,
        }
    }
}

impl fmt::Display for StabilizerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.order())
    }
}

/// Smoothness of the Hesse cubic x^3 + y^3 + z^3 + 6 lambda xyz:
/// smooth iff 8 lambda^3 + 1 != 0.
pub fn is_smooth_hesse(lambda: Complex64) -> bool {
    let l3 = lambda * lambda * lambda;
    (8.0 * l3 + 1.0).norm() > 1e-12
}

/// j-invariant of the Hesse cubic: 1728 * 4A^3 / (4A^3 + 27B^2) with
/// A = 12 lambda (1 - lambda^3), B = 2 (1 - 20 lambda^3 - 8 lambda^6).
pub fn hesse_j(lambda: Complex64) -> Result<Complex64> {
    let l3 = lambda * lambda * lambda;
    let a = 12.0 * lambda * (1.0 - l3);
    let b = 2.0 * (1.0 - 20.0 * l3 - 8.0 * l3 * l3);
    let a3 = 4.0 * a * a * a;
    let b2 = 27.0 * b * b;
    let den = a3 + b2;
    if den.norm() <= 1e-12 * (a3.norm() + b2.norm()).max(1.0) {
        return Err(Error::SingularHesseCubic);
    }
    Ok(1728.0 * a3 / den)
}

/// The positive real root of 1 - 20 x^3 - 8 x^6: the Hesse parameter with
/// automorphism group of order 108.
pub fn hesse_lambda_star() -> f64 {
    ((-20.0 + 432f64.sqrt()) / 16.0).cbrt()
}

/// Classification of Aut of the cubic surface s^3 + (Hesse cubic) by the
/// parameter: 648 iff lambda = lambda^4, 108 iff 1 - 20 lambda^3 - 8
/// lambda^6 = 0, else the order-54 group.
pub fn classify_lambda(lambda: Complex64) -> Result<StabilizerClass> {
    if !is_smooth_hesse(lambda) {
        return Err(Error::SingularHesseCubic);
    }
    let l3 = lambda * lambda * lambda;
    let p1 = (lambda * l3 - lambda).norm();
    let p2 = (1.0 - 20.0 * l3 - 8.0 * l3 * l3).norm();
    if p1 < 1e-6 && p2 < 1e-6 {
        return Err(Error::AmbiguousClassification);
    }
    if p1 < 1e-9 {
        return Ok(StabilizerClass::Order648);
    }
    if p2 < 1e-9 {
        return Ok(StabilizerClass::Order108);
    }
    Ok(StabilizerClass::Order54)
}

/// Classification through the elliptic curve: j = 0 gives 648, j = 1728
/// gives 108, anything else the order-54 group.
pub fn classify_tau_elliptic(tau: UpperHalfPoint) -> Result<StabilizerClass> {
    classify_j(j_invariant(tau)?)
}

/// Decide the class from a j value, with ambiguity bands around the two
/// special values.
pub fn classify_j(j: Complex64) -> Result<StabilizerClass> {
    if j.norm() < 1e-6 {
        return Ok(StabilizerClass::Order648);
    }
    if j.norm() < 1e-3 {
        return Err(Error::AmbiguousClassification);
    }
    let d = (j - 1728.0).norm();
    if d < 1e-4 {
        return Ok(StabilizerClass::Order108);
    }
    if d < 1e-1 {
        return Err(Error::AmbiguousClassification);
    }
    Ok(StabilizerClass::Order54)
}
