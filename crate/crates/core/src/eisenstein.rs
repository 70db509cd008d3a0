//! Arithmetic in the ring of Eisenstein integers Z[w], w = e^{2 pi i/3},
//! its fraction field, and the residue field Z[w]/(theta) = F_3.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An Eisenstein integer a + b*w with w^2 + w + 1 = 0.
///
/// Coordinates are arbitrary-precision: every quantity in this library stays
/// tiny, but normal-form pivoting can transiently grow entries.
///
/// ```
/// use eislat::EisensteinInt;
///
/// let theta = EisensteinInt::theta();
/// assert_eq!(&theta * &theta, EisensteinInt::new(-3, 0));
/// assert_eq!(theta.norm(), 3.into());
/// assert_eq!(theta.canonical_associate().unwrap(), EisensteinInt::new(2, 1));
/// ```
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EisensteinInt {
    pub a: BigInt,
    pub b: BigInt,
}

impl EisensteinInt {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        EisensteinInt {
            a: a.into(),
            b: b.into(),
        }
    }

    pub fn zero() -> Self {
        EisensteinInt::new(0, 0)
    }

    pub fn one() -> Self {
        EisensteinInt::new(1, 0)
    }

    /// The primitive cube root of unity w.
    pub fn omega() -> Self {
        EisensteinInt::new(0, 1)
    }

    /// theta = w - w^2 = 1 + 2w, the ramified prime over 3 (theta^2 = -3).
    pub fn theta() -> Self {
        EisensteinInt::new(1, 2)
    }

    /// The six units +-1, +-w, +-w^2.
    pub fn units() -> [Self; 6] {
        [
            EisensteinInt::new(1, 0),
            EisensteinInt::new(0, 1),
            EisensteinInt::new(-1, -1),
            EisensteinInt::new(-1, 0),
            EisensteinInt::new(0, -1),
            EisensteinInt::new(1, 1),
        ]
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// Complex conjugate: a + b*w^2 = (a - b) - b*w.
    pub fn conj(&self) -> Self {
        EisensteinInt {
            a: &self.a - &self.b,
            b: -&self.b,
        }
    }

    /// The multiplicative norm a^2 - a*b + b^2 = x * conj(x) >= 0.
    pub fn norm(&self) -> BigInt {
        &self.a * &self.a - &self.a * &self.b + &self.b * &self.b
    }

    /// Euclidean division: x = q*y + r with norm(r) < norm(y).
    ///
    /// The quotient rounds each fraction-field coordinate of x/y to a nearest
    /// integer, ties toward negative infinity; the contract norm(r) < norm(y)
    /// is re-verified, with a 3x3 neighborhood search as fallback.
    pub fn euclid_div(&self, y: &Self) -> Result<(Self, Self)> {
        if y.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // x / y = x * conj(y) / norm(y), coordinates p/n and q/n.
        let n = y.norm();
        let prod = self * &y.conj();
        let qa = round_half_down(&prod.a, &n);
        let qb = round_half_down(&prod.b, &n);
        let q = EisensteinInt { a: qa, b: qb };
        let r = self - &(&q * y);
        if r.norm() < n {
            return Ok((q, r));
        }
        // Cannot happen for this ring; kept as a self-check.
        for da in -1i64..=1 {
            for db in -1i64..=1 {
                let q2 = &q + &EisensteinInt::new(da, db);
                let r2 = self - &(&q2 * y);
                if r2.norm() < n {
                    return Ok((q2, r2));
                }
            }
        }
        unreachable!("euclidean division failed for a norm-Euclidean ring")
    }

    /// True iff y divides self exactly.
    pub fn is_divisible_by(&self, y: &Self) -> bool {
        match self.euclid_div(y) {
            Ok((_, r)) => r.is_zero(),
            Err(_) => false,
        }
    }

    /// Exact quotient; error if y does not divide self.
    pub fn exact_div(&self, y: &Self) -> Result<Self> {
        let (q, r) = self.euclid_div(y)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InvalidInput(format!(
                "{} does not divide {}",
                y, self
            )))
        }
    }

    /// Canonical-associate generator of the ideal (x, y).
    pub fn gcd(&self, y: &Self) -> Result<Self> {
        if self.is_zero() && y.is_zero() {
            return Err(Error::GcdOfZeros);
        }
        let mut x = self.clone();
        let mut y = y.clone();
        while !y.is_zero() {
            let (_, r) = x.euclid_div(&y)?;
            x = y;
            y = r;
        }
        x.canonical_associate()
    }

    /// The unique unit multiple u*x = a + b*w with a > b >= 0.
    ///
    /// This is the sextant 0 <= arg < 60 degrees; units map to 1.
    pub fn canonical_associate(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroHasNoAssociate);
        }
        for u in EisensteinInt::units() {
            let c = self * &u;
            if c.a > c.b && c.b >= BigInt::zero() {
                return Ok(c);
            }
        }
        unreachable!("every nonzero element has exactly one associate per sextant")
    }

    /// Residue map onto Z[w]/(theta) = F_3, sending w to 1.
    pub fn reduce_mod_theta(&self) -> F3 {
        F3::from_bigint(&(&self.a + &self.b))
    }

    /// Render as "[a, b]" for machine output.
    pub fn to_pair(&self) -> Result<[i64; 2]> {
        let a = i64::try_from(&self.a);
        let b = i64::try_from(&self.b);
        match (a, b) {
            (Ok(a), Ok(b)) => Ok([a, b]),
            _ => Err(Error::InvalidInput("coordinate exceeds i64 range".into())),
        }
    }
}

/// Round p/n to a nearest integer; exact halves round toward negative infinity.
fn round_half_down(p: &BigInt, n: &BigInt) -> BigInt {
    debug_assert!(n > &BigInt::zero());
    // floor((2p + n - 1) / 2n) gives round-half-down for positive n.
    let num: BigInt = 2 * p + n - 1;
    let den: BigInt = 2 * n;
    num.div_floor(&den)
}

impl fmt::Display for EisensteinInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*w", self.b)
        } else if self.b.is_negative() {
            write!(f, "{}-{}*w", self.a, -&self.b)
        } else {
            write!(f, "{}+{}*w", self.a, self.b)
        }
    }
}

impl Serialize for EisensteinInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pair = self
            .to_pair()
            .map_err(|_| serde::ser::Error::custom("coordinate exceeds i64 range"))?;
        pair.serialize(s)
    }
}

impl<'de> Deserialize<'de> for EisensteinInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pair = <[i64; 2]>::deserialize(d).map_err(|e| {
            D::Error::custom(format!("expected an Eisenstein integer as [a, b]: {e}"))
        })?;
        Ok(EisensteinInt::new(pair[0], pair[1]))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for EisensteinInt {
            type Output = EisensteinInt;
            fn $method(self, rhs: EisensteinInt) -> EisensteinInt {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&EisensteinInt> for EisensteinInt {
            type Output = EisensteinInt;
            fn $method(self, rhs: &EisensteinInt) -> EisensteinInt {
                (&self).$method(rhs)
            }
        }
        impl $trait<EisensteinInt> for &EisensteinInt {
            type Output = EisensteinInt;
            fn $method(self, rhs: EisensteinInt) -> EisensteinInt {
                self.$method(&rhs)
            }
        }
    };
}

impl Add<&EisensteinInt> for &EisensteinInt {
    type Output = EisensteinInt;
    fn add(self, rhs: &EisensteinInt) -> EisensteinInt {
        EisensteinInt {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}
forward_binop!(Add, add);

impl Sub<&EisensteinInt> for &EisensteinInt {
    type Output = EisensteinInt;
    fn sub(self, rhs: &EisensteinInt) -> EisensteinInt {
        EisensteinInt {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}
forward_binop!(Sub, sub);

impl Mul<&EisensteinInt> for &EisensteinInt {
    type Output = EisensteinInt;
    // (a + bw)(c + dw) = ac - bd + (ad + bc - bd) w using w^2 = -1 - w.
    fn mul(self, rhs: &EisensteinInt) -> EisensteinInt {
        let bd = &self.b * &rhs.b;
        EisensteinInt {
            a: &self.a * &rhs.a - &bd,
            b: &self.a * &rhs.b + &self.b * &rhs.a - &bd,
        }
    }
}
forward_binop!(Mul, mul);

impl Neg for &EisensteinInt {
    type Output = EisensteinInt;
    fn neg(self) -> EisensteinInt {
        EisensteinInt {
            a: -&self.a,
            b: -&self.b,
        }
    }
}

impl Neg for EisensteinInt {
    type Output = EisensteinInt;
    fn neg(self) -> EisensteinInt {
        -&self
    }
}

impl AddAssign<&EisensteinInt> for EisensteinInt {
    fn add_assign(&mut self, rhs: &EisensteinInt) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl SubAssign<&EisensteinInt> for EisensteinInt {
    fn sub_assign(&mut self, rhs: &EisensteinInt) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

impl MulAssign<&EisensteinInt> for EisensteinInt {
    fn mul_assign(&mut self, rhs: &EisensteinInt) {
        *self = &*self * rhs;
    }
}

impl From<i64> for EisensteinInt {
    fn from(n: i64) -> Self {
        EisensteinInt::new(n, 0)
    }
}

/// An element of the fraction field K = Q(w), kept as num/den with den a
/// positive rational integer coprime to the integer content of num.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EisensteinScalar {
    num: EisensteinInt,
    den: BigInt,
}

impl EisensteinScalar {
    pub fn new(num: EisensteinInt, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(mut num: EisensteinInt, mut den: BigInt) -> Self {
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let content = num.a.gcd(&num.b);
        let g = content.gcd(&den);
        if !g.is_one() && !g.is_zero() {
            num.a /= &g;
            num.b /= &g;
            den /= &g;
        }
        if num.is_zero() {
            den = BigInt::one();
        }
        EisensteinScalar { num, den }
    }

    pub fn from_int(x: EisensteinInt) -> Self {
        EisensteinScalar {
            num: x,
            den: BigInt::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_int(EisensteinInt::zero())
    }

    pub fn one() -> Self {
        Self::from_int(EisensteinInt::one())
    }

    pub fn num(&self) -> &EisensteinInt {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True iff the value lies in the ring of integers Z[w].
    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn to_int(&self) -> Option<EisensteinInt> {
        self.is_integral().then(|| self.num.clone())
    }

    pub fn conj(&self) -> Self {
        EisensteinScalar {
            num: self.num.conj(),
            den: self.den.clone(),
        }
    }

    /// True iff the value is a rational number (no w component).
    pub fn is_real(&self) -> bool {
        self.num.b.is_zero()
    }

    /// Sign of a real value; panics on non-real input.
    pub fn real_sign(&self) -> i32 {
        assert!(self.is_real(), "sign of a non-real scalar");
        match self.num.a.sign() {
            num_bigint::Sign::Plus => 1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Minus => -1,
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // 1 / (n/d) = d * conj(n) / norm(n).
        let num = self.num.conj()
            * EisensteinInt {
                a: self.den.clone(),
                b: BigInt::zero(),
            };
        Ok(Self::reduced(num, self.num.norm()))
    }

    /// Complex embedding with w = (-1 + i sqrt 3)/2.
    pub fn to_complex(&self) -> num_complex::Complex64 {
        let a = bigint_to_f64(&self.num.a);
        let b = bigint_to_f64(&self.num.b);
        let d = bigint_to_f64(&self.den);
        num_complex::Complex64::new((a - b / 2.0) / d, b * 3f64.sqrt() / 2.0 / d)
    }
}

pub(crate) fn bigint_to_f64(x: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().expect("bigint to f64")
}

impl fmt::Display for EisensteinScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/{}", self.num, self.den)
        }
    }
}

impl Serialize for EisensteinScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let den = i64::try_from(&self.den)
            .map_err(|_| serde::ser::Error::custom("denominator exceeds i64 range"))?;
        let mut st = s.serialize_struct("EisensteinScalar", 2)?;
        st.serialize_field("num", &self.num)?;
        st.serialize_field("den", &den)?;
        st.end()
    }
}

impl Add<&EisensteinScalar> for &EisensteinScalar {
    type Output = EisensteinScalar;
    fn add(self, rhs: &EisensteinScalar) -> EisensteinScalar {
        let num = &self.num
            * &EisensteinInt {
                a: rhs.den.clone(),
                b: BigInt::zero(),
            }
            + &rhs.num
                * &EisensteinInt {
                    a: self.den.clone(),
                    b: BigInt::zero(),
                };
        EisensteinScalar::reduced(num, &self.den * &rhs.den)
    }
}

impl Sub<&EisensteinScalar> for &EisensteinScalar {
    type Output = EisensteinScalar;
    fn sub(self, rhs: &EisensteinScalar) -> EisensteinScalar {
        self + &(-rhs)
    }
}

impl Mul<&EisensteinScalar> for &EisensteinScalar {
    type Output = EisensteinScalar;
    fn mul(self, rhs: &EisensteinScalar) -> EisensteinScalar {
        EisensteinScalar::reduced(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &EisensteinScalar {
    type Output = EisensteinScalar;
    fn neg(self) -> EisensteinScalar {
        EisensteinScalar {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for EisensteinScalar {
    type Output = EisensteinScalar;
    fn neg(self) -> EisensteinScalar {
        -&self
    }
}

impl From<EisensteinInt> for EisensteinScalar {
    fn from(x: EisensteinInt) -> Self {
        EisensteinScalar::from_int(x)
    }
}

/// The residue field F_3 = Z[w]/(theta).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct F3(pub u8);

impl F3 {
    pub fn new(v: i64) -> Self {
        F3(v.rem_euclid(3) as u8)
    }

    fn from_bigint(v: &BigInt) -> Self {
        let three = BigInt::from(3);
        let r = v.mod_floor(&three);
        F3(u8::try_from(&r).expect("residue in 0..3"))
    }

    pub fn add(self, o: F3) -> F3 {
        F3((self.0 + o.0) % 3)
    }

    pub fn sub(self, o: F3) -> F3 {
        F3((3 + self.0 - o.0) % 3)
    }

    pub fn mul(self, o: F3) -> F3 {
        F3((self.0 * o.0) % 3)
    }

    pub fn neg(self) -> F3 {
        F3((3 - self.0) % 3)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for F3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ei(a: i64, b: i64) -> EisensteinInt {
        EisensteinInt::new(a, b)
    }

    #[test]
    fn conj_examples() {
        // w -> w^2 = -1 - w
        assert_eq!(ei(0, 1).conj(), ei(-1, -1));
        // real elements fixed
        assert_eq!(ei(5, 0).conj(), ei(5, 0));
        // conj(theta) = -theta, expanded with w^2 = -1 - w
        assert_eq!(EisensteinInt::theta().conj(), ei(-1, -2));
    }

    #[test]
    fn theta_squared_is_minus_three() {
        let th = EisensteinInt::theta();
        assert_eq!(&th * &th, ei(-3, 0));
        assert_eq!(th.norm(), 3.into());
    }

    #[test]
    fn euclid_div_examples() {
        let th = EisensteinInt::theta();
        assert_eq!(th.euclid_div(&th).unwrap(), (ei(1, 0), ei(0, 0)));
        let (q, r) = ei(2, 0).euclid_div(&th).unwrap();
        assert_eq!(&q * &th + &r, ei(2, 0));
        assert!(r.norm() < 3.into());
        // oracle: some candidate in the 3x3 rounding neighborhood achieves
        // norm < 3, and ours is one of them
        let mut found = false;
        for da in -1..=1i64 {
            for db in -1..=1i64 {
                let q2 = &q + &ei(da, db);
                let r2 = ei(2, 0) - &q2 * &th;
                if q2 == q {
                    found = r2.norm() < 3.into();
                }
            }
        }
        assert!(found);
        assert_eq!(
            ei(0, 0).euclid_div(&ei(5, 0)).unwrap(),
            (ei(0, 0), ei(0, 0))
        );
        assert_eq!(ei(1, 0).euclid_div(&ei(0, 0)), Err(Error::DivisionByZero));
    }

    #[test]
    fn gcd_examples() {
        let th = EisensteinInt::theta();
        // 3 = -w^2 theta^2, so gcd(theta, 3) is the associate of theta
        let g = th.gcd(&ei(3, 0)).unwrap();
        assert_eq!(g, th.canonical_associate().unwrap());
        assert_eq!(g.norm(), 3.into());
        for x in [ei(7, -4), ei(0, 0), ei(2, 2)] {
            assert_eq!(ei(1, 0).gcd(&x).unwrap(), ei(1, 0));
        }
        assert_eq!(ei(2, 0).gcd(&ei(5, 0)).unwrap(), ei(1, 0));
        assert_eq!(ei(0, 0).gcd(&ei(0, 0)), Err(Error::GcdOfZeros));
    }

    #[test]
    fn canonical_associate_examples() {
        assert_eq!(ei(-1, 0).canonical_associate().unwrap(), ei(1, 0));
        // enumerate all 6 associates of theta; exactly one has a > b >= 0
        let th = EisensteinInt::theta();
        let in_sextant: Vec<_> = EisensteinInt::units()
            .into_iter()
            .map(|u| &th * &u)
            .filter(|c| c.a > c.b && c.b >= BigInt::zero())
            .collect();
        assert_eq!(in_sextant, vec![ei(2, 1)]);
        assert_eq!(th.canonical_associate().unwrap(), ei(2, 1));
        assert_eq!(ei(0, 1).canonical_associate().unwrap(), ei(1, 0));
        assert!(ei(0, 0).canonical_associate().is_err());
    }

    #[test]
    fn reduce_mod_theta_examples() {
        assert_eq!(EisensteinInt::theta().reduce_mod_theta(), F3(0));
        // w = 1 mod theta: (w - 1)/theta = -w^2 lies in the ring
        let w = EisensteinInt::omega();
        let diff = &w - &ei(1, 0);
        assert!(diff.is_divisible_by(&EisensteinInt::theta()));
        assert_eq!(w.reduce_mod_theta(), F3(1));
        assert_eq!(ei(5, 0).reduce_mod_theta(), F3(2));
    }

    #[test]
    fn exactly_six_units_forming_cyclic_group() {
        // all norm-1 elements in a box, closed under multiplication, cyclic of order 6
        let mut units = vec![];
        for a in -2i64..=2 {
            for b in -2i64..=2 {
                if ei(a, b).norm() == 1.into() {
                    units.push(ei(a, b));
                }
            }
        }
        assert_eq!(units.len(), 6);
        // -w^2 = 1 + w generates: its powers hit all six units
        let g = ei(1, 1);
        let mut p = ei(1, 0);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..6 {
            p = &p * &g;
            seen.insert((p.a.clone(), p.b.clone()));
        }
        assert_eq!(seen.len(), 6);
    }

    #[test]
    fn scalar_reduction_and_equality() {
        let th = EisensteinInt::theta();
        let s = EisensteinScalar::new(&th * &ei(2, 0), 6).unwrap();
        let t = EisensteinScalar::new(th.clone(), 3).unwrap();
        assert_eq!(s, t);
        assert_eq!(*t.den(), 3.into());
        let inv = t.inverse().unwrap();
        assert_eq!(&t * &inv, EisensteinScalar::one());
        // theta/3 is the inverse of -theta since theta^2 = -3
        assert_eq!(
            EisensteinScalar::from_int(-th).inverse().unwrap(),
            EisensteinScalar::new(EisensteinInt::theta(), 3).unwrap()
        );
    }

    fn arb_ei() -> impl Strategy<Value = EisensteinInt> {
        (-20i64..=20, -20i64..=20).prop_map(|(a, b)| EisensteinInt::new(a, b))
    }

    proptest! {
        #[test]
        fn ring_axioms(x in arb_ei(), y in arb_ei(), z in arb_ei()) {
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&x + &y, &y + &x);
        }

        #[test]
        fn norm_multiplicative(x in arb_ei(), y in arb_ei()) {
            prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        }

        #[test]
        fn conj_is_ring_hom(x in arb_ei(), y in arb_ei()) {
            prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
            prop_assert_eq!((&x + &y).conj(), &x.conj() + &y.conj());
            prop_assert_eq!(x.conj().conj(), x);
        }

        #[test]
        fn euclid_contract(x in arb_ei(), y in arb_ei()) {
            prop_assume!(!y.is_zero());
            let (q, r) = x.euclid_div(&y).unwrap();
            prop_assert_eq!(&(&q * &y) + &r, x);
            prop_assert!(r.norm() < y.norm());
        }

        #[test]
        fn mod_theta_is_ring_hom(x in arb_ei(), y in arb_ei()) {
            let f = |v: &EisensteinInt| v.reduce_mod_theta();
            prop_assert_eq!(f(&(&x + &y)), f(&x).add(f(&y)));
            prop_assert_eq!(f(&(&x * &y)), f(&x).mul(f(&y)));
            // kernel is exactly (theta)
            prop_assert_eq!(
                f(&x).is_zero(),
                x.is_divisible_by(&EisensteinInt::theta())
            );
        }

        #[test]
        fn canonical_associate_constant_on_unit_orbits(x in arb_ei()) {
            prop_assume!(!x.is_zero());
            let c = x.canonical_associate().unwrap();
            prop_assert_eq!(c.canonical_associate().unwrap(), c.clone());
            for u in EisensteinInt::units() {
                prop_assert_eq!((&x * &u).canonical_associate().unwrap(), c.clone());
            }
        }

        #[test]
        fn scalar_field_axioms(
            (a, b, d) in (-9i64..=9, -9i64..=9, 1i64..=9),
            (a2, b2, d2) in (-9i64..=9, -9i64..=9, 1i64..=9),
        ) {
            let x = EisensteinScalar::new(EisensteinInt::new(a, b), d).unwrap();
            let y = EisensteinScalar::new(EisensteinInt::new(a2, b2), d2).unwrap();
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            if !y.is_zero() {
                let q = &x * &y.inverse().unwrap();
                prop_assert_eq!(&q * &y, x);
            }
        }
    }
}
