//! Arbitrary-precision integers with an inline `i64` fast path.
//!
//! Most entries met during elimination stay tiny, so `Int` keeps them in a
//! machine word and only spills to [`BigInt`] when an operation overflows.
//! The representation is canonical: a value that fits in `i64` is always
//! stored as `Small`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Int {
    Small(i64),
    Big(BigInt),
}

impl Int {
    pub const ZERO: Int = Int::Small(0);
    pub const ONE: Int = Int::Small(1);

    fn from_big(b: BigInt) -> Int {
        match b.to_i64() {
            Some(v) => Int::Small(v),
            None => Int::Big(b),
        }
    }

    fn from_i128(v: i128) -> Int {
        match i64::try_from(v) {
            Ok(s) => Int::Small(s),
            Err(_) => Int::Big(BigInt::from(v)),
        }
    }

    pub fn to_bigint(&self) -> BigInt {
        match self {
            Int::Small(v) => BigInt::from(*v),
            Int::Big(b) => b.clone(),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Int::Small(v) => Some(*v),
            Int::Big(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Int::Small(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Int::Small(1))
    }

    /// True for +1 and -1.
    pub fn is_unit(&self) -> bool {
        matches!(self, Int::Small(1) | Int::Small(-1))
    }

    pub fn signum(&self) -> i32 {
        match self {
            Int::Small(v) => v.signum() as i32,
            Int::Big(b) => {
                if b.is_negative() {
                    -1
                } else {
                    1
                }
            }
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Int {
        match self {
            Int::Small(v) => match v.checked_abs() {
                Some(a) => Int::Small(a),
                None => Int::Big(BigInt::from(*v).abs()),
            },
            Int::Big(b) => Int::Big(b.abs()),
        }
    }

    /// Compares absolute values.
    pub fn cmp_abs(&self, other: &Int) -> Ordering {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a.unsigned_abs().cmp(&b.unsigned_abs()),
            (Int::Small(_), Int::Big(_)) => Ordering::Less,
            (Int::Big(_), Int::Small(_)) => Ordering::Greater,
            (Int::Big(a), Int::Big(b)) => a.magnitude().cmp(b.magnitude()),
        }
    }

    /// Number of bits of the absolute value; a rough size measure.
    pub fn bits(&self) -> u64 {
        match self {
            Int::Small(v) => 64 - v.unsigned_abs().leading_zeros() as u64,
            Int::Big(b) => b.bits(),
        }
    }

    /// Floor division, panics on zero divisor.
    pub fn div_floor(&self, d: &Int) -> Int {
        match (self, d) {
            (Int::Small(a), Int::Small(b)) if !(*a == i64::MIN && *b == -1) => {
                Int::Small(Integer::div_floor(a, b))
            }
            _ => Int::from_big(Integer::div_floor(&self.to_bigint(), &d.to_bigint())),
        }
    }

    /// Non-negative remainder modulo `|m|`.
    pub fn mod_floor(&self, m: &Int) -> Int {
        let m = m.abs();
        match (self, &m) {
            (Int::Small(a), Int::Small(b)) => Int::Small(a.rem_euclid(*b)),
            _ => Int::from_big(self.to_bigint().mod_floor(&m.to_bigint())),
        }
    }

    /// Representative of `self mod m` in `(-m/2, m/2]`.
    pub fn mod_symmetric(&self, m: &Int) -> Int {
        let r = self.mod_floor(m);
        let twice = &r + &r;
        if twice.cmp(&m.abs()) == Ordering::Greater {
            &r - &m.abs()
        } else {
            r
        }
    }

    /// Quotient of division rounded to the nearest integer (ties toward floor).
    /// The remainder `self - q*d` then satisfies `|r| <= |d|/2`.
    pub fn div_round(&self, d: &Int) -> Int {
        let q = self.div_floor(d);
        let r = self - &(&q * d);
        let twice = &r + &r;
        if twice.cmp_abs(d) == Ordering::Greater {
            if r.signum() == d.signum() {
                q + Int::ONE
            } else {
                q - Int::ONE
            }
        } else {
            q
        }
    }

    /// Exact division; debug-asserts divisibility.
    pub fn div_exact(&self, d: &Int) -> Int {
        debug_assert!(self.is_divisible_by(d), "{self} not divisible by {d}");
        self.div_floor(d)
    }

    pub fn is_divisible_by(&self, d: &Int) -> bool {
        if d.is_zero() {
            return self.is_zero();
        }
        self.mod_floor(d).is_zero()
    }

    /// Non-negative gcd.
    pub fn gcd(&self, other: &Int) -> Int {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => {
                let g = a.unsigned_abs().gcd(&b.unsigned_abs());
                match i64::try_from(g) {
                    Ok(v) => Int::Small(v),
                    Err(_) => Int::Big(BigInt::from(g)),
                }
            }
            _ => Int::from_big(self.to_bigint().gcd(&other.to_bigint())),
        }
    }

    /// Returns `(g, x, y)` with `g = gcd >= 0` and `x*self + y*other = g`.
    pub fn ext_gcd(&self, other: &Int) -> (Int, Int, Int) {
        let e = self.to_bigint().extended_gcd(&other.to_bigint());
        let (mut g, mut x, mut y) = (e.gcd, e.x, e.y);
        if g.is_negative() {
            g = -g;
            x = -x;
            y = -y;
        }
        (Int::from_big(g), Int::from_big(x), Int::from_big(y))
    }

    pub fn lcm(&self, other: &Int) -> Int {
        if self.is_zero() || other.is_zero() {
            return Int::ZERO;
        }
        (self * &other.div_exact(&self.gcd(other))).abs()
    }

    /// Inverse modulo `m`, if it exists.
    pub fn inv_mod(&self, m: &Int) -> Option<Int> {
        let (g, x, _) = self.ext_gcd(m);
        if g.is_one() {
            Some(x.mod_floor(m))
        } else {
            None
        }
    }

    pub fn pow(&self, e: u32) -> Int {
        let mut acc = Int::ONE;
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exponent of the prime `p` in `self`; `None` for zero.
    pub fn valuation(&self, p: u64) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let pp = Int::from(p);
        let mut v = 0;
        let mut x = self.clone();
        while x.is_divisible_by(&pp) {
            x = x.div_exact(&pp);
            v += 1;
        }
        Some(v)
    }
}

impl Default for Int {
    fn default() -> Self {
        Int::ZERO
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Self {
        Int::Small(v)
    }
}

impl From<i32> for Int {
    fn from(v: i32) -> Self {
        Int::Small(v as i64)
    }
}

impl From<u64> for Int {
    fn from(v: u64) -> Self {
        match i64::try_from(v) {
            Ok(s) => Int::Small(s),
            Err(_) => Int::Big(BigInt::from(v)),
        }
    }
}

impl From<usize> for Int {
    fn from(v: usize) -> Self {
        Int::from(v as u64)
    }
}

impl From<BigInt> for Int {
    fn from(b: BigInt) -> Self {
        Int::from_big(b)
    }
}

impl PartialOrd for Int {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Int {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a.cmp(b),
            _ => self.to_bigint().cmp(&other.to_bigint()),
        }
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Int::Small(v) => write!(f, "{v}"),
            Int::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid integer literal {0:?}")]
pub struct ParseIntError(pub String);

impl FromStr for Int {
    type Err = ParseIntError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if let Ok(v) = t.parse::<i64>() {
            return Ok(Int::Small(v));
        }
        t.parse::<BigInt>()
            .map(Int::from_big)
            .map_err(|_| ParseIntError(s.to_string()))
    }
}

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(i64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(Int::Small(v)),
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl Neg for &Int {
    type Output = Int;
    fn neg(self) -> Int {
        match self {
            Int::Small(v) => match v.checked_neg() {
                Some(n) => Int::Small(n),
                None => Int::Big(-BigInt::from(*v)),
            },
            Int::Big(b) => Int::from_big(-b),
        }
    }
}

impl Neg for Int {
    type Output = Int;
    fn neg(self) -> Int {
        -&self
    }
}

impl Add<&Int> for &Int {
    type Output = Int;
    fn add(self, rhs: &Int) -> Int {
        match (self, rhs) {
            (Int::Small(a), Int::Small(b)) => match a.checked_add(*b) {
                Some(v) => Int::Small(v),
                None => Int::from_i128(*a as i128 + *b as i128),
            },
            _ => Int::from_big(self.to_bigint() + rhs.to_bigint()),
        }
    }
}

impl Sub<&Int> for &Int {
    type Output = Int;
    fn sub(self, rhs: &Int) -> Int {
        match (self, rhs) {
            (Int::Small(a), Int::Small(b)) => match a.checked_sub(*b) {
                Some(v) => Int::Small(v),
                None => Int::from_i128(*a as i128 - *b as i128),
            },
            _ => Int::from_big(self.to_bigint() - rhs.to_bigint()),
        }
    }
}

impl Mul<&Int> for &Int {
    type Output = Int;
    fn mul(self, rhs: &Int) -> Int {
        match (self, rhs) {
            (Int::Small(a), Int::Small(b)) => match a.checked_mul(*b) {
                Some(v) => Int::Small(v),
                None => Int::from_i128(*a as i128 * *b as i128),
            },
            (Int::Big(a), Int::Small(b)) | (Int::Small(b), Int::Big(a)) => {
                Int::from_big(a * BigInt::from(*b))
            }
            (Int::Big(a), Int::Big(b)) => Int::from_big(a * b),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $tra:ident, $ma:ident) => {
        impl $tr<Int> for Int {
            type Output = Int;
            fn $m(self, rhs: Int) -> Int {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Int> for Int {
            type Output = Int;
            fn $m(self, rhs: &Int) -> Int {
                (&self).$m(rhs)
            }
        }
        impl $tr<Int> for &Int {
            type Output = Int;
            fn $m(self, rhs: Int) -> Int {
                self.$m(&rhs)
            }
        }
        impl $tra<&Int> for Int {
            fn $ma(&mut self, rhs: &Int) {
                *self = (&*self).$m(rhs);
            }
        }
        impl $tra<Int> for Int {
            fn $ma(&mut self, rhs: Int) {
                *self = (&*self).$m(&rhs);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);

impl std::iter::Sum for Int {
    fn sum<I: Iterator<Item = Int>>(iter: I) -> Int {
        iter.fold(Int::ZERO, |a, b| a + b)
    }
}

impl<'a> std::iter::Sum<&'a Int> for Int {
    fn sum<I: Iterator<Item = &'a Int>>(iter: I) -> Int {
        iter.fold(Int::ZERO, |a, b| a + b)
    }
}

impl Zero for Int {
    fn zero() -> Self {
        Int::ZERO
    }
    fn is_zero(&self) -> bool {
        Int::is_zero(self)
    }
}

impl One for Int {
    fn one() -> Self {
        Int::ONE
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(s: &str) -> Int {
        s.parse().unwrap()
    }

    #[test]
    fn overflow_spills_and_returns() {
        let a = Int::from(i64::MAX);
        let b = &a + &Int::ONE;
        assert!(matches!(b, Int::Big(_)));
        assert_eq!(b.to_string(), "9223372036854775808");
        let c = &b - &Int::ONE;
        assert!(matches!(c, Int::Small(_)));
        assert_eq!(c, a);
        let m = Int::from(i64::MIN);
        assert_eq!((-&m).to_string(), "9223372036854775808");
        assert_eq!(m.abs().to_string(), "9223372036854775808");
    }

    #[test]
    fn products_agree_with_bigint() {
        let x = big("123456789012345678901234567890");
        let y = Int::from(-987654321i64);
        let expect = x.to_bigint() * y.to_bigint();
        assert_eq!((&x * &y).to_bigint(), expect);
        assert_eq!((&y * &x).to_bigint(), expect);
    }

    #[test]
    fn floor_and_round_division() {
        let a = Int::from(-7);
        let b = Int::from(2);
        assert_eq!(a.div_floor(&b), Int::from(-4));
        assert_eq!(a.mod_floor(&b), Int::from(1));
        let q = a.div_round(&b);
        let r = &a - &(&q * &b);
        assert!(Int::from(2) * r.abs() <= b.abs());
        assert_eq!(Int::from(7).mod_symmetric(&Int::from(4)), Int::from(-1));
        assert_eq!(Int::from(6).mod_symmetric(&Int::from(4)), Int::from(2));
    }

    #[test]
    fn gcd_family() {
        assert_eq!(Int::from(-12).gcd(&Int::from(18)), Int::from(6));
        let (g, x, y) = Int::from(240).ext_gcd(&Int::from(46));
        assert_eq!(g, Int::from(2));
        assert_eq!(Int::from(240) * x + Int::from(46) * y, g);
        assert_eq!(Int::from(2).inv_mod(&Int::from(3)), Some(Int::from(2)));
        assert_eq!(Int::from(2).inv_mod(&Int::from(4)), None);
        assert_eq!(Int::from(4).lcm(&Int::from(6)), Int::from(12));
        assert_eq!(Int::from(48).valuation(2), Some(4));
        assert_eq!(Int::ZERO.valuation(2), None);
    }

    #[test]
    fn decimal_text_roundtrip() {
        let x = big("-340282366920938463463374607431768211457");
        assert_eq!(x.to_string().parse::<Int>().unwrap(), x);
        assert!("12a".parse::<Int>().is_err());
    }
}
