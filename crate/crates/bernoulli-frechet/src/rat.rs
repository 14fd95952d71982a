//! Exact rational scalars.
//!
//! Everything in this crate is computed over the rationals: margins, pmf
//! masses, matrix entries, polynomial coefficients. `Rat` is a thin newtype
//! over [`num::BigRational`] that fixes the textual form used everywhere
//! (`"3/10"`, `"-1/2"`, integers without a denominator) and keeps the
//! arithmetic surface small. Values are always stored in lowest terms with a
//! positive denominator; that is guaranteed by `BigRational` itself.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::bigint::{BigInt, BigUint, Sign};
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An arbitrary-precision rational number in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    /// Builds `n / d`. Panics if `d == 0`; use [`Rat::from_str`] for data
    /// that has not been validated yet.
    pub fn new(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rat(BigRational::from_integer(n))
    }

    pub fn from_biguint(n: BigUint) -> Self {
        Rat(BigRational::from_integer(BigInt::from_biguint(Sign::Plus, n)))
    }

    pub fn from_ratio(n: BigInt, d: BigInt) -> Self {
        assert!(!d.is_zero(), "zero denominator");
        Rat(BigRational::new(n, d))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Rat> {
        if self.is_zero() {
            None
        } else {
            Some(Rat(self.0.recip()))
        }
    }

    /// Largest integer `<= self`.
    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Smallest integer `>= self`.
    pub fn ceil_int(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn min(self, other: Rat) -> Rat {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Rat) -> Rat {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Approximate `f64` value; used only for human-facing summaries, never
    /// for decisions inside the algorithms.
    pub fn to_f64(&self) -> f64 {
        let n = self.0.numer();
        let d = self.0.denom();
        // Good enough for display: fall back to a digit-string parse when the
        // parts overflow i128.
        match (i128::try_from(n), i128::try_from(d)) {
            (Ok(n), Ok(d)) => n as f64 / d as f64,
            _ => {
                let n: f64 = n.to_string().parse().unwrap_or(f64::NAN);
                let d: f64 = d.to_string().parse().unwrap_or(f64::NAN);
                n / d
            }
        }
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty rational literal".into()));
        }
        let (num_str, den_str) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s, None),
        };
        let numer: BigInt = num_str
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational literal `{s}`")))?;
        let denom: BigInt = match den_str {
            Some(d) => d
                .parse()
                .map_err(|_| Error::Parse(format!("bad rational literal `{s}`")))?,
            None => BigInt::one(),
        };
        if denom.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        Ok(Rat(BigRational::new(numer, denom)))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((self.0).$method(rhs.0))
            }
        }
        impl $trait for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(self.0 / rhs.0)
    }
}

impl Div for &Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(&self.0 / &rhs.0)
    }
}

impl Div<&Rat> for Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(self.0 / &rhs.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl SubAssign for Rat {
    fn sub_assign(&mut self, rhs: Rat) {
        self.0 -= rhs.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_display() {
        assert_eq!(Rat::new(6, 10).to_string(), "3/5");
        assert_eq!(Rat::new(-6, 10).to_string(), "-3/5");
        assert_eq!(Rat::new(6, -10).to_string(), "-3/5");
        assert_eq!(Rat::new(8, 4).to_string(), "2");
        assert_eq!(Rat::zero().to_string(), "0");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["3/10", "-1/2", "2", "0", "-7", "22/7"] {
            let r: Rat = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        // Non-canonical input normalizes.
        let r: Rat = "4/6".parse().unwrap();
        assert_eq!(r.to_string(), "2/3");
        let r: Rat = " -4/ 6 ".parse().unwrap();
        assert_eq!(r.to_string(), "-2/3");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(Rat::from_str("").is_err());
        assert!(Rat::from_str("1/0").is_err());
        assert!(Rat::from_str("a/b").is_err());
        assert!(Rat::from_str("1.5").is_err());
        assert!(Rat::from_str("1/2/3").is_err());
    }

    #[test]
    fn arithmetic() {
        let a = Rat::new(2, 5);
        let b = Rat::new(1, 3);
        assert_eq!(&a + &b, Rat::new(11, 15));
        assert_eq!(&a - &b, Rat::new(1, 15));
        assert_eq!(&a * &b, Rat::new(2, 15));
        assert_eq!(&a / &b, Rat::new(6, 5));
        assert_eq!(-&a, Rat::new(-2, 5));
        assert_eq!(a.recip().unwrap(), Rat::new(5, 2));
        assert!(Rat::zero().recip().is_none());
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(Rat::new(12, 5).floor_int(), BigInt::from(2));
        assert_eq!(Rat::new(12, 5).ceil_int(), BigInt::from(3));
        assert_eq!(Rat::new(-12, 5).floor_int(), BigInt::from(-3));
        assert_eq!(Rat::new(10, 5).floor_int(), BigInt::from(2));
        assert_eq!(Rat::new(10, 5).ceil_int(), BigInt::from(2));
    }

    #[test]
    fn ordering() {
        assert!(Rat::new(1, 3) < Rat::new(2, 5));
        assert!(Rat::new(-1, 2) < Rat::zero());
        assert_eq!(
            Rat::new(1, 2).max(Rat::new(2, 3)),
            Rat::new(2, 3)
        );
    }
}
