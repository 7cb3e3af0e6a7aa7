use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use malachite_base::num::arithmetic::traits::{Abs, Pow, Reciprocal};
use malachite_base::num::basic::traits::{One, Zero};
use malachite_nz::integer::Integer;
use malachite_nz::natural::Natural;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational number, always reduced with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(pub(crate) malachite_q::Rational);

impl Rational {
    pub const ZERO: Rational = Rational(malachite_q::Rational::ZERO);

    pub fn zero() -> Self {
        Rational(malachite_q::Rational::ZERO)
    }

    pub fn one() -> Self {
        Rational(malachite_q::Rational::ONE)
    }

    pub fn from_int(n: i64) -> Self {
        Rational(malachite_q::Rational::from(n))
    }

    /// `num/den`; panics when `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(malachite_q::Rational::from_signeds(num, den))
    }

    pub fn from_integer(n: Integer) -> Self {
        Rational(malachite_q::Rational::from(n))
    }

    pub fn from_integers(num: Integer, den: Integer) -> Self {
        assert!(den != 0u32, "zero denominator");
        Rational(malachite_q::Rational::from_integers(num, den))
    }

    pub fn is_zero(&self) -> bool {
        self.0 == 0u32
    }

    pub fn is_one(&self) -> bool {
        self.0 == 1u32
    }

    pub fn is_integer(&self) -> bool {
        *self.0.denominator_ref() == 1u32
    }

    pub fn signum(&self) -> i32 {
        match self.0.partial_cmp(&0u32) {
            Some(Ordering::Less) => -1,
            Some(Ordering::Greater) => 1,
            _ => 0,
        }
    }

    /// Signed numerator.
    pub fn numer(&self) -> Integer {
        let n = Integer::from(self.0.numerator_ref().clone());
        if self.signum() < 0 {
            -n
        } else {
            n
        }
    }

    pub fn denom(&self) -> Integer {
        Integer::from(self.0.denominator_ref().clone())
    }

    pub fn denom_natural(&self) -> &Natural {
        self.0.denominator_ref()
    }

    pub fn numer_natural(&self) -> &Natural {
        self.0.numerator_ref()
    }

    pub fn abs(&self) -> Self {
        Rational((&self.0).abs())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rational((&self.0).reciprocal())
    }

    pub fn pow(&self, e: i64) -> Self {
        if e >= 0 {
            Rational((&self.0).pow(e as u64))
        } else {
            self.recip().pow(-e)
        }
    }

    /// Integer value when the denominator is one.
    pub fn to_integer(&self) -> Option<Integer> {
        if self.is_integer() {
            Some(self.numer())
        } else {
            None
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.to_integer().and_then(|i| i64::try_from(&i).ok())
    }

    pub fn mul_int(&self, k: i64) -> Self {
        Rational(&self.0 * malachite_q::Rational::from(k))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(pub String);

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || ParseRationalError(s.to_string());
        match t.split_once('/') {
            None => Integer::from_str(t).map(Rational::from_integer).map_err(|_| bad()),
            Some((a, b)) => {
                let num = Integer::from_str(a.trim()).map_err(|_| bad())?;
                let den = Integer::from_str(b.trim()).map_err(|_| bad())?;
                if den == 0u32 {
                    return Err(bad());
                }
                Ok(Rational::from_integers(num, den))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl From<Integer> for Rational {
    fn from(n: Integer) -> Self {
        Rational::from_integer(n)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, o: Rational) -> Rational {
                Rational($tr::$m(self.0, o.0))
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $m(self, o: &'a Rational) -> Rational {
                Rational($tr::$m(self.0, &o.0))
            }
        }
        impl<'a> $tr<Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, o: Rational) -> Rational {
                Rational($tr::$m(&self.0, o.0))
            }
        }
        impl<'a, 'b> $tr<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, o: &'b Rational) -> Rational {
                Rational($tr::$m(&self.0, &o.0))
            }
        }
        impl $atr<Rational> for Rational {
            fn $am(&mut self, o: Rational) {
                $atr::$am(&mut self.0, o.0)
            }
        }
        impl<'a> $atr<&'a Rational> for Rational {
            fn $am(&mut self, o: &'a Rational) {
                $atr::$am(&mut self.0, &o.0)
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);
binop!(Div, div, DivAssign, div_assign);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(it: I) -> Rational {
        it.fold(Rational::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(it: I) -> Rational {
        it.fold(Rational::zero(), |a, b| a + b)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(it: I) -> Rational {
        it.fold(Rational::one(), |a, b| a * b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_on_construction() {
        let r = Rational::new(6, -4);
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(r.numer(), Integer::from(-3));
        assert_eq!(r.denom(), Integer::from(2));
        assert_eq!(Rational::new(0, -7).to_string(), "0");
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["0", "1", "-5", "1431/2", "-26746/3"] {
            let r: Rational = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert_eq!("4/6".parse::<Rational>().unwrap().to_string(), "2/3");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn json_is_string() {
        let r = Rational::new(64373, 2);
        let j = serde_json::to_string(&r).unwrap();
        assert_eq!(j, "\"64373/2\"");
        let back: Rational = serde_json::from_str(&j).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn arithmetic() {
        let a = Rational::new(1, 2);
        let b = Rational::new(1, 3);
        assert_eq!(&a + &b, Rational::new(5, 6));
        assert_eq!(&a - &b, Rational::new(1, 6));
        assert_eq!(&a * &b, Rational::new(1, 6));
        assert_eq!(&a / &b, Rational::new(3, 2));
        assert_eq!(a.pow(-2), Rational::from_int(4));
        assert_eq!(b.recip(), Rational::from_int(3));
    }
}
