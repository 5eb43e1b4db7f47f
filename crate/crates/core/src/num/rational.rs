use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// An exact rational number, always in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Rational {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Result<Rational, Error> {
        if denom.is_zero() {
            return Err(Error::Literal("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }

    pub fn integer(n: i64) -> Rational {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Rational {
        Rational(BigRational::from_integer(n))
    }

    pub fn zero() -> Rational {
        Rational(BigRational::zero())
    }

    pub fn one() -> Rational {
        Rational(BigRational::one())
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

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn signum(&self) -> Ordering {
        self.0.numer().sign_ordering()
    }

    pub fn abs(&self) -> Rational {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Rational {
        Rational(self.0.recip())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn square(&self) -> Rational {
        Rational(&self.0 * &self.0)
    }

    /// `true` when the value is `k / 2^d` for integers `k`, `d`.
    pub fn is_dyadic(&self) -> bool {
        let d = self.denom();
        let one = BigInt::one();
        // a power of two has exactly one bit set
        (d & (d - &one)).is_zero()
    }

    /// `true` when the value is `±2^k` for some integer `k`.
    pub fn is_power_of_two(&self) -> bool {
        let one = BigInt::one();
        let n = self.numer().abs();
        let d = self.denom();
        !n.is_zero() && (&n & (&n - &one)).is_zero() && (d & (d - &one)).is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    /// Midpoint of two values.
    pub fn midpoint(&self, other: &Rational) -> Rational {
        (self + other) / &Rational::integer(2)
    }

    pub fn gcd_coprime(numer: &BigInt, denom: &BigInt) -> bool {
        numer.gcd(denom).is_one()
    }
}

trait SignOrdering {
    fn sign_ordering(&self) -> Ordering;
}

impl SignOrdering for BigInt {
    fn sign_ordering(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p` or `p/q` with optional leading sign.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || Error::Literal(alloc::format!("not a rational literal: {s:?}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_negative() {
            return Err(bad());
        }
        Rational::from_bigints(n, d)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(&self.0 $op &rhs.0)
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0 $op &rhs.0)
            }
        }
    };
}

forward_binop!(Add, add, +);
forward_binop!(Sub, sub, -);
forward_binop!(Mul, mul, *);
forward_binop!(Div, div, /);

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

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn lowest_terms_and_display() {
        assert_eq!(Rational::new(10, 4).to_string(), "5/2");
        assert_eq!(Rational::new(-6, -3).to_string(), "2");
        assert_eq!(Rational::new(3, -6).to_string(), "-1/2");
    }

    #[test]
    fn parse() {
        assert_eq!("5/2".parse::<Rational>().unwrap(), Rational::new(5, 2));
        assert_eq!("-27/10".parse::<Rational>().unwrap(), Rational::new(-27, 10));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn comparison_is_exact() {
        assert!(Rational::new(1, 2) < Rational::new(3, 4));
        assert!(Rational::new(27, 10) > Rational::new(5, 2));
    }

    #[test]
    fn dyadic_and_power_of_two() {
        assert!(Rational::new(3, 8).is_dyadic());
        assert!(!Rational::new(1, 3).is_dyadic());
        assert!(Rational::new(1, 4).is_power_of_two());
        assert!(Rational::new(-8, 1).is_power_of_two());
        assert!(!Rational::new(3, 4).is_power_of_two());
    }
}
