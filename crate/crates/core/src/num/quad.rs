//! Exact arithmetic in the quadratic field Q(√2).
//!
//! A value is stored as the pair `(a, b)` denoting `a + b·√2`. Because √2 is
//! irrational the pair is unique, so structural equality is numeric equality.
//! Ordering never touches floating point: the sign of `a + b·√2` is read off
//! the signs of `a` and `b`, and when they disagree from `a² - 2b²`.

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::One;

use super::Rational;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QuadRat {
    a: Rational,
    b: Rational,
}

impl QuadRat {
    pub fn new(a: Rational, b: Rational) -> QuadRat {
        QuadRat { a, b }
    }

    pub fn rational(a: Rational) -> QuadRat {
        QuadRat { a, b: Rational::zero() }
    }

    pub fn int(n: i64) -> QuadRat {
        QuadRat::rational(Rational::integer(n))
    }

    pub fn ratio(n: i64, d: i64) -> QuadRat {
        QuadRat::rational(Rational::new(n, d))
    }

    pub fn sqrt2() -> QuadRat {
        QuadRat { a: Rational::zero(), b: Rational::one() }
    }

    pub fn zero() -> QuadRat {
        QuadRat::default()
    }

    pub fn one() -> QuadRat {
        QuadRat::int(1)
    }

    /// Rational part.
    pub fn a(&self) -> &Rational {
        &self.a
    }

    /// Coefficient of √2.
    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact sign of `a + b√2`.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.signum();
        let sb = self.b.signum();
        match (sa, sb) {
            (s, Ordering::Equal) => s,
            (Ordering::Equal, s) => s,
            (x, y) if x == y => x,
            // signs disagree: compare a² with 2b²
            (sa, _) => {
                let a2 = self.a.square();
                let b2 = self.b.square() * Rational::integer(2);
                match a2.cmp(&b2) {
                    Ordering::Greater => sa,
                    Ordering::Less => sa.reverse(),
                    // a² = 2b² with b ≠ 0 would make √2 rational
                    Ordering::Equal => unreachable!("a^2 = 2 b^2 has no rational solution"),
                }
            }
        }
    }

    /// Algebraic conjugate `a - b√2`.
    pub fn conjugate(&self) -> QuadRat {
        QuadRat { a: self.a.clone(), b: -&self.b }
    }

    /// Field norm `a² - 2b²`.
    pub fn norm(&self) -> Rational {
        self.a.square() - self.b.square() * Rational::integer(2)
    }

    pub fn recip(&self) -> QuadRat {
        assert!(!self.is_zero(), "reciprocal of zero");
        let n = self.norm();
        QuadRat { a: &self.a / &n, b: -(&self.b / &n) }
    }

    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.a.floor();
        }
        // Bracket √2 between consecutive Pell convergents until both ends floor alike.
        let (mut p, mut q) = (BigInt::one(), BigInt::one());
        loop {
            let lo = Rational::from_bigints(p.clone(), q.clone()).unwrap();
            let (p2, q2) = (&p + &q * BigInt::from(2), &p + &q);
            let hi = Rational::from_bigints(p2.clone(), q2.clone()).unwrap();
            let (lo, hi) = if lo < hi { (lo, hi) } else { (hi, lo) };
            let e1 = &self.a + &(&self.b * &lo);
            let e2 = &self.a + &(&self.b * &hi);
            let (f1, f2) = (e1.floor(), e2.floor());
            if f1 == f2 {
                return f1;
            }
            p = p2;
            q = q2;
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * core::f64::consts::SQRT_2
    }

    pub fn abs(&self) -> QuadRat {
        if self.signum() == Ordering::Less {
            -self
        } else {
            self.clone()
        }
    }
}

impl QuadRat {
    /// Parse a literal at the start of `s`, returning the value and the number
    /// of bytes consumed. Accepted forms: `p`, `p/q`, `d.ddd`, `sqrt2`,
    /// `r*sqrt2`, `p/q + r/s*sqrt2`, `p - sqrt2`.
    pub fn parse_prefix(s: &str) -> Option<(QuadRat, usize)> {
        let b = s.as_bytes();
        let mut i = skip_ws(b, 0);
        let mut neg = false;
        if i < b.len() && b[i] == b'-' {
            neg = true;
            i = skip_ws(b, i + 1);
        }
        let signed = |r: Rational, n: bool| if n { -r } else { r };
        if b[i..].starts_with(b"sqrt2") {
            let v = QuadRat::new(Rational::zero(), signed(Rational::one(), neg));
            return Some((v, i + 5));
        }
        let (n, j) = parse_number(b, i)?;
        let k = skip_ws(b, j);
        if k < b.len() && b[k] == b'*' {
            let k2 = skip_ws(b, k + 1);
            if b[k2..].starts_with(b"sqrt2") {
                return Some((QuadRat::new(Rational::zero(), signed(n, neg)), k2 + 5));
            }
            return None;
        }
        let a = signed(n, neg);
        // optional irrational part
        if k < b.len() && (b[k] == b'+' || b[k] == b'-') && !b[k..].starts_with(b"->") {
            let minus = b[k] == b'-';
            let m = skip_ws(b, k + 1);
            if b[m..].starts_with(b"sqrt2") {
                let c = signed(Rational::one(), minus);
                return Some((QuadRat::new(a, c), m + 5));
            }
            if let Some((c, m2)) = parse_number(b, m) {
                let m3 = skip_ws(b, m2);
                if m3 < b.len() && b[m3] == b'*' {
                    let m4 = skip_ws(b, m3 + 1);
                    if b[m4..].starts_with(b"sqrt2") {
                        return Some((QuadRat::new(a, signed(c, minus)), m4 + 5));
                    }
                }
            }
        }
        Some((QuadRat::rational(a), j))
    }
}

fn skip_ws(b: &[u8], mut i: usize) -> usize {
    while i < b.len() && b[i].is_ascii_whitespace() {
        i += 1;
    }
    i
}

fn digits(b: &[u8], mut i: usize) -> usize {
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    i
}

/// Unsigned `p`, `p/q` or `d.ddd` at byte `i`.
fn parse_number(b: &[u8], i: usize) -> Option<(Rational, usize)> {
    let j = digits(b, i);
    if j == i {
        return None;
    }
    let int = core::str::from_utf8(&b[i..j]).ok()?;
    if j < b.len() && b[j] == b'/' {
        let k = digits(b, j + 1);
        if k > j + 1 {
            let den = core::str::from_utf8(&b[j + 1..k]).ok()?;
            let r = Rational::from_bigints(int.parse().ok()?, den.parse().ok()?).ok()?;
            return Some((r, k));
        }
        return None;
    }
    if j < b.len() && b[j] == b'.' {
        let k = digits(b, j + 1);
        if k > j + 1 {
            let frac = core::str::from_utf8(&b[j + 1..k]).ok()?;
            let mut den = BigInt::one();
            for _ in 0..frac.len() {
                den *= 10;
            }
            let num: BigInt = int.parse::<BigInt>().ok()? * &den + frac.parse::<BigInt>().ok()?;
            return Some((Rational::from_bigints(num, den).ok()?, k));
        }
    }
    Some((Rational::from_bigint(int.parse().ok()?), j))
}

impl core::str::FromStr for QuadRat {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match QuadRat::parse_prefix(s) {
            Some((v, n)) if s[n..].trim().is_empty() => Ok(v),
            _ => Err(crate::error::Error::Literal(alloc::format!("not a number literal: {s:?}"))),
        }
    }
}

impl Ord for QuadRat {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl PartialOrd for QuadRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Rational> for QuadRat {
    fn from(a: Rational) -> Self {
        QuadRat::rational(a)
    }
}

impl fmt::Display for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let coeff = |f: &mut fmt::Formatter<'_>, c: &Rational| {
            if *c == Rational::one() {
                write!(f, "sqrt2")
            } else {
                write!(f, "{c}*sqrt2")
            }
        };
        if self.a.is_zero() {
            if self.b == -Rational::one() {
                return write!(f, "-sqrt2");
            }
            return coeff(f, &self.b);
        }
        write!(f, "{}", self.a)?;
        if self.b.signum() == Ordering::Less {
            write!(f, " - ")?;
            coeff(f, &-&self.b)
        } else {
            write!(f, " + ")?;
            coeff(f, &self.b)
        }
    }
}

impl fmt::Debug for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> Add<&'a QuadRat> for &'a QuadRat {
    type Output = QuadRat;
    fn add(self, rhs: &'a QuadRat) -> QuadRat {
        QuadRat { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl<'a> Sub<&'a QuadRat> for &'a QuadRat {
    type Output = QuadRat;
    fn sub(self, rhs: &'a QuadRat) -> QuadRat {
        QuadRat { a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl<'a> Mul<&'a QuadRat> for &'a QuadRat {
    type Output = QuadRat;
    fn mul(self, rhs: &'a QuadRat) -> QuadRat {
        let two = Rational::integer(2);
        QuadRat {
            a: &self.a * &rhs.a + &(&self.b * &rhs.b) * &two,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl<'a> Div<&'a QuadRat> for &'a QuadRat {
    type Output = QuadRat;
    fn div(self, rhs: &'a QuadRat) -> QuadRat {
        self * &rhs.recip()
    }
}

impl Add for QuadRat {
    type Output = QuadRat;
    fn add(self, rhs: QuadRat) -> QuadRat {
        &self + &rhs
    }
}

impl Sub for QuadRat {
    type Output = QuadRat;
    fn sub(self, rhs: QuadRat) -> QuadRat {
        &self - &rhs
    }
}

impl Mul for QuadRat {
    type Output = QuadRat;
    fn mul(self, rhs: QuadRat) -> QuadRat {
        &self * &rhs
    }
}

impl Div for QuadRat {
    type Output = QuadRat;
    fn div(self, rhs: QuadRat) -> QuadRat {
        &self / &rhs
    }
}

impl Neg for QuadRat {
    type Output = QuadRat;
    fn neg(self) -> QuadRat {
        QuadRat { a: -self.a, b: -self.b }
    }
}

impl Neg for &QuadRat {
    type Output = QuadRat;
    fn neg(self) -> QuadRat {
        QuadRat { a: -&self.a, b: -&self.b }
    }
}

/// The rational with the smallest denominator (then smallest magnitude)
/// strictly inside the open interval `(lo, hi)`; `None` stands for an
/// infinite end. Panics when the interval is empty.
pub fn simplest_between(lo: Option<&QuadRat>, hi: Option<&QuadRat>) -> Rational {
    match (lo, hi) {
        (None, None) => Rational::zero(),
        (None, Some(h)) => {
            if h.signum() == Ordering::Greater {
                Rational::zero()
            } else {
                // largest integer strictly below h
                let f = h.floor();
                let f = Rational::from_bigint(f);
                if QuadRat::from(f.clone()) == *h {
                    f - Rational::one()
                } else {
                    f
                }
            }
        }
        (Some(l), None) => {
            if l.signum() == Ordering::Less {
                Rational::zero()
            } else {
                Rational::from_bigint(l.floor() + BigInt::one())
            }
        }
        (Some(l), Some(h)) => {
            assert!(l < h, "empty interval ({l}, {h})");
            if l.signum() == Ordering::Less && h.signum() == Ordering::Greater {
                return Rational::zero();
            }
            if h.signum() != Ordering::Greater {
                return -simplest_between(Some(&-h), Some(&-l));
            }
            let f = l.floor();
            let next = Rational::from_bigint(&f + BigInt::one());
            if QuadRat::from(next.clone()) < *h {
                return next;
            }
            let fq = QuadRat::from(Rational::from_bigint(f.clone()));
            let lf = l - &fq;
            let hf = h - &fq;
            let lower = hf.recip();
            let upper = (!lf.is_zero()).then(|| lf.recip());
            let y = simplest_between(Some(&lower), upper.as_ref());
            Rational::from_bigint(f) + y.recip()
        }
    }
}

/// `k` strictly increasing simplest rationals inside `(lo, hi)`.
pub fn simplest_run(lo: Option<&QuadRat>, hi: Option<&QuadRat>, k: usize) -> alloc::vec::Vec<Rational> {
    let mut out = alloc::vec::Vec::with_capacity(k);
    let mut cur = lo.cloned();
    for _ in 0..k {
        let r = simplest_between(cur.as_ref(), hi);
        cur = Some(QuadRat::from(r.clone()));
        out.push(r);
    }
    out
}

/// The dyadic rational with the least power-of-two denominator strictly
/// inside the bounded open interval `(lo, hi)`.
pub fn simplest_dyadic_between(lo: &QuadRat, hi: &QuadRat) -> Rational {
    assert!(lo < hi, "empty interval");
    let mut scale = BigInt::one();
    loop {
        let s = QuadRat::from(Rational::from_bigint(scale.clone()));
        let k = (lo * &s).floor() + BigInt::one();
        let cand = Rational::from_bigints(k, scale.clone()).unwrap();
        if QuadRat::from(cand.clone()) < *hi {
            return cand;
        }
        scale *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn q(a: i64, b: i64) -> QuadRat {
        QuadRat::new(Rational::integer(a), Rational::integer(b))
    }

    #[test]
    fn sign_test_against_float() {
        for a in -7..=7 {
            for b in -7..=7 {
                let x = q(a, b);
                let f = a as f64 + b as f64 * core::f64::consts::SQRT_2;
                let expect = if f > 0.0 {
                    Ordering::Greater
                } else if f < 0.0 {
                    Ordering::Less
                } else {
                    Ordering::Equal
                };
                assert_eq!(x.signum(), expect, "{a} + {b} sqrt2");
            }
        }
    }

    #[test]
    fn one_plus_sqrt2_below_five_halves() {
        // (1 + √2) - 5/2 = -3/2 + √2, and √2 < 3/2
        assert!(q(1, 1) < QuadRat::ratio(5, 2));
    }

    #[test]
    fn field_ops() {
        let x = q(1, 1);
        let y = &x * &x.recip();
        assert_eq!(y, QuadRat::one());
        assert_eq!(&QuadRat::sqrt2() * &QuadRat::sqrt2(), QuadRat::int(2));
        assert_eq!((&x / &q(0, 1)), QuadRat::new(Rational::one(), Rational::new(1, 2)));
    }

    #[test]
    fn floor_values() {
        assert_eq!(QuadRat::sqrt2().floor(), BigInt::from(1));
        assert_eq!((-QuadRat::sqrt2()).floor(), BigInt::from(-2));
        assert_eq!(q(3, 5).floor(), BigInt::from(10)); // 3 + 7.07..
        assert_eq!(QuadRat::ratio(-5, 2).floor(), BigInt::from(-3));
    }

    #[test]
    fn simplest_rationals() {
        let r = |n, d| QuadRat::ratio(n, d);
        assert_eq!(simplest_between(None, None), Rational::zero());
        assert_eq!(simplest_between(Some(&r(0, 1)), Some(&r(1, 1))), Rational::new(1, 2));
        assert_eq!(simplest_between(Some(&r(0, 1)), Some(&r(5, 2))), Rational::one());
        assert_eq!(simplest_between(Some(&r(0, 1)), None), Rational::one());
        assert_eq!(simplest_between(None, Some(&r(-3, 1))), Rational::integer(-4));
        assert_eq!(simplest_between(Some(&r(1, 3)), Some(&r(1, 2))), Rational::new(2, 5));
        let s = simplest_between(Some(&QuadRat::sqrt2()), Some(&r(3, 2)));
        assert!(QuadRat::from(s.clone()) > QuadRat::sqrt2() && s < Rational::new(3, 2));
        assert_eq!(s, Rational::new(10, 7));
        let t = simplest_between(Some(&r(-2, 1)), Some(&-QuadRat::sqrt2()));
        assert_eq!(t, Rational::new(-3, 2));
    }

    #[test]
    fn literal_round_trip() {
        for text in ["5/2", "-1", "sqrt2", "-sqrt2", "1 + sqrt2", "1/2 - 3/4*sqrt2", "2*sqrt2"] {
            let v: QuadRat = text.parse().unwrap();
            let back: QuadRat = v.to_string().parse().unwrap();
            assert_eq!(v, back, "{text}");
        }
        assert_eq!("2.7".parse::<QuadRat>().unwrap(), QuadRat::ratio(27, 10));
        assert_eq!(QuadRat::parse_prefix("5/2 -> x").unwrap().1, 3);
        assert!("1/0".parse::<QuadRat>().is_err());
    }

    #[test]
    fn dyadic_search() {
        let d = simplest_dyadic_between(&QuadRat::ratio(1, 3), &QuadRat::ratio(2, 5));
        assert_eq!(d, Rational::new(3, 8));
        assert!(d.is_dyadic());
    }
}
