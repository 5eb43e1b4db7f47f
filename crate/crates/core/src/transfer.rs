//! Countable covers of atom structures: scenarios pairing a structure with an
//! enumerated countable subset `B = {j(0), j(1), ...}` of its carrier, and
//! sampling checks of the three cover conditions:
//!
//! * (a) `j` is a total injection onto `B`;
//! * (b) tuples of `B` with the same type are related by an automorphism
//!   mapping `B` onto itself;
//! * (c) for finite `S ⊆ B` and finite `S′` of the carrier, some automorphism
//!   fixing `S` pointwise moves `S′` into `B`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng as _;

use crate::atoms::{Atom, Field, Part, Point, StructureSpec, TypePattern};
use crate::autos::{absorb_into, extend_partial, restrict_witness, Absorption, AutoKind, Automorphism, PwLinear, Region};
use crate::defsets::{mutual_symmetry, DefSet, SymmetryReport};
use crate::error::{Error, Result};
use crate::num::{simplest_dyadic_between, QuadRat, Rational};
use crate::sample::{self, Rng};

/// Largest height searched when inverting the enumeration of Q.
const MAX_HEIGHT: u64 = 1 << 20;

/// The enumerated countable subset of a scenario's carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SmallSet {
    /// The rationals of a dense order, by height `|p| + q`, then denominator,
    /// positive before negative: `0, 1, -1, 2, -2, 1/2, -1/2, ...`.
    Rationals,
    /// Every equality atom: `j(n) = a<n>`.
    AllAtoms,
    /// The dyadic rationals in the closed interval `[0, 1]`: `0, 1, 1/2, 1/4,
    /// 3/4, 1/8, ...`.
    Dyadic01,
    /// The ⋆-point of a point part.
    Point,
    /// One component per part of an ordered sum. ⋆-points come first, then
    /// the dense parts in turn.
    Sum(Vec<SmallSet>),
}

fn totient(mut n: u64) -> u64 {
    let mut out = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn rational_j(n: u64) -> Rational {
    if n == 0 {
        return Rational::zero();
    }
    let mut rest = n - 1;
    let mut h = 2;
    loop {
        let c = 2 * totient(h);
        if rest < c {
            break;
        }
        rest -= c;
        h += 1;
    }
    let (idx, neg) = (rest / 2, rest % 2 == 1);
    let q = (1..h).filter(|&q| gcd(h, q) == 1).nth(idx as usize).unwrap();
    let r = Rational::new((h - q) as i64, q as i64);
    if neg {
        -r
    } else {
        r
    }
}

fn rational_index(r: &Rational) -> Option<u64> {
    if r.is_zero() {
        return Some(0);
    }
    let p = r.numer().to_i64()?.unsigned_abs();
    let q = r.denom().to_u64()?;
    let h = p.checked_add(q)?;
    if h > MAX_HEIGHT {
        return None;
    }
    // totients below h by sieve
    let mut phi: Vec<u64> = (0..h).collect();
    for k in 2..h as usize {
        if phi[k] == k as u64 {
            for m in (k..h as usize).step_by(k) {
                phi[m] -= phi[m] / k as u64;
            }
        }
    }
    let offset: u64 = 1 + phi.iter().skip(2).map(|f| 2 * f).sum::<u64>();
    let rank = (1..q).filter(|&k| gcd(h, k) == 1).count() as u64;
    Some(offset + 2 * rank + u64::from(r.signum() == core::cmp::Ordering::Less))
}

fn dyadic_j(n: u64) -> Rational {
    match n {
        0 => Rational::zero(),
        1 => Rational::one(),
        _ => {
            let d = 64 - (n - 1).leading_zeros() as u64;
            let half = 1u64 << (d - 1);
            let k = 2 * (n - half) - 1;
            Rational::from_bigints(BigInt::from(k), BigInt::from(1u64) << d as usize).unwrap()
        }
    }
}

fn dyadic_index(r: &Rational) -> Option<u64> {
    if r.is_zero() {
        return Some(0);
    }
    if *r == Rational::one() {
        return Some(1);
    }
    if r.signum() != core::cmp::Ordering::Greater || r > &Rational::one() || !r.is_dyadic() {
        return None;
    }
    let k = r.numer().to_u64()?;
    let d = r.denom().to_u64()?.trailing_zeros() as u64;
    if d == 0 || d > 62 {
        return None;
    }
    Some((1u64 << (d - 1)) + k.div_ceil(2))
}

fn rational_of(a: &Atom) -> Option<&Rational> {
    a.as_value()?.as_rational()
}

/// How many points of `B` lie strictly between two values: `None` for
/// infinitely many.
fn dyadic_count(lo: Option<&QuadRat>, hi: Option<&QuadRat>) -> Option<usize> {
    let zero = QuadRat::zero();
    let one = QuadRat::one();
    let l = match lo {
        Some(l) if *l > zero => l.clone(),
        _ => zero.clone(),
    };
    let h = match hi {
        Some(h) if *h < one => h.clone(),
        _ => one.clone(),
    };
    if l < h {
        return None;
    }
    let inside = |v: &QuadRat| lo.is_none_or(|l| l < v) && hi.is_none_or(|h| v < h);
    Some(usize::from(inside(&zero)) + usize::from(inside(&one)))
}

impl fmt::Display for SmallSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SmallSet::Rationals => f.write_str("rationals"),
            SmallSet::AllAtoms => f.write_str("all"),
            SmallSet::Dyadic01 => f.write_str("dyadic01"),
            SmallSet::Point => f.write_str("star"),
            SmallSet::Sum(parts) => {
                let items: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "sum({})", items.join(", "))
            }
        }
    }
}

impl core::str::FromStr for SmallSet {
    type Err = Error;

    /// Enumeration rules: `rationals`, `all`, `dyadic01`, `star`, and
    /// `sum(r1, r2, ...)` with one rule per part.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Ok(match s {
            "rationals" => SmallSet::Rationals,
            "all" => SmallSet::AllAtoms,
            "dyadic01" => SmallSet::Dyadic01,
            "star" => SmallSet::Point,
            _ => {
                let body = s
                    .strip_prefix("sum(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Error::Literal(format!("unknown enumeration rule {s:?}")))?;
                SmallSet::Sum(crate::atoms::split_top_level(body).into_iter().map(str::parse).collect::<Result<_>>()?)
            }
        })
    }
}

/// A verdict on a request for a `B`-preserving automorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Setwise {
    Map(Automorphism),
    /// No automorphism preserving `B` can do it, for the stated reason.
    Impossible(String),
}

impl SmallSet {
    fn sum_layout(parts: &[SmallSet]) -> (Vec<usize>, Vec<usize>) {
        let points = (0..parts.len()).filter(|&k| parts[k] == SmallSet::Point).collect();
        let dense = (0..parts.len()).filter(|&k| parts[k] != SmallSet::Point).collect();
        (points, dense)
    }

    /// The `n`-th element of `B`.
    pub fn j(&self, n: u64) -> Atom {
        match self {
            SmallSet::Rationals => Atom::rational(rational_j(n)),
            SmallSet::AllAtoms => Atom::Eq(n),
            SmallSet::Dyadic01 => Atom::rational(dyadic_j(n)),
            SmallSet::Point => panic!("a point component is enumerated by its sum"),
            SmallSet::Sum(parts) => {
                let (points, dense) = Self::sum_layout(parts);
                let p = points.len() as u64;
                if n < p {
                    return Atom::star(points[n as usize]);
                }
                let d = dense.len() as u64;
                let k = dense[((n - p) % d) as usize];
                Atom::in_part(k, parts[k].j((n - p) / d))
            }
        }
    }

    /// `j⁻¹(a)`, or `None` when `a` is not in `B`.
    pub fn index_of(&self, a: &Atom) -> Option<u64> {
        match self {
            SmallSet::Rationals => rational_index(rational_of(a)?),
            SmallSet::AllAtoms => match a {
                Atom::Eq(k) => Some(*k),
                _ => None,
            },
            SmallSet::Dyadic01 => dyadic_index(rational_of(a)?),
            SmallSet::Point => None,
            SmallSet::Sum(parts) => {
                let (points, dense) = Self::sum_layout(parts);
                let Atom::Sum { part, inner } = a else { return None };
                match inner {
                    None => points.iter().position(|k| k == part).map(|i| i as u64),
                    Some(v) => {
                        let pos = dense.iter().position(|k| k == part)? as u64;
                        let m = parts.get(*part)?.index_of(v)?;
                        Some(points.len() as u64 + m.checked_mul(dense.len() as u64)?.checked_add(pos)?)
                    }
                }
            }
        }
    }

    /// Membership in `B`, decided from the atom itself (unlike
    /// [`SmallSet::index_of`], which gives up on very large heights).
    pub fn member(&self, a: &Atom) -> bool {
        match self {
            SmallSet::Rationals => rational_of(a).is_some(),
            SmallSet::AllAtoms => matches!(a, Atom::Eq(_)),
            SmallSet::Dyadic01 => rational_of(a).is_some_and(|r| r.is_dyadic() && r.signum() != core::cmp::Ordering::Less && *r <= Rational::one()),
            SmallSet::Point => false,
            SmallSet::Sum(parts) => match a {
                Atom::Sum { part, inner: None } => parts.get(*part) == Some(&SmallSet::Point),
                Atom::Sum { part, inner: Some(v) } => parts.get(*part).is_some_and(|s| *s != SmallSet::Point && s.member(v)),
                _ => false,
            },
        }
    }

    /// How many points of `B` lie strictly inside `(lo, hi)`, counted
    /// directly from the description of `B`; `None` means infinitely many.
    pub fn count_in(&self, spec: &StructureSpec, lo: Option<&Point>, hi: Option<&Point>) -> Result<Option<usize>> {
        match self {
            SmallSet::AllAtoms => Ok(None),
            SmallSet::Point => Ok(Some(0)),
            SmallSet::Rationals | SmallSet::Dyadic01 => {
                let v = |p: Option<&Point>| p.map(|p| spec.point_value(p).ok_or_else(|| Error::Sort(format!("{p}")))).transpose();
                let (l, h) = (v(lo)?, v(hi)?);
                if let (Some(l), Some(h)) = (&l, &h) {
                    if l >= h {
                        return Ok(Some(0));
                    }
                }
                Ok(if *self == SmallSet::Rationals { None } else { dyadic_count(l.as_ref(), h.as_ref()) })
            }
            SmallSet::Sum(parts) => {
                let (k, l, h) = spec.sum_interval(lo, hi)?;
                let Part::Structure(s) = &spec.parts().unwrap()[k] else { unreachable!() };
                parts[k].count_in(s, l.as_ref(), h.as_ref())
            }
        }
    }

    /// A random element of `B` strictly inside `(lo, hi)`, if one is found.
    pub fn random_in(&self, spec: &StructureSpec, lo: Option<&Point>, hi: Option<&Point>, rng: &mut Rng) -> Option<Atom> {
        match self {
            SmallSet::AllAtoms => Some(Atom::Eq(rng.gen_range(0..16))),
            SmallSet::Point => None,
            SmallSet::Rationals | SmallSet::Dyadic01 => {
                let l = lo.map(|p| spec.point_value(p)).map(|v| v.ok_or(())).transpose().ok()?;
                let h = hi.map(|p| spec.point_value(p)).map(|v| v.ok_or(())).transpose().ok()?;
                if let (Some(l), Some(h)) = (&l, &h) {
                    if l >= h {
                        return None;
                    }
                }
                if *self == SmallSet::Rationals {
                    return Some(Atom::rational(sample::rational_between(l.as_ref(), h.as_ref(), rng)));
                }
                let inside = |v: &QuadRat| l.as_ref().is_none_or(|l| l < v) && h.as_ref().is_none_or(|h| v < h);
                let ends: Vec<QuadRat> = [QuadRat::zero(), QuadRat::one()].into_iter().filter(inside).collect();
                let (zero, one) = (QuadRat::zero(), QuadRat::one());
                let cl = l.clone().filter(|l| *l > zero).unwrap_or(zero);
                let ch = h.clone().filter(|h| *h < one).unwrap_or(one);
                if cl < ch && (ends.is_empty() || rng.gen_ratio(7, 8)) {
                    let n = 64;
                    let k = rng.gen_range(0..n);
                    let step = &(&ch - &cl) / &QuadRat::int(n);
                    let t1 = &cl + &(&step * &QuadRat::int(k));
                    let t2 = &t1 + &step;
                    return Some(Atom::rational(simplest_dyadic_between(&t1, &t2)));
                }
                let i = rng.gen_range(0..ends.len().max(1));
                ends.get(i).map(|v| Atom::Ord(v.clone()))
            }
            SmallSet::Sum(parts) => {
                let ps = spec.parts()?;
                let (k, l, h) = if lo.is_none() && hi.is_none() {
                    (rng.gen_range(0..parts.len()), None, None)
                } else {
                    spec.sum_interval(lo, hi).ok()?
                };
                match &ps[k] {
                    Part::Point => Some(Atom::star(k)),
                    Part::Structure(s) => Some(Atom::in_part(k, parts[k].random_in(s, l.as_ref(), h.as_ref(), rng)?)),
                }
            }
        }
    }

    /// Whether `pi` maps `B` onto `B`, read off its finite description.
    pub fn preserved_by(&self, pi: &Automorphism) -> bool {
        match (self, pi.kind()) {
            (_, AutoKind::Identity) => true,
            (SmallSet::AllAtoms, AutoKind::Perm(_)) => true,
            (SmallSet::Rationals, AutoKind::Linear(l)) => l.is_rational(),
            (SmallSet::Dyadic01, AutoKind::Linear(l)) => {
                let dyadic = |v: &QuadRat| v.as_rational().is_some_and(|r| r.is_dyadic());
                l.knots().iter().all(|(x, y)| dyadic(x) && dyadic(y))
                    && l.pieces().iter().all(|p| p.slope.as_rational().is_some_and(|s| s.is_power_of_two()))
                    && l.apply(&QuadRat::zero()) == QuadRat::zero()
                    && l.apply(&QuadRat::one()) == QuadRat::one()
            }
            (SmallSet::Sum(parts), AutoKind::Glued(maps)) => {
                parts.len() == maps.len()
                    && parts.iter().zip(maps).all(|(s, m)| match m {
                        None => true,
                        Some(m) => s.preserved_by(m),
                    })
            }
            _ => false,
        }
    }

    /// An automorphism mapping `B` onto itself and `a` to `b`, for tuples
    /// of `B` with the same type.
    pub fn setwise_witness(&self, spec: &StructureSpec, a: &[Atom], b: &[Atom]) -> Result<Setwise> {
        for x in a.iter().chain(b) {
            if !self.member(x) {
                return Err(Error::Invalid(format!("{x} is not in the countable subset")));
            }
        }
        match self {
            SmallSet::AllAtoms => Ok(Setwise::Map(extend_partial(spec, a, b)?)),
            SmallSet::Rationals => Ok(Setwise::Map(restrict_witness(spec, a, b)?)),
            SmallSet::Dyadic01 => {
                TypePattern::of(spec, a, &[]).and_then(|ta| {
                    let tb = TypePattern::of(spec, b, &[])?;
                    match ta.separating_fact(&tb, spec) {
                        Some(f) => Err(Error::TypeMismatch(f)),
                        None => Ok(()),
                    }
                })?;
                if let Some(i) = (0..a.len()).find(|&i| is_extreme(&a[i]) != is_extreme(&b[i]) || (is_extreme(&a[i]) && a[i] != b[i])) {
                    return Ok(Setwise::Impossible(format!(
                        "{} is an endpoint of B and {} is not the same endpoint, but a map preserving B fixes min B = 0 and max B = 1",
                        if is_extreme(&a[i]) { &a[i] } else { &b[i] },
                        if is_extreme(&a[i]) { &b[i] } else { &a[i] }
                    )));
                }
                let mut pairs: Vec<(Rational, Rational)> = vec![(Rational::zero(), Rational::zero()), (Rational::one(), Rational::one())];
                for (x, y) in a.iter().zip(b) {
                    pairs.push((rational_of(x).unwrap().clone(), rational_of(y).unwrap().clone()));
                }
                pairs.sort();
                pairs.dedup();
                let l = dyadic_pl(&pairs)?;
                Ok(Setwise::Map(Automorphism::new(spec, AutoKind::Linear(l))?))
            }
            SmallSet::Point => Ok(Setwise::Map(Automorphism::identity(spec))),
            SmallSet::Sum(parts) => {
                let ps = spec.parts().ok_or_else(|| Error::Sort(format!("{spec} is not a sum")))?;
                let mut maps = Vec::new();
                for (k, (p, s)) in ps.iter().zip(parts).enumerate() {
                    let Part::Structure(inner) = p else {
                        maps.push(None);
                        continue;
                    };
                    let pick = |t: &[Atom]| -> Vec<Atom> {
                        t.iter()
                            .filter_map(|x| match x {
                                Atom::Sum { part, inner: Some(v) } if *part == k => Some((**v).clone()),
                                _ => None,
                            })
                            .collect()
                    };
                    let (xs, ys) = (pick(a), pick(b));
                    if xs.len() != ys.len() {
                        return Err(Error::TypeMismatch(format!("different numbers of points in part {k}")));
                    }
                    match s.setwise_witness(inner, &xs, &ys)? {
                        Setwise::Map(m) => maps.push(Some(m)),
                        Setwise::Impossible(r) => return Ok(Setwise::Impossible(format!("part {k}: {r}"))),
                    }
                }
                let m = Automorphism::new(spec, AutoKind::Glued(maps))?;
                if m.apply_tuple(a)? != b {
                    return Err(Error::TypeMismatch("tuples place points in different parts".into()));
                }
                Ok(Setwise::Map(m))
            }
        }
    }

    /// Independent certificate for a reported [`Setwise::Impossible`]: some
    /// position sends an endpoint of `B` elsewhere.
    pub fn certify_setwise_failure(&self, a: &[Atom], b: &[Atom]) -> bool {
        match self {
            SmallSet::Dyadic01 => a.iter().zip(b).any(|(x, y)| x != y && (is_extreme(x) || is_extreme(y))),
            SmallSet::Sum(parts) => parts.iter().enumerate().any(|(k, s)| {
                let pick = |t: &[Atom]| -> Vec<Atom> {
                    t.iter()
                        .filter_map(|x| match x {
                            Atom::Sum { part, inner: Some(v) } if *part == k => Some((**v).clone()),
                            _ => None,
                        })
                        .collect()
                };
                s.certify_setwise_failure(&pick(a), &pick(b))
            }),
            _ => false,
        }
    }
}

fn is_extreme(a: &Atom) -> bool {
    rational_of(a).is_some_and(|r| r.is_zero() || *r == Rational::one())
}

/// Split `[x0, x1]` (dyadic endpoints) into standard dyadic intervals
/// `[k/2^n, (k+1)/2^n]`.
fn standard_pieces(x0: &Rational, x1: &Rational) -> Vec<Rational> {
    let mut cuts = vec![x0.clone()];
    let mut x = x0.clone();
    while &x < x1 {
        // largest 2^-n with x a multiple of it and x + 2^-n <= x1
        let mut w = Rational::one();
        loop {
            let q = x.clone() / w.clone();
            if q.is_integer() && &(x.clone() + w.clone()) <= x1 {
                break;
            }
            w = w / Rational::integer(2);
        }
        x = x + w;
        cuts.push(x.clone());
    }
    cuts
}

/// Halve the widest piece until there are `n` pieces.
fn refine(mut cuts: Vec<Rational>, n: usize) -> Vec<Rational> {
    while cuts.len() - 1 < n {
        // widths are powers of two; the widest has the smallest denominator
        let i = (0..cuts.len() - 1).min_by_key(|&k| (cuts[k + 1].clone() - cuts[k].clone()).denom().bits()).unwrap();
        let mid = cuts[i].midpoint(&cuts[i + 1]);
        cuts.insert(i + 1, mid);
    }
    cuts
}

/// A piecewise linear map through the dyadic `pairs` (sorted, increasing in
/// both coordinates, including `(0,0)` and `(1,1)`) whose breakpoints are
/// dyadic and whose slopes are powers of two. Such a map sends dyadics onto
/// dyadics.
fn dyadic_pl(pairs: &[(Rational, Rational)]) -> Result<PwLinear> {
    let mut knots: Vec<(QuadRat, QuadRat)> = Vec::new();
    for w in pairs.windows(2) {
        let (x0, y0) = &w[0];
        let (x1, y1) = &w[1];
        let xs = standard_pieces(x0, x1);
        let ys = standard_pieces(y0, y1);
        let n = (xs.len() - 1).max(ys.len() - 1);
        let (xs, ys) = (refine(xs, n), refine(ys, n));
        for (x, y) in xs.into_iter().zip(ys) {
            knots.push((QuadRat::rational(x), QuadRat::rational(y)));
        }
    }
    knots.dedup();
    PwLinear::through(&knots)
}

impl Region for SmallSet {
    fn contains(&self, _spec: &StructureSpec, a: &Atom) -> bool {
        self.member(a)
    }

    fn run_in(&self, spec: &StructureSpec, lo: Option<&Point>, hi: Option<&Point>, k: usize) -> Option<Vec<Atom>> {
        if k == 0 {
            return Some(Vec::new());
        }
        match self {
            SmallSet::Rationals => spec.sample_in(lo, hi, k).ok(),
            SmallSet::AllAtoms | SmallSet::Point => None,
            SmallSet::Dyadic01 => {
                let l = lo.map(|p| spec.point_value(p)).map(|v| v.ok_or(())).transpose().ok()?;
                let h = hi.map(|p| spec.point_value(p)).map(|v| v.ok_or(())).transpose().ok()?;
                let (zero, one) = (QuadRat::zero(), QuadRat::one());
                let cl = l.clone().filter(|l| *l > zero).unwrap_or(zero.clone());
                let ch = h.clone().filter(|h| *h < one).unwrap_or(one.clone());
                if cl < ch {
                    let mut out = Vec::new();
                    let mut cur = cl;
                    for _ in 0..k {
                        let r = simplest_dyadic_between(&cur, &ch);
                        cur = QuadRat::rational(r.clone());
                        out.push(Atom::rational(r));
                    }
                    return Some(out);
                }
                let inside = |v: &QuadRat| l.as_ref().is_none_or(|l| l < v) && h.as_ref().is_none_or(|h| v < h);
                let ends: Vec<Atom> = [zero, one].into_iter().filter(inside).map(Atom::Ord).collect();
                (ends.len() >= k).then(|| ends[..k].to_vec())
            }
            SmallSet::Sum(parts) => {
                let (p, l, h) = spec.sum_interval(lo, hi).ok()?;
                let Part::Structure(s) = &spec.parts()?[p] else { return None };
                let v = parts[p].run_in(s, l.as_ref(), h.as_ref(), k)?;
                Some(v.into_iter().map(|a| Atom::in_part(p, a)).collect())
            }
        }
    }
}

/// A structure with an enumerated countable subset of its carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub name: String,
    pub big: StructureSpec,
    pub small: SmallSet,
    /// A designed negative control: the cover conditions should fail.
    pub expected_fail: bool,
    pub description: String,
}

impl Scenario {
    pub fn new(name: &str, big: StructureSpec, small: SmallSet, expected_fail: bool, description: &str) -> Result<Scenario> {
        big.validate()?;
        let ok = match (&big, &small) {
            (StructureSpec::Equality, SmallSet::AllAtoms) => true,
            (StructureSpec::Dlo { .. }, SmallSet::Rationals | SmallSet::Dyadic01) => true,
            (StructureSpec::OrderedSum(ps), SmallSet::Sum(ss)) => {
                ps.len() == ss.len()
                    && ps.iter().zip(ss).all(|(p, s)| {
                        matches!(
                            (p, s),
                            (Part::Point, SmallSet::Point)
                                | (Part::Structure(StructureSpec::Dlo { .. }), SmallSet::Rationals | SmallSet::Dyadic01)
                        )
                    })
            }
            _ => false,
        };
        if !ok {
            return Err(Error::Invalid(format!("enumeration {small:?} does not fit {big}")));
        }
        Ok(Scenario { name: name.to_string(), big, small, expected_fail, description: description.to_string() })
    }

    pub fn j(&self, n: u64) -> Atom {
        self.small.j(n)
    }

    pub fn index_of(&self, a: &Atom) -> Option<u64> {
        self.small.index_of(a)
    }
}

fn qsqrt2() -> StructureSpec {
    StructureSpec::dlo_over(Field::QSqrt2)
}

/// The shipped scenarios, the designed failure last.
pub fn scenario_catalog() -> Vec<Scenario> {
    let sum = |parts| StructureSpec::sum(parts).expect("catalogue sums are valid");
    vec![
        Scenario::new("R_vs_Q", qsqrt2(), SmallSet::Rationals, false, "the rationals inside the order Q(sqrt2)").unwrap(),
        Scenario::new(
            "Rpp_vs_Qpp",
            sum(vec![Part::Structure(qsqrt2()), Part::Point, Part::Structure(StructureSpec::dlo())]),
            SmallSet::Sum(vec![SmallSet::Rationals, SmallSet::Point, SmallSet::Rationals]),
            false,
            "Q + star + Q inside Q(sqrt2) + star + Q",
        )
        .unwrap(),
        Scenario::new(
            "D_vs_Qprime",
            sum(vec![Part::Structure(qsqrt2()), Part::Structure(StructureSpec::dlo())]),
            SmallSet::Sum(vec![SmallSet::Rationals, SmallSet::Rationals]),
            false,
            "Q + Q inside Q(sqrt2) + Q, with the predicate for the first part",
        )
        .unwrap(),
        Scenario::new("FFM", StructureSpec::Equality, SmallSet::AllAtoms, false, "equality atoms, all of them").unwrap(),
        Scenario::new("Broken_bounded", qsqrt2(), SmallSet::Dyadic01, true, "the dyadics of [0, 1] inside Q(sqrt2)").unwrap(),
    ]
}

pub fn scenario(name: &str) -> Result<Scenario> {
    scenario_catalog().into_iter().find(|s| s.name == name).ok_or_else(|| Error::UnknownScenario(name.to_string()))
}

/// Verdict on one cover condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CondResult {
    pub passed: bool,
    /// Instances checked.
    pub checked: usize,
}

/// A verified witness for one sampled instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub condition: &'static str,
    pub instance: String,
    pub map: String,
}

/// A certified failing instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub condition: &'static str,
    pub instance: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverReport {
    pub scenario: String,
    pub expected_fail: bool,
    pub budget: usize,
    pub seed: u64,
    pub a: CondResult,
    pub b: CondResult,
    pub c: CondResult,
    pub witnesses: Vec<Witness>,
    pub counterexamples: Vec<Counterexample>,
}

impl CoverReport {
    pub fn passed(&self) -> bool {
        self.a.passed && self.b.passed && self.c.passed
    }

    /// The first certified failure, if any.
    pub fn counterexample(&self) -> Option<&Counterexample> {
        self.counterexamples.first()
    }

    /// Whether the outcome is the one the scenario was designed for.
    pub fn as_expected(&self) -> bool {
        self.passed() != self.expected_fail
    }
}

fn set_string(s: &[Atom]) -> String {
    let items: Vec<String> = s.iter().map(|a| a.to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

fn tuple_string(s: &[Atom]) -> String {
    let items: Vec<String> = s.iter().map(|a| a.to_string()).collect();
    format!("({})", items.join(", "))
}

fn bound_string(p: Option<&Point>, low: bool) -> String {
    match p {
        Some(p) => p.to_string(),
        None if low => "-inf".to_string(),
        None => "+inf".to_string(),
    }
}

/// Random distinct members of `B`.
fn random_members(s: &Scenario, n: usize, rng: &mut Rng) -> Vec<Atom> {
    let mut out = BTreeSet::new();
    for _ in 0..20 * n {
        if out.len() == n {
            break;
        }
        if let Some(a) = s.small.random_in(&s.big, None, None, rng) {
            out.insert(a);
        }
    }
    let mut v: Vec<Atom> = out.into_iter().collect();
    // random order, so tuples are not always increasing
    for i in (1..v.len()).rev() {
        v.swap(i, rng.gen_range(0..=i));
    }
    v
}

struct Checker<'a> {
    s: &'a Scenario,
    report: CoverReport,
}

impl Checker<'_> {
    fn fail(&mut self, condition: &'static str, instance: String, reason: String) {
        match condition {
            "enumeration" => self.report.a.passed = false,
            "homogeneity" => self.report.b.passed = false,
            _ => self.report.c.passed = false,
        }
        self.report.counterexamples.push(Counterexample { condition, instance, reason });
    }

    fn check_a(&mut self, budget: usize) {
        let mut seen = BTreeSet::new();
        for i in 0..budget as u64 {
            let a = self.s.j(i);
            self.report.a.checked += 1;
            if let Err(e) = self.s.big.check_atom(&a) {
                self.fail("enumeration", format!("j({i}) = {a}"), format!("not in the carrier: {e}"));
            } else if self.s.index_of(&a) != Some(i) {
                self.fail("enumeration", format!("j({i}) = {a}"), "the enumeration does not invert".to_string());
            } else if !seen.insert(a.clone()) {
                self.fail("enumeration", format!("j({i}) = {a}"), "repeated value".to_string());
            }
        }
    }

    fn check_b(&mut self, a: &[Atom], b: &[Atom], rng: &mut Rng) {
        self.report.b.checked += 1;
        let (s, spec) = (self.s, &self.s.big);
        let instance = format!("{} -> {}", tuple_string(a), tuple_string(b));
        match s.small.setwise_witness(spec, a, b) {
            Ok(Setwise::Map(m)) => {
                let mut ok = m.check().is_ok() && m.apply_tuple(a).ok().as_deref() == Some(b) && s.small.preserved_by(&m);
                let inv = m.invert();
                for _ in 0..10 {
                    let Some(x) = s.small.random_in(spec, None, None, rng) else { continue };
                    ok &= m.apply(&x).is_ok_and(|y| s.small.member(&y)) && inv.apply(&x).is_ok_and(|y| s.small.member(&y));
                }
                if ok {
                    self.report.witnesses.push(Witness { condition: "homogeneity", instance, map: m.to_string() });
                } else {
                    self.fail("homogeneity", instance, format!("constructed map {m} failed verification"));
                }
            }
            Ok(Setwise::Impossible(reason)) => {
                if s.small.certify_setwise_failure(a, b) {
                    self.fail("homogeneity", instance, reason);
                } else {
                    self.fail("homogeneity", instance, format!("uncertified failure: {reason}"));
                }
            }
            Err(e) => self.fail("homogeneity", instance, format!("construction error: {e}")),
        }
    }

    fn check_c(&mut self, fixed: &[Atom], movers: &[Atom]) {
        self.report.c.checked += 1;
        let (s, spec) = (self.s, &self.s.big);
        let instance = format!("S = {}, S' = {}", set_string(fixed), set_string(movers));
        let result = if spec.is_ordered() {
            absorb_into(spec, fixed, movers, &s.small)
        } else {
            // every carrier atom is already in B
            Ok(Absorption::Map(Automorphism::identity(spec)))
        };
        match result {
            Ok(Absorption::Map(m)) => {
                let moved = m.apply_tuple(movers);
                let ok = m.check().is_ok()
                    && m.apply_tuple(fixed).ok().as_deref() == Some(fixed)
                    && moved.as_ref().is_ok_and(|v| v.iter().all(|x| s.small.member(x)))
                    && moved.as_ref().is_ok_and(|v| TypePattern::of(spec, v, fixed).ok() == TypePattern::of(spec, movers, fixed).ok());
                if ok {
                    self.report.witnesses.push(Witness { condition: "absorption", instance, map: m.to_string() });
                } else {
                    self.fail("absorption", instance, format!("constructed map {m} failed verification"));
                }
            }
            Ok(Absorption::Stuck { lo, hi, needed }) => {
                let grounds = spec.ground_points(fixed).unwrap_or_default();
                let fixed_ends = lo.as_ref().is_none_or(|p| grounds.contains(p)) && hi.as_ref().is_none_or(|p| grounds.contains(p));
                let gap = format!("({}, {})", bound_string(lo.as_ref(), true), bound_string(hi.as_ref(), false));
                match s.small.count_in(spec, lo.as_ref(), hi.as_ref()) {
                    Ok(Some(have)) if have < needed && fixed_ends => self.fail(
                        "absorption",
                        instance,
                        format!(
                            "the gap {gap} has fixed ends, so every automorphism fixing S maps it onto itself; \
                             it holds {needed} point(s) of S' but only {have} point(s) of B"
                        ),
                    ),
                    _ => self.fail("absorption", instance, format!("uncertified failure in the gap {gap}")),
                }
            }
            Err(e) => self.fail("absorption", instance, format!("construction error: {e}")),
        }
    }
}

/// Check the three cover conditions on `budget` sampled instances each,
/// after a few fixed probes. Deterministic for a given seed.
pub fn check_cover(s: &Scenario, budget: usize, seed: u64) -> Result<CoverReport> {
    if budget == 0 {
        return Err(Error::Invalid("budget must be at least 1".into()));
    }
    let empty = CondResult { passed: true, checked: 0 };
    let mut ck = Checker {
        s,
        report: CoverReport {
            scenario: s.name.clone(),
            expected_fail: s.expected_fail,
            budget,
            seed,
            a: empty.clone(),
            b: empty.clone(),
            c: empty,
            witnesses: Vec::new(),
            counterexamples: Vec::new(),
        },
    };
    let spec = &s.big;
    let mut rng = sample::rng(seed);
    ck.check_a(budget);

    // probes: the first elements of the enumeration
    let (j0, j2) = (s.j(0), s.j(2));
    if TypePattern::of(spec, core::slice::from_ref(&j0), &[])? == TypePattern::of(spec, core::slice::from_ref(&j2), &[])? {
        ck.check_b(&[j0], &[j2], &mut rng);
    }
    for _ in 0..budget {
        let m = rng.gen_range(1..=5);
        let a = random_members(s, m, &mut rng);
        let t = TypePattern::of(spec, &a, &[])?;
        let mut pick = |lo: Option<&Point>, hi: Option<&Point>, rng: &mut Rng| s.small.random_in(spec, lo, hi, rng);
        let Some(b) = sample::realize_with(spec, &t, &mut pick, &mut rng) else {
            continue;
        };
        ck.check_b(&a, &b, &mut rng);
    }

    if spec.is_ordered() {
        let mut probe: Vec<Atom> = vec![s.j(0), s.j(1)];
        probe.sort();
        let top = Point::Atom(probe[1].clone());
        let mut movers = Vec::new();
        movers.extend(spec.sample_in(Some(&top), None, 1).unwrap_or_default());
        ck.check_c(&probe, &movers);
    }
    for _ in 0..budget {
        let k = rng.gen_range(0..=3);
        let fixed = random_members(s, k, &mut rng);
        let n = rng.gen_range(1..=4);
        let movers = sample::random_tuple(spec, n, &mut rng);
        ck.check_c(&fixed, &movers);
    }
    Ok(ck.report)
}

/// The equivariant equivalence relation "same first coordinate" over a
/// lexicographic product, whose family of classes has the size of the first
/// factor.
#[derive(Clone, Debug)]
pub struct NoncoverReport {
    pub spec: StructureSpec,
    pub relation: DefSet,
    pub equivariant: bool,
    pub related: (Atom, Atom, bool),
    pub unrelated: (Atom, Atom, bool),
    pub transferable: bool,
    pub explanation: String,
}

pub fn noncover_demo() -> Result<NoncoverReport> {
    let spec: StructureSpec = "lex(sum(dlo[field=qsqrt2], dlo), dlo[field=qsqrt2])".parse()?;
    let relation = DefSet::parse(&spec, "{(x, y): x ~ y}", &[])?;
    let equivariant = relation.equivariant()?;
    let first = Atom::in_part(0, Atom::Ord(QuadRat::sqrt2()));
    let x = Atom::pair(first.clone(), Atom::int(0));
    let y = Atom::pair(first, Atom::ratio(1, 2));
    let z = Atom::pair(Atom::in_part(1, Atom::int(0)), Atom::int(0));
    let related = relation.member(&[x.clone(), y.clone()])?;
    let unrelated = relation.member(&[x.clone(), z.clone()])?;
    Ok(NoncoverReport {
        spec,
        relation,
        equivariant,
        related: (x.clone(), y, related),
        unrelated: (x, z, unrelated),
        transferable: false,
        explanation: "the relation is equivariant and its classes are nonempty, pairwise disjoint sets of atoms, one for \
                      every element of the first factor; there are uncountably many of them, which no structure with a \
                      countable carrier can realise, so no countable scenario covers this structure"
            .to_string(),
    })
}

/// The mutual-symmetry examples included in the default report.
pub fn symmetry_demos() -> Result<Vec<(StructureSpec, StructureSpec, SymmetryReport)>> {
    let pairs = [("dlo[const=0]", "dlo[const=1]"), ("dlo", "dlo[cut<sqrt2]")];
    let mut out = Vec::new();
    for (a, b) in pairs {
        let (a, b): (StructureSpec, StructureSpec) = (a.parse()?, b.parse()?);
        let r = mutual_symmetry(&a, &b)?;
        out.push((a, b, r));
    }
    Ok(out)
}

impl fmt::Display for CoverReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = |c: &CondResult| if c.passed { "PASS" } else { "FAIL" };
        writeln!(f, "scenario {} (budget {}, seed {})", self.scenario, self.budget, self.seed)?;
        writeln!(f, "  enumeration {} ({} indices)", v(&self.a), self.a.checked)?;
        writeln!(f, "  homogeneity {} ({} pairs)", v(&self.b), self.b.checked)?;
        writeln!(f, "  absorption {} ({} instances)", v(&self.c), self.c.checked)?;
        writeln!(f, "  witnesses: {}", self.witnesses.len())?;
        if let Some(c) = self.counterexample() {
            writeln!(f, "  counterexample for {}: {}", c.condition, c.instance)?;
            writeln!(f, "    {}", c.reason)?;
        }
        let outcome = if self.as_expected() { "as expected" } else { "UNEXPECTED" };
        write!(f, "  overall {} ({outcome})", if self.passed() { "PASS" } else { "FAIL" })
    }
}
