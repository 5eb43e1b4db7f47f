//! Finitely described automorphisms and the constructions that produce them.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::atoms::{Atom, Field, Part, Point, StructureSpec, TypePattern};
use crate::defsets::DefSet;
use crate::error::{Error, Result};
use crate::num::{simplest_between, QuadRat};

/// A permutation of equality atoms moving finitely many of them.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FinPerm {
    map: BTreeMap<u64, u64>,
}

impl FinPerm {
    /// From assignments that form a bijection of their domain onto itself.
    pub fn from_pairs(pairs: &[(u64, u64)]) -> Result<FinPerm> {
        let map: BTreeMap<u64, u64> = pairs.iter().copied().filter(|(a, b)| a != b).collect();
        let dom: BTreeSet<u64> = map.keys().copied().collect();
        let img: BTreeSet<u64> = map.values().copied().collect();
        if map.len() != pairs.iter().filter(|(a, b)| a != b).count() || dom != img || img.len() != map.len() {
            return Err(Error::Invalid("assignments are not a permutation of their domain".into()));
        }
        Ok(FinPerm { map })
    }

    pub fn transposition(a: u64, b: u64) -> FinPerm {
        FinPerm::from_pairs(&[(a, b), (b, a)]).unwrap()
    }

    pub fn apply(&self, a: u64) -> u64 {
        self.map.get(&a).copied().unwrap_or(a)
    }

    /// Moved atoms with their images.
    pub fn pairs(&self) -> Vec<(u64, u64)> {
        self.map.iter().map(|(a, b)| (*a, *b)).collect()
    }

    pub fn invert(&self) -> FinPerm {
        FinPerm { map: self.map.iter().map(|(a, b)| (*b, *a)).collect() }
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &FinPerm) -> FinPerm {
        let dom: BTreeSet<u64> = self.map.keys().chain(other.map.keys()).copied().collect();
        let map = dom.into_iter().map(|a| (a, self.apply(other.apply(a)))).filter(|(a, b)| a != b).collect();
        FinPerm { map }
    }

    pub fn cycles(&self) -> Vec<Vec<u64>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &a in self.map.keys() {
            if seen.contains(&a) {
                continue;
            }
            let mut c = vec![a];
            seen.insert(a);
            let mut b = self.apply(a);
            while b != a {
                seen.insert(b);
                c.push(b);
                b = self.apply(b);
            }
            out.push(c);
        }
        out
    }
}

impl fmt::Display for FinPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.map.is_empty() {
            return f.write_str("id");
        }
        for c in self.cycles() {
            let names: Vec<String> = c.iter().map(|a| format!("a{a}")).collect();
            write!(f, "({})", names.join(" "))?;
        }
        Ok(())
    }
}

/// The affine map `x -> slope * x + offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Piece {
    pub slope: QuadRat,
    pub offset: QuadRat,
}

impl Piece {
    pub fn apply(&self, x: &QuadRat) -> QuadRat {
        &(&self.slope * x) + &self.offset
    }
}

/// Increasing piecewise linear bijection interpolating its knots, with slope
/// one beyond the first and last knot. No knots means the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PwLinear {
    knots: Vec<(QuadRat, QuadRat)>,
}

impl PwLinear {
    pub fn identity() -> PwLinear {
        PwLinear::default()
    }

    /// Interpolate the given points, which must be strictly increasing in
    /// both coordinates once sorted.
    pub fn through(points: &[(QuadRat, QuadRat)]) -> Result<PwLinear> {
        let mut knots = points.to_vec();
        knots.sort();
        knots.dedup();
        for w in knots.windows(2) {
            if w[0].0 == w[1].0 || w[0].1 >= w[1].1 {
                return Err(Error::NotPreserving(format!(
                    "{} -> {} and {} -> {} are not increasing",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        let mut p = PwLinear { knots };
        p.normalize();
        Ok(p)
    }

    /// Drop knots where the map does not bend.
    fn normalize(&mut self) {
        let n = self.knots.len();
        if n == 0 {
            return;
        }
        let pieces = self.pieces();
        let keep: Vec<bool> = (0..n).map(|i| pieces[i] != pieces[i + 1]).collect();
        let mut knots: Vec<(QuadRat, QuadRat)> = self.knots.iter().zip(&keep).filter(|(_, k)| **k).map(|(p, _)| p.clone()).collect();
        if knots.is_empty() && pieces[0].offset != QuadRat::zero() {
            // a translation: keep one knot
            knots.push(self.knots[0].clone());
        }
        self.knots = knots;
    }

    pub fn knots(&self) -> &[(QuadRat, QuadRat)] {
        &self.knots
    }

    pub fn breakpoints(&self) -> Vec<QuadRat> {
        self.knots.iter().map(|(a, _)| a.clone()).collect()
    }

    /// One piece per interval, including the two unbounded ends.
    pub fn pieces(&self) -> Vec<Piece> {
        let k = &self.knots;
        if k.is_empty() {
            return vec![Piece { slope: QuadRat::one(), offset: QuadRat::zero() }];
        }
        let shift = |(a, b): &(QuadRat, QuadRat)| Piece { slope: QuadRat::one(), offset: b - a };
        let mut out = vec![shift(&k[0])];
        for w in k.windows(2) {
            let slope = &(&w[1].1 - &w[0].1) / &(&w[1].0 - &w[0].0);
            let offset = &w[0].1 - &(&slope * &w[0].0);
            out.push(Piece { slope, offset });
        }
        out.push(shift(k.last().unwrap()));
        out
    }

    pub fn apply(&self, x: &QuadRat) -> QuadRat {
        let k = &self.knots;
        if k.is_empty() {
            return x.clone();
        }
        let i = k.partition_point(|(a, _)| a <= x);
        if i == 0 {
            return x + &(&k[0].1 - &k[0].0);
        }
        if i == k.len() {
            let (a, b) = k.last().unwrap();
            return x + &(b - a);
        }
        let (a0, b0) = &k[i - 1];
        let (a1, b1) = &k[i];
        b0 + &(&(x - a0) * &(&(b1 - b0) / &(a1 - a0)))
    }

    pub fn invert(&self) -> PwLinear {
        PwLinear { knots: self.knots.iter().map(|(a, b)| (b.clone(), a.clone())).collect() }
    }

    /// `self` after `other`; its breakpoints are among those of `other` and
    /// the preimages under `other` of those of `self`.
    pub fn compose(&self, other: &PwLinear) -> PwLinear {
        let inv = other.invert();
        let mut xs: Vec<QuadRat> = other.breakpoints();
        xs.extend(self.knots.iter().map(|(a, _)| inv.apply(a)));
        let pts: Vec<(QuadRat, QuadRat)> = xs.into_iter().map(|x| {
            let y = self.apply(&other.apply(&x));
            (x, y)
        }).collect();
        PwLinear::through(&pts).expect("composition of increasing maps is increasing")
    }

    /// Every knot coordinate is rational, so the map fixes Q setwise.
    pub fn is_rational(&self) -> bool {
        self.knots.iter().all(|(a, b)| a.is_rational() && b.is_rational())
    }

    /// Structural invariants: strictly increasing knots, positive slopes,
    /// continuity at every breakpoint.
    pub fn check(&self) -> Result<()> {
        let pieces = self.pieces();
        for (i, (a, b)) in self.knots.iter().enumerate() {
            if pieces[i].apply(a) != *b || pieces[i + 1].apply(a) != *b {
                return Err(Error::Invalid(format!("discontinuous at {a}")));
            }
        }
        if pieces.iter().any(|p| p.slope <= QuadRat::zero()) {
            return Err(Error::Invalid("non-increasing piece".into()));
        }
        Ok(())
    }
}

impl fmt::Display for PwLinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.knots.is_empty() {
            return f.write_str("id");
        }
        let parts: Vec<String> = self.knots.iter().map(|(a, b)| format!("{a} -> {b}")).collect();
        write!(f, "pwl[{}]", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AutoKind {
    /// The identity of any structure.
    Identity,
    Perm(FinPerm),
    Linear(PwLinear),
    /// One map per part of an ordered sum; `None` for ⋆-points.
    Glued(Vec<Option<Automorphism>>),
}

/// An automorphism of the structure `spec`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Automorphism {
    spec: StructureSpec,
    kind: AutoKind,
}

fn value(a: &Atom) -> Result<&QuadRat> {
    a.as_value().ok_or_else(|| Error::Sort(format!("{a} is not an order atom")))
}

fn eq_index(a: &Atom) -> Result<u64> {
    match a {
        Atom::Eq(k) => Ok(*k),
        _ => Err(Error::Sort(format!("{a} is not an equality atom"))),
    }
}

impl Automorphism {
    pub fn identity(spec: &StructureSpec) -> Automorphism {
        Automorphism { spec: spec.clone(), kind: AutoKind::Identity }
    }

    /// Wrap a representation, checking that it is an automorphism of `spec`.
    pub fn new(spec: &StructureSpec, kind: AutoKind) -> Result<Automorphism> {
        let a = Automorphism { spec: spec.clone(), kind };
        a.check()?;
        Ok(a)
    }

    pub fn spec(&self) -> &StructureSpec {
        &self.spec
    }

    pub fn kind(&self) -> &AutoKind {
        &self.kind
    }

    pub fn is_identity(&self) -> bool {
        match &self.kind {
            AutoKind::Identity => true,
            AutoKind::Perm(p) => p.map.is_empty(),
            AutoKind::Linear(l) => l.knots.is_empty(),
            AutoKind::Glued(parts) => parts.iter().flatten().all(|p| p.is_identity()),
        }
    }

    pub fn apply(&self, a: &Atom) -> Result<Atom> {
        self.spec.check_atom(a)?;
        self.apply_unchecked(a)
    }

    fn apply_unchecked(&self, a: &Atom) -> Result<Atom> {
        Ok(match &self.kind {
            AutoKind::Identity => a.clone(),
            AutoKind::Perm(p) => Atom::Eq(p.apply(eq_index(a)?)),
            AutoKind::Linear(l) => Atom::Ord(l.apply(value(a)?)),
            AutoKind::Glued(parts) => match a {
                Atom::Sum { part, inner: Some(x) } => match &parts[*part] {
                    Some(m) => Atom::in_part(*part, m.apply_unchecked(x)?),
                    None => a.clone(),
                },
                _ => a.clone(),
            },
        })
    }

    pub fn apply_tuple(&self, t: &[Atom]) -> Result<Vec<Atom>> {
        t.iter().map(|a| self.apply(a)).collect()
    }

    /// The image of a set: its parameters are moved, its matrix is kept.
    pub fn apply_set(&self, s: &DefSet) -> Result<DefSet> {
        if *s.spec() != self.spec {
            return Err(Error::TypeMismatch(format!("{} versus {}", s.spec(), self.spec)));
        }
        self.apply_tuple(s.params())?;
        s.act(|a| self.apply_unchecked(a).expect("parameters checked above"))
    }

    pub fn invert(&self) -> Automorphism {
        let kind = match &self.kind {
            AutoKind::Identity => AutoKind::Identity,
            AutoKind::Perm(p) => AutoKind::Perm(p.invert()),
            AutoKind::Linear(l) => AutoKind::Linear(l.invert()),
            AutoKind::Glued(parts) => AutoKind::Glued(parts.iter().map(|p| p.as_ref().map(|m| m.invert())).collect()),
        };
        Automorphism { spec: self.spec.clone(), kind }
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism> {
        if self.spec != other.spec {
            return Err(Error::TypeMismatch(format!("{} versus {}", self.spec, other.spec)));
        }
        let kind = match (&self.kind, &other.kind) {
            (AutoKind::Identity, k) | (k, AutoKind::Identity) => k.clone(),
            (AutoKind::Perm(p), AutoKind::Perm(q)) => AutoKind::Perm(p.compose(q)),
            (AutoKind::Linear(p), AutoKind::Linear(q)) => AutoKind::Linear(p.compose(q)),
            (AutoKind::Glued(p), AutoKind::Glued(q)) => {
                let mut parts = Vec::new();
                for (x, y) in p.iter().zip(q) {
                    parts.push(match (x, y) {
                        (Some(x), Some(y)) => Some(x.compose(y)?),
                        _ => None,
                    });
                }
                AutoKind::Glued(parts)
            }
            _ => return Err(Error::Invalid("incompatible automorphism representations".into())),
        };
        Ok(Automorphism { spec: self.spec.clone(), kind })
    }

    /// Structural check that the map is an automorphism of its structure.
    pub fn check(&self) -> Result<()> {
        match (&self.spec, &self.kind) {
            (_, AutoKind::Identity) => Ok(()),
            (StructureSpec::Equality, AutoKind::Perm(_)) => Ok(()),
            (StructureSpec::Dlo { field, constants, cuts }, AutoKind::Linear(l)) => {
                l.check()?;
                if *field == Field::Q && !l.is_rational() {
                    return Err(Error::NotPreserving(format!("{l} does not map Q onto Q")));
                }
                for c in constants.iter().chain(cuts.iter().map(|c| &c.cutpoint)) {
                    if l.apply(c) != *c {
                        return Err(Error::NotPreserving(format!("{l} moves {c}")));
                    }
                }
                Ok(())
            }
            (StructureSpec::OrderedSum(parts), AutoKind::Glued(maps)) => {
                if parts.len() != maps.len() {
                    return Err(Error::Arity { expected: parts.len(), got: maps.len() });
                }
                for (p, m) in parts.iter().zip(maps) {
                    match (p, m) {
                        (Part::Point, None) => {}
                        (Part::Structure(s), Some(m)) if *s == m.spec => m.check()?,
                        _ => return Err(Error::Invalid("part map does not match its part".into())),
                    }
                }
                Ok(())
            }
            (s, _) => Err(Error::Invalid(format!("representation does not fit {s}"))),
        }
    }
}

impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            AutoKind::Identity => f.write_str("id"),
            AutoKind::Perm(p) => write!(f, "{p}"),
            AutoKind::Linear(l) => write!(f, "{l}"),
            AutoKind::Glued(parts) => {
                let items: Vec<String> = parts
                    .iter()
                    .enumerate()
                    .map(|(k, p)| match p {
                        Some(m) => format!("{k}: {m}"),
                        None => format!("{k}: star"),
                    })
                    .collect();
                write!(f, "glue[{}]", items.join(", "))
            }
        }
    }
}

fn check_same_type(spec: &StructureSpec, a: &[Atom], b: &[Atom]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::Arity { expected: a.len(), got: b.len() });
    }
    let ta = TypePattern::of(spec, a, &[])?;
    let tb = TypePattern::of(spec, b, &[])?;
    if ta != tb {
        let fact = ta.separating_fact(&tb, spec).unwrap_or_else(|| format!("{ta} versus {tb}"));
        return Err(Error::TypeMismatch(fact));
    }
    Ok(())
}

/// Interpolate `pairs`, fixing pointwise a rational neighbourhood of every
/// value in `protect` (values that must be fixed but may not be knots).
fn linear_with_anchors(pairs: &[(QuadRat, QuadRat)], protect: &[QuadRat]) -> Result<PwLinear> {
    let mut knots = pairs.to_vec();
    let mut coords: Vec<QuadRat> = pairs.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect();
    let mut protect = protect.to_vec();
    protect.sort();
    protect.dedup();
    coords.extend(protect.iter().cloned());
    for v in &protect {
        let lo = coords.iter().filter(|c| *c < v).max().cloned();
        let hi = coords.iter().filter(|c| *c > v).min().cloned();
        let r1 = QuadRat::rational(simplest_between(lo.as_ref(), Some(v)));
        let r2 = QuadRat::rational(simplest_between(Some(v), hi.as_ref()));
        coords.push(r1.clone());
        coords.push(r2.clone());
        knots.push((r1.clone(), r1));
        knots.push((r2.clone(), r2));
    }
    PwLinear::through(&knots)
}

fn dlo_linear(spec: &StructureSpec, pairs: &[(QuadRat, QuadRat)], rational_only: bool) -> Result<PwLinear> {
    let StructureSpec::Dlo { field, constants, cuts } = spec else { unreachable!() };
    let mut knots = pairs.to_vec();
    let mut protect = Vec::new();
    for c in constants.iter().chain(cuts.iter().map(|c| &c.cutpoint)) {
        if c.is_rational() || (!rational_only && field.contains(c)) {
            knots.push((c.clone(), c.clone()));
        } else {
            protect.push(c.clone());
        }
    }
    linear_with_anchors(&knots, &protect)
}

/// An automorphism mapping `a` to `b` pointwise. The tuples must have the
/// same type; the error names an atomic fact separating them.
pub fn extend_partial(spec: &StructureSpec, a: &[Atom], b: &[Atom]) -> Result<Automorphism> {
    spec.validate()?;
    check_same_type(spec, a, b)?;
    let kind = match spec {
        StructureSpec::Equality => {
            let mut pairs: BTreeMap<u64, u64> = BTreeMap::new();
            for (x, y) in a.iter().zip(b) {
                pairs.insert(eq_index(x)?, eq_index(y)?);
            }
            let dom: BTreeSet<u64> = pairs.keys().copied().collect();
            let img: BTreeSet<u64> = pairs.values().copied().collect();
            // send the image atoms outside the domain back onto the vacated ones
            let from: Vec<u64> = img.difference(&dom).copied().collect();
            let to: Vec<u64> = dom.difference(&img).copied().collect();
            for (x, y) in from.into_iter().zip(to) {
                pairs.insert(x, y);
            }
            let v: Vec<(u64, u64)> = pairs.into_iter().collect();
            AutoKind::Perm(FinPerm::from_pairs(&v)?)
        }
        StructureSpec::Dlo { .. } => {
            let pairs: Vec<(QuadRat, QuadRat)> =
                a.iter().zip(b).map(|(x, y)| Ok((value(x)?.clone(), value(y)?.clone()))).collect::<Result<_>>()?;
            AutoKind::Linear(dlo_linear(spec, &pairs, false)?)
        }
        StructureSpec::OrderedSum(parts) => {
            let mut maps = Vec::new();
            for (k, p) in parts.iter().enumerate() {
                maps.push(match p {
                    Part::Point => None,
                    Part::Structure(s) => {
                        let mut xs = Vec::new();
                        let mut ys = Vec::new();
                        for (x, y) in a.iter().zip(b) {
                            if let (Atom::Sum { part, inner: Some(u) }, Atom::Sum { inner: Some(v), .. }) = (x, y) {
                                if *part == k {
                                    xs.push((**u).clone());
                                    ys.push((**v).clone());
                                }
                            }
                        }
                        Some(extend_partial(s, &xs, &ys)?)
                    }
                });
            }
            AutoKind::Glued(maps)
        }
        StructureSpec::LexProduct(..) => {
            return Err(Error::Unsupported("automorphisms of a lexicographic product".into()));
        }
    };
    Automorphism::new(spec, kind)
}

/// Like [`extend_partial`] for rational tuples of a dense order, with every
/// breakpoint and coefficient rational, so that the map also fixes Q setwise.
pub fn restrict_witness(spec: &StructureSpec, a: &[Atom], b: &[Atom]) -> Result<Automorphism> {
    if !matches!(spec, StructureSpec::Dlo { .. }) {
        return Err(Error::Unsupported(format!("restrict_witness over {spec}")));
    }
    for x in a.iter().chain(b) {
        spec.check_atom(x)?;
        if !value(x)?.is_rational() {
            return Err(Error::Sort(format!("{x} is not rational")));
        }
    }
    check_same_type(spec, a, b)?;
    let pairs: Vec<(QuadRat, QuadRat)> = a.iter().zip(b).map(|(x, y)| (value(x).unwrap().clone(), value(y).unwrap().clone())).collect();
    let l = dlo_linear(spec, &pairs, true)?;
    debug_assert!(l.is_rational());
    Automorphism::new(spec, AutoKind::Linear(l))
}

/// A subset of the carrier that can be searched for points in an interval.
pub trait Region {
    fn contains(&self, spec: &StructureSpec, a: &Atom) -> bool;

    /// `k` increasing members strictly between `lo` and `hi`, or `None` when
    /// the region has fewer than `k` points there.
    fn run_in(&self, spec: &StructureSpec, lo: Option<&Point>, hi: Option<&Point>, k: usize) -> Option<Vec<Atom>>;
}

/// Atoms all of whose coordinates are rational.
#[derive(Clone, Copy, Debug, Default)]
pub struct RationalPoints;

fn all_rational(a: &Atom) -> bool {
    match a {
        Atom::Eq(_) => true,
        Atom::Ord(v) => v.is_rational(),
        Atom::Sum { inner, .. } => inner.as_deref().is_none_or(all_rational),
        Atom::Pair(l, r) => all_rational(l) && all_rational(r),
    }
}

impl Region for RationalPoints {
    fn contains(&self, _spec: &StructureSpec, a: &Atom) -> bool {
        all_rational(a)
    }

    fn run_in(&self, spec: &StructureSpec, lo: Option<&Point>, hi: Option<&Point>, k: usize) -> Option<Vec<Atom>> {
        // every open interval of these orders contains infinitely many rational points
        spec.sample_in(lo, hi, k).ok()
    }
}

/// Result of an absorption attempt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Absorption {
    Map(Automorphism),
    /// The interval between two consecutive fixed positions holds `needed`
    /// points to be moved but fewer points of the region.
    Stuck { lo: Option<Point>, hi: Option<Point>, needed: usize },
}

/// An automorphism fixing `fixed` pointwise and moving `movers` into
/// `region`. Points already in the region are kept when possible.
pub fn absorb_into(spec: &StructureSpec, fixed: &[Atom], movers: &[Atom], region: &dyn Region) -> Result<Absorption> {
    if !spec.is_ordered() || spec.is_lex() {
        return Err(Error::Unsupported(format!("absorption over {spec}")));
    }
    let grounds = spec.ground_points(fixed)?;
    let mut by_gap: BTreeMap<usize, Vec<Atom>> = BTreeMap::new();
    for m in movers {
        spec.check_atom(m)?;
        if let Err(g) = grounds.binary_search_by(|p| spec.cmp_points(p, &Point::Atom(m.clone()))) {
            by_gap.entry(g).or_default().push(m.clone());
        }
    }
    let mut src: Vec<Atom> = Vec::new();
    let mut dst: Vec<Atom> = Vec::new();
    for (g, mut ms) in by_gap {
        ms.sort();
        ms.dedup();
        let lo = if g == 0 { None } else { Some(grounds[g - 1].clone()) };
        let hi = grounds.get(g).cloned();
        let targets = match keep_members(spec, lo.as_ref(), hi.as_ref(), &ms, region) {
            Some(t) => t,
            None => match region.run_in(spec, lo.as_ref(), hi.as_ref(), ms.len()) {
                Some(t) => t,
                None => return Ok(Absorption::Stuck { lo, hi, needed: ms.len() }),
            },
        };
        src.extend(ms);
        dst.extend(targets);
    }
    let mut keep: Vec<Atom> = fixed.to_vec();
    keep.sort();
    keep.dedup();
    let a: Vec<Atom> = keep.iter().cloned().chain(src).collect();
    let b: Vec<Atom> = keep.into_iter().chain(dst).collect();
    Ok(Absorption::Map(extend_partial(spec, &a, &b)?))
}

/// Targets that leave movers already in the region where they are.
fn keep_members(spec: &StructureSpec, lo: Option<&Point>, hi: Option<&Point>, ms: &[Atom], region: &dyn Region) -> Option<Vec<Atom>> {
    let mut out = Vec::new();
    let mut run: Vec<&Atom> = Vec::new();
    let mut left = lo.cloned();
    for m in ms {
        if region.contains(spec, m) {
            let p = Point::Atom(m.clone());
            out.extend(region.run_in(spec, left.as_ref(), Some(&p), run.len())?);
            out.push(m.clone());
            run.clear();
            left = Some(p);
        } else {
            run.push(m);
        }
    }
    out.extend(region.run_in(spec, left.as_ref(), hi, run.len())?);
    Some(out)
}

/// An automorphism of a dense order fixing `fixed` pointwise and mapping
/// every atom of `movers` to a rational.
pub fn absorb(spec: &StructureSpec, fixed: &[Atom], movers: &[Atom]) -> Result<Automorphism> {
    match absorb_into(spec, fixed, movers, &RationalPoints)? {
        Absorption::Map(m) => Ok(m),
        Absorption::Stuck { .. } => unreachable!("every interval holds infinitely many rationals"),
    }
}

/// The dense families of finitely described automorphisms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Finitary permutations of equality atoms.
    FinPerm,
    /// Piecewise linear maps with rational data, for orders over Q.
    PwLinearQ,
}

/// A member of `family` extending the finite partial isomorphism `s`.
pub fn density_witness(spec: &StructureSpec, family: Family, s: &[(Atom, Atom)]) -> Result<Automorphism> {
    match (family, spec) {
        (Family::FinPerm, StructureSpec::Equality) => {}
        (Family::PwLinearQ, StructureSpec::Dlo { field: Field::Q, .. }) => {}
        _ => return Err(Error::Unsupported(format!("{family:?} over {spec}"))),
    }
    let (a, b): (Vec<Atom>, Vec<Atom>) = s.iter().cloned().unzip();
    match check_same_type(spec, &a, &b) {
        Err(Error::TypeMismatch(fact)) => Err(Error::NotPreserving(fact)),
        Err(e) => Err(e),
        Ok(()) => extend_partial(spec, &a, &b),
    }
}

/// Assemble an automorphism of an ordered sum from one map per part.
pub fn glue(spec: &StructureSpec, parts: Vec<Option<Automorphism>>) -> Result<Automorphism> {
    let Some(ps) = spec.parts() else {
        return Err(Error::Unsupported(format!("gluing over {spec}")));
    };
    if ps.len() != parts.len() {
        return Err(Error::Arity { expected: ps.len(), got: parts.len() });
    }
    Automorphism::new(spec, AutoKind::Glued(parts))
}
