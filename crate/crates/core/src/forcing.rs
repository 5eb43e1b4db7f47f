//! The forcing poset of a scenario: finite partial injections `p` from
//! indices to carrier atoms such that `p(dom p)` has the same type as
//! `j(dom p)`, ordered by reverse inclusion with the empty condition on top.
//!
//! A generic filter would be a bijection from the indices onto the carrier.
//! Here only finitely many dense sets are met, one extension at a time.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::atoms::{Atom, Point, Slot, StructureSpec, TypePattern};
use crate::autos::{absorb_into, extend_partial, Absorption, Automorphism};
use crate::error::{Error, Result};
use crate::sample::{self, Rng};
use crate::transfer::{Scenario, Setwise};

/// How far [`extend_into`] searches the enumeration for a canonical value.
pub const SEARCH_LIMIT: u64 = 4096;

/// A finite partial map from indices to atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Condition {
    map: BTreeMap<u64, Atom>,
}

impl Condition {
    pub fn empty() -> Condition {
        Condition::default()
    }

    /// Fails on a repeated index.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, Atom)>) -> Result<Condition> {
        let mut map = BTreeMap::new();
        for (i, a) in pairs {
            if map.insert(i, a).is_some() {
                return Err(Error::Invalid(format!("index {i} assigned twice")));
            }
        }
        Ok(Condition { map })
    }

    pub fn get(&self, i: u64) -> Option<&Atom> {
        self.map.get(&i)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (u64, &Atom)> {
        self.map.iter().map(|(i, a)| (*i, a))
    }

    pub fn domain(&self) -> Vec<u64> {
        self.map.keys().copied().collect()
    }

    /// Values in index order.
    pub fn values(&self) -> Vec<Atom> {
        self.map.values().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// The index mapped to `a`.
    pub fn preimage(&self, a: &Atom) -> Option<u64> {
        self.map.iter().find(|(_, v)| *v == a).map(|(i, _)| *i)
    }

    fn with(&self, i: u64, a: Atom) -> Condition {
        let mut c = self.clone();
        c.map.insert(i, a);
        c
    }

    /// `p ∪ q` as a map, or `None` when they disagree at an index.
    pub fn union(&self, other: &Condition) -> Option<Condition> {
        let mut c = self.clone();
        for (i, a) in &other.map {
            match c.map.get(i) {
                Some(b) if b != a => return None,
                _ => {
                    c.map.insert(*i, a.clone());
                }
            }
        }
        Some(c)
    }

    /// Whether this map extends `other`.
    pub fn contains(&self, other: &Condition) -> bool {
        other.map.iter().all(|(i, a)| self.map.get(i) == Some(a))
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.map.iter().map(|(i, a)| format!("{i} -> {a}")).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

fn j_tuple(sc: &Scenario, dom: &[u64]) -> Vec<Atom> {
    dom.iter().map(|&i| sc.j(i)).collect()
}

/// Whether `p` is a condition of the scenario's poset.
pub fn is_condition(sc: &Scenario, p: &Condition) -> bool {
    let values = p.values();
    let distinct: BTreeSet<&Atom> = values.iter().collect();
    if distinct.len() != values.len() || values.iter().any(|a| sc.big.check_atom(a).is_err()) {
        return false;
    }
    let js = j_tuple(sc, &p.domain());
    match (TypePattern::of(&sc.big, &values, &[]), TypePattern::of(&sc.big, &js, &[])) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    }
}

/// `p ≤ q`: `p` extends `q`.
pub fn leq(p: &Condition, q: &Condition) -> bool {
    p.contains(q)
}

/// Whether `p ∪ q` is a condition.
pub fn compatible(sc: &Scenario, p: &Condition, q: &Condition) -> bool {
    p.union(q).is_some_and(|u| is_condition(sc, &u))
}

/// Where a new index may be sent, given a condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    /// Only this atom (a fixed atom of the structure).
    Fixed(Atom),
    /// Any atom strictly between two positions of the order.
    Gap(Option<Point>, Option<Point>),
    /// Any equality atom outside the range.
    Fresh,
}

impl Target {
    fn admits(&self, spec: &StructureSpec, a: &Atom) -> bool {
        match self {
            Target::Fixed(b) => a == b,
            Target::Gap(lo, hi) => {
                let p = Point::Atom(a.clone());
                lo.as_ref().is_none_or(|l| spec.cmp_points(l, &p).is_lt()) && hi.as_ref().is_none_or(|h| spec.cmp_points(&p, h).is_lt())
            }
            Target::Fresh => true,
        }
    }
}

/// The values `v` for which `p ∪ {n -> v}` is a condition, for `n` outside
/// `dom p`: the slot of `j(n)` over `j(dom p)`, read over `p(dom p)`.
pub fn target(sc: &Scenario, p: &Condition, n: u64) -> Result<Target> {
    if p.get(n).is_some() {
        return Err(Error::Invalid(format!("index {n} is already assigned")));
    }
    let spec = &sc.big;
    let t = TypePattern::of(spec, &[sc.j(n)], &j_tuple(sc, &p.domain()))?;
    let grounds = spec.ground_points(&p.values())?;
    Ok(match &t.slots[0] {
        Slot::At(i) => Target::Fixed(t.grounds[*i].as_atom().cloned().ok_or_else(|| Error::Invalid("slot at a cut".into()))?),
        Slot::Gap { gap, .. } => Target::Gap(if *gap == 0 { None } else { Some(grounds[gap - 1].clone()) }, grounds.get(*gap).cloned()),
        Slot::Fresh(_) => Target::Fresh,
        Slot::Lex { .. } => return Err(Error::Unsupported("forcing over a lexicographic product".into())),
    })
}

/// `k` distinct admissible values for a non-fixed target, avoiding `avoid`.
fn values_in(sc: &Scenario, p: &Condition, t: &Target, k: usize, avoid: &[Atom]) -> Result<Vec<Atom>> {
    match t {
        Target::Fixed(a) => Ok(alloc::vec![a.clone()]),
        Target::Gap(lo, hi) => {
            let mut out = sc.big.sample_in(lo.as_ref(), hi.as_ref(), k + avoid.len())?;
            out.retain(|a| !avoid.contains(a));
            out.truncate(k);
            Ok(out)
        }
        Target::Fresh => {
            let used = p.values();
            Ok((0..).map(Atom::Eq).filter(|a| !used.contains(a) && !avoid.contains(a)).take(k).collect())
        }
    }
}

/// Two incompatible one-point extensions of `p`, at the least index above
/// `dom p` that is not forced to a fixed atom.
pub fn splitting_extensions(sc: &Scenario, p: &Condition) -> Result<(Condition, Condition)> {
    let mut n = p.domain().last().map_or(0, |m| m + 1);
    loop {
        let t = target(sc, p, n)?;
        if !matches!(t, Target::Fixed(_)) {
            let v = values_in(sc, p, &t, 2, &[])?;
            return Ok((p.with(n, v[0].clone()), p.with(n, v[1].clone())));
        }
        n += 1;
    }
}

/// A dense set of the poset.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum DenseSpec {
    /// Conditions with `α` in their domain.
    DomainAt(u64),
    /// Conditions with `a` in their range.
    RangeAt(Atom),
}

impl fmt::Display for DenseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DenseSpec::DomainAt(i) => write!(f, "dom {i}"),
            DenseSpec::RangeAt(a) => write!(f, "ran {a}"),
        }
    }
}

pub fn meets(p: &Condition, d: &DenseSpec) -> bool {
    match d {
        DenseSpec::DomainAt(i) => p.get(*i).is_some(),
        DenseSpec::RangeAt(a) => p.preimage(a).is_some(),
    }
}

/// An extension of `p` meeting `d`.
///
/// For `DomainAt(α)` the value is the first `j(k)` (`k < SEARCH_LIMIT`) that
/// fits the slot, else the simplest admissible point. For `RangeAt(a)` the
/// new index is found by pulling `a` back along an automorphism `π` with
/// `π(j(dom p)) = p(dom p)` and taking the first free `m < SEARCH_LIMIT` with
/// `j(m)` of the same type as `π⁻¹(a)` over `j(dom p)`. Failing that, `π⁻¹(a)`
/// is absorbed into `B` by some `σ` fixing `j(dom p)` and `m = j⁻¹(σ(π⁻¹(a)))`.
pub fn extend_into(sc: &Scenario, p: &Condition, d: &DenseSpec) -> Result<Condition> {
    if meets(p, d) {
        return Ok(p.clone());
    }
    let spec = &sc.big;
    let q = match d {
        DenseSpec::DomainAt(alpha) => {
            let t = target(sc, p, *alpha)?;
            let used = p.values();
            let found = (0..SEARCH_LIMIT).map(|k| sc.j(k)).find(|v| !used.contains(v) && t.admits(spec, v));
            let v = match found {
                Some(v) => v,
                None => match &t {
                    Target::Gap(lo, hi) => match crate::autos::Region::run_in(&sc.small, spec, lo.as_ref(), hi.as_ref(), 1) {
                        Some(v) => v[0].clone(),
                        None => spec.sample_in(lo.as_ref(), hi.as_ref(), 1)?[0].clone(),
                    },
                    _ => values_in(sc, p, &t, 1, &[])?[0].clone(),
                },
            };
            p.with(*alpha, v)
        }
        DenseSpec::RangeAt(a) => {
            spec.check_atom(a)?;
            let dom = p.domain();
            let m = if spec.is_ordered() {
                let js = j_tuple(sc, &dom);
                let pi = extend_partial(spec, &js, &p.values())?;
                let b = pi.invert().apply(a)?;
                let want = TypePattern::of(spec, core::slice::from_ref(&b), &js)?;
                let near = (0..SEARCH_LIMIT)
                    .filter(|k| p.get(*k).is_none())
                    .find(|k| TypePattern::of(spec, &[sc.j(*k)], &js).is_ok_and(|t| t == want));
                match near {
                    Some(k) => k,
                    None => {
                        let c = match absorb_into(spec, &js, core::slice::from_ref(&b), &sc.small)? {
                            Absorption::Map(sigma) => sigma.apply(&b)?,
                            Absorption::Stuck { .. } => {
                                return Err(Error::Invalid(format!("no point of the countable subset has the position of {a} over {p}")));
                            }
                        };
                        sc.index_of(&c).ok_or_else(|| Error::BoundExceeded(format!("index of {c}")))?
                    }
                }
            } else {
                match sc.index_of(a) {
                    Some(k) if p.get(k).is_none() => k,
                    _ => (0..).find(|k| p.get(*k).is_none()).unwrap(),
                }
            };
            p.with(m, a.clone())
        }
    };
    debug_assert!(is_condition(sc, &q), "{q}");
    Ok(q)
}

/// A finite descending chain meeting a list of dense sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericFragment {
    pub chain: Vec<Condition>,
    pub met: Vec<DenseSpec>,
}

impl GenericFragment {
    /// The union of the chain, which is its last element.
    pub fn union(&self) -> &Condition {
        self.chain.last().expect("a fragment starts at a condition")
    }
}

pub fn build_generic(sc: &Scenario, p0: &Condition, ds: &[DenseSpec]) -> Result<GenericFragment> {
    if !is_condition(sc, p0) {
        return Err(Error::Invalid(format!("{p0} is not a condition")));
    }
    let mut chain = alloc::vec![p0.clone()];
    for d in ds {
        let next = extend_into(sc, chain.last().unwrap(), d)?;
        chain.push(next);
    }
    Ok(GenericFragment { chain, met: ds.to_vec() })
}

/// The fragment's approximation of the generic bijection.
pub fn eval_name_f(g: &GenericFragment) -> BTreeMap<u64, Atom> {
    g.union().map.clone()
}

/// A name `{(x, p_x)}`: the label `x` belongs to the interpretation iff
/// `p_x` is in the generic filter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleName {
    entries: Vec<(String, Condition)>,
}

impl SimpleName {
    pub fn new(sc: &Scenario, entries: Vec<(String, Condition)>) -> Result<SimpleName> {
        let labels: BTreeSet<&String> = entries.iter().map(|(l, _)| l).collect();
        if labels.len() != entries.len() {
            return Err(Error::Invalid("repeated label".into()));
        }
        if let Some((l, p)) = entries.iter().find(|(_, p)| !is_condition(sc, p)) {
            return Err(Error::Invalid(format!("{p} (label {l}) is not a condition")));
        }
        Ok(SimpleName { entries })
    }

    pub fn entries(&self) -> &[(String, Condition)] {
        &self.entries
    }

    pub fn get(&self, label: &str) -> Result<&Condition> {
        self.entries.iter().find(|(l, _)| l == label).map(|(_, p)| p).ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    In,
    Out,
    /// Neither is forced; `q_in` forces membership and `q_out` forces
    /// non-membership, both extending the given condition.
    Undecided { q_in: Condition, q_out: Condition },
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Membership::In => write!(f, "in"),
            Membership::Out => write!(f, "out"),
            Membership::Undecided { q_in, q_out } => write!(f, "undecided (in below {q_in}, out below {q_out})"),
        }
    }
}

/// What `p` forces about the label `x` of `n`.
///
/// `p` forces `x` in iff every pair of `p_x` is in `p` or forced by it (an
/// index whose only admissible value is a fixed atom), and forces it out iff
/// `p` and `p_x` are incompatible.
pub fn forces_membership(sc: &Scenario, p: &Condition, n: &SimpleName, x: &str) -> Result<Membership> {
    let px = n.get(x)?;
    if !compatible(sc, p, px) {
        return Ok(Membership::Out);
    }
    let mut open = None;
    for (i, v) in px.pairs() {
        if p.get(i).is_some() {
            continue;
        }
        let t = target(sc, p, i)?;
        if t != Target::Fixed(v.clone()) {
            open = Some((i, v.clone(), t));
            break;
        }
    }
    let Some((i, v, t)) = open else { return Ok(Membership::In) };
    let q_in = p.union(px).unwrap();
    let w = values_in(sc, p, &t, 1, &[v])?;
    let q_out = p.with(i, w[0].clone());
    debug_assert!(is_condition(sc, &q_out) && !compatible(sc, &q_out, px));
    Ok(Membership::Undecided { q_in, q_out })
}

/// A permutation of the indices: `σ(i) = j⁻¹(τ(j(i)))` for an automorphism
/// `τ` mapping the countable subset onto itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexPerm {
    pub tau: Automorphism,
}

impl IndexPerm {
    pub fn apply(&self, sc: &Scenario, i: u64) -> Result<u64> {
        let a = self.tau.apply(&sc.j(i))?;
        sc.index_of(&a).ok_or_else(|| Error::BoundExceeded(format!("index of {a}")))
    }

    pub fn apply_condition(&self, sc: &Scenario, p: &Condition) -> Result<Condition> {
        Condition::from_pairs(p.pairs().map(|(i, a)| Ok((self.apply(sc, i)?, a.clone()))).collect::<Result<Vec<_>>>()?)
    }

    pub fn invert(&self) -> IndexPerm {
        IndexPerm { tau: self.tau.invert() }
    }

    pub fn is_identity(&self) -> bool {
        self.tau.is_identity()
    }
}

impl fmt::Display for IndexPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "j^-1 . {} . j", self.tau)
    }
}

/// An index permutation `σ` with `σ·p` compatible with `q`, and a common
/// extension of both.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homogeneity {
    pub sigma: IndexPerm,
    pub common: Condition,
}

pub fn almost_homog_witness(sc: &Scenario, p: &Condition, q: &Condition) -> Result<Homogeneity> {
    let mut ext = q.clone();
    let mut targets = Vec::new();
    for (_, v) in p.pairs() {
        if ext.preimage(v).is_none() {
            ext = extend_into(sc, &ext, &DenseSpec::RangeAt(v.clone()))?;
        }
        targets.push(ext.preimage(v).unwrap());
    }
    let a = j_tuple(sc, &p.domain());
    let b = j_tuple(sc, &targets);
    let tau = match sc.small.setwise_witness(&sc.big, &a, &b)? {
        Setwise::Map(m) => m,
        Setwise::Impossible(r) => return Err(Error::Unsupported(format!("no homogeneity witness: {r}"))),
    };
    let sigma = IndexPerm { tau };
    debug_assert!(ext.contains(&sigma.apply_condition(sc, p)?));
    Ok(Homogeneity { sigma, common: ext })
}

/// A random condition on at most `size` indices below 32.
pub fn random_condition(sc: &Scenario, size: usize, rng: &mut Rng) -> Result<Condition> {
    let mut idx: Vec<u64> = (0..32).collect();
    idx.shuffle(rng);
    let k = rng.gen_range(0..=size);
    let mut dom: Vec<u64> = idx[..k].to_vec();
    dom.sort();
    let t = TypePattern::of(&sc.big, &j_tuple(sc, &dom), &[])?;
    let spec = &sc.big;
    let mut pick = |lo: Option<&Point>, hi: Option<&Point>, rng: &mut Rng| match spec {
        StructureSpec::Equality => Some(Atom::Eq(rng.gen_range(0..64))),
        _ => sample::atom_between(spec, lo, hi, rng).ok(),
    };
    let values = sample::realize_with(spec, &t, &mut pick, rng).ok_or_else(|| Error::Invalid("no random condition".into()))?;
    Condition::from_pairs(dom.into_iter().zip(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::QuadRat;
    use crate::transfer::{scenario, scenario_catalog};

    fn c(pairs: &[(u64, Atom)]) -> Condition {
        Condition::from_pairs(pairs.iter().cloned()).unwrap()
    }

    #[test]
    fn order_and_compatibility() {
        let sc = scenario("R_vs_Q").unwrap();
        let p = c(&[(0, Atom::ratio(1, 2))]);
        let q = c(&[(0, Atom::ratio(1, 2)), (1, Atom::int(2))]);
        assert!(is_condition(&sc, &q) && leq(&q, &p) && !leq(&p, &q));
        assert!(!compatible(&sc, &p, &c(&[(0, Atom::int(3))])));
        // j(1) = 1 > 0 = j(0) and j(2) = -1 < j(0): values ordered the other way clash
        let r = c(&[(1, Atom::int(5))]);
        let s = c(&[(0, Atom::int(7))]);
        assert!(is_condition(&sc, &r) && is_condition(&sc, &s));
        assert!(!compatible(&sc, &r, &s));
    }

    #[test]
    fn extensions() {
        let sc = scenario("R_vs_Q").unwrap();
        let e = Condition::empty();
        assert_eq!(extend_into(&sc, &e, &DenseSpec::DomainAt(0)).unwrap(), c(&[(0, Atom::int(0))]));
        let root2 = Atom::Ord(QuadRat::sqrt2());
        let p = c(&[(0, Atom::int(0)), (1, Atom::int(1))]);
        let q = extend_into(&sc, &p, &DenseSpec::RangeAt(root2.clone())).unwrap();
        assert!(leq(&q, &p) && q.preimage(&root2).is_some() && is_condition(&sc, &q));
        let (a, b) = splitting_extensions(&sc, &p).unwrap();
        assert!(leq(&a, &p) && leq(&b, &p) && !compatible(&sc, &a, &b));
        let g = build_generic(&sc, &e, &[]).unwrap();
        assert_eq!(g.chain, [e]);
    }

    #[test]
    fn membership() {
        let sc = scenario("Rpp_vs_Qpp").unwrap();
        let px = c(&[(1, sc.j(1))]);
        let star = c(&[(0, Atom::star(1))]);
        let n = SimpleName::new(&sc, alloc::vec![("x".into(), px.clone()), ("s".into(), star)]).unwrap();
        // j(0) is the star: forced already by the empty condition
        assert_eq!(forces_membership(&sc, &Condition::empty(), &n, "s").unwrap(), Membership::In);
        assert_eq!(forces_membership(&sc, &px, &n, "x").unwrap(), Membership::In);
        let Membership::Undecided { q_in, q_out } = forces_membership(&sc, &Condition::empty(), &n, "x").unwrap() else { panic!() };
        assert!(leq(&q_in, &px) && !compatible(&sc, &q_out, &px));
        assert!(forces_membership(&sc, &q_out, &n, "x").unwrap() == Membership::Out);
        assert!(matches!(forces_membership(&sc, &px, &n, "y"), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn homogeneity() {
        let mut rng = sample::rng(5);
        for sc in scenario_catalog().into_iter().filter(|s| !s.expected_fail) {
            for _ in 0..20 {
                let p = random_condition(&sc, 4, &mut rng).unwrap();
                let q = random_condition(&sc, 4, &mut rng).unwrap();
                let h = almost_homog_witness(&sc, &p, &q).unwrap();
                let moved = h.sigma.apply_condition(&sc, &p).unwrap();
                assert!(is_condition(&sc, &moved) && compatible(&sc, &moved, &q), "{}", sc.name);
            }
            let p = random_condition(&sc, 3, &mut rng).unwrap();
            assert!(almost_homog_witness(&sc, &p, &p).unwrap().sigma.is_identity());
        }
    }
}
