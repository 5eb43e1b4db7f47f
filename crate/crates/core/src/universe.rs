//! Hereditarily finite sets with atoms, their supports, and the encoding of
//! pure sets as atoms.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::atoms::{split_top_level, Atom, Point, StructureSpec, TypePattern};
use crate::autos::{extend_partial, Automorphism, FinPerm};
use crate::defsets::DefSet;
use crate::error::{Error, Result};

/// A hereditarily finite set over atoms, in canonical form: elements sorted
/// (atoms first) and without repetition, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HFSet {
    Atom(Atom),
    Set(Vec<HFSet>),
}

impl HFSet {
    pub fn empty() -> HFSet {
        HFSet::Set(Vec::new())
    }

    pub fn atom(a: Atom) -> HFSet {
        HFSet::Atom(a)
    }

    pub fn set(items: impl IntoIterator<Item = HFSet>) -> HFSet {
        let mut v: Vec<HFSet> = items.into_iter().collect();
        v.sort();
        v.dedup();
        HFSet::Set(v)
    }

    /// `()` is the empty set, `(a)` is `a`, `(a, b)` is `{{a}, {a, b}}` and
    /// longer tuples nest to the left.
    pub fn tuple(t: &[Atom]) -> HFSet {
        match t {
            [] => HFSet::empty(),
            [a] => HFSet::Atom(a.clone()),
            [init @ .., last] => {
                let l = HFSet::tuple(init);
                let r = HFSet::Atom(last.clone());
                HFSet::set([HFSet::set([l.clone()]), HFSet::set([l, r])])
            }
        }
    }

    pub fn parse(spec: &StructureSpec, text: &str) -> Result<HFSet> {
        let t = text.trim();
        if let Some(inner) = t.strip_prefix('{') {
            let Some(inner) = inner.strip_suffix('}') else {
                return Err(Error::Syntax { pos: t.len(), msg: "expected `}`".into() });
            };
            if inner.trim().is_empty() {
                return Ok(HFSet::empty());
            }
            let items = split_top_level(inner).into_iter().map(|s| HFSet::parse(spec, s)).collect::<Result<Vec<_>>>()?;
            Ok(HFSet::set(items))
        } else {
            Ok(HFSet::Atom(Atom::parse(spec, t)?))
        }
    }

    pub fn elements(&self) -> &[HFSet] {
        match self {
            HFSet::Atom(_) => &[],
            HFSet::Set(v) => v,
        }
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, HFSet::Atom(_))
    }

    /// Atoms occurring anywhere in the set, sorted.
    pub fn atoms(&self) -> Vec<Atom> {
        fn go(x: &HFSet, out: &mut Vec<Atom>) {
            match x {
                HFSet::Atom(a) => out.push(a.clone()),
                HFSet::Set(v) => v.iter().for_each(|y| go(y, out)),
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out.sort();
        out.dedup();
        out
    }

    /// Atoms have rank 0, and a set has rank one more than its elements.
    pub fn rank(&self) -> usize {
        match self {
            HFSet::Atom(_) => 0,
            HFSet::Set(v) => v.iter().map(|y| y.rank() + 1).max().unwrap_or(0),
        }
    }

    pub fn map_atoms(&self, f: &mut impl FnMut(&Atom) -> Result<Atom>) -> Result<HFSet> {
        Ok(match self {
            HFSet::Atom(a) => HFSet::Atom(f(a)?),
            HFSet::Set(v) => HFSet::set(v.iter().map(|y| y.map_atoms(f)).collect::<Result<Vec<_>>>()?),
        })
    }
}

impl fmt::Display for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HFSet::Atom(a) => write!(f, "{a}"),
            HFSet::Set(v) => {
                f.write_str("{")?;
                for (i, y) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{y}")?;
                }
                f.write_str("}")
            }
        }
    }
}

/// The image of `x` under `pi`.
pub fn act(pi: &Automorphism, x: &HFSet) -> Result<HFSet> {
    x.map_atoms(&mut |a| pi.apply(a))
}

/// The transitive closure: every element, element of an element, and so on.
pub fn tc(x: &HFSet) -> Vec<HFSet> {
    fn go(x: &HFSet, out: &mut Vec<HFSet>) {
        for y in x.elements() {
            out.push(y.clone());
            go(y, out);
        }
    }
    let mut out = Vec::new();
    go(x, &mut out);
    out.sort();
    out.dedup();
    out
}

/// No atom occurs in `{x}` or its transitive closure.
pub fn pure(x: &HFSet) -> bool {
    x.atoms().is_empty()
}

fn fresh_eq(used: &[Atom]) -> Atom {
    let m = used.iter().filter_map(|a| if let Atom::Eq(k) = a { Some(*k + 1) } else { None }).max().unwrap_or(0);
    Atom::Eq(m)
}

/// An automorphism fixing `a` pointwise and moving `x`, or `None` when `a`
/// supports `x`.
///
/// Over equality atoms it suffices to try the transpositions of two atoms
/// outside `a`, one of them in `x` and the other in `x` or fresh. Over the
/// ordered structures an automorphism fixing a finite set setwise fixes it
/// pointwise, so `a` supports `x` exactly when every atom of `x` is in `a` or
/// fixed; the witness moves the first atom that is not.
pub fn hf_split_witness(spec: &StructureSpec, x: &HFSet, a: &[Atom]) -> Result<Option<Automorphism>> {
    let atoms = x.atoms();
    for t in atoms.iter().chain(a) {
        spec.check_atom(t)?;
    }
    match spec {
        StructureSpec::Equality => {
            let mut used = atoms.clone();
            used.extend(a.iter().cloned());
            let fresh = fresh_eq(&used);
            let movable: Vec<&Atom> = atoms.iter().filter(|t| !a.contains(t)).collect();
            for (i, u) in movable.iter().enumerate() {
                for v in movable[i + 1..].iter().copied().chain([&fresh]) {
                    let (Atom::Eq(p), Atom::Eq(q)) = (u, v) else { unreachable!() };
                    let pi = Automorphism::new(spec, crate::autos::AutoKind::Perm(FinPerm::transposition(*p, *q)))?;
                    if act(&pi, x)? != *x {
                        return Ok(Some(pi));
                    }
                }
            }
            Ok(None)
        }
        StructureSpec::LexProduct(..) => Err(Error::Unsupported(format!("supports over {spec}"))),
        _ => {
            let Some(c) = atoms.iter().find(|t| !a.contains(t) && !spec.is_fixed(t)) else {
                return Ok(None);
            };
            let pi = move_one(spec, a, c)?;
            debug_assert!(act(&pi, x)? != *x);
            Ok(Some(pi))
        }
    }
}

/// An automorphism fixing `a` pointwise and moving `c`, which must not be in
/// `a` or fixed.
fn move_one(spec: &StructureSpec, a: &[Atom], c: &Atom) -> Result<Automorphism> {
    let mut dom: Vec<Atom> = a.to_vec();
    dom.sort();
    dom.dedup();
    let target = match spec {
        StructureSpec::Equality => {
            let mut used = dom.clone();
            used.push(c.clone());
            fresh_eq(&used)
        }
        _ => {
            let grounds = spec.ground_points(&dom)?;
            let g = grounds.binary_search_by(|p| spec.cmp_points(p, &Point::Atom(c.clone()))).unwrap_err();
            let lo = if g == 0 { None } else { Some(&grounds[g - 1]) };
            let hi = grounds.get(g);
            // some point of the same gap other than `c`
            let pts = spec.sample_in(lo, Some(&Point::Atom(c.clone())), 1)?;
            match pts.into_iter().next() {
                Some(p) => p,
                None => spec.sample_in(Some(&Point::Atom(c.clone())), hi, 1)?.remove(0),
            }
        }
    };
    let mut src = dom.clone();
    src.push(c.clone());
    let mut dst = dom;
    dst.push(target);
    extend_partial(spec, &src, &dst)
}

/// Every automorphism fixing `a` pointwise fixes `x`.
pub fn hf_supported_by(spec: &StructureSpec, x: &HFSet, a: &[Atom]) -> Result<bool> {
    Ok(hf_split_witness(spec, x, a)?.is_none())
}

/// A least support, found by dropping atoms of `x` one at a time.
pub fn hf_minimal_support(spec: &StructureSpec, x: &HFSet) -> Result<Vec<Atom>> {
    let mut cur: Vec<Atom> = x.atoms().into_iter().filter(|a| !spec.is_fixed(a)).collect();
    let all = cur.clone();
    for a in &all {
        let trial: Vec<Atom> = cur.iter().filter(|c| *c != a).cloned().collect();
        if hf_supported_by(spec, x, &trial)? {
            cur = trial;
        }
    }
    Ok(cur)
}

/// Support relative to the permutations of a finite pool of equality atoms:
/// every permutation of `pool` fixing `a` pointwise fixes `x`.
pub fn hf_pool_supported_by(x: &HFSet, a: &[Atom], pool: &[Atom]) -> Result<bool> {
    let movable: Vec<u64> = pool
        .iter()
        .filter(|t| !a.contains(t))
        .map(|t| match t {
            Atom::Eq(k) => Ok(*k),
            _ => Err(Error::Sort(format!("{t} is not an equality atom"))),
        })
        .collect::<Result<_>>()?;
    // the transpositions generate the symmetric group of the movable atoms
    for (i, p) in movable.iter().enumerate() {
        for q in &movable[i + 1..] {
            let pi = Automorphism::new(&StructureSpec::Equality, crate::autos::AutoKind::Perm(FinPerm::transposition(*p, *q)))?;
            if act(&pi, x)? != *x {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Greedy least pool support among `candidates`.
pub fn hf_pool_minimal_support(x: &HFSet, candidates: &[Atom], pool: &[Atom]) -> Result<Vec<Atom>> {
    let mut cur = candidates.to_vec();
    for a in candidates {
        let trial: Vec<Atom> = cur.iter().filter(|c| *c != a).cloned().collect();
        if hf_pool_supported_by(x, &trial, pool)? {
            cur = trial;
        }
    }
    Ok(cur)
}

/// The members of `s` among tuples from `pool`, as a set of encoded tuples.
pub fn materialize(s: &DefSet, pool: &[Atom]) -> Result<HFSet> {
    let k = s.arity();
    let n = pool.len();
    let total = n.checked_pow(k as u32).ok_or_else(|| Error::BoundExceeded("pool too large".into()))?;
    let mut out = Vec::new();
    let mut t = vec![0usize; k];
    for _ in 0..total {
        let tuple: Vec<Atom> = t.iter().map(|&i| pool[i].clone()).collect();
        if s.member(&tuple)? {
            out.push(HFSet::tuple(&tuple));
        }
        for d in (0..k).rev() {
            t[d] += 1;
            if t[d] < n {
                break;
            }
            t[d] = 0;
        }
    }
    Ok(HFSet::set(out))
}

/// Result of comparing two pointwise stabilisers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StabOrder {
    /// `G_a` is contained in `G_b`.
    Contained,
    /// This automorphism fixes `a` pointwise and moves an atom of `b`.
    Moves(Automorphism, Atom),
}

/// Whether `G_a <= G_b`: every atom of `b` is in `a` or fixed.
pub fn stab_leq(spec: &StructureSpec, a: &[Atom], b: &[Atom]) -> Result<StabOrder> {
    for t in a.iter().chain(b) {
        spec.check_atom(t)?;
    }
    if spec.is_lex() {
        return Err(Error::Unsupported(format!("stabilisers over {spec}")));
    }
    match b.iter().find(|t| !a.contains(t) && !spec.is_fixed(t)) {
        None => Ok(StabOrder::Contained),
        Some(c) => Ok(StabOrder::Moves(move_one(spec, a, c)?, c.clone())),
    }
}

/// The pointwise stabiliser of a tuple, stored sorted and duplicate free.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StabDescriptor(Vec<Atom>);

impl StabDescriptor {
    pub fn new(atoms: &[Atom]) -> StabDescriptor {
        let mut v = atoms.to_vec();
        v.sort();
        v.dedup();
        StabDescriptor(v)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.0
    }
}

impl fmt::Display for StabDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G{}", crate::atoms::tuple_to_string(&self.0))
    }
}

/// `G_a` intersected with `G_b`.
pub fn filter_intersect(a: &StabDescriptor, b: &StabDescriptor) -> StabDescriptor {
    let mut v = a.0.clone();
    v.extend(b.0.iter().cloned());
    StabDescriptor::new(&v)
}

/// `pi G_a pi^-1 = G_{pi(a)}`.
pub fn filter_conjugate(pi: &Automorphism, d: &StabDescriptor) -> Result<StabDescriptor> {
    Ok(StabDescriptor::new(&pi.apply_tuple(&d.0)?))
}

/// Generators of a normal filter of subgroups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FilterBase {
    /// All pointwise stabilisers of finite tuples.
    FiniteSupport,
    /// The filter generated by these stabilisers under intersection and
    /// conjugation.
    Generated(Vec<StabDescriptor>),
}

/// Whether some stabiliser in the generated filter is contained in the
/// stabiliser of `x`.
fn symmetric(spec: &StructureSpec, x: &HFSet, base: &FilterBase) -> Result<bool> {
    let supp = hf_minimal_support(spec, x)?;
    let gens = match base {
        FilterBase::FiniteSupport => return Ok(true),
        FilterBase::Generated(g) => g,
    };
    // The filter contains G_c for every concatenation c of conjugates of
    // generators, and conjugates of a tuple are the tuples of its type. An
    // atom can be put into such a c exactly when some generator has an atom
    // of the same 1-type.
    for s in &supp {
        let t = TypePattern::of(spec, core::slice::from_ref(s), &[])?;
        let mut covered = false;
        for g in gens {
            for a in g.atoms() {
                if TypePattern::of(spec, core::slice::from_ref(a), &[])? == t {
                    covered = true;
                }
            }
        }
        if !covered {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `x` is hereditarily symmetric for the filter generated by `base`.
pub fn in_pm(spec: &StructureSpec, x: &HFSet, base: &FilterBase) -> Result<bool> {
    if !symmetric(spec, x, base)? {
        return Ok(false);
    }
    for y in tc(x) {
        if !symmetric(spec, &y, base)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A node of the class adding atoms: `<p, 1>` is an atom to be, `<s, 0>` is
/// a set of nodes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VStarNode {
    Payload(HFSet),
    Set(Vec<VStarNode>),
}

impl VStarNode {
    pub fn set(items: impl IntoIterator<Item = VStarNode>) -> VStarNode {
        let mut v: Vec<VStarNode> = items.into_iter().collect();
        v.sort();
        v.dedup();
        VStarNode::Set(v)
    }

    pub fn tag(&self) -> u8 {
        match self {
            VStarNode::Payload(_) => 1,
            VStarNode::Set(_) => 0,
        }
    }
}

impl fmt::Display for VStarNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VStarNode::Payload(p) => write!(f, "<{p}, 1>"),
            VStarNode::Set(v) => {
                f.write_str("<{")?;
                for (i, y) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{y}")?;
                }
                f.write_str("}, 0>")
            }
        }
    }
}

fn require_pure(x: &HFSet) -> Result<()> {
    if pure(x) {
        Ok(())
    } else {
        Err(Error::Invalid(format!("{x} is not pure")))
    }
}

/// The bottom level: the elements of the pure set `x` as atoms to be.
pub fn vstar_encode(x: &HFSet) -> Result<VStarNode> {
    require_pure(x)?;
    Ok(VStarNode::set(x.elements().iter().map(|y| VStarNode::Payload(y.clone()))))
}

/// The copy of a pure set inside the class: `<{f(y) : y in x}, 0>`.
pub fn f_map(x: &HFSet) -> Result<VStarNode> {
    require_pure(x)?;
    fn go(x: &HFSet) -> VStarNode {
        VStarNode::set(x.elements().iter().map(go))
    }
    Ok(go(x))
}

/// Replace every `<p, 1>` by the atom `f(p)` and every `<s, 0>` by the set of
/// its collapsed members.
pub fn collapse(v: &VStarNode, f: &BTreeMap<HFSet, Atom>) -> Result<HFSet> {
    Ok(match v {
        VStarNode::Payload(p) => {
            HFSet::Atom(f.get(p).cloned().ok_or_else(|| Error::PoolTooSmall(format!("no atom assigned to {p}")))?)
        }
        VStarNode::Set(items) => HFSet::set(items.iter().map(|y| collapse(y, f)).collect::<Result<Vec<_>>>()?),
    })
}

/// All pure sets of rank below `r`.
pub fn pure_sets_below(r: usize) -> Vec<HFSet> {
    let mut level: Vec<HFSet> = Vec::new();
    for _ in 0..r {
        let n = level.len();
        let mut next = Vec::with_capacity(1 << n);
        for mask in 0u64..(1u64 << n) {
            next.push(HFSet::set((0..n).filter(|i| mask & (1 << i) != 0).map(|i| level[i].clone())));
        }
        next.sort();
        level = next;
    }
    level
}

/// Render a list of atoms like a tuple.
pub fn atoms_to_string(atoms: &[Atom]) -> String {
    crate::atoms::tuple_to_string(atoms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::Field;
    use crate::num::QuadRat;
    use alloc::string::ToString;

    fn eq() -> StructureSpec {
        StructureSpec::Equality
    }

    fn hf(s: &str) -> HFSet {
        HFSet::parse(&eq(), s).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let x = hf("{a0, {a1}, {}}");
        assert_eq!(x.to_string(), "{a0, {}, {a1}}");
        assert_eq!(x.rank(), 2);
        assert_eq!(hf("{a1, a0, a1}"), hf("{a0, a1}"));
        assert!(HFSet::parse(&eq(), "{a0").is_err());
    }

    #[test]
    fn action_and_closure() {
        let t = extend_partial(&eq(), &[Atom::eq(0)], &[Atom::eq(1)]).unwrap();
        assert_eq!(act(&t, &hf("{a0, {a1}}")).unwrap(), hf("{a1, {a0}}"));
        let v = hf("{{}, {{}}}");
        assert_eq!(act(&t, &v).unwrap(), v);
        assert_eq!(tc(&hf("{{a0}}")), vec![hf("a0"), hf("{a0}")]);
        assert!(pure(&v));
        assert!(!pure(&hf("{a0}")));
    }

    #[test]
    fn supports() {
        let x = hf("{a0}");
        assert!(hf_supported_by(&eq(), &x, &[Atom::eq(0)]).unwrap());
        assert!(!hf_supported_by(&eq(), &x, &[]).unwrap());
        assert_eq!(hf_minimal_support(&eq(), &hf("{a0, {a1}}")).unwrap(), vec![Atom::eq(0), Atom::eq(1)]);
        assert!(hf_minimal_support(&eq(), &hf("{{}}")).unwrap().is_empty());
        let d = StructureSpec::dlo();
        let pair = HFSet::tuple(&[Atom::int(0), Atom::int(3)]);
        assert_eq!(hf_minimal_support(&d, &pair).unwrap(), vec![Atom::int(0), Atom::int(3)]);
        let w = hf_split_witness(&d, &pair, &[Atom::int(0)]).unwrap().unwrap();
        assert_eq!(w.apply(&Atom::int(0)).unwrap(), Atom::int(0));
        assert_ne!(act(&w, &pair).unwrap(), pair);
        // the set of all pairs from a pool is supported by the pool only
        let pool: Vec<Atom> = (0..4).map(Atom::eq).collect();
        let mut pairs = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                pairs.push(HFSet::set([HFSet::Atom(pool[i].clone()), HFSet::Atom(pool[j].clone())]));
            }
        }
        let all = HFSet::set(pairs);
        assert!(!hf_supported_by(&eq(), &all, &[]).unwrap());
        assert!(hf_pool_supported_by(&all, &[], &pool).unwrap());
    }

    #[test]
    fn stabilisers() {
        let d = StructureSpec::dlo();
        assert_eq!(stab_leq(&d, &[Atom::int(1), Atom::int(2)], &[Atom::int(1)]).unwrap(), StabOrder::Contained);
        match stab_leq(&d, &[Atom::int(1)], &[Atom::int(2)]).unwrap() {
            StabOrder::Moves(m, c) => {
                assert_eq!(m.apply(&Atom::int(1)).unwrap(), Atom::int(1));
                assert_ne!(m.apply(&c).unwrap(), c);
            }
            r => panic!("{r:?}"),
        }
        let d0 = d.clone().with_constant(QuadRat::zero());
        assert_eq!(stab_leq(&d0, &[], &[Atom::int(0)]).unwrap(), StabOrder::Contained);
        let a = StabDescriptor::new(&[Atom::int(1)]);
        let b = StabDescriptor::new(&[Atom::int(2)]);
        assert_eq!(filter_intersect(&a, &b), StabDescriptor::new(&[Atom::int(1), Atom::int(2)]));
        let f = extend_partial(&d, &[Atom::int(0)], &[Atom::int(5)]).unwrap();
        assert_eq!(filter_conjugate(&f, &StabDescriptor::new(&[Atom::int(0)])).unwrap(), StabDescriptor::new(&[Atom::int(5)]));
    }

    #[test]
    fn permutation_models() {
        let x = hf("{a0, {a1, a2}}");
        assert!(in_pm(&eq(), &x, &FilterBase::FiniteSupport).unwrap());
        let trivial = FilterBase::Generated(vec![StabDescriptor::new(&[])]);
        assert!(!in_pm(&eq(), &hf("{a0}"), &trivial).unwrap());
        assert!(in_pm(&eq(), &hf("{{}, {{}}}"), &trivial).unwrap());
        let one = FilterBase::Generated(vec![StabDescriptor::new(&[Atom::eq(9)])]);
        assert!(in_pm(&eq(), &x, &one).unwrap());
        let q2 = StructureSpec::dlo_over(Field::QSqrt2);
        assert!(in_pm(&q2, &HFSet::tuple(&[Atom::int(0)]), &FilterBase::FiniteSupport).unwrap());
    }

    #[test]
    fn vstar() {
        let e = HFSet::empty();
        assert_eq!(f_map(&e).unwrap(), VStarNode::Set(vec![]));
        assert_eq!(f_map(&e).unwrap().to_string(), "<{}, 0>");
        let mut f = BTreeMap::new();
        f.insert(e.clone(), Atom::eq(0));
        let v = VStarNode::set([VStarNode::Payload(e.clone())]);
        assert_eq!(collapse(&v, &f).unwrap(), hf("{a0}"));
        let sets = pure_sets_below(4);
        assert_eq!(sets.len(), 16);
        for x in &sets {
            assert_eq!(collapse(&f_map(x).unwrap(), &BTreeMap::new()).unwrap(), *x);
        }
        assert!(matches!(collapse(&vstar_encode(&hf("{{}}")).unwrap(), &BTreeMap::new()), Err(Error::PoolTooSmall(_))));
        assert!(f_map(&hf("{a0}")).is_err());
    }

    #[test]
    fn materialized_sets() {
        let pool: Vec<Atom> = [5, 0, 1, 2].into_iter().map(Atom::eq).collect();
        let s = DefSet::parse(&eq(), "{(x): x != y0}", &[Atom::eq(5)]).unwrap();
        let m = materialize(&s, &pool).unwrap();
        assert_eq!(m, hf("{a0, a1, a2}"));
        assert_eq!(hf_pool_minimal_support(&m, &[Atom::eq(5)], &pool).unwrap(), vec![Atom::eq(5)]);
    }
}
