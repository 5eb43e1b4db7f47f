//! Seeded random generators for property checks and cover sampling.
//!
//! Values are drawn with bounded numerators and denominators: rationals
//! `p/q` with `|p| <= 20`, `q <= 8`, and over Q(√2) also `a + b√2` with
//! rational `a` and `b ∈ {±1/2, ±1, ±2}`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::atoms::{Atom, Field, Part, Point, Slot, StructureSpec, TypePattern};
use crate::autos::{extend_partial, Automorphism};
use crate::defsets::DefSet;
use crate::error::{Error, Result};
use crate::formula::{Formula, Rel, Term};
use crate::num::{simplest_between, QuadRat, Rational};
use crate::universe::HFSet;

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rational(rng: &mut Rng) -> Rational {
    Rational::new(rng.gen_range(-20..=20), rng.gen_range(1..=8))
}

fn random_coefficient(rng: &mut Rng) -> Rational {
    let c = [Rational::new(1, 2), Rational::one(), Rational::integer(2)].choose(rng).unwrap().clone();
    if rng.gen_bool(0.5) {
        -c
    } else {
        c
    }
}

pub fn random_value(field: Field, rng: &mut Rng) -> QuadRat {
    let a = random_rational(rng);
    if field == Field::QSqrt2 && rng.gen_ratio(1, 3) {
        QuadRat::new(a, random_coefficient(rng))
    } else {
        QuadRat::rational(a)
    }
}

/// A random rational strictly inside `(lo, hi)`.
pub fn rational_between(lo: Option<&QuadRat>, hi: Option<&QuadRat>, rng: &mut Rng) -> Rational {
    let (t1, t2) = random_window(lo, hi, rng);
    simplest_between(Some(&t1), Some(&t2))
}

/// A random nonempty subinterval of `(lo, hi)`.
fn random_window(lo: Option<&QuadRat>, hi: Option<&QuadRat>, rng: &mut Rng) -> (QuadRat, QuadRat) {
    let width = QuadRat::ratio(1, rng.gen_range(1..=40));
    match (lo, hi) {
        (None, None) => {
            let t = QuadRat::rational(random_rational(rng));
            let t2 = &t + &width;
            (t, t2)
        }
        (Some(l), None) => {
            let t = l + &QuadRat::ratio(rng.gen_range(1..=40), rng.gen_range(1..=8));
            let t2 = &t + &width;
            (t, t2)
        }
        (None, Some(h)) => {
            let t = h - &QuadRat::ratio(rng.gen_range(1..=40), rng.gen_range(1..=8));
            let t1 = &t - &width;
            (t1, t)
        }
        (Some(l), Some(h)) => {
            let n = 64;
            let k = rng.gen_range(0..n);
            let step = &(h - l) / &QuadRat::int(n);
            let t1 = l + &(&step * &QuadRat::int(k));
            let t2 = &t1 + &step;
            (t1, t2)
        }
    }
}

/// A random field element strictly inside `(lo, hi)`.
pub fn value_between(field: Field, lo: Option<&QuadRat>, hi: Option<&QuadRat>, rng: &mut Rng) -> QuadRat {
    let (t1, t2) = random_window(lo, hi, rng);
    if field == Field::QSqrt2 && rng.gen_ratio(1, 3) {
        // √2 - 1 lies in (0, 1)
        &t1 + &(&(&t2 - &t1) * &(&QuadRat::sqrt2() - &QuadRat::one()))
    } else {
        QuadRat::rational(simplest_between(Some(&t1), Some(&t2)))
    }
}

/// A random atom of the carrier; fixed atoms are drawn now and then.
pub fn random_atom(spec: &StructureSpec, rng: &mut Rng) -> Atom {
    match spec {
        StructureSpec::Equality => Atom::Eq(rng.gen_range(0..8)),
        StructureSpec::Dlo { field, constants, .. } => {
            if !constants.is_empty() && rng.gen_ratio(1, 6) {
                Atom::Ord(constants.choose(rng).unwrap().clone())
            } else {
                Atom::Ord(random_value(*field, rng))
            }
        }
        StructureSpec::OrderedSum(parts) => {
            let k = rng.gen_range(0..parts.len());
            match &parts[k] {
                Part::Point => Atom::star(k),
                Part::Structure(s) => Atom::in_part(k, random_atom(s, rng)),
            }
        }
        StructureSpec::LexProduct(l, r) => Atom::pair(random_atom(l, rng), random_atom(r, rng)),
    }
}

pub fn random_tuple(spec: &StructureSpec, n: usize, rng: &mut Rng) -> Vec<Atom> {
    (0..n).map(|_| random_atom(spec, rng)).collect()
}

/// A random carrier atom strictly inside the interval `(lo, hi)` of an
/// ordered, non-lexicographic structure.
pub fn atom_between(spec: &StructureSpec, lo: Option<&Point>, hi: Option<&Point>, rng: &mut Rng) -> Result<Atom> {
    match spec {
        StructureSpec::Dlo { field, .. } => {
            let l = lo.map(|p| spec.point_value(p).ok_or_else(|| Error::Sort(alloc::format!("{p}")))).transpose()?;
            let h = hi.map(|p| spec.point_value(p).ok_or_else(|| Error::Sort(alloc::format!("{p}")))).transpose()?;
            if let (Some(l), Some(h)) = (&l, &h) {
                if l >= h {
                    return Err(Error::Invalid("empty interval".into()));
                }
            }
            Ok(Atom::Ord(value_between(*field, l.as_ref(), h.as_ref(), rng)))
        }
        StructureSpec::OrderedSum(parts) => {
            let (k, l, h) = spec.sum_interval(lo, hi)?;
            let Part::Structure(s) = &parts[k] else { unreachable!() };
            Ok(Atom::in_part(k, atom_between(s, l.as_ref(), h.as_ref(), rng)?))
        }
        _ => Err(Error::Unsupported(alloc::format!("interval sampling over {spec}"))),
    }
}

/// A random realisation of `t`, drawing the points of each gap with `pick`
/// (which returns `None` when it cannot find a point). Equality classes are
/// drawn with `pick(None, None)` and must avoid the grounds.
pub fn realize_with(
    spec: &StructureSpec,
    t: &TypePattern,
    pick: &mut dyn FnMut(Option<&Point>, Option<&Point>, &mut Rng) -> Option<Atom>,
    rng: &mut Rng,
) -> Option<Vec<Atom>> {
    let mut out: Vec<Option<Atom>> = alloc::vec![None; t.slots.len()];
    if spec.is_lex() {
        return None;
    }
    let grounds: Vec<Atom> = t.grounds.iter().filter_map(|p| p.as_atom().cloned()).collect();
    let mut fresh: Vec<Atom> = Vec::new();
    let mut gaps: alloc::collections::BTreeMap<usize, usize> = alloc::collections::BTreeMap::new();
    for s in &t.slots {
        if let Slot::Gap { gap, rank } = s {
            let e = gaps.entry(*gap).or_insert(0);
            *e = (*e).max(rank + 1);
        }
    }
    let mut gap_values: alloc::collections::BTreeMap<usize, Vec<Atom>> = alloc::collections::BTreeMap::new();
    for (&g, &n) in &gaps {
        let lo = if g == 0 { None } else { t.grounds.get(g - 1) };
        let hi = t.grounds.get(g);
        let mut got = BTreeSet::new();
        for _ in 0..40 * n {
            if got.len() == n {
                break;
            }
            got.insert(pick(lo, hi, rng)?);
        }
        if got.len() < n {
            return None;
        }
        gap_values.insert(g, got.into_iter().collect());
    }
    for (i, s) in t.slots.iter().enumerate() {
        out[i] = Some(match s {
            Slot::At(g) => t.grounds[*g].as_atom()?.clone(),
            Slot::Gap { gap, rank } => gap_values[gap][*rank].clone(),
            Slot::Fresh(c) => {
                while fresh.len() <= *c {
                    let mut found = None;
                    for _ in 0..100 {
                        let a = pick(None, None, rng)?;
                        if !grounds.contains(&a) && !fresh.contains(&a) {
                            found = Some(a);
                            break;
                        }
                    }
                    fresh.push(found?);
                }
                fresh[*c].clone()
            }
            Slot::Lex { .. } => return None,
        });
    }
    out.into_iter().collect()
}

/// A random carrier tuple with the same type as `a` over `params`.
pub fn random_same_type(spec: &StructureSpec, a: &[Atom], params: &[Atom], rng: &mut Rng) -> Result<Vec<Atom>> {
    let t = TypePattern::of(spec, a, params)?;
    let mut pick = |lo: Option<&Point>, hi: Option<&Point>, rng: &mut Rng| match spec {
        StructureSpec::Equality => Some(Atom::Eq(rng.gen_range(0..(a.len() + params.len() + 8) as u64))),
        _ => atom_between(spec, lo, hi, rng).ok(),
    };
    realize_with(spec, &t, &mut pick, rng).ok_or_else(|| Error::Invalid("no random realisation found".into()))
}

/// A random automorphism fixing every atom of `b`.
pub fn random_auto_fixing(spec: &StructureSpec, b: &[Atom], rng: &mut Rng) -> Result<Automorphism> {
    let k = rng.gen_range(1..=4);
    let x: Vec<Atom> = random_tuple(spec, k, rng).into_iter().filter(|a| !b.contains(a)).collect();
    let y = random_same_type(spec, &x, b, rng)?;
    let src: Vec<Atom> = b.iter().cloned().chain(x).collect();
    let dst: Vec<Atom> = b.iter().cloned().chain(y).collect();
    extend_partial(spec, &src, &dst)
}

/// A random quantifier-free literal over `arity` coordinates, `nparams`
/// parameters and the structure's constants and predicates.
fn random_literal(spec: &StructureSpec, arity: usize, nparams: usize, rng: &mut Rng) -> Formula {
    let fixed = spec.fixed_atoms();
    let term = |rng: &mut Rng| {
        let r = rng.gen_range(0..10);
        if r < 2 && nparams > 0 {
            Term::Param(rng.gen_range(0..nparams))
        } else if r == 2 && !fixed.is_empty() {
            Term::Lit(fixed.choose(rng).unwrap().clone())
        } else {
            Term::Var(rng.gen_range(0..arity))
        }
    };
    let preds = spec.predicate_count();
    if preds > 0 && rng.gen_ratio(1, 5) {
        return Formula::Pred(rng.gen_range(0..preds), Term::Var(rng.gen_range(0..arity)));
    }
    let rels: &[Rel] = if spec.is_ordered() { &[Rel::Lt, Rel::Le, Rel::Eq, Rel::Ne, Rel::Gt] } else { &[Rel::Eq, Rel::Ne] };
    let r = *rels.choose(rng).unwrap();
    Formula::rel(r, term(rng), term(rng))
}

fn random_qf(spec: &StructureSpec, arity: usize, nparams: usize, depth: usize, rng: &mut Rng) -> Formula {
    if depth == 0 || rng.gen_ratio(1, 3) {
        return random_literal(spec, arity, nparams, rng);
    }
    let a = random_qf(spec, arity, nparams, depth - 1, rng);
    let b = random_qf(spec, arity, nparams, depth - 1, rng);
    match rng.gen_range(0..4) {
        0 => Formula::and(a, b),
        1 => Formula::or(a, b),
        2 => Formula::not(a),
        _ => Formula::implies(a, b),
    }
}

/// A random formula in `arity` coordinates; sometimes with one quantifier.
pub fn random_formula(spec: &StructureSpec, arity: usize, nparams: usize, rng: &mut Rng) -> Formula {
    if rng.gen_ratio(1, 3) {
        let body = random_qf(spec, arity + 1, nparams, 2, rng).map_terms(&|t| match t {
            Term::Var(i) if *i == arity => Term::Bound(0),
            t => t.clone(),
        });
        let q = if rng.gen_bool(0.5) { Formula::exists(body) } else { Formula::forall(body) };
        let rest = random_qf(spec, arity, nparams, 1, rng);
        if rng.gen_bool(0.5) {
            Formula::and(q, rest)
        } else {
            Formula::or(q, rest)
        }
    } else {
        random_qf(spec, arity, nparams, 3, rng)
    }
}

/// A random definable set of the given arity (at least 1), with up to two
/// random parameters.
pub fn random_defset(spec: &StructureSpec, arity: usize, rng: &mut Rng) -> Result<DefSet> {
    let nparams = if spec.is_lex() { 0 } else { rng.gen_range(0..=2) };
    let params = random_tuple(spec, nparams, rng);
    let f = if spec.is_lex() { random_qf(spec, arity, 0, 3, rng) } else { random_formula(spec, arity, nparams, rng) };
    DefSet::new(spec.clone(), arity, params, f)
}

/// A random hereditarily finite set over `pool` of rank at most `rank`.
pub fn random_hf(pool: &[Atom], rank: usize, rng: &mut Rng) -> HFSet {
    if rank == 0 || (!pool.is_empty() && rng.gen_ratio(1, 4)) {
        return match pool.choose(rng) {
            Some(a) if rank > 0 || rng.gen_bool(0.7) => HFSet::atom(a.clone()),
            _ => HFSet::empty(),
        };
    }
    let n = rng.gen_range(0..=3);
    HFSet::set((0..n).map(|_| random_hf(pool, rank - 1, rng)))
}
