//! Quantifier elimination.
//!
//! Formulas are first put in negation normal form over the positive literals
//! `<`, `=`, `!=` (plus `~` and its negation for products). Cut and part
//! predicates become comparisons with fixed points, some of which are virtual
//! cuts. Quantifiers are removed innermost first. Over a dense order without
//! endpoints, `exists z. phi` is equivalent to the disjunction of `phi` at
//! minus infinity, at each term compared with `z`, and just above each such
//! term. Over pure equality it is the disjunction of `phi` at each term and
//! at a fresh atom.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::dnf::normalize;
use super::{Formula, Rel, Term};
use crate::atoms::{Atom, Boundary, Point, StructureSpec};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum It {
    Var(usize),
    Param(usize),
    Bound(usize),
    Pt(Point),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum Lit {
    Lt(It, It),
    Eq(It, It),
    Ne(It, It),
    Sim(It, It),
    NSim(It, It),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum N {
    T,
    F,
    L(Lit),
    And(Vec<N>),
    Or(Vec<N>),
    Ex(Box<N>),
    All(Box<N>),
}

impl Lit {
    fn sides(&self) -> (&It, &It) {
        match self {
            Lit::Lt(a, b) | Lit::Eq(a, b) | Lit::Ne(a, b) | Lit::Sim(a, b) | Lit::NSim(a, b) => (a, b),
        }
    }

    fn map(&self, f: &impl Fn(&It) -> It) -> Lit {
        match self {
            Lit::Lt(a, b) => Lit::Lt(f(a), f(b)),
            Lit::Eq(a, b) => Lit::Eq(f(a), f(b)),
            Lit::Ne(a, b) => Lit::Ne(f(a), f(b)),
            Lit::Sim(a, b) => Lit::Sim(f(a), f(b)),
            Lit::NSim(a, b) => Lit::NSim(f(a), f(b)),
        }
    }
}

fn it_of(t: &Term) -> It {
    match t {
        Term::Var(i) => It::Var(*i),
        Term::Param(j) => It::Param(*j),
        Term::Bound(l) => It::Bound(*l),
        Term::Lit(a) => It::Pt(Point::Atom(a.clone())),
    }
}

fn le(a: It, b: It) -> N {
    N::Or(vec![N::L(Lit::Lt(a.clone(), b.clone())), N::L(Lit::Eq(a, b))])
}

pub(crate) fn to_nnf(spec: &StructureSpec, f: &Formula, neg: bool) -> Result<N> {
    let ordered = spec.is_ordered();
    Ok(match f {
        Formula::True => {
            if neg {
                N::F
            } else {
                N::T
            }
        }
        Formula::False => {
            if neg {
                N::T
            } else {
                N::F
            }
        }
        Formula::Rel(r, a, b) => {
            let (a, b) = (it_of(a), it_of(b));
            if r.is_order() && !ordered {
                return Err(Error::Language(format!("`{}` over {spec}", r.symbol())));
            }
            if *r == Rel::Sim && !spec.is_lex() {
                return Err(Error::Language(format!("`~` over {spec}")));
            }
            match (r, neg) {
                (Rel::Lt, false) | (Rel::Ge, true) => N::L(Lit::Lt(a, b)),
                (Rel::Gt, false) | (Rel::Le, true) => N::L(Lit::Lt(b, a)),
                (Rel::Le, false) | (Rel::Gt, true) => le(a, b),
                (Rel::Ge, false) | (Rel::Lt, true) => le(b, a),
                (Rel::Eq, false) | (Rel::Ne, true) => N::L(Lit::Eq(a, b)),
                (Rel::Ne, false) | (Rel::Eq, true) => N::L(Lit::Ne(a, b)),
                (Rel::Sim, false) => N::L(Lit::Sim(a, b)),
                (Rel::Sim, true) => N::L(Lit::NSim(a, b)),
            }
        }
        Formula::Pred(k, t) => {
            let t = it_of(t);
            match (spec.pred_boundary(*k)?, neg) {
                (Boundary::All, false) => N::T,
                (Boundary::All, true) => N::F,
                (Boundary::Below(p), false) => N::L(Lit::Lt(t, It::Pt(p))),
                (Boundary::Below(p), true) => le(It::Pt(p), t),
                (Boundary::AtOrBelow(a), false) => le(t, It::Pt(Point::Atom(a))),
                (Boundary::AtOrBelow(a), true) => N::L(Lit::Lt(It::Pt(Point::Atom(a)), t)),
            }
        }
        Formula::Not(a) => to_nnf(spec, a, !neg)?,
        Formula::And(a, b) => {
            let (x, y) = (to_nnf(spec, a, neg)?, to_nnf(spec, b, neg)?);
            if neg {
                N::Or(vec![x, y])
            } else {
                N::And(vec![x, y])
            }
        }
        Formula::Or(a, b) => {
            let (x, y) = (to_nnf(spec, a, neg)?, to_nnf(spec, b, neg)?);
            if neg {
                N::And(vec![x, y])
            } else {
                N::Or(vec![x, y])
            }
        }
        Formula::Implies(a, b) => {
            let (x, y) = (to_nnf(spec, a, !neg)?, to_nnf(spec, b, neg)?);
            if neg {
                N::And(vec![x, y])
            } else {
                N::Or(vec![x, y])
            }
        }
        Formula::Exists(a) => {
            let body = to_nnf(spec, a, neg)?;
            if neg {
                N::All(Box::new(body))
            } else {
                N::Ex(Box::new(body))
            }
        }
        Formula::Forall(a) => {
            let body = to_nnf(spec, a, neg)?;
            if neg {
                N::Ex(Box::new(body))
            } else {
                N::All(Box::new(body))
            }
        }
    })
}

/// Negation of a quantifier-free NNF formula.
fn negate(n: &N) -> N {
    match n {
        N::T => N::F,
        N::F => N::T,
        N::L(Lit::Lt(a, b)) => le(b.clone(), a.clone()),
        N::L(Lit::Eq(a, b)) => N::L(Lit::Ne(a.clone(), b.clone())),
        N::L(Lit::Ne(a, b)) => N::L(Lit::Eq(a.clone(), b.clone())),
        N::L(Lit::Sim(a, b)) => N::L(Lit::NSim(a.clone(), b.clone())),
        N::L(Lit::NSim(a, b)) => N::L(Lit::Sim(a.clone(), b.clone())),
        N::And(v) => N::Or(v.iter().map(negate).collect()),
        N::Or(v) => N::And(v.iter().map(negate).collect()),
        N::Ex(_) | N::All(_) => unreachable!("negate expects a quantifier-free formula"),
    }
}

fn ground_cmp(spec: &StructureSpec, a: &Point, b: &Point) -> Ordering {
    spec.cmp_points(a, b)
}

fn first_coord(p: &Point) -> Option<&Atom> {
    match p {
        Point::Atom(Atom::Pair(l, _)) => Some(l),
        _ => None,
    }
}

/// Truth value of a literal when it is decided syntactically.
fn fold_lit(spec: &StructureSpec, l: &Lit) -> Option<bool> {
    let (a, b) = l.sides();
    if a == b {
        return Some(matches!(l, Lit::Eq(..) | Lit::Sim(..)));
    }
    if let (It::Pt(p), It::Pt(q)) = (a, b) {
        return Some(match l {
            Lit::Lt(..) => ground_cmp(spec, p, q) == Ordering::Less,
            Lit::Eq(..) => ground_cmp(spec, p, q) == Ordering::Equal,
            Lit::Ne(..) => ground_cmp(spec, p, q) != Ordering::Equal,
            Lit::Sim(..) => first_coord(p) == first_coord(q),
            Lit::NSim(..) => first_coord(p) != first_coord(q),
        });
    }
    // virtual cuts are never carrier elements
    let virt = matches!(a, It::Pt(Point::Cut(_))) || matches!(b, It::Pt(Point::Cut(_)));
    match l {
        Lit::Eq(..) if virt => Some(false),
        Lit::Ne(..) if virt => Some(true),
        _ => None,
    }
}

fn canon_lit(l: Lit) -> Lit {
    match l {
        Lit::Eq(a, b) if b < a => Lit::Eq(b, a),
        Lit::Ne(a, b) if b < a => Lit::Ne(b, a),
        Lit::Sim(a, b) if b < a => Lit::Sim(b, a),
        Lit::NSim(a, b) if b < a => Lit::NSim(b, a),
        l => l,
    }
}

/// Literals that cannot hold together (in a conjunction), or that cover
/// every case (in a disjunction, after negating one side).
fn clash(x: &Lit, y: &Lit) -> bool {
    match (x, y) {
        (Lit::Eq(a, b), Lit::Ne(c, d)) | (Lit::Ne(c, d), Lit::Eq(a, b)) => a == c && b == d,
        (Lit::Sim(a, b), Lit::NSim(c, d)) | (Lit::NSim(c, d), Lit::Sim(a, b)) => a == c && b == d,
        (Lit::Lt(a, b), Lit::Lt(c, d)) => a == d && b == c,
        (Lit::Lt(a, b), Lit::Eq(c, d)) | (Lit::Eq(c, d), Lit::Lt(a, b)) => (a == c && b == d) || (a == d && b == c),
        _ => false,
    }
}

pub(crate) fn simplify(spec: &StructureSpec, n: N) -> N {
    match n {
        N::L(l) => match fold_lit(spec, &l) {
            Some(true) => N::T,
            Some(false) => N::F,
            None => N::L(canon_lit(l)),
        },
        N::And(v) => {
            let mut out: Vec<N> = Vec::new();
            for c in v {
                match simplify(spec, c) {
                    N::T => {}
                    N::F => return N::F,
                    N::And(inner) => out.extend(inner),
                    x => out.push(x),
                }
            }
            out.sort();
            out.dedup();
            let lits: Vec<&Lit> = out.iter().filter_map(|x| if let N::L(l) = x { Some(l) } else { None }).collect();
            for (i, x) in lits.iter().enumerate() {
                for y in &lits[i + 1..] {
                    if clash(x, y) {
                        return N::F;
                    }
                }
            }
            match out.len() {
                0 => N::T,
                1 => out.pop().unwrap(),
                _ => N::And(out),
            }
        }
        N::Or(v) => {
            let mut out: Vec<N> = Vec::new();
            for c in v {
                match simplify(spec, c) {
                    N::F => {}
                    N::T => return N::T,
                    N::Or(inner) => out.extend(inner),
                    x => out.push(x),
                }
            }
            out.sort();
            out.dedup();
            let lits: Vec<&Lit> = out.iter().filter_map(|x| if let N::L(l) = x { Some(l) } else { None }).collect();
            for (i, x) in lits.iter().enumerate() {
                for y in &lits[i + 1..] {
                    // x | y is valid when !x entails y; for Eq/Ne and Sim/NSim pairs
                    let covers = matches!((x, y), (Lit::Eq(..), Lit::Ne(..)) | (Lit::Ne(..), Lit::Eq(..)) | (Lit::Sim(..), Lit::NSim(..)) | (Lit::NSim(..), Lit::Sim(..)))
                        && clash(x, y);
                    if covers {
                        return N::T;
                    }
                }
            }
            match out.len() {
                0 => N::F,
                1 => out.pop().unwrap(),
                _ => N::Or(out),
            }
        }
        N::Ex(b) => N::Ex(Box::new(simplify(spec, *b))),
        N::All(b) => N::All(Box::new(simplify(spec, *b))),
        x => x,
    }
}

fn mentions(n: &N, z: &It) -> bool {
    match n {
        N::T | N::F => false,
        N::L(l) => {
            let (a, b) = l.sides();
            a == z || b == z
        }
        N::And(v) | N::Or(v) => v.iter().any(|c| mentions(c, z)),
        N::Ex(b) | N::All(b) => mentions(b, z),
    }
}

fn collect_partners(n: &N, z: &It, out: &mut Vec<It>) {
    match n {
        N::L(l) => {
            let (a, b) = l.sides();
            if a == z && b != z {
                out.push(b.clone());
            } else if b == z && a != z {
                out.push(a.clone());
            }
        }
        N::And(v) | N::Or(v) => v.iter().for_each(|c| collect_partners(c, z, out)),
        _ => {}
    }
}

/// Replace each literal mentioning `z` by `f(literal)`.
fn subst(n: &N, z: &It, f: &impl Fn(&Lit) -> N) -> N {
    match n {
        N::L(l) => {
            let (a, b) = l.sides();
            if a == z || b == z {
                f(l)
            } else {
                n.clone()
            }
        }
        N::And(v) => N::And(v.iter().map(|c| subst(c, z, f)).collect()),
        N::Or(v) => N::Or(v.iter().map(|c| subst(c, z, f)).collect()),
        x => x.clone(),
    }
}

fn self_lit(l: &Lit) -> Option<N> {
    let (a, b) = l.sides();
    if a != b {
        return None;
    }
    Some(if matches!(l, Lit::Eq(..) | Lit::Sim(..)) { N::T } else { N::F })
}

fn at_minus_inf(l: &Lit, z: &It) -> N {
    if let Some(v) = self_lit(l) {
        return v;
    }
    match l {
        Lit::Lt(a, _) => {
            if a == z {
                N::T
            } else {
                N::F
            }
        }
        Lit::Eq(..) => N::F,
        Lit::Ne(..) => N::T,
        _ => unreachable!(),
    }
}

fn just_above(l: &Lit, z: &It, t: &It) -> N {
    if let Some(v) = self_lit(l) {
        return v;
    }
    match l {
        // t+e < s  iff  t < s
        Lit::Lt(a, s) if a == z => N::L(Lit::Lt(t.clone(), s.clone())),
        // s < t+e  iff  s <= t
        Lit::Lt(s, _) => le(s.clone(), t.clone()),
        Lit::Eq(..) => N::F,
        Lit::Ne(..) => N::T,
        _ => unreachable!(),
    }
}

fn fresh(l: &Lit) -> N {
    if let Some(v) = self_lit(l) {
        return v;
    }
    match l {
        Lit::Eq(..) => N::F,
        Lit::Ne(..) => N::T,
        _ => unreachable!(),
    }
}

fn replace(l: &Lit, z: &It, t: &It) -> N {
    N::L(l.map(&|x| if x == z { t.clone() } else { x.clone() }))
}

/// Eliminate `exists z` from a quantifier-free `phi`.
fn exists_elim(spec: &StructureSpec, phi: N, z: &It) -> N {
    let phi = simplify(spec, phi);
    if !mentions(&phi, z) {
        return phi;
    }
    match phi {
        N::Or(v) => {
            let parts = v.into_iter().map(|c| exists_elim(spec, c, z)).collect();
            simplify(spec, N::Or(parts))
        }
        N::And(v) => {
            let (with, without): (Vec<N>, Vec<N>) = v.into_iter().partition(|c| mentions(c, z));
            if !without.is_empty() {
                let mut parts = without;
                parts.push(exists_elim(spec, N::And(with), z));
                return simplify(spec, N::And(parts));
            }
            eliminate_core(spec, N::And(with), z)
        }
        other => eliminate_core(spec, other, z),
    }
}

fn eliminate_core(spec: &StructureSpec, phi: N, z: &It) -> N {
    let mut terms = Vec::new();
    collect_partners(&phi, z, &mut terms);
    terms.sort();
    terms.dedup();
    let mut cases = Vec::new();
    if spec.is_ordered() {
        cases.push(subst(&phi, z, &|l| at_minus_inf(l, z)));
        for t in &terms {
            if !matches!(t, It::Pt(Point::Cut(_))) {
                cases.push(subst(&phi, z, &|l| replace(l, z, t)));
            }
            cases.push(subst(&phi, z, &|l| just_above(l, z, t)));
        }
    } else {
        for t in &terms {
            cases.push(subst(&phi, z, &|l| replace(l, z, t)));
        }
        cases.push(subst(&phi, z, &fresh));
    }
    simplify(spec, N::Or(cases))
}

/// Remove all quantifiers, innermost first.
pub(crate) fn elim(spec: &StructureSpec, n: N, depth: usize) -> N {
    match n {
        N::Ex(body) => {
            let b = elim(spec, *body, depth + 1);
            normalize(spec, exists_elim(spec, b, &It::Bound(depth)))
        }
        N::All(body) => {
            let b = elim(spec, *body, depth + 1);
            let nb = negate(&b);
            let e = exists_elim(spec, nb, &It::Bound(depth));
            normalize(spec, negate(&e))
        }
        N::And(v) => simplify(spec, N::And(v.into_iter().map(|c| elim(spec, c, depth)).collect())),
        N::Or(v) => simplify(spec, N::Or(v.into_iter().map(|c| elim(spec, c, depth)).collect())),
        x => simplify(spec, x),
    }
}

fn term_of(t: &It) -> Term {
    match t {
        It::Var(i) => Term::Var(*i),
        It::Param(j) => Term::Param(*j),
        It::Bound(l) => Term::Bound(*l),
        It::Pt(Point::Atom(a)) => Term::Lit(a.clone()),
        It::Pt(Point::Cut(_)) => unreachable!("virtual cut outside a predicate"),
    }
}

fn lit_formula(spec: &StructureSpec, l: &Lit) -> Formula {
    match l {
        Lit::Lt(a, It::Pt(Point::Cut(i))) => Formula::Pred(spec.pred_for_cut(*i).unwrap(), term_of(a)),
        Lit::Lt(It::Pt(Point::Cut(i)), b) => Formula::not(Formula::Pred(spec.pred_for_cut(*i).unwrap(), term_of(b))),
        Lit::Lt(a, b) => Formula::Rel(Rel::Lt, term_of(a), term_of(b)),
        Lit::Eq(a, b) => Formula::Rel(Rel::Eq, term_of(a), term_of(b)),
        Lit::Ne(a, b) => Formula::Rel(Rel::Ne, term_of(a), term_of(b)),
        Lit::Sim(a, b) => Formula::Rel(Rel::Sim, term_of(a), term_of(b)),
        Lit::NSim(a, b) => Formula::not(Formula::Rel(Rel::Sim, term_of(a), term_of(b))),
    }
}

pub(crate) fn from_nnf(spec: &StructureSpec, n: &N) -> Formula {
    match n {
        N::T => Formula::True,
        N::F => Formula::False,
        N::L(l) => lit_formula(spec, l),
        N::And(v) => Formula::and_all(v.iter().map(|c| from_nnf(spec, c))),
        N::Or(v) => {
            // fold `a < b | a = b` into `a <= b`
            let mut used = vec![false; v.len()];
            let mut items = Vec::new();
            for i in 0..v.len() {
                if used[i] {
                    continue;
                }
                if let N::L(Lit::Lt(a, b)) = &v[i] {
                    let cut = matches!(a, It::Pt(Point::Cut(_))) || matches!(b, It::Pt(Point::Cut(_)));
                    let partner = (0..v.len()).find(|&j| {
                        !used[j]
                            && j != i
                            && matches!(&v[j], N::L(Lit::Eq(c, d)) if (c == a && d == b) || (c == b && d == a))
                    });
                    if let (Some(j), false) = (partner, cut) {
                        used[i] = true;
                        used[j] = true;
                        items.push(Formula::Rel(Rel::Le, term_of(a), term_of(b)));
                        continue;
                    }
                }
                used[i] = true;
                items.push(from_nnf(spec, &v[i]));
            }
            Formula::or_all(items)
        }
        N::Ex(b) => Formula::exists(from_nnf(spec, b)),
        N::All(b) => Formula::forall(from_nnf(spec, b)),
    }
}

/// Internal quantifier-free normal form of `f`.
pub(crate) fn qf_normal(spec: &StructureSpec, f: &Formula) -> Result<N> {
    f.check_scoped()?;
    if spec.is_lex() && f.has_quantifiers() {
        return Err(Error::Unsupported("quantifier elimination over a lexicographic product".into()));
    }
    let n = to_nnf(spec, f, false)?;
    Ok(normalize(spec, elim(spec, n, 0)))
}

/// An equivalent quantifier-free formula.
pub fn qe(spec: &StructureSpec, f: &Formula) -> Result<Formula> {
    let n = qf_normal(spec, f)?;
    Ok(from_nnf(spec, &n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use alloc::string::ToString;

    fn q(spec: &str, text: &str) -> alloc::string::String {
        let s: StructureSpec = spec.parse().unwrap();
        qe(&s, &parse_formula(text, &s).unwrap()).unwrap().to_string()
    }

    #[test]
    fn examples() {
        assert_eq!(q("dlo", "exists z (y0 < z & z < y1)"), "y0 < y1");
        assert_eq!(q("eq", "exists z (z != y0 & z != y1)"), "true");
        assert_eq!(q("dlo", "exists z z < y0"), "true");
        assert_eq!(q("dlo", "exists z (x0 < z & z < x1)"), "x0 < x1");
        assert_eq!(q("dlo", "forall z (z < x0 -> z < x1)"), "x0 <= x1");
        assert_eq!(q("dlo", "!(0 <= x0)"), "x0 < 0");
        assert_eq!(q("eq", "exists z (z = y0 & z != y1)"), "y0 != y1");
    }

    #[test]
    fn cuts_survive_elimination() {
        assert_eq!(q("dlo[cut<=sqrt2]", "exists z (x0 < z & P(z))"), "P0(x0)");
        assert_eq!(q("dlo[cut<=sqrt2]", "exists z (z < x0 & !P(z))"), "!P0(x0)");
        assert_eq!(q("sum(dlo[field=qsqrt2], star, dlo)", "exists z (x0 < z & z < 1:star)"), "x0 < 1:star");
        assert_eq!(q("sum(dlo[field=qsqrt2], dlo)", "exists z (z < x0 & !P0(z))"), "!P0(x0)");
    }

    #[test]
    fn idempotent_on_quantifier_free() {
        for (spec, text) in [("dlo", "0 < x0 & x0 <= 5/2 | 3 <= x0"), ("eq", "x0 = y0 | x1 != a3"), ("dlo[cut<sqrt2]", "P0(x0) -> x1 < x0")] {
            let s: StructureSpec = spec.parse().unwrap();
            let once = qe(&s, &parse_formula(text, &s).unwrap()).unwrap();
            assert_eq!(qe(&s, &once).unwrap(), once);
        }
    }
}
