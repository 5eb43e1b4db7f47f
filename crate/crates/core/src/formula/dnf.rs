//! Disjunctive normal form with semantic pruning.
//!
//! A conjunction of literals is inconsistent when the equalities force a
//! disequality, two distinct ground points together, or a cycle in the strict
//! order. Every other conjunction of `<`, `=` and `!=` literals is satisfiable
//! in a dense order without endpoints, so over such structures the check is
//! exact; elsewhere it is only used to discard, never to invent, truth.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::qe::{simplify, It, Lit, N};
use crate::atoms::StructureSpec;

const MAX_DISJUNCTS: usize = 2048;

type Conj = Vec<Lit>;

fn dnf(n: &N) -> Option<Vec<Conj>> {
    Some(match n {
        N::T => vec![Vec::new()],
        N::F => Vec::new(),
        N::L(l) => vec![vec![l.clone()]],
        N::Or(v) => {
            let mut out = Vec::new();
            for c in v {
                out.extend(dnf(c)?);
                if out.len() > MAX_DISJUNCTS {
                    return None;
                }
            }
            out
        }
        N::And(v) => {
            let mut acc: Vec<Conj> = vec![Vec::new()];
            for c in v {
                let d = dnf(c)?;
                if acc.len() * d.len() > MAX_DISJUNCTS {
                    return None;
                }
                let mut next = Vec::with_capacity(acc.len() * d.len());
                for a in &acc {
                    for b in &d {
                        let mut m = a.clone();
                        m.extend(b.iter().cloned());
                        next.push(m);
                    }
                }
                acc = next;
            }
            acc
        }
        N::Ex(_) | N::All(_) => return None,
    })
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

pub(crate) fn consistent(spec: &StructureSpec, c: &[Lit]) -> bool {
    let mut ids: BTreeMap<&It, usize> = BTreeMap::new();
    for l in c {
        let (a, b) = sides(l);
        for t in [a, b] {
            let n = ids.len();
            ids.entry(t).or_insert(n);
        }
    }
    let n = ids.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for l in c {
        if let Lit::Eq(a, b) = l {
            let (x, y) = (find(&mut parent, ids[a]), find(&mut parent, ids[b]));
            parent[x] = y;
        }
    }
    let grounds: Vec<(&It, usize)> = ids.iter().filter(|(t, _)| matches!(t, It::Pt(_))).map(|(t, i)| (*t, *i)).collect();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (i, (p, pi)) in grounds.iter().enumerate() {
        for (q, qi) in &grounds[i + 1..] {
            let (It::Pt(p), It::Pt(q)) = (p, q) else { unreachable!() };
            let (x, y) = (find(&mut parent, *pi), find(&mut parent, *qi));
            let ord = if spec.is_ordered() { spec.cmp_points(p, q) } else if p == q { Ordering::Equal } else { Ordering::Less };
            match ord {
                Ordering::Equal => {}
                _ if x == y => return false,
                Ordering::Less if spec.is_ordered() => edges.push((x, y)),
                Ordering::Greater => edges.push((y, x)),
                _ => {}
            }
        }
    }
    for l in c {
        let (a, b) = sides(l);
        let (x, y) = (find(&mut parent, ids[a]), find(&mut parent, ids[b]));
        match l {
            Lit::Ne(..) | Lit::NSim(..) if x == y => return false,
            Lit::Lt(..) => {
                if x == y {
                    return false;
                }
                edges.push((x, y));
            }
            _ => {}
        }
    }
    // complementary `~` literals on the same classes
    for l in c {
        if let Lit::Sim(a, b) = l {
            let (x, y) = (find(&mut parent, ids[a]), find(&mut parent, ids[b]));
            for m in c {
                if let Lit::NSim(p, q) = m {
                    let (u, v) = (find(&mut parent, ids[p]), find(&mut parent, ids[q]));
                    if (u, v) == (x, y) || (u, v) == (y, x) {
                        return false;
                    }
                }
            }
        }
    }
    acyclic(n, &edges)
}

fn acyclic(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut indeg = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in edges {
        out[a].push(b);
        indeg[b] += 1;
    }
    let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut seen = 0;
    while let Some(i) = stack.pop() {
        seen += 1;
        for &j in &out[i] {
            indeg[j] -= 1;
            if indeg[j] == 0 {
                stack.push(j);
            }
        }
    }
    seen == n
}

fn sides(l: &Lit) -> (&It, &It) {
    match l {
        Lit::Lt(a, b) | Lit::Eq(a, b) | Lit::Ne(a, b) | Lit::Sim(a, b) | Lit::NSim(a, b) => (a, b),
    }
}

/// Disjuncts of the negation of a literal.
fn negations(l: &Lit) -> Vec<Lit> {
    match l {
        Lit::Lt(a, b) => vec![Lit::Lt(b.clone(), a.clone()), Lit::Eq(a.clone(), b.clone())],
        Lit::Eq(a, b) => vec![Lit::Ne(a.clone(), b.clone())],
        Lit::Ne(a, b) => vec![Lit::Eq(a.clone(), b.clone())],
        Lit::Sim(a, b) => vec![Lit::NSim(a.clone(), b.clone())],
        Lit::NSim(a, b) => vec![Lit::Sim(a.clone(), b.clone())],
    }
}

/// `c` entails `l`.
fn entails(spec: &StructureSpec, c: &[Lit], l: &Lit) -> bool {
    negations(l).into_iter().all(|m| {
        let mut d = c.to_vec();
        d.push(m);
        !consistent(spec, &d)
    })
}

fn prune(spec: &StructureSpec, mut c: Conj) -> Conj {
    c.sort();
    c.dedup();
    let mut i = 0;
    while i < c.len() {
        let l = c.remove(i);
        if !entails(spec, &c, &l) {
            c.insert(i, l);
            i += 1;
        }
    }
    c
}

/// An equivalent, quantifier-free formula in a compact normal form. Falls
/// back to `n` itself when the disjunctive form would be too large.
pub(crate) fn normalize(spec: &StructureSpec, n: N) -> N {
    let Some(ds) = dnf(&n) else { return n };
    let mut conjs: Vec<Conj> = ds.into_iter().filter(|c| consistent(spec, c)).map(|c| prune(spec, c)).collect();
    conjs.sort();
    conjs.dedup();
    // drop disjuncts entailing another disjunct
    let mut keep = vec![true; conjs.len()];
    for i in 0..conjs.len() {
        for j in 0..conjs.len() {
            if i != j && keep[j] && keep[i] && conjs[j].iter().all(|l| entails(spec, &conjs[i], l)) {
                keep[i] = false;
            }
        }
    }
    let mut conjs: Vec<Conj> = conjs.into_iter().zip(keep).filter(|(_, k)| *k).map(|(c, _)| c).collect();
    merge(spec, &mut conjs);
    if conjs.iter().any(|c| c.is_empty()) {
        return N::T;
    }
    // factor out literals shared by every disjunct
    let common: Vec<Lit> = match conjs.first() {
        Some(c0) if conjs.len() > 1 => c0.iter().filter(|l| conjs.iter().all(|c| c.contains(l))).cloned().collect(),
        _ => Vec::new(),
    };
    let rest: Vec<N> = conjs
        .into_iter()
        .map(|c| N::And(c.into_iter().filter(|l| !common.contains(l)).map(N::L).collect()))
        .collect();
    let mut parts: Vec<N> = common.into_iter().map(N::L).collect();
    parts.push(N::Or(rest));
    simplify(spec, N::And(parts))
}

/// Resolve pairs of disjuncts that differ in one literal whose two versions
/// cover a common weaker literal: `=`/`!=` drop it, and `a < b`/`b < a`
/// become `a != b`.
fn merge(spec: &StructureSpec, conjs: &mut Vec<Conj>) {
    loop {
        let mut changed = false;
        'outer: for i in 0..conjs.len() {
            for j in i + 1..conjs.len() {
                if conjs[i].len() != conjs[j].len() {
                    continue;
                }
                let di: Vec<&Lit> = conjs[i].iter().filter(|l| !conjs[j].contains(l)).collect();
                let dj: Vec<&Lit> = conjs[j].iter().filter(|l| !conjs[i].contains(l)).collect();
                if di.len() != 1 || dj.len() != 1 {
                    continue;
                }
                let replacement = match (di[0], dj[0]) {
                    (Lit::Eq(a, b), Lit::Ne(c, d)) | (Lit::Ne(c, d), Lit::Eq(a, b)) if a == c && b == d => None,
                    (Lit::Sim(a, b), Lit::NSim(c, d)) | (Lit::NSim(c, d), Lit::Sim(a, b)) if a == c && b == d => None,
                    (Lit::Lt(a, b), Lit::Lt(c, d)) if a == d && b == c => {
                        let (x, y) = if a < b { (a, b) } else { (b, a) };
                        Some(Lit::Ne(x.clone(), y.clone()))
                    }
                    _ => continue,
                };
                let mut c: Conj = conjs[i].iter().filter(|l| *l != di[0]).cloned().collect();
                c.extend(replacement);
                let c = prune(spec, c);
                conjs.remove(j);
                conjs[i] = c;
                conjs.sort();
                conjs.dedup();
                changed = true;
                break 'outer;
            }
        }
        if !changed {
            return;
        }
    }
}
