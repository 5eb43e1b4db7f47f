use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use super::{Atom, Point, StructureSpec};
use crate::error::{Error, Result};
use crate::num::simplest_run;

/// Where one tuple position sits relative to the ground points.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    /// Equal to ground point `i`.
    At(usize),
    /// Strictly between ground points `gap - 1` and `gap`; positions in the
    /// same gap are ordered by `rank` (equal rank means equal atoms).
    Gap { gap: usize, rank: usize },
    /// Equality sort: not a ground atom; positions share an atom iff they share
    /// a class. Classes are numbered by first occurrence.
    Fresh(usize),
    /// Lexicographic product: the first coordinate's slot in the left factor
    /// and the rank of the second coordinate among positions with the same
    /// first coordinate.
    Lex { left: Box<Slot>, right: usize },
}

/// The atomic diagram of a tuple over a list of ground points.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypePattern {
    pub grounds: Vec<Point>,
    pub slots: Vec<Slot>,
}

fn gap_ranks(slots: &mut [Slot], values: &[(usize, usize, Atom)]) {
    // values: (position, gap, atom)
    let mut by_gap: BTreeMap<usize, Vec<Atom>> = BTreeMap::new();
    for (_, g, a) in values {
        by_gap.entry(*g).or_default().push(a.clone());
    }
    for v in by_gap.values_mut() {
        v.sort();
        v.dedup();
    }
    for (i, g, a) in values {
        let rank = by_gap[g].binary_search(a).unwrap();
        slots[*i] = Slot::Gap { gap: *g, rank };
    }
}

/// Ranks of a weak order given as a list of blocks.
fn ordered_partitions(items: &[usize]) -> Vec<Vec<(usize, usize)>> {
    let n = items.len();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(items: &[usize], rem: u32, rank: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        let mut sub = rem;
        while sub > 0 {
            let len = cur.len();
            for (b, &item) in items.iter().enumerate() {
                if sub & (1 << b) != 0 {
                    cur.push((item, rank));
                }
            }
            go(items, rem & !sub, rank + 1, cur, out);
            cur.truncate(len);
            sub = (sub - 1) & rem;
        }
    }
    go(items, if n == 0 { 0 } else { (1u32 << n) - 1 }, 0, &mut cur, &mut out);
    out
}

impl TypePattern {
    pub fn arity(&self) -> usize {
        self.slots.len()
    }

    pub fn of(spec: &StructureSpec, tuple: &[Atom], params: &[Atom]) -> Result<TypePattern> {
        for a in tuple {
            spec.check_atom(a)?;
        }
        let grounds = spec.ground_points(params)?;
        let slots = match spec {
            StructureSpec::Equality => {
                let mut classes: Vec<&Atom> = Vec::new();
                tuple
                    .iter()
                    .map(|a| match grounds.iter().position(|g| g.as_atom() == Some(a)) {
                        Some(i) => Slot::At(i),
                        None => match classes.iter().position(|c| *c == a) {
                            Some(c) => Slot::Fresh(c),
                            None => {
                                classes.push(a);
                                Slot::Fresh(classes.len() - 1)
                            }
                        },
                    })
                    .collect()
            }
            StructureSpec::LexProduct(l, _) => {
                let (lefts, rights): (Vec<Atom>, Vec<Atom>) = tuple
                    .iter()
                    .map(|a| match a {
                        Atom::Pair(x, y) => ((**x).clone(), (**y).clone()),
                        _ => unreachable!(),
                    })
                    .unzip();
                let lp = TypePattern::of(l, &lefts, &[])?;
                let mut groups: BTreeMap<&Slot, Vec<&Atom>> = BTreeMap::new();
                for (s, r) in lp.slots.iter().zip(&rights) {
                    groups.entry(s).or_default().push(r);
                }
                for v in groups.values_mut() {
                    v.sort();
                    v.dedup();
                }
                lp.slots
                    .iter()
                    .zip(&rights)
                    .map(|(s, r)| Slot::Lex { left: Box::new(s.clone()), right: groups[s].binary_search(&r).unwrap() })
                    .collect()
            }
            _ => {
                let mut slots = vec![Slot::At(0); tuple.len()];
                let mut in_gaps = Vec::new();
                for (i, a) in tuple.iter().enumerate() {
                    let pt = Point::Atom(a.clone());
                    match grounds.binary_search_by(|g| spec.cmp_points(g, &pt)) {
                        Ok(g) => slots[i] = Slot::At(g),
                        Err(g) => in_gaps.push((i, g, a.clone())),
                    }
                }
                gap_ranks(&mut slots, &in_gaps);
                slots
            }
        };
        Ok(TypePattern { grounds, slots })
    }

    /// Complete, duplicate-free list of the types of arity `n` over `params`.
    pub fn enumerate(spec: &StructureSpec, n: usize, params: &[Atom]) -> Result<Vec<TypePattern>> {
        if n > 16 {
            return Err(Error::BoundExceeded(format!("arity {n} is too large to enumerate")));
        }
        let grounds = spec.ground_points(params)?;
        let slot_lists = match spec {
            StructureSpec::Equality => {
                let mut out = Vec::new();
                let mut cur = Vec::new();
                fn go(m: usize, n: usize, classes: usize, cur: &mut Vec<Slot>, out: &mut Vec<Vec<Slot>>) {
                    if cur.len() == n {
                        out.push(cur.clone());
                        return;
                    }
                    for i in 0..m {
                        cur.push(Slot::At(i));
                        go(m, n, classes, cur, out);
                        cur.pop();
                    }
                    for c in 0..=classes {
                        cur.push(Slot::Fresh(c));
                        go(m, n, classes.max(c + 1), cur, out);
                        cur.pop();
                    }
                }
                go(grounds.len(), n, 0, &mut cur, &mut out);
                out
            }
            StructureSpec::LexProduct(l, _) => {
                let mut out = Vec::new();
                for lp in TypePattern::enumerate(l, n, &[])? {
                    let mut groups: BTreeMap<&Slot, Vec<usize>> = BTreeMap::new();
                    for (i, s) in lp.slots.iter().enumerate() {
                        groups.entry(s).or_default().push(i);
                    }
                    let mut partial: Vec<Vec<usize>> = vec![vec![0; n]];
                    for members in groups.values() {
                        let mut next = Vec::new();
                        for ranks in &partial {
                            for op in ordered_partitions(members) {
                                let mut r = ranks.clone();
                                for (i, k) in op {
                                    r[i] = k;
                                }
                                next.push(r);
                            }
                        }
                        partial = next;
                    }
                    for ranks in partial {
                        out.push(
                            lp.slots
                                .iter()
                                .zip(ranks)
                                .map(|(s, r)| Slot::Lex { left: Box::new(s.clone()), right: r })
                                .collect(),
                        );
                    }
                }
                out
            }
            _ => {
                let can_equal: Vec<bool> = grounds.iter().map(|g| g.as_atom().is_some()).collect();
                let mut out = Vec::new();
                let mut cur = vec![Slot::At(0); n];
                #[allow(clippy::too_many_arguments)]
                fn go(
                    can_equal: &[bool],
                    gi: usize,
                    rank: usize,
                    rem: u32,
                    cur: &mut Vec<Slot>,
                    out: &mut Vec<Vec<Slot>>,
                ) {
                    if rem == 0 {
                        out.push(cur.clone());
                        return;
                    }
                    let m = can_equal.len();
                    // another block inside gap `gi`
                    let mut sub = rem;
                    while sub > 0 {
                        for (i, s) in cur.iter_mut().enumerate() {
                            if sub & (1 << i) != 0 {
                                *s = Slot::Gap { gap: gi, rank };
                            }
                        }
                        go(can_equal, gi, rank + 1, rem & !sub, cur, out);
                        sub = (sub - 1) & rem;
                    }
                    if gi < m {
                        // close the gap, leaving ground point `gi` unoccupied
                        go(can_equal, gi + 1, 0, rem, cur, out);
                        if can_equal[gi] {
                            let mut sub = rem;
                            while sub > 0 {
                                for (i, s) in cur.iter_mut().enumerate() {
                                    if sub & (1 << i) != 0 {
                                        *s = Slot::At(gi);
                                    }
                                }
                                go(can_equal, gi + 1, 0, rem & !sub, cur, out);
                                sub = (sub - 1) & rem;
                            }
                        }
                    }
                }
                let full = if n == 0 { 0 } else { (1u32 << n) - 1 };
                go(&can_equal, 0, 0, full, &mut cur, &mut out);
                out
            }
        };
        Ok(slot_lists.into_iter().map(|slots| TypePattern { grounds: grounds.clone(), slots }).collect())
    }

    /// A tuple of this type. Inconsistent patterns are rejected.
    pub fn realize(&self, spec: &StructureSpec) -> Result<Vec<Atom>> {
        let bad = |m: &str| Error::Invalid(format!("inconsistent pattern: {m}"));
        match spec {
            StructureSpec::Equality => {
                let used: Vec<u64> = self
                    .grounds
                    .iter()
                    .map(|g| match g {
                        Point::Atom(Atom::Eq(k)) => Ok(*k),
                        _ => Err(bad("ground is not an equality atom")),
                    })
                    .collect::<Result<_>>()?;
                let mut classes = 0;
                let mut fresh: Vec<u64> = Vec::new();
                let mut next = 0u64;
                let mut out = Vec::new();
                for s in &self.slots {
                    match s {
                        Slot::At(i) => out.push(Atom::Eq(*used.get(*i).ok_or_else(|| bad("ground index"))?)),
                        Slot::Fresh(c) => {
                            if *c > classes {
                                return Err(bad("classes out of order"));
                            }
                            if *c == classes {
                                classes += 1;
                                while used.contains(&next) {
                                    next += 1;
                                }
                                fresh.push(next);
                                next += 1;
                            }
                            out.push(Atom::Eq(fresh[*c]));
                        }
                        _ => return Err(bad("slot kind")),
                    }
                }
                Ok(out)
            }
            StructureSpec::LexProduct(l, _) => {
                let mut left_slots = Vec::new();
                let mut rights = Vec::new();
                for s in &self.slots {
                    match s {
                        Slot::Lex { left, right } => {
                            left_slots.push((**left).clone());
                            rights.push(*right);
                        }
                        _ => return Err(bad("slot kind")),
                    }
                }
                let lp = TypePattern { grounds: self.grounds.clone(), slots: left_slots };
                let lefts = lp.realize(l)?;
                let mut groups: BTreeMap<&Slot, usize> = BTreeMap::new();
                for (s, r) in lp.slots.iter().zip(&rights) {
                    let e = groups.entry(s).or_insert(0);
                    *e = (*e).max(r + 1);
                }
                for (s, k) in &groups {
                    for r in 0..*k {
                        if !lp.slots.iter().zip(&rights).any(|(s2, r2)| s2 == *s && *r2 == r) {
                            return Err(bad("ranks are not dense"));
                        }
                    }
                }
                let max = groups.values().copied().max().unwrap_or(0);
                let values = simplest_run(None, None, max);
                Ok(lefts
                    .into_iter()
                    .zip(rights)
                    .map(|(a, r)| Atom::pair(a, Atom::rational(values[r].clone())))
                    .collect())
            }
            _ => {
                let m = self.grounds.len();
                let mut counts = vec![0usize; m + 1];
                for s in &self.slots {
                    match s {
                        Slot::At(i) => {
                            if self.grounds.get(*i).and_then(|g| g.as_atom()).is_none() {
                                return Err(bad("position equal to a virtual cut"));
                            }
                        }
                        Slot::Gap { gap, rank } => {
                            if *gap > m {
                                return Err(bad("gap index"));
                            }
                            counts[*gap] = counts[*gap].max(rank + 1);
                        }
                        _ => return Err(bad("slot kind")),
                    }
                }
                let mut fills: Vec<Vec<Atom>> = Vec::with_capacity(m + 1);
                for (g, &k) in counts.iter().enumerate() {
                    for r in 0..k {
                        if !self.slots.contains(&Slot::Gap { gap: g, rank: r }) {
                            return Err(bad("ranks are not dense"));
                        }
                    }
                    let lo = if g == 0 { None } else { Some(&self.grounds[g - 1]) };
                    let hi = self.grounds.get(g);
                    fills.push(if k == 0 { Vec::new() } else { spec.sample_in(lo, hi, k)? });
                }
                Ok(self
                    .slots
                    .iter()
                    .map(|s| match s {
                        Slot::At(i) => self.grounds[*i].as_atom().unwrap().clone(),
                        Slot::Gap { gap, rank } => fills[*gap][*rank].clone(),
                        _ => unreachable!(),
                    })
                    .collect())
            }
        }
    }

    /// Order key of a slot along the ground line.
    fn line_key(s: &Slot) -> (usize, usize) {
        match s {
            Slot::At(i) => (2 * i + 1, 0),
            Slot::Gap { gap, rank } => (2 * gap, *rank),
            _ => (0, 0),
        }
    }

    fn pos_rel(a: &Slot, b: &Slot, ordered: bool) -> &'static str {
        match (a, b) {
            (Slot::Lex { left: l1, right: r1 }, Slot::Lex { left: l2, right: r2 }) => {
                match Self::line_key(l1).cmp(&Self::line_key(l2)).then(r1.cmp(r2)) {
                    Ordering::Less => "<",
                    Ordering::Equal => "=",
                    Ordering::Greater => ">",
                }
            }
            _ if !ordered => {
                if a == b {
                    "="
                } else {
                    "!="
                }
            }
            _ => match Self::line_key(a).cmp(&Self::line_key(b)) {
                Ordering::Less => "<",
                Ordering::Equal => "=",
                Ordering::Greater => ">",
            },
        }
    }

    fn ground_rel(s: &Slot, g: usize, ordered: bool) -> &'static str {
        let s = match s {
            Slot::Lex { left, .. } => left,
            s => s,
        };
        match s {
            Slot::At(i) if *i == g => "=",
            _ if !ordered => "!=",
            Slot::At(i) if *i < g => "<",
            Slot::Gap { gap, .. } if *gap <= g => "<",
            _ => ">",
        }
    }

    /// First atomic fact on which two patterns over the same grounds differ.
    pub fn separating_fact(&self, other: &TypePattern, spec: &StructureSpec) -> Option<String> {
        let ordered = spec.is_ordered();
        if self.slots.len() != other.slots.len() {
            return Some(format!("arity {} versus {}", self.slots.len(), other.slots.len()));
        }
        for i in 0..self.slots.len() {
            for (g, ground) in self.grounds.iter().enumerate() {
                let (r1, r2) = (Self::ground_rel(&self.slots[i], g, ordered), Self::ground_rel(&other.slots[i], g, ordered));
                if r1 != r2 {
                    return Some(format!("x{i} {r1} {ground} versus x{i} {r2} {ground}"));
                }
            }
            for j in 0..i {
                let (r1, r2) = (
                    Self::pos_rel(&self.slots[j], &self.slots[i], ordered),
                    Self::pos_rel(&other.slots[j], &other.slots[i], ordered),
                );
                if r1 != r2 {
                    return Some(format!("x{j} {r1} x{i} versus x{j} {r2} x{i}"));
                }
            }
        }
        None
    }
}

impl fmt::Display for TypePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let equality = self.slots.iter().any(|s| matches!(s, Slot::Fresh(_)))
            || self.grounds.iter().any(|g| matches!(g, Point::Atom(Atom::Eq(_))));
        if equality {
            // equality diagram: one entry per class
            let mut parts = Vec::new();
            let mut seen: Vec<&Slot> = Vec::new();
            for s in &self.slots {
                if seen.contains(&s) {
                    continue;
                }
                seen.push(s);
                let members: Vec<String> =
                    self.slots.iter().enumerate().filter(|(_, t)| *t == s).map(|(i, _)| format!("x{i}")).collect();
                let mut text = members.join(" = ");
                if let Slot::At(g) = s {
                    text = format!("{text} = {}", self.grounds[*g]);
                }
                parts.push(text);
            }
            return write!(f, "{}", parts.join(" | "));
        }
        if self.slots.iter().any(|s| matches!(s, Slot::Lex { .. })) {
            let mut items: Vec<(usize, (usize, usize), usize)> = self
                .slots
                .iter()
                .enumerate()
                .map(|(i, s)| match s {
                    Slot::Lex { left, right } => (i, Self::line_key(left), *right),
                    _ => (i, (0, 0), 0),
                })
                .collect();
            items.sort_by_key(|(i, k, r)| (*k, *r, *i));
            let mut out = String::new();
            for (idx, (i, k, r)) in items.iter().enumerate() {
                if idx > 0 {
                    let (_, pk, pr) = items[idx - 1];
                    out.push_str(if pk != *k {
                        " < "
                    } else if pr != *r {
                        " <~ "
                    } else {
                        " = "
                    });
                }
                out.push_str(&format!("x{i}"));
            }
            return f.write_str(&out);
        }
        // ordered chain through the ground points
        let mut tokens: Vec<((usize, usize), String)> =
            self.grounds.iter().enumerate().map(|(g, p)| ((2 * g + 1, 0), p.to_string())).collect();
        for (i, s) in self.slots.iter().enumerate() {
            tokens.push((Self::line_key(s), format!("x{i}")));
        }
        tokens.sort_by_key(|a| a.0);
        let mut out = String::new();
        for (idx, (k, t)) in tokens.iter().enumerate() {
            if idx > 0 {
                out.push_str(if tokens[idx - 1].0 == *k { " = " } else { " < " });
            }
            out.push_str(t);
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::Field;

    fn bell(n: usize) -> usize {
        // Bell triangle
        let mut row = vec![1usize];
        for _ in 1..n {
            let mut next = vec![*row.last().unwrap()];
            for x in &row {
                next.push(next.last().unwrap() + x);
            }
            row = next;
        }
        *row.last().unwrap()
    }

    #[test]
    fn counts() {
        let eq = StructureSpec::Equality;
        let dlo = StructureSpec::dlo();
        for n in 1..=4 {
            assert_eq!(TypePattern::enumerate(&eq, n, &[]).unwrap().len(), bell(n));
        }
        let fubini = [1, 1, 3, 13, 75];
        for (n, &want) in fubini.iter().enumerate() {
            assert_eq!(TypePattern::enumerate(&dlo, n, &[]).unwrap().len(), want);
        }
        assert_eq!(TypePattern::enumerate(&dlo, 1, &[Atom::int(0)]).unwrap().len(), 3);
        assert_eq!(TypePattern::enumerate(&eq, 0, &[]).unwrap().len(), 1);
    }

    #[test]
    fn examples() {
        let dlo = StructureSpec::dlo();
        let t1 = TypePattern::of(&dlo, &[Atom::int(1), Atom::int(3)], &[]).unwrap();
        let t2 = TypePattern::of(&dlo, &[Atom::int(2), Atom::int(7)], &[]).unwrap();
        assert_eq!(t1, t2);
        assert_eq!(t1.realize(&dlo).unwrap(), vec![Atom::int(0), Atom::int(1)]);
        let c0 = dlo.clone().with_constant(crate::num::QuadRat::int(0));
        let a = TypePattern::of(&c0, &[Atom::int(-1), Atom::int(1)], &[]).unwrap();
        let b = TypePattern::of(&c0, &[Atom::int(1), Atom::int(2)], &[]).unwrap();
        assert_ne!(a, b);
        let eq = StructureSpec::Equality;
        let t = TypePattern::of(&eq, &[Atom::Eq(0), Atom::Eq(0), Atom::Eq(1)], &[]).unwrap();
        assert_eq!(t.slots, vec![Slot::Fresh(0), Slot::Fresh(0), Slot::Fresh(1)]);
        assert_eq!(t.realize(&eq).unwrap(), vec![Atom::Eq(0), Atom::Eq(0), Atom::Eq(1)]);
        let params = [Atom::int(0), Atom::ratio(5, 2), Atom::int(3)];
        let t = TypePattern::of(&dlo, &[Atom::int(2)], &params).unwrap();
        assert_eq!(t.realize(&dlo).unwrap(), vec![Atom::int(1)]);
    }

    #[test]
    fn round_trip_all_structures() {
        let specs: [StructureSpec; 5] = [
            StructureSpec::Equality,
            StructureSpec::dlo_over(Field::QSqrt2),
            "dlo[const=0, cut<=sqrt2]".parse().unwrap(),
            "sum(dlo[field=qsqrt2], star, dlo)".parse().unwrap(),
            "lex(sum(dlo[field=qsqrt2], dlo), dlo[field=qsqrt2])".parse().unwrap(),
        ];
        for spec in &specs {
            for n in 0..=3 {
                let all = TypePattern::enumerate(spec, n, &[]).unwrap();
                let mut sorted = all.clone();
                sorted.sort();
                sorted.dedup();
                assert_eq!(sorted.len(), all.len(), "duplicates for {spec}");
                for t in &all {
                    let tup = t.realize(spec).unwrap();
                    assert_eq!(&TypePattern::of(spec, &tup, &[]).unwrap(), t, "{spec}: {t}");
                }
            }
        }
    }

    #[test]
    fn separating_fact_names_the_difference() {
        let c0: StructureSpec = "dlo[const=0]".parse().unwrap();
        let a = TypePattern::of(&c0, &[Atom::int(0)], &[]).unwrap();
        let b = TypePattern::of(&c0, &[Atom::int(1)], &[]).unwrap();
        assert_eq!(a.separating_fact(&b, &c0).unwrap(), "x0 = 0 versus x0 > 0");
        assert_eq!(a.to_string(), "0 = x0");
    }
}
