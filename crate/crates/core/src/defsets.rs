//! Definable subsets of `A^k` given by a formula and parameter atoms.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::atoms::{Atom, CutSpec, StructureSpec, TypePattern};
use crate::error::{Error, Result};
use crate::formula::{self, parse_set, Formula, Term};
use crate::num::QuadRat;

/// Largest `n` accepted by [`orbit_count`].
pub const ORBIT_COUNT_BOUND: usize = 8;

/// `{ t : matrix(t; params) }`. The matrix mentions no atom literals except
/// those fixed by every automorphism; all other atoms live in `params`, which
/// is sorted and duplicate free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefSet {
    spec: StructureSpec,
    arity: usize,
    params: Vec<Atom>,
    matrix: Formula,
}

/// A support together with the types over it whose union is the set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportCertificate {
    pub support: Vec<Atom>,
    pub patterns: Vec<TypePattern>,
}

/// Outcome of [`cut_supported`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CutSupport {
    Supported,
    /// Two atoms of the same type over the tuple, the first inside the cut
    /// and the second outside it.
    Split(Atom, Atom),
}

fn shift_params(f: &Formula, by: usize) -> Formula {
    f.map_terms(&|t| match t {
        Term::Param(j) => Term::Param(j + by),
        _ => t.clone(),
    })
}

fn shift_vars(f: &Formula, by: usize) -> Formula {
    f.map_terms(&|t| match t {
        Term::Var(i) => Term::Var(i + by),
        _ => t.clone(),
    })
}

impl DefSet {
    /// Build a set from a matrix in `x0..x{arity-1}` and `y0..` holes.
    pub fn new(spec: StructureSpec, arity: usize, params: Vec<Atom>, matrix: Formula) -> Result<DefSet> {
        spec.validate()?;
        if matrix.var_count() > arity {
            return Err(Error::Arity { expected: arity, got: matrix.var_count() });
        }
        if matrix.param_count() > params.len() {
            return Err(Error::Arity { expected: matrix.param_count(), got: params.len() });
        }
        matrix.check_scoped()?;
        for a in &params {
            spec.check_atom(a)?;
        }
        for a in matrix.literals() {
            spec.check_atom(&a)?;
        }
        // hoist movable literals into parameters
        let mut all = params.clone();
        for a in matrix.literals() {
            if !spec.is_fixed(&a) {
                all.push(a);
            }
        }
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        let index = |a: &Atom| sorted.binary_search(a).unwrap();
        let m = matrix.map_terms(&|t| match t {
            Term::Param(j) => Term::Param(index(&params[*j])),
            Term::Lit(a) if !spec.is_fixed(a) => Term::Param(index(a)),
            _ => t.clone(),
        });
        let m = if spec.is_lex() && m.has_quantifiers() {
            return Err(Error::Unsupported("quantified sets over a lexicographic product".into()));
        } else if spec.is_lex() {
            m
        } else {
            formula::qe(&spec, &m)?
        };
        // keep only the parameters the matrix still uses
        let mut used: Vec<usize> = Vec::new();
        collect_params(&m, &mut used);
        used.sort();
        used.dedup();
        let params: Vec<Atom> = used.iter().map(|&j| sorted[j].clone()).collect();
        let m = m.map_terms(&|t| match t {
            Term::Param(j) => Term::Param(used.binary_search(j).unwrap()),
            _ => t.clone(),
        });
        Ok(DefSet { spec, arity, params, matrix: m })
    }

    /// Parse `{(x, y): ...}`; `yK` refers to `params[K]`.
    pub fn parse(spec: &StructureSpec, text: &str, params: &[Atom]) -> Result<DefSet> {
        let (arity, f) = parse_set(text, spec)?;
        DefSet::new(spec.clone(), arity, params.to_vec(), f)
    }

    /// All of `A^k`.
    pub fn full(spec: &StructureSpec, arity: usize) -> DefSet {
        DefSet { spec: spec.clone(), arity, params: Vec::new(), matrix: Formula::True }
    }

    pub fn empty(spec: &StructureSpec, arity: usize) -> DefSet {
        DefSet { spec: spec.clone(), arity, params: Vec::new(), matrix: Formula::False }
    }

    pub fn spec(&self) -> &StructureSpec {
        &self.spec
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn params(&self) -> &[Atom] {
        &self.params
    }

    pub fn matrix(&self) -> &Formula {
        &self.matrix
    }

    /// The matrix with parameters substituted.
    pub fn closed_matrix(&self) -> Formula {
        self.matrix.instantiate(&[], &self.params)
    }

    pub fn member(&self, t: &[Atom]) -> Result<bool> {
        if t.len() != self.arity {
            return Err(Error::Arity { expected: self.arity, got: t.len() });
        }
        formula::eval(&self.spec, &self.matrix, t, &self.params)
    }

    fn same_spec(&self, other: &DefSet) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::TypeMismatch(format!("{} versus {}", self.spec, other.spec)));
        }
        Ok(())
    }

    fn binary(&self, other: &DefSet, op: fn(Formula, Formula) -> Formula) -> Result<DefSet> {
        self.same_spec(other)?;
        if self.arity != other.arity {
            return Err(Error::Arity { expected: self.arity, got: other.arity });
        }
        let g = shift_params(&other.matrix, self.params.len());
        let mut params = self.params.clone();
        params.extend(other.params.iter().cloned());
        DefSet::new(self.spec.clone(), self.arity, params, op(self.matrix.clone(), g))
    }

    pub fn union(&self, other: &DefSet) -> Result<DefSet> {
        self.binary(other, Formula::or)
    }

    pub fn intersect(&self, other: &DefSet) -> Result<DefSet> {
        self.binary(other, Formula::and)
    }

    pub fn difference(&self, other: &DefSet) -> Result<DefSet> {
        self.intersect(&other.complement()?)
    }

    pub fn complement(&self) -> Result<DefSet> {
        DefSet::new(self.spec.clone(), self.arity, self.params.clone(), Formula::not(self.matrix.clone()))
    }

    /// `self x other`, coordinates of `other` after those of `self`.
    pub fn product(&self, other: &DefSet) -> Result<DefSet> {
        self.same_spec(other)?;
        let g = shift_vars(&shift_params(&other.matrix, self.params.len()), self.arity);
        let mut params = self.params.clone();
        params.extend(other.params.iter().cloned());
        DefSet::new(self.spec.clone(), self.arity + other.arity, params, Formula::and(self.matrix.clone(), g))
    }

    /// Existentially project away coordinate `i`.
    pub fn project(&self, i: usize) -> Result<DefSet> {
        if i >= self.arity {
            return Err(Error::Arity { expected: self.arity, got: i + 1 });
        }
        let body = self.matrix.map_terms(&|t| match t {
            Term::Var(j) if *j == i => Term::Bound(0),
            Term::Var(j) if *j > i => Term::Var(j - 1),
            Term::Bound(l) => Term::Bound(l + 1),
            _ => t.clone(),
        });
        DefSet::new(self.spec.clone(), self.arity - 1, self.params.clone(), Formula::exists(body))
    }

    /// The image under an automorphism, acting on the parameters.
    pub fn act(&self, pi: impl Fn(&Atom) -> Atom) -> Result<DefSet> {
        let params = self.params.iter().map(pi).collect();
        DefSet::new(self.spec.clone(), self.arity, params, self.matrix.clone())
    }

    pub fn is_empty(&self) -> Result<bool> {
        Ok(self.witness()?.is_none())
    }

    /// Some member, if there is one.
    pub fn witness(&self) -> Result<Option<Vec<Atom>>> {
        self.check_lex()?;
        for (t, inside) in self.fine_types(&[])? {
            if inside {
                return Ok(Some(t.realize(&self.spec)?));
            }
        }
        Ok(None)
    }

    pub fn is_equal(&self, other: &DefSet) -> Result<bool> {
        self.same_spec(other)?;
        if self.arity != other.arity {
            return Ok(false);
        }
        let f = self.closed_matrix();
        let g = other.closed_matrix();
        Ok(formula::equivalent(&self.spec, &f, &g)? == formula::Equivalence::Equivalent)
    }

    fn check_lex(&self) -> Result<()> {
        if self.spec.is_lex() && !self.params.is_empty() {
            return Err(Error::Unsupported("parameters over a lexicographic product".into()));
        }
        Ok(())
    }

    /// Every type over `extra` and the parameters, with whether it lies in
    /// the set. The matrix is quantifier free in the parameters, so each type
    /// is either inside or outside.
    fn fine_types(&self, extra: &[Atom]) -> Result<Vec<(TypePattern, bool)>> {
        let mut grounds = self.params.clone();
        grounds.extend(extra.iter().cloned());
        grounds.sort();
        grounds.dedup();
        let mut out = Vec::new();
        for t in TypePattern::enumerate(&self.spec, self.arity, &grounds)? {
            let r = t.realize(&self.spec)?;
            let inside = self.member(&r)?;
            out.push((t, inside));
        }
        Ok(out)
    }

    /// Two tuples of the same type over `b` on opposite sides of the set
    /// (the member first), or `None` when `b` supports it.
    pub fn split_witness(&self, b: &[Atom]) -> Result<Option<(Vec<Atom>, Vec<Atom>)>> {
        for a in b {
            self.spec.check_atom(a)?;
        }
        if self.spec.is_lex() && !(self.params.is_empty() && b.is_empty()) {
            return Err(Error::Unsupported("supports over a lexicographic product".into()));
        }
        let mut groups: BTreeMap<TypePattern, (Option<Vec<Atom>>, Option<Vec<Atom>>)> = BTreeMap::new();
        for (t, inside) in self.fine_types(b)? {
            let r = t.realize(&self.spec)?;
            let coarse = TypePattern::of(&self.spec, &r, b)?;
            let e = groups.entry(coarse).or_default();
            if inside {
                e.0.get_or_insert(r);
            } else {
                e.1.get_or_insert(r);
            }
            if let (Some(x), Some(y)) = e {
                return Ok(Some((x.clone(), y.clone())));
            }
        }
        Ok(None)
    }

    /// `b` supports the set: no type over `b` is split by it.
    pub fn support_check(&self, b: &[Atom]) -> Result<bool> {
        Ok(self.split_witness(b)?.is_none())
    }

    pub fn equivariant(&self) -> Result<bool> {
        self.support_check(&[])
    }

    /// Least support, dropping parameters greedily in the given order (an
    /// index permutation of the movable parameters).
    pub fn minimal_support_in_order(&self, order: &[usize]) -> Result<Vec<Atom>> {
        let mut cur: Vec<Atom> = self.params.clone();
        for &i in order {
            let Some(a) = self.params.get(i) else {
                return Err(Error::Invalid(format!("no parameter {i}")));
            };
            let trial: Vec<Atom> = cur.iter().filter(|c| *c != a).cloned().collect();
            if self.support_check(&trial)? {
                cur = trial;
            }
        }
        Ok(cur)
    }

    /// A minimal support and the types over it that make up the set.
    pub fn minimal_support(&self) -> Result<SupportCertificate> {
        let order: Vec<usize> = (0..self.params.len()).collect();
        let support = self.minimal_support_in_order(&order)?;
        let patterns = self.orbit_decompose_over(&support)?;
        Ok(SupportCertificate { support, patterns })
    }

    /// Types over `b` contained in the set; `b` must support it.
    pub fn orbit_decompose_over(&self, b: &[Atom]) -> Result<Vec<TypePattern>> {
        if let Some((x, y)) = self.split_witness(b)? {
            return Err(Error::Invalid(format!(
                "{} does not support the set: {} and {} have the same type",
                crate::atoms::tuple_to_string(b),
                crate::atoms::tuple_to_string(&x),
                crate::atoms::tuple_to_string(&y)
            )));
        }
        let mut out = Vec::new();
        for t in TypePattern::enumerate(&self.spec, self.arity, b)? {
            if self.member(&t.realize(&self.spec)?)? {
                out.push(t);
            }
        }
        Ok(out)
    }

    /// Orbits of the set under the pointwise stabiliser of its least support.
    pub fn orbit_decompose(&self) -> Result<Vec<TypePattern>> {
        Ok(self.minimal_support()?.patterns)
    }

    /// The union of the realisations of `patterns`, as a set.
    pub fn from_patterns(spec: &StructureSpec, arity: usize, patterns: &[TypePattern]) -> Result<DefSet> {
        let mut f = Formula::False;
        for t in patterns {
            if t.arity() != arity {
                return Err(Error::Arity { expected: arity, got: t.arity() });
            }
            f = Formula::or(f, formula::pattern_formula(spec, t)?);
        }
        DefSet::new(spec.clone(), arity, Vec::new(), f)
    }
}

fn collect_params(f: &Formula, out: &mut Vec<usize>) {
    let cell = core::cell::RefCell::new(Vec::new());
    f.map_terms(&|t| {
        if let Term::Param(j) = t {
            cell.borrow_mut().push(*j);
        }
        t.clone()
    });
    out.extend(cell.into_inner());
}

impl fmt::Display for DefSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.arity).map(|i| format!("x{i}")).collect();
        write!(f, "{{({}): {}}}", names.join(", "), self.closed_matrix())
    }
}

/// Number of orbits of `A^n` under all automorphisms.
pub fn orbit_count(spec: &StructureSpec, n: usize) -> Result<usize> {
    if n > ORBIT_COUNT_BOUND {
        return Err(Error::BoundExceeded(format!("orbit_count supports n <= {ORBIT_COUNT_BOUND}, got {n}")));
    }
    Ok(TypePattern::enumerate(spec, n, &[])?.len())
}

/// Whether the cut `{x : x < c}` (or `<=`) of a dense order is supported by
/// `b`. It is exactly when its cutpoint is definable from `b`: one of the
/// atoms of `b`, a constant, or the cutpoint of an equivalent predicate.
pub fn cut_supported(spec: &StructureSpec, cut: &CutSpec, b: &[Atom]) -> Result<CutSupport> {
    let StructureSpec::Dlo { constants, cuts, .. } = spec else {
        return Err(Error::Unsupported(format!("cuts over {spec}")));
    };
    for a in b {
        spec.check_atom(a)?;
    }
    let c = &cut.cutpoint;
    // a cutpoint shared with a predicate is fixed when it is an atom, and
    // otherwise both cuts denote the same set
    let definable =
        b.iter().any(|a| a.as_value() == Some(c)) || constants.contains(c) || cuts.iter().any(|d| d.cutpoint == *c);
    if definable {
        return Ok(CutSupport::Supported);
    }
    // neighbours of the cutpoint among the definable positions
    let mut values: Vec<QuadRat> = b.iter().filter_map(|a| a.as_value().cloned()).collect();
    values.extend(constants.iter().cloned());
    values.extend(cuts.iter().map(|d| d.cutpoint.clone()));
    let lo = values.iter().filter(|v| *v < c).max().cloned();
    let hi = values.iter().filter(|v| *v > c).min().cloned();
    let inside = crate::num::simplest_between(lo.as_ref(), Some(c));
    let outside = crate::num::simplest_between(Some(c), hi.as_ref());
    // simplest points are rational, hence atoms of either field
    Ok(CutSupport::Split(Atom::rational(inside), Atom::rational(outside)))
}

/// How one structure's relations look from another structure on the same
/// carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Every relation is supported by this tuple.
    Supported(Vec<Atom>),
    /// The named relation has no finite support; the two atoms have the same
    /// type over the other structure's fixed points but are separated by it.
    Unsupported { relation: String, split: (Atom, Atom) },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Mutual,
    OneWay,
    Incomparable,
}

/// Both directions of a mutual-symmetry check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryReport {
    /// The first structure's relations seen from the second.
    pub forward: Direction,
    /// The second structure's relations seen from the first.
    pub backward: Direction,
}

impl SymmetryReport {
    pub fn verdict(&self) -> Verdict {
        match (&self.forward, &self.backward) {
            (Direction::Supported(_), Direction::Supported(_)) => Verdict::Mutual,
            (Direction::Unsupported { .. }, Direction::Unsupported { .. }) => Verdict::Incomparable,
            _ => Verdict::OneWay,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Mutual => "mutual",
            Verdict::OneWay => "one-way",
            Verdict::Incomparable => "incomparable",
        })
    }
}

fn direction(a: &StructureSpec, b: &StructureSpec) -> Result<Direction> {
    if a == b || *a == StructureSpec::Equality {
        return Ok(Direction::Supported(Vec::new()));
    }
    let (StructureSpec::Dlo { constants, cuts, .. }, StructureSpec::Dlo { .. }) = (a, b) else {
        return Err(Error::Unsupported(format!("mutual symmetry between {a} and {b}")));
    };
    let mut support: Vec<Atom> = Vec::new();
    for c in constants {
        let atom = Atom::Ord(c.clone());
        if !b.is_fixed(&atom) {
            support.push(atom);
        }
    }
    for (k, cut) in cuts.iter().enumerate() {
        let cp = Atom::Ord(cut.cutpoint.clone());
        let candidate: Vec<Atom> = if b.check_atom(&cp).is_ok() && !b.is_fixed(&cp) { alloc::vec![cp] } else { Vec::new() };
        match cut_supported(b, cut, &candidate)? {
            CutSupport::Supported => support.extend(candidate),
            CutSupport::Split(x, y) => {
                return Ok(Direction::Unsupported { relation: format!("P{k}"), split: (x, y) });
            }
        }
    }
    support.sort();
    support.dedup();
    Ok(Direction::Supported(support))
}

fn same_carrier(a: &StructureSpec, b: &StructureSpec) -> bool {
    match (a, b) {
        (StructureSpec::Equality, StructureSpec::Equality) => true,
        (StructureSpec::Dlo { field: f, .. }, StructureSpec::Dlo { field: g, .. }) => f == g,
        _ => a == b,
    }
}

/// Whether each structure's relations are finitely supported over the other.
pub fn mutual_symmetry(a: &StructureSpec, b: &StructureSpec) -> Result<SymmetryReport> {
    a.validate()?;
    b.validate()?;
    if !same_carrier(a, b) {
        return Err(Error::TypeMismatch(format!("carriers of {a} and {b} differ")));
    }
    Ok(SymmetryReport { forward: direction(a, b)?, backward: direction(b, a)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::Field;
    use alloc::string::ToString;
    use alloc::vec;

    fn dlo() -> StructureSpec {
        StructureSpec::dlo()
    }

    fn s0() -> DefSet {
        DefSet::parse(&dlo(), "{(x): 0<x & x<=5/2 | 3<=x}", &[]).unwrap()
    }

    #[test]
    fn membership() {
        let s = s0();
        assert!(s.member(&[Atom::int(1)]).unwrap());
        assert!(!s.member(&[Atom::ratio(27, 10)]).unwrap());
        assert!(s.member(&[Atom::int(3)]).unwrap());
        assert!(s.member(&[]).is_err());
        assert_eq!(s.params(), &[Atom::int(0), Atom::ratio(5, 2), Atom::int(3)]);
    }

    #[test]
    fn boolean_algebra() {
        let s = s0();
        let u = s.union(&s.complement().unwrap()).unwrap();
        assert!(u.complement().unwrap().is_empty().unwrap());
        assert!(s.is_equal(&s.union(&s).unwrap()).unwrap());
        let a = DefSet::full(&dlo(), 1);
        assert_eq!(orbit_count(&dlo(), 2).unwrap(), 3);
        assert_eq!(a.product(&a).unwrap().orbit_decompose().unwrap().len(), 3);
        let lt = DefSet::parse(&dlo(), "{(x, y): x < y}", &[]).unwrap();
        assert!(lt.project(1).unwrap().is_equal(&a).unwrap());
        let e = DefSet::parse(&dlo(), "{(x): x < y0 & y0 < x}", &[Atom::int(0)]).unwrap();
        assert!(e.is_empty().unwrap());
        let l = DefSet::parse(&dlo(), "{(x): x < 0}", &[]).unwrap();
        let r = DefSet::parse(&dlo(), "{(x): !(0 <= x)}", &[]).unwrap();
        assert!(l.is_equal(&r).unwrap());
        assert!(s.union(&DefSet::full(&StructureSpec::Equality, 1)).is_err());
    }

    #[test]
    fn supports() {
        let s = s0();
        assert!(s.support_check(&[Atom::int(0), Atom::ratio(5, 2), Atom::int(3)]).unwrap());
        let (x, y) = s.split_witness(&[Atom::int(0), Atom::int(3)]).unwrap().unwrap();
        assert!(s.member(&x).unwrap() && !s.member(&y).unwrap());
        assert!(DefSet::full(&dlo(), 2).support_check(&[]).unwrap());
        let c = s.minimal_support().unwrap();
        assert_eq!(c.support, vec![Atom::int(0), Atom::ratio(5, 2), Atom::int(3)]);
        assert_eq!(c.patterns.len(), 4);
        assert!(DefSet::from_patterns(&dlo(), 1, &c.patterns).unwrap().is_equal(&s).unwrap());
        let eq = StructureSpec::Equality;
        let ne = DefSet::parse(&eq, "{(x): x != y0}", &[Atom::eq(5)]).unwrap();
        assert_eq!(ne.minimal_support().unwrap().support, vec![Atom::eq(5)]);
        assert!(DefSet::parse(&eq, "{(x, y): x = y}", &[]).unwrap().equivariant().unwrap());
        assert!(!DefSet::parse(&dlo(), "{(x): y0 < x}", &[Atom::int(0)]).unwrap().equivariant().unwrap());
        // a redundant parameter is dropped
        let r = DefSet::parse(&dlo(), "{(x): x < 1 | x < 2}", &[]).unwrap();
        assert_eq!(r.minimal_support().unwrap().support, vec![Atom::int(2)]);
    }

    #[test]
    fn counting() {
        let e = StructureSpec::Equality;
        assert_eq!(orbit_count(&e, 3).unwrap(), 5);
        assert_eq!(orbit_count(&dlo(), 3).unwrap(), 13);
        assert_eq!(orbit_count(&dlo(), 0).unwrap(), 1);
        assert!(matches!(orbit_count(&dlo(), 9), Err(Error::BoundExceeded(_))));
        assert_eq!(DefSet::empty(&dlo(), 1).orbit_decompose().unwrap().len(), 0);
        assert_eq!(DefSet::full(&dlo(), 1).orbit_decompose().unwrap().len(), 1);
    }

    #[test]
    fn cuts() {
        let r2 = CutSpec::closed(QuadRat::sqrt2());
        match cut_supported(&dlo(), &r2, &[Atom::int(1), Atom::int(2)]).unwrap() {
            CutSupport::Split(x, y) => {
                assert!(r2.holds(x.as_value().unwrap()) && !r2.holds(y.as_value().unwrap()));
                let b = [Atom::int(1), Atom::int(2)];
                assert_eq!(TypePattern::of(&dlo(), &[x], &b).unwrap(), TypePattern::of(&dlo(), &[y], &b).unwrap());
            }
            CutSupport::Supported => panic!(),
        }
        let c = CutSpec::closed(QuadRat::ratio(5, 2));
        assert_eq!(cut_supported(&dlo(), &c, &[Atom::ratio(5, 2)]).unwrap(), CutSupport::Supported);
        let q2 = StructureSpec::dlo_over(Field::QSqrt2);
        assert_eq!(cut_supported(&q2, &r2, &[Atom::Ord(QuadRat::sqrt2())]).unwrap(), CutSupport::Supported);
    }

    #[test]
    fn symmetry() {
        let a = dlo().with_constant(QuadRat::int(0));
        let b = dlo().with_constant(QuadRat::int(1));
        let r = mutual_symmetry(&a, &b).unwrap();
        assert_eq!(r.verdict(), Verdict::Mutual);
        assert_eq!(r.forward, Direction::Supported(vec![Atom::int(0)]));
        assert_eq!(r.backward, Direction::Supported(vec![Atom::int(1)]));
        let c = dlo().with_cut(CutSpec::closed(QuadRat::sqrt2()));
        let r = mutual_symmetry(&dlo(), &c).unwrap();
        assert_eq!(r.verdict(), Verdict::OneWay);
        assert!(matches!(r.backward, Direction::Unsupported { .. }));
        assert_eq!(mutual_symmetry(&a, &a).unwrap().verdict(), Verdict::Mutual);
        assert!(mutual_symmetry(&a, &StructureSpec::Equality).is_err());
        assert_eq!(Verdict::OneWay.to_string(), "one-way");
    }
}
