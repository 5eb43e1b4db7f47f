use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use super::Atom;
use crate::error::{Error, Result};
use crate::num::{simplest_run, QuadRat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Field {
    Q,
    QSqrt2,
}

impl Field {
    pub fn contains(self, v: &QuadRat) -> bool {
        match self {
            Field::Q => v.is_rational(),
            Field::QSqrt2 => true,
        }
    }
}

/// The unary predicate `x <= cutpoint` (closed) or `x < cutpoint`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CutSpec {
    pub cutpoint: QuadRat,
    pub closed_below: bool,
}

impl CutSpec {
    pub fn closed(cutpoint: QuadRat) -> CutSpec {
        CutSpec { cutpoint, closed_below: true }
    }

    pub fn open(cutpoint: QuadRat) -> CutSpec {
        CutSpec { cutpoint, closed_below: false }
    }

    pub fn holds(&self, v: &QuadRat) -> bool {
        match v.cmp(&self.cutpoint) {
            Ordering::Less => true,
            Ordering::Equal => self.closed_below,
            Ordering::Greater => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Part {
    Structure(StructureSpec),
    Point,
}

/// Which atom structure is in force.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum StructureSpec {
    /// Pure equality atoms `a0, a1, ...`.
    Equality,
    /// Dense linear order without endpoints over Q or Q(√2), with named
    /// constants and cut predicates `P0, P1, ...` in declaration order.
    Dlo { field: Field, constants: Vec<QuadRat>, cuts: Vec<CutSpec> },
    /// Ordered sum. Its language has the order, the ⋆-points and part
    /// constants as constants, and `P_k(x)` meaning "x lies in part k or
    /// earlier" for every part but the last.
    OrderedSum(Vec<Part>),
    /// Lexicographic product, supported for type patterns only.
    LexProduct(Box<StructureSpec>, Box<StructureSpec>),
}

/// A fixed position of the carrier's order: an atom, or a virtual cut that
/// lies strictly between carrier elements (an irrational cut of a rational
/// order, or the boundary between two dense parts of a sum).
///
/// `Cut` indices are ordered by position.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Atom(Atom),
    Cut(usize),
}

impl Point {
    pub fn as_atom(&self) -> Option<&Atom> {
        match self {
            Point::Atom(a) => Some(a),
            Point::Cut(_) => None,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Atom(a) => write!(f, "{a}"),
            Point::Cut(k) => write!(f, "cut{k}"),
        }
    }
}

/// How a unary predicate reads as an order condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Boundary {
    /// Holds everywhere.
    All,
    /// `x < point`.
    Below(Point),
    /// `x <= atom`.
    AtOrBelow(Atom),
}

impl StructureSpec {
    pub fn dlo() -> StructureSpec {
        StructureSpec::dlo_over(Field::Q)
    }

    pub fn dlo_over(field: Field) -> StructureSpec {
        StructureSpec::Dlo { field, constants: Vec::new(), cuts: Vec::new() }
    }

    pub fn with_constant(mut self, c: QuadRat) -> StructureSpec {
        if let StructureSpec::Dlo { constants, .. } = &mut self {
            constants.push(c);
        }
        self
    }

    pub fn with_cut(mut self, cut: CutSpec) -> StructureSpec {
        if let StructureSpec::Dlo { cuts, .. } = &mut self {
            cuts.push(cut);
        }
        self
    }

    pub fn sum(parts: Vec<Part>) -> Result<StructureSpec> {
        let s = StructureSpec::OrderedSum(parts);
        s.validate()?;
        Ok(s)
    }

    pub fn is_ordered(&self) -> bool {
        !matches!(self, StructureSpec::Equality)
    }

    pub fn is_lex(&self) -> bool {
        matches!(self, StructureSpec::LexProduct(..))
    }

    pub fn field(&self) -> Option<Field> {
        match self {
            StructureSpec::Dlo { field, .. } => Some(*field),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            StructureSpec::Equality => Ok(()),
            StructureSpec::Dlo { field, constants, cuts } => {
                for (i, c) in constants.iter().enumerate() {
                    if !field.contains(c) {
                        return Err(Error::Structure(format!("constant {c} is not in the field")));
                    }
                    if constants[..i].contains(c) {
                        return Err(Error::Structure(format!("duplicate constant {c}")));
                    }
                }
                for (i, c) in cuts.iter().enumerate() {
                    if cuts[..i].contains(c) {
                        return Err(Error::Structure(format!("duplicate cut at {}", c.cutpoint)));
                    }
                }
                Ok(())
            }
            StructureSpec::OrderedSum(parts) => {
                if parts.is_empty() {
                    return Err(Error::Structure("ordered sum needs at least one part".into()));
                }
                if matches!(parts.first(), Some(Part::Point)) || matches!(parts.last(), Some(Part::Point)) {
                    return Err(Error::Structure("ordered sum must start and end with a dense part".into()));
                }
                for w in parts.windows(2) {
                    if matches!(w, [Part::Point, Part::Point]) {
                        return Err(Error::Structure("adjacent points in ordered sum".into()));
                    }
                }
                for p in parts {
                    if let Part::Structure(s) = p {
                        match s {
                            StructureSpec::Dlo { cuts, .. } if cuts.is_empty() => s.validate()?,
                            _ => {
                                return Err(Error::Structure(
                                    "sum parts must be dense orders without cuts".into(),
                                ))
                            }
                        }
                    }
                }
                Ok(())
            }
            StructureSpec::LexProduct(l, r) => {
                if !matches!(**l, StructureSpec::Dlo { .. } | StructureSpec::OrderedSum(_)) {
                    return Err(Error::Structure("left factor must be ordered".into()));
                }
                match &**r {
                    StructureSpec::Dlo { constants, cuts, .. } if constants.is_empty() && cuts.is_empty() => {}
                    _ => return Err(Error::Structure("right factor must be a plain dense order".into())),
                }
                l.validate()
            }
        }
    }

    /// Check that `a` belongs to the carrier.
    pub fn check_atom(&self, a: &Atom) -> Result<()> {
        let bad = || Error::Sort(format!("{a} is not an atom of {self}"));
        match (self, a) {
            (StructureSpec::Equality, Atom::Eq(_)) => Ok(()),
            (StructureSpec::Dlo { field, .. }, Atom::Ord(v)) if field.contains(v) => Ok(()),
            (StructureSpec::OrderedSum(parts), Atom::Sum { part, inner }) => match (parts.get(*part), inner) {
                (Some(Part::Point), None) => Ok(()),
                (Some(Part::Structure(s)), Some(i)) => s.check_atom(i).map_err(|_| bad()),
                _ => Err(bad()),
            },
            (StructureSpec::LexProduct(l, r), Atom::Pair(x, y)) => {
                l.check_atom(x).map_err(|_| bad())?;
                r.check_atom(y).map_err(|_| bad())
            }
            _ => Err(bad()),
        }
    }

    /// Carrier atoms fixed by every automorphism: constants, ⋆-points and cut
    /// points that are themselves carrier elements. Sorted.
    pub fn fixed_atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        match self {
            StructureSpec::Dlo { field, constants, cuts } => {
                out.extend(constants.iter().cloned().map(Atom::Ord));
                out.extend(cuts.iter().filter(|c| field.contains(&c.cutpoint)).map(|c| Atom::Ord(c.cutpoint.clone())));
            }
            StructureSpec::OrderedSum(parts) => {
                for (k, p) in parts.iter().enumerate() {
                    match p {
                        Part::Point => out.push(Atom::star(k)),
                        Part::Structure(s) => {
                            out.extend(s.fixed_atoms().into_iter().map(|a| Atom::in_part(k, a)));
                        }
                    }
                }
            }
            StructureSpec::Equality | StructureSpec::LexProduct(..) => {}
        }
        out.sort();
        out.dedup();
        out
    }

    /// `true` when `a` is fixed by every automorphism.
    pub fn is_fixed(&self, a: &Atom) -> bool {
        self.fixed_atoms().contains(a)
    }

    /// Values of the virtual cuts of a dense order, sorted.
    fn dlo_virtuals(field: Field, cuts: &[CutSpec]) -> Vec<QuadRat> {
        let mut v: Vec<QuadRat> = cuts.iter().map(|c| c.cutpoint.clone()).filter(|c| !field.contains(c)).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Number of virtual cut points.
    pub fn virtual_count(&self) -> usize {
        match self {
            StructureSpec::Dlo { field, cuts, .. } => Self::dlo_virtuals(*field, cuts).len(),
            StructureSpec::OrderedSum(parts) => self.sum_gaps(parts).len(),
            _ => 0,
        }
    }

    /// Parts `p` such that `Cut(i)` is the boundary after part `gaps[i]`.
    fn sum_gaps(&self, parts: &[Part]) -> Vec<usize> {
        (0..parts.len().saturating_sub(1))
            .filter(|&p| matches!((&parts[p], &parts[p + 1]), (Part::Structure(_), Part::Structure(_))))
            .collect()
    }

    /// Value of a point of a dense order.
    pub fn point_value(&self, p: &Point) -> Option<QuadRat> {
        match (self, p) {
            (StructureSpec::Dlo { .. }, Point::Atom(Atom::Ord(v))) => Some(v.clone()),
            (StructureSpec::Dlo { field, cuts, .. }, Point::Cut(i)) => Self::dlo_virtuals(*field, cuts).get(*i).cloned(),
            _ => None,
        }
    }

    /// Order of two points of an ordered (non-product) carrier.
    pub fn cmp_points(&self, p: &Point, q: &Point) -> Ordering {
        if let (Point::Atom(a), Point::Atom(b)) = (p, q) {
            return a.cmp(b);
        }
        match self {
            StructureSpec::Dlo { .. } => {
                let (x, y) = (self.point_value(p), self.point_value(q));
                x.cmp(&y)
            }
            StructureSpec::OrderedSum(parts) => {
                let gaps = self.sum_gaps(parts);
                // key: (part, 0 for an atom with value, 1 for the boundary after the part)
                let key = |pt: &Point| -> (usize, u8, Option<Atom>) {
                    match pt {
                        Point::Atom(Atom::Sum { part, inner }) => (*part, 0, inner.as_deref().cloned()),
                        Point::Atom(_) => (usize::MAX, 0, None),
                        Point::Cut(i) => (gaps.get(*i).copied().unwrap_or(usize::MAX), 1, None),
                    }
                };
                key(p).cmp(&key(q))
            }
            _ => p.cmp(q),
        }
    }

    /// Sorted, duplicate-free fixed positions: the parameters, the fixed atoms
    /// and the virtual cuts. For the equality sort only the parameters count.
    /// For a lexicographic product these are the points of the left factor.
    pub fn ground_points(&self, params: &[Atom]) -> Result<Vec<Point>> {
        for a in params {
            self.check_atom(a)?;
        }
        match self {
            StructureSpec::Equality => {
                let mut v: Vec<Point> = params.iter().cloned().map(Point::Atom).collect();
                v.sort();
                v.dedup();
                Ok(v)
            }
            StructureSpec::LexProduct(l, _) => {
                if !params.is_empty() {
                    return Err(Error::Unsupported("parameters over a lexicographic product".into()));
                }
                l.ground_points(&[])
            }
            _ => {
                let mut v: Vec<Point> = params.iter().cloned().map(Point::Atom).collect();
                v.extend(self.fixed_atoms().into_iter().map(Point::Atom));
                v.extend((0..self.virtual_count()).map(Point::Cut));
                v.sort_by(|a, b| self.cmp_points(a, b));
                v.dedup_by(|a, b| self.cmp_points(a, b) == Ordering::Equal);
                Ok(v)
            }
        }
    }

    /// Number of unary predicates `P0, P1, ...` in the language.
    pub fn predicate_count(&self) -> usize {
        match self {
            StructureSpec::Dlo { cuts, .. } => cuts.len(),
            StructureSpec::OrderedSum(parts) => parts.len().saturating_sub(1),
            _ => 0,
        }
    }

    /// Predicate `k` as an order condition.
    pub fn pred_boundary(&self, k: usize) -> Result<Boundary> {
        let missing = || Error::Language(format!("P{k} over {self}"));
        match self {
            StructureSpec::Dlo { field, cuts, .. } => {
                let c = cuts.get(k).ok_or_else(missing)?;
                if field.contains(&c.cutpoint) {
                    let a = Atom::Ord(c.cutpoint.clone());
                    Ok(if c.closed_below { Boundary::AtOrBelow(a) } else { Boundary::Below(Point::Atom(a)) })
                } else {
                    let i = Self::dlo_virtuals(*field, cuts).iter().position(|v| *v == c.cutpoint).unwrap();
                    Ok(Boundary::Below(Point::Cut(i)))
                }
            }
            StructureSpec::OrderedSum(parts) => {
                if k + 1 > parts.len() {
                    return Err(missing());
                }
                if k + 1 == parts.len() {
                    return Ok(Boundary::All);
                }
                Ok(match (&parts[k], &parts[k + 1]) {
                    (Part::Point, _) => Boundary::AtOrBelow(Atom::star(k)),
                    (_, Part::Point) => Boundary::Below(Point::Atom(Atom::star(k + 1))),
                    _ => {
                        let i = self.sum_gaps(parts).iter().position(|&g| g == k).unwrap();
                        Boundary::Below(Point::Cut(i))
                    }
                })
            }
            _ => Err(missing()),
        }
    }

    /// The predicate whose boundary is the virtual cut `i`.
    pub fn pred_for_cut(&self, i: usize) -> Option<usize> {
        (0..self.predicate_count()).find(|&k| self.pred_boundary(k).ok() == Some(Boundary::Below(Point::Cut(i))))
    }

    pub fn pred_holds(&self, k: usize, a: &Atom) -> Result<bool> {
        self.check_atom(a)?;
        Ok(match self.pred_boundary(k)? {
            Boundary::All => true,
            Boundary::AtOrBelow(b) => *a <= b,
            Boundary::Below(p) => self.cmp_points(&Point::Atom(a.clone()), &p) == Ordering::Less,
        })
    }

    /// `k` increasing carrier atoms strictly between `lo` and `hi` (open ends
    /// when `None`), chosen as simple rationals.
    pub fn sample_in(&self, lo: Option<&Point>, hi: Option<&Point>, k: usize) -> Result<Vec<Atom>> {
        match self {
            StructureSpec::Dlo { .. } => {
                let l = lo.map(|p| self.point_value(p).ok_or_else(|| Error::Sort(format!("{p}"))));
                let h = hi.map(|p| self.point_value(p).ok_or_else(|| Error::Sort(format!("{p}"))));
                let l = l.transpose()?;
                let h = h.transpose()?;
                if let (Some(a), Some(b)) = (&l, &h) {
                    if a >= b {
                        return Err(Error::Invalid(format!("empty interval ({a}, {b})")));
                    }
                }
                Ok(simplest_run(l.as_ref(), h.as_ref(), k).into_iter().map(Atom::rational).collect())
            }
            StructureSpec::OrderedSum(parts) => {
                let (part, l, h) = self.sum_interval(lo, hi)?;
                let Part::Structure(inner) = &parts[part] else {
                    return Err(Error::Invalid("interval inside a point part".into()));
                };
                let v = inner.sample_in(l.as_ref(), h.as_ref(), k)?;
                Ok(v.into_iter().map(|a| Atom::in_part(part, a)).collect())
            }
            _ => Err(Error::Unsupported(format!("interval sampling over {self}"))),
        }
    }

    /// For an open interval of an ordered sum lying inside one dense part:
    /// that part and the interval's bounds inside it.
    pub fn sum_interval(&self, lo: Option<&Point>, hi: Option<&Point>) -> Result<(usize, Option<Point>, Option<Point>)> {
        let StructureSpec::OrderedSum(parts) = self else {
            return Err(Error::Unsupported(format!("sum interval over {self}")));
        };
        let gaps = self.sum_gaps(parts);
        let n = parts.len();
        let lo_key = match lo {
            None => (0, None),
            Some(Point::Atom(Atom::Sum { part, inner: Some(v) })) => (*part, Some(Point::Atom((**v).clone()))),
            Some(Point::Atom(Atom::Sum { part, inner: None })) => (*part + 1, None),
            Some(Point::Cut(i)) => (gaps[*i] + 1, None),
            Some(p) => return Err(Error::Sort(format!("{p}"))),
        };
        let hi_key = match hi {
            None => (n - 1, None),
            Some(Point::Atom(Atom::Sum { part, inner: Some(v) })) => (*part, Some(Point::Atom((**v).clone()))),
            Some(Point::Atom(Atom::Sum { part, inner: None })) => (part.wrapping_sub(1), None),
            Some(Point::Cut(i)) => (gaps[*i], None),
            Some(p) => return Err(Error::Sort(format!("{p}"))),
        };
        if lo_key.0 != hi_key.0 || lo_key.0 >= n || matches!(parts[lo_key.0], Part::Point) {
            return Err(Error::Invalid("interval is not inside one dense part".into()));
        }
        Ok((lo_key.0, lo_key.1, hi_key.1))
    }

    /// The parts of an ordered sum.
    pub fn parts(&self) -> Option<&[Part]> {
        match self {
            StructureSpec::OrderedSum(p) => Some(p),
            _ => None,
        }
    }
}

impl fmt::Display for StructureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureSpec::Equality => f.write_str("eq"),
            StructureSpec::Dlo { field, constants, cuts } => {
                f.write_str("dlo")?;
                let mut opts: Vec<String> = Vec::new();
                if *field == Field::QSqrt2 {
                    opts.push("field=qsqrt2".into());
                }
                for c in constants {
                    opts.push(format!("const={c}"));
                }
                for c in cuts {
                    opts.push(format!("cut{}{}", if c.closed_below { "<=" } else { "<" }, c.cutpoint));
                }
                if !opts.is_empty() {
                    write!(f, "[{}]", opts.join(", "))?;
                }
                Ok(())
            }
            StructureSpec::OrderedSum(parts) => {
                f.write_str("sum(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    match p {
                        Part::Point => f.write_str("star")?,
                        Part::Structure(s) => write!(f, "{s}")?,
                    }
                }
                f.write_str(")")
            }
            StructureSpec::LexProduct(l, r) => write!(f, "lex({l}, {r})"),
        }
    }
}

impl FromStr for StructureSpec {
    type Err = Error;

    /// Spec literals: `eq`, `dlo`, `dlo[field=qsqrt2, const=0, cut<=sqrt2]`,
    /// `sum(dlo[field=qsqrt2], star, dlo)`, `lex(a, b)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |m: &str| Error::Literal(format!("{m} in spec literal {s:?}"));
        let spec = if s == "eq" || s == "equality" {
            StructureSpec::Equality
        } else if let Some(rest) = s.strip_prefix("dlo") {
            let rest = rest.trim();
            let mut spec = StructureSpec::dlo();
            if !rest.is_empty() {
                let body = rest
                    .strip_prefix('[')
                    .and_then(|r| r.strip_suffix(']'))
                    .ok_or_else(|| bad("expected [options]"))?;
                for opt in super::split_top_level(body) {
                    if opt.is_empty() {
                        continue;
                    }
                    if let Some(v) = opt.strip_prefix("field=") {
                        let field = match v.trim() {
                            "q" | "Q" => Field::Q,
                            "qsqrt2" | "Qsqrt2" => Field::QSqrt2,
                            _ => return Err(bad("unknown field")),
                        };
                        if let StructureSpec::Dlo { field: f, .. } = &mut spec {
                            *f = field;
                        }
                    } else if let Some(v) = opt.strip_prefix("const=") {
                        spec = spec.with_constant(v.parse()?);
                    } else if let Some(v) = opt.strip_prefix("cut<=") {
                        spec = spec.with_cut(CutSpec::closed(v.parse()?));
                    } else if let Some(v) = opt.strip_prefix("cut<") {
                        spec = spec.with_cut(CutSpec::open(v.parse()?));
                    } else {
                        return Err(bad("unknown option"));
                    }
                }
            }
            spec
        } else if let Some(rest) = s.strip_prefix("sum") {
            let body = rest
                .trim()
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| bad("expected (parts)"))?;
            let mut parts = Vec::new();
            for item in super::split_top_level(body) {
                if item == "star" {
                    parts.push(Part::Point);
                } else {
                    parts.push(Part::Structure(item.parse()?));
                }
            }
            StructureSpec::OrderedSum(parts)
        } else if let Some(rest) = s.strip_prefix("lex") {
            let body = rest
                .trim()
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| bad("expected (left, right)"))?;
            let items = super::split_top_level(body);
            if items.len() != 2 {
                return Err(bad("lex takes two factors"));
            }
            StructureSpec::LexProduct(Box::new(items[0].parse()?), Box::new(items[1].parse()?))
        } else {
            return Err(bad("unknown structure"));
        };
        spec.validate()?;
        Ok(spec)
    }
}
