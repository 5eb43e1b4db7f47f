//! Atoms, the catalogue of atom structures, and tuple types.

mod pattern;
mod structure;

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

pub use pattern::{Slot, TypePattern};
pub use structure::{Boundary, CutSpec, Field, Part, Point, StructureSpec};

use crate::error::{Error, Result};
use crate::num::{QuadRat, Rational};

/// An atom of one of the implemented structures.
///
/// The derived order is the structure order for every ordered sort:
/// `Ord` values compare numerically, sum atoms by `(part, inner)` with the
/// ⋆-point of a part (inner `None`) being the only element of that part, and
/// pairs lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// Equality atom `a<k>`.
    Eq(u64),
    /// Element of a dense order, in Q or Q(√2).
    Ord(QuadRat),
    /// Element of an ordered sum; `inner == None` is the ⋆-point of a point part.
    Sum { part: usize, inner: Option<Box<Atom>> },
    /// Element of a lexicographic product.
    Pair(Box<Atom>, Box<Atom>),
}

impl Atom {
    pub fn eq(k: u64) -> Atom {
        Atom::Eq(k)
    }

    pub fn int(n: i64) -> Atom {
        Atom::Ord(QuadRat::int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Atom {
        Atom::Ord(QuadRat::ratio(n, d))
    }

    pub fn rational(r: Rational) -> Atom {
        Atom::Ord(QuadRat::rational(r))
    }

    pub fn star(part: usize) -> Atom {
        Atom::Sum { part, inner: None }
    }

    pub fn in_part(part: usize, inner: Atom) -> Atom {
        Atom::Sum { part, inner: Some(Box::new(inner)) }
    }

    pub fn pair(l: Atom, r: Atom) -> Atom {
        Atom::Pair(Box::new(l), Box::new(r))
    }

    pub fn as_value(&self) -> Option<&QuadRat> {
        match self {
            Atom::Ord(v) => Some(v),
            _ => None,
        }
    }

    /// Parse an atom literal of `spec`'s carrier.
    pub fn parse(spec: &StructureSpec, text: &str) -> Result<Atom> {
        match Atom::parse_prefix(spec, text) {
            Some((a, n)) if text[n..].trim().is_empty() => {
                spec.check_atom(&a)?;
                Ok(a)
            }
            _ => Err(Error::Literal(format!("not an atom of {spec}: {:?}", text.trim()))),
        }
    }

    /// Parse an atom literal at the start of `s`, returning it with the
    /// number of bytes consumed. The result is not yet checked against the
    /// carrier.
    pub fn parse_prefix(spec: &StructureSpec, s: &str) -> Option<(Atom, usize)> {
        let lead = s.len() - s.trim_start().len();
        let t = &s[lead..];
        let (a, n) = match spec {
            StructureSpec::Equality => {
                let b = t.as_bytes();
                if b.first() != Some(&b'a') {
                    return None;
                }
                let end = 1 + b[1..].iter().take_while(|c| c.is_ascii_digit()).count();
                if end == 1 || b.get(end).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_') {
                    return None;
                }
                (Atom::Eq(t[1..end].parse().ok()?), end)
            }
            StructureSpec::Dlo { .. } => {
                let (v, n) = QuadRat::parse_prefix(t)?;
                (Atom::Ord(v), n)
            }
            StructureSpec::OrderedSum(parts) => {
                if let Some(rest) = t.strip_prefix("star") {
                    if rest.as_bytes().first().is_some_and(|c| c.is_ascii_alphanumeric()) {
                        return None;
                    }
                    let mut points = parts.iter().enumerate().filter(|(_, p)| matches!(p, Part::Point));
                    let (k, _) = points.next()?;
                    if points.next().is_some() {
                        return None;
                    }
                    return Some((Atom::star(k), lead + 4));
                }
                let b = t.as_bytes();
                let d = b.iter().take_while(|c| c.is_ascii_digit()).count();
                if d == 0 || b.get(d) != Some(&b':') {
                    return None;
                }
                let part: usize = t[..d].parse().ok()?;
                let rest = &t[d + 1..];
                if let Some(after) = rest.strip_prefix("star") {
                    if after.as_bytes().first().is_some_and(|c| c.is_ascii_alphanumeric()) {
                        return None;
                    }
                    (Atom::star(part), d + 5)
                } else {
                    let inner_spec = match parts.get(part)? {
                        Part::Structure(s) => s,
                        Part::Point => return None,
                    };
                    let (inner, n) = Atom::parse_prefix(inner_spec, rest)?;
                    (Atom::in_part(part, inner), d + 1 + n)
                }
            }
            StructureSpec::LexProduct(l, r) => {
                let rest = t.strip_prefix('[')?;
                let (left, n1) = Atom::parse_prefix(l, rest)?;
                let rest2 = &rest[n1..];
                let semi = rest2.len() - rest2.trim_start().len();
                let rest3 = rest2[semi..].strip_prefix(';')?;
                let (right, n2) = Atom::parse_prefix(r, rest3)?;
                let rest4 = &rest3[n2..];
                let ws = rest4.len() - rest4.trim_start().len();
                rest4[ws..].strip_prefix(']')?;
                (Atom::pair(left, right), 1 + n1 + semi + 1 + n2 + ws + 1)
            }
        };
        Some((a, lead + n))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Eq(k) => write!(f, "a{k}"),
            Atom::Ord(v) => write!(f, "{v}"),
            Atom::Sum { part, inner: None } => write!(f, "{part}:star"),
            Atom::Sum { part, inner: Some(a) } => write!(f, "{part}:{a}"),
            Atom::Pair(l, r) => write!(f, "[{l};{r}]"),
        }
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Outcome of [`atom_cmp`]: an order comparison, or distinctness for the
/// equality sort.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AtomOrder {
    Less,
    Equal,
    Greater,
    Distinct,
}

impl fmt::Display for AtomOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AtomOrder::Less => "<",
            AtomOrder::Equal => "=",
            AtomOrder::Greater => ">",
            AtomOrder::Distinct => "!=",
        })
    }
}

/// Compare two atoms of `spec`'s carrier.
pub fn atom_cmp(spec: &StructureSpec, a: &Atom, b: &Atom) -> Result<AtomOrder> {
    spec.check_atom(a)?;
    spec.check_atom(b)?;
    if !spec.is_ordered() {
        return Ok(if a == b { AtomOrder::Equal } else { AtomOrder::Distinct });
    }
    Ok(match a.cmp(b) {
        core::cmp::Ordering::Less => AtomOrder::Less,
        core::cmp::Ordering::Equal => AtomOrder::Equal,
        core::cmp::Ordering::Greater => AtomOrder::Greater,
    })
}

/// Compute the type of `tuple` over `params` (and the structure's fixed points).
pub fn tuple_type(spec: &StructureSpec, tuple: &[Atom], params: &[Atom]) -> Result<TypePattern> {
    TypePattern::of(spec, tuple, params)
}

/// All types of arity `n` over `params`.
pub fn enumerate_types(spec: &StructureSpec, n: usize, params: &[Atom]) -> Result<Vec<TypePattern>> {
    TypePattern::enumerate(spec, n, params)
}

/// A tuple realising `t`.
pub fn realize_type(spec: &StructureSpec, t: &TypePattern) -> Result<Vec<Atom>> {
    t.realize(spec)
}

/// Parse a parenthesised, comma separated atom tuple such as `(1, 5/2)`.
pub fn parse_tuple(spec: &StructureSpec, text: &str) -> Result<Vec<Atom>> {
    let t = text.trim();
    let inner = t
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .unwrap_or(t)
        .trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    split_top_level(inner).into_iter().map(|s| Atom::parse(spec, s)).collect()
}

/// Split on commas that are not nested in brackets or braces.
pub(crate) fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

pub(crate) fn tuple_to_string(tuple: &[Atom]) -> String {
    let parts: Vec<String> = tuple.iter().map(|a| a.to_string()).collect();
    format!("({})", parts.join(", "))
}
