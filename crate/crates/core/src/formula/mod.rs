//! First-order formulas over atom languages.
//!
//! Variables come in three kinds: set-builder coordinates `x0, x1, ...`
//! ([`Term::Var`]), parameter holes `y0, y1, ...` ([`Term::Param`]) and
//! quantified variables, which are de Bruijn levels printed `z0, z1, ...`
//! ([`Term::Bound`]): the outermost quantifier binds `z0`.

mod decide;
mod dnf;
mod parse;
mod qe;

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

pub use decide::{equivalent, eval, pattern_formula, satisfiable, Equivalence};
pub use parse::{parse_formula, parse_set};
pub use qe::qe;

use crate::atoms::Atom;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(usize),
    Param(usize),
    Bound(usize),
    Lit(Atom),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rel {
    Lt,
    Le,
    Eq,
    Ne,
    Gt,
    Ge,
    /// Same first coordinate (lexicographic products only).
    Sim,
}

impl Rel {
    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Eq => "=",
            Rel::Ne => "!=",
            Rel::Gt => ">",
            Rel::Ge => ">=",
            Rel::Sim => "~",
        }
    }

    pub fn is_order(self) -> bool {
        matches!(self, Rel::Lt | Rel::Le | Rel::Gt | Rel::Ge)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Rel(Rel, Term, Term),
    /// Unary predicate `P<k>`.
    Pred(usize, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(Box<Formula>),
    Forall(Box<Formula>),
}

impl Formula {
    pub fn rel(r: Rel, a: Term, b: Term) -> Formula {
        Formula::Rel(r, a, b)
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(body: Formula) -> Formula {
        Formula::Exists(Box::new(body))
    }

    pub fn forall(body: Formula) -> Formula {
        Formula::Forall(Box::new(body))
    }

    /// Left-nested conjunction; `True` when empty.
    pub fn and_all(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::and).unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; `False` when empty.
    pub fn or_all(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::or).unwrap_or(Formula::False)
    }

    fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Not(a) | Formula::Exists(a) | Formula::Forall(a) => alloc::vec![a],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => alloc::vec![a, b],
            _ => Vec::new(),
        }
    }

    fn terms(&self, out: &mut Vec<Term>) {
        match self {
            Formula::Rel(_, a, b) => {
                out.push(a.clone());
                out.push(b.clone());
            }
            Formula::Pred(_, t) => out.push(t.clone()),
            _ => {
                for c in self.children() {
                    c.terms(out);
                }
            }
        }
    }

    fn all_terms(&self) -> Vec<Term> {
        let mut v = Vec::new();
        self.terms(&mut v);
        v
    }

    /// Number of coordinates used: one more than the largest `Var` index.
    pub fn var_count(&self) -> usize {
        self.all_terms()
            .iter()
            .filter_map(|t| if let Term::Var(i) = t { Some(i + 1) } else { None })
            .max()
            .unwrap_or(0)
    }

    /// Number of parameter holes used: one more than the largest `Param` index.
    pub fn param_count(&self) -> usize {
        self.all_terms()
            .iter()
            .filter_map(|t| if let Term::Param(i) = t { Some(i + 1) } else { None })
            .max()
            .unwrap_or(0)
    }

    /// Atom literals occurring in the formula, sorted and deduplicated.
    pub fn literals(&self) -> Vec<Atom> {
        let mut v: Vec<Atom> = self
            .all_terms()
            .into_iter()
            .filter_map(|t| if let Term::Lit(a) = t { Some(a) } else { None })
            .collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn has_quantifiers(&self) -> bool {
        match self {
            Formula::Exists(_) | Formula::Forall(_) => true,
            _ => self.children().into_iter().any(|c| c.has_quantifiers()),
        }
    }

    /// Quantifier depth.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Exists(a) | Formula::Forall(a) => 1 + a.depth(),
            _ => self.children().into_iter().map(|c| c.depth()).max().unwrap_or(0),
        }
    }

    /// Every `Bound(level)` lies under at least `level + 1` quantifiers.
    pub fn check_scoped(&self) -> Result<()> {
        fn go(f: &Formula, depth: usize) -> Result<()> {
            let check = |t: &Term| match t {
                Term::Bound(l) if *l >= depth => Err(Error::Unbound(alloc::format!("z{l}"))),
                _ => Ok(()),
            };
            match f {
                Formula::Rel(_, a, b) => {
                    check(a)?;
                    check(b)
                }
                Formula::Pred(_, t) => check(t),
                Formula::Exists(a) | Formula::Forall(a) => go(a, depth + 1),
                _ => f.children().into_iter().try_for_each(|c| go(c, depth)),
            }
        }
        go(self, 0)
    }

    /// Replace every term by `f(term)`.
    pub fn map_terms(&self, f: &impl Fn(&Term) -> Term) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Rel(r, a, b) => Formula::Rel(*r, f(a), f(b)),
            Formula::Pred(k, t) => Formula::Pred(*k, f(t)),
            Formula::Not(a) => Formula::not(a.map_terms(f)),
            Formula::And(a, b) => Formula::and(a.map_terms(f), b.map_terms(f)),
            Formula::Or(a, b) => Formula::or(a.map_terms(f), b.map_terms(f)),
            Formula::Implies(a, b) => Formula::implies(a.map_terms(f), b.map_terms(f)),
            Formula::Exists(a) => Formula::exists(a.map_terms(f)),
            Formula::Forall(a) => Formula::forall(a.map_terms(f)),
        }
    }

    /// Substitute atoms for coordinates and parameters.
    pub fn instantiate(&self, vars: &[Atom], params: &[Atom]) -> Formula {
        self.map_terms(&|t| match t {
            Term::Var(i) if *i < vars.len() => Term::Lit(vars[*i].clone()),
            Term::Param(j) if *j < params.len() => Term::Lit(params[*j].clone()),
            _ => t.clone(),
        })
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "x{i}"),
            Term::Param(j) => write!(f, "y{j}"),
            Term::Bound(l) => write!(f, "z{l}"),
            Term::Lit(a) => write!(f, "{a}"),
        }
    }
}

// Precedence: -> 1 (right associative), | 2, & 3, ! 4, atoms 5.
fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Implies(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        Formula::Not(_) => 4,
        Formula::Exists(_) | Formula::Forall(_) => 0,
        _ => 5,
    }
}

fn write_formula(f: &Formula, out: &mut fmt::Formatter<'_>, min: u8, open_right: bool, depth: usize) -> fmt::Result {
    let p = prec(f);
    let quant = p == 0;
    let paren = if quant { !open_right } else { p < min };
    if paren {
        out.write_str("(")?;
    }
    let open = open_right || paren;
    match f {
        Formula::True => out.write_str("true")?,
        Formula::False => out.write_str("false")?,
        Formula::Rel(r, a, b) => write!(out, "{a} {} {b}", r.symbol())?,
        Formula::Pred(k, t) => write!(out, "P{k}({t})")?,
        Formula::Not(a) => {
            out.write_str("!")?;
            write_formula(a, out, 4, open, depth)?;
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            let sym = if matches!(f, Formula::And(..)) { " & " } else { " | " };
            write_formula(a, out, p, false, depth)?;
            out.write_str(sym)?;
            write_formula(b, out, p + 1, open, depth)?;
        }
        Formula::Implies(a, b) => {
            write_formula(a, out, 2, false, depth)?;
            out.write_str(" -> ")?;
            write_formula(b, out, 1, open, depth)?;
        }
        Formula::Exists(a) | Formula::Forall(a) => {
            let q = if matches!(f, Formula::Exists(_)) { "exists" } else { "forall" };
            write!(out, "{q} z{depth} ")?;
            if prec(a) >= 4 || prec(a) == 0 {
                write_formula(a, out, 0, true, depth + 1)?;
            } else {
                out.write_str("(")?;
                write_formula(a, out, 0, true, depth + 1)?;
                out.write_str(")")?;
            }
        }
    }
    if paren {
        out.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, f, 0, true, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::StructureSpec;
    use alloc::string::ToString;

    #[test]
    fn printing_round_trips() {
        let spec = StructureSpec::dlo();
        for text in [
            "0 < x0 & x0 <= 5/2 | 3 <= x0",
            "exists z0 (x0 < z0 & z0 < x1)",
            "!(x0 < x1) -> x1 <= x0",
            "(x0 < x1 -> x1 < x0) -> false",
            "(exists z0 z0 < x0) & true",
            "!exists z0 z0 < x0",
            "x0 < 3 | x0 = -1/2",
            "forall z0 exists z1 (z0 < z1 & z1 < y0)",
        ] {
            let f = parse_formula(text, &spec).unwrap();
            let printed = f.to_string();
            assert_eq!(parse_formula(&printed, &spec).unwrap(), f, "{text} -> {printed}");
        }
    }

    #[test]
    fn counts_and_scope() {
        let spec = StructureSpec::dlo();
        let f = parse_formula("exists z (y1 < z & z < x2)", &spec).unwrap();
        assert_eq!(f.var_count(), 3);
        assert_eq!(f.param_count(), 2);
        assert_eq!(f.depth(), 1);
        assert!(f.check_scoped().is_ok());
        let bad = Formula::rel(Rel::Lt, Term::Bound(0), Term::Var(0));
        assert!(bad.check_scoped().is_err());
    }
}
