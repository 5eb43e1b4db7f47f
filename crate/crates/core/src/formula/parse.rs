//! Recursive-descent parser for formulas and set-builder expressions.
//!
//! Precedence, loosest first: `->` (right associative), `|`, `&`, `!`.
//! A quantifier's body extends as far to the right as possible.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{Formula, Rel, Term};
use crate::atoms::{Atom, StructureSpec};
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    spec: &'a StructureSpec,
    /// Declared set-builder names; `None` means free `x<k>` names are coordinates.
    coords: Option<Vec<String>>,
    /// Quantified names, outermost first.
    bound: Vec<String>,
}

fn is_ident_start(c: u8) -> bool {
    c.is_ascii_alphabetic() || c == b'_'
}

fn is_ident_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_' || c == b'\''
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn ws(&mut self) {
        let b = self.src.as_bytes();
        while self.pos < b.len() && b[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek_str(&mut self, s: &str) -> bool {
        self.ws();
        self.rest().starts_with(s)
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.peek_str(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected `{s}`"))
        }
    }

    fn peek_ident(&mut self) -> Option<&'a str> {
        self.ws();
        let b = self.rest().as_bytes();
        if b.is_empty() || !is_ident_start(b[0]) {
            return None;
        }
        let n = b.iter().take_while(|c| is_ident_char(**c)).count();
        Some(&self.rest()[..n])
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.peek_ident() == Some(kw) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.eat("->") {
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut f = self.conjunction()?;
        while self.peek_str("|") {
            self.pos += 1;
            let g = self.conjunction()?;
            f = Formula::or(f, g);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.peek_str("&") {
            self.pos += 1;
            let g = self.unary()?;
            f = Formula::and(f, g);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.peek_str("!") && !self.peek_str("!=") {
            self.pos += 1;
            return Ok(Formula::not(self.unary()?));
        }
        for (kw, is_exists) in [("exists", true), ("forall", false)] {
            if self.eat_keyword(kw) {
                let name = match self.peek_ident() {
                    Some(n) => n.to_string(),
                    None => return self.err("expected a variable after quantifier"),
                };
                self.pos += name.len();
                self.eat(".");
                self.bound.push(name);
                let body = self.formula();
                self.bound.pop();
                let body = body?;
                return Ok(if is_exists { Formula::exists(body) } else { Formula::forall(body) });
            }
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula> {
        self.ws();
        if self.eat_keyword("true") {
            return Ok(Formula::True);
        }
        if self.eat_keyword("false") {
            return Ok(Formula::False);
        }
        if self.peek_str("(") {
            self.pos += 1;
            let f = self.formula()?;
            self.expect(")")?;
            return Ok(f);
        }
        if let Some(id) = self.peek_ident() {
            let b = id.as_bytes();
            let is_pred = b[0] == b'P' && b[1..].iter().all(|c| c.is_ascii_digit());
            if is_pred {
                let start = self.pos;
                let k: usize = if id.len() == 1 { 0 } else { id[1..].parse().unwrap_or(usize::MAX) };
                self.pos += id.len();
                if self.peek_str("(") {
                    if k >= self.spec.predicate_count() {
                        self.pos = start;
                        return Err(Error::Language(format!("{id} over {}", self.spec)));
                    }
                    self.pos += 1;
                    let t = self.term()?;
                    self.expect(")")?;
                    return Ok(Formula::Pred(k, t));
                }
                self.pos = start;
            }
        }
        let start = self.pos;
        let a = self.term()?;
        let rel = self.relation()?;
        let b = self.term()?;
        match rel {
            Rel::Sim if !self.spec.is_lex() => {
                self.pos = start;
                Err(Error::Language(format!("`~` over {}", self.spec)))
            }
            r if r.is_order() && !self.spec.is_ordered() => {
                self.pos = start;
                Err(Error::Language(format!("`{}` over {}", r.symbol(), self.spec)))
            }
            r => Ok(Formula::Rel(r, a, b)),
        }
    }

    fn relation(&mut self) -> Result<Rel> {
        self.ws();
        for (s, r) in [
            ("<=", Rel::Le),
            (">=", Rel::Ge),
            ("!=", Rel::Ne),
            ("<", Rel::Lt),
            (">", Rel::Gt),
            ("=", Rel::Eq),
            ("~", Rel::Sim),
        ] {
            if self.rest().starts_with(s) {
                self.pos += s.len();
                return Ok(r);
            }
        }
        self.err("expected a relation")
    }

    fn term(&mut self) -> Result<Term> {
        self.ws();
        if let Some(id) = self.peek_ident() {
            if let Some(level) = self.bound.iter().rposition(|n| n == id) {
                self.pos += id.len();
                return Ok(Term::Bound(level));
            }
            if let Some(coords) = &self.coords {
                if let Some(i) = coords.iter().position(|n| n == id) {
                    self.pos += id.len();
                    return Ok(Term::Var(i));
                }
            }
            let numbered = |prefix: u8| -> Option<usize> {
                let b = id.as_bytes();
                if b.len() > 1 && b[0] == prefix && b[1..].iter().all(|c| c.is_ascii_digit()) {
                    id[1..].parse().ok()
                } else {
                    None
                }
            };
            if let Some(j) = numbered(b'y') {
                self.pos += id.len();
                return Ok(Term::Param(j));
            }
            if self.coords.is_none() {
                if let Some(i) = numbered(b'x') {
                    self.pos += id.len();
                    return Ok(Term::Var(i));
                }
            }
        }
        let start = self.pos;
        match Atom::parse_prefix(self.spec, self.rest()) {
            Some((a, n)) => {
                self.spec.check_atom(&a)?;
                self.pos += n;
                Ok(Term::Lit(a))
            }
            None => match self.peek_ident() {
                Some(id) => {
                    self.pos = start;
                    Err(Error::Unbound(id.to_string()))
                }
                None => self.err("expected a term"),
            },
        }
    }

    fn finish(&mut self) -> Result<()> {
        self.ws();
        if self.pos < self.src.len() {
            return self.err("unexpected trailing input");
        }
        Ok(())
    }
}

/// Parse a formula whose coordinates are named `x0, x1, ...` and whose
/// parameter holes are named `y0, y1, ...`.
pub fn parse_formula(text: &str, spec: &StructureSpec) -> Result<Formula> {
    let mut p = Parser { src: text, pos: 0, spec, coords: None, bound: Vec::new() };
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Parse `{(v0, v1, ...): formula}`, returning the arity and the matrix with
/// the declared names resolved to coordinates. `{v: formula}` is accepted for
/// arity one.
pub fn parse_set(text: &str, spec: &StructureSpec) -> Result<(usize, Formula)> {
    let mut p = Parser { src: text, pos: 0, spec, coords: None, bound: Vec::new() };
    p.expect("{")?;
    let mut names = Vec::new();
    if p.eat("(") {
        if !p.peek_str(")") {
            loop {
                match p.peek_ident() {
                    Some(n) => {
                        let n = n.to_string();
                        p.pos += n.len();
                        names.push(n);
                    }
                    None => return p.err("expected a variable name"),
                }
                if !p.eat(",") {
                    break;
                }
            }
        }
        p.expect(")")?;
    } else {
        match p.peek_ident() {
            Some(n) => {
                let n = n.to_string();
                p.pos += n.len();
                names.push(n);
            }
            None => return p.err("expected `(`"),
        }
    }
    p.expect(":")?;
    let arity = names.len();
    p.coords = Some(names);
    let f = p.formula()?;
    p.expect("}")?;
    p.finish()?;
    Ok((arity, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::boxed::Box;

    #[test]
    fn shapes() {
        let d = StructureSpec::dlo();
        let f = parse_formula("0 < x0 & x0 <= 5/2 | 3 <= x0", &d).unwrap();
        assert!(matches!(f, Formula::Or(..)));
        assert_eq!(f.var_count(), 1);
        let g = parse_formula("exists z (x0 < z & z < x1)", &d).unwrap();
        assert_eq!(
            g,
            Formula::exists(Formula::And(
                Box::new(Formula::Rel(Rel::Lt, Term::Var(0), Term::Bound(0))),
                Box::new(Formula::Rel(Rel::Lt, Term::Bound(0), Term::Var(1))),
            ))
        );
        let h = parse_formula("a -> b -> c", &StructureSpec::Equality);
        assert!(h.is_err());
    }

    #[test]
    fn errors() {
        let d = StructureSpec::dlo();
        assert!(matches!(parse_formula("P(x0)", &d), Err(Error::Language(_))));
        assert!(matches!(parse_formula("x0 < w", &d), Err(Error::Unbound(_))));
        assert!(matches!(parse_formula("x0 < ", &d), Err(Error::Syntax { .. })));
        assert!(matches!(parse_formula("x0 < x1", &StructureSpec::Equality), Err(Error::Language(_))));
        let cut: StructureSpec = "dlo[cut<=sqrt2]".parse().unwrap();
        assert!(parse_formula("P(x0) & !P0(x1)", &cut).is_ok());
    }

    #[test]
    fn set_builder() {
        let d = StructureSpec::dlo();
        let (k, f) = parse_set("{(x, y): x < y & y < y0}", &d).unwrap();
        assert_eq!(k, 2);
        assert_eq!(f.var_count(), 2);
        assert_eq!(f.param_count(), 1);
        let (k, _) = parse_set("{(x): true}", &d).unwrap();
        assert_eq!(k, 1);
        let eq = StructureSpec::Equality;
        let (_, f) = parse_set("{(x): x != a5}", &eq).unwrap();
        assert_eq!(f.literals(), alloc::vec![Atom::Eq(5)]);
        let lex: StructureSpec = "lex(dlo, dlo)".parse().unwrap();
        assert!(parse_set("{(x, y): x ~ y}", &lex).is_ok());
    }
}
