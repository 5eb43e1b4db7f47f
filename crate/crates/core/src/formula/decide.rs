//! Evaluation, satisfiability and equivalence.

use alloc::format;
use alloc::vec::Vec;

use super::qe::{from_nnf, It, Lit, N};
use super::{qe, Formula, Rel, Term};
use crate::atoms::{Atom, Point, Slot, StructureSpec, TypePattern};
use crate::error::{Error, Result};

fn ground(t: &Term) -> Result<&Atom> {
    match t {
        Term::Lit(a) => Ok(a),
        Term::Var(i) => Err(Error::Unbound(format!("x{i}"))),
        Term::Param(j) => Err(Error::Unbound(format!("y{j}"))),
        Term::Bound(l) => Err(Error::Unbound(format!("z{l}"))),
    }
}

fn first(a: &Atom) -> Option<&Atom> {
    match a {
        Atom::Pair(l, _) => Some(l),
        _ => None,
    }
}

/// Truth value of a ground quantifier-free formula.
fn eval_qf(spec: &StructureSpec, f: &Formula) -> Result<bool> {
    Ok(match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Rel(r, a, b) => {
            let (a, b) = (ground(a)?, ground(b)?);
            match r {
                Rel::Eq => a == b,
                Rel::Ne => a != b,
                Rel::Lt => a < b,
                Rel::Le => a <= b,
                Rel::Gt => a > b,
                Rel::Ge => a >= b,
                Rel::Sim => first(a) == first(b),
            }
        }
        Formula::Pred(k, t) => spec.pred_holds(*k, ground(t)?)?,
        Formula::Not(a) => !eval_qf(spec, a)?,
        Formula::And(a, b) => eval_qf(spec, a)? && eval_qf(spec, b)?,
        Formula::Or(a, b) => eval_qf(spec, a)? || eval_qf(spec, b)?,
        Formula::Implies(a, b) => !eval_qf(spec, a)? || eval_qf(spec, b)?,
        Formula::Exists(_) | Formula::Forall(_) => unreachable!("eval_qf on a quantified formula"),
    })
}

/// Truth value of `f` at coordinates `vars` and parameters `params`.
pub fn eval(spec: &StructureSpec, f: &Formula, vars: &[Atom], params: &[Atom]) -> Result<bool> {
    if f.var_count() > vars.len() {
        return Err(Error::Arity { expected: f.var_count(), got: vars.len() });
    }
    if f.param_count() > params.len() {
        return Err(Error::Arity { expected: f.param_count(), got: params.len() });
    }
    for a in vars.iter().chain(params) {
        spec.check_atom(a)?;
    }
    let g = f.instantiate(vars, params);
    if g.has_quantifiers() {
        eval_qf(spec, &qe(spec, &g)?)
    } else {
        g.check_scoped()?;
        eval_qf(spec, &g)
    }
}

fn ground_atoms(spec: &StructureSpec, fs: &[&Formula], params: &[Atom]) -> Result<Vec<Atom>> {
    let mut out: Vec<Atom> = params.to_vec();
    for f in fs {
        out.extend(f.literals());
    }
    out.sort();
    out.dedup();
    if spec.is_lex() && !out.is_empty() {
        return Err(Error::Unsupported("constants or parameters over a lexicographic product".into()));
    }
    Ok(out)
}

/// A tuple satisfying `f` with the given parameters, if one exists.
pub fn satisfiable(spec: &StructureSpec, f: &Formula, params: &[Atom]) -> Result<Option<Vec<Atom>>> {
    let n = f.var_count();
    let grounds = ground_atoms(spec, &[f], params)?;
    let g = if spec.is_lex() { f.clone() } else { qe(spec, f)? };
    for t in TypePattern::enumerate(spec, n, &grounds)? {
        let tuple = t.realize(spec)?;
        if eval(spec, &g, &tuple, params)? {
            return Ok(Some(tuple));
        }
    }
    Ok(None)
}

/// Outcome of an equivalence check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    /// The formulas disagree on every realisation of `pattern`, whose first
    /// positions are the coordinates and whose remaining positions are the
    /// parameters; `vars` and `params` realise it.
    Differ { pattern: TypePattern, vars: Vec<Atom>, params: Vec<Atom>, left: bool },
}

/// Decide whether `f` and `g` agree for all coordinates and parameters.
pub fn equivalent(spec: &StructureSpec, f: &Formula, g: &Formula) -> Result<Equivalence> {
    let m = f.var_count().max(g.var_count());
    let k = f.param_count().max(g.param_count());
    let lits = ground_atoms(spec, &[f, g], &[])?;
    let (qf, qg) = if spec.is_lex() { (f.clone(), g.clone()) } else { (qe(spec, f)?, qe(spec, g)?) };
    for t in TypePattern::enumerate(spec, m + k, &lits)? {
        let tuple = t.realize(spec)?;
        let (vars, params) = tuple.split_at(m);
        let a = eval(spec, &qf, vars, params)?;
        let b = eval(spec, &qg, vars, params)?;
        if a != b {
            return Ok(Equivalence::Differ { pattern: t, vars: vars.to_vec(), params: params.to_vec(), left: a });
        }
    }
    Ok(Equivalence::Equivalent)
}

/// A quantifier-free formula in `x0, x1, ...` defining the realisations of `t`.
pub fn pattern_formula(spec: &StructureSpec, t: &TypePattern) -> Result<Formula> {
    if spec.is_lex() {
        return Err(Error::Unsupported("pattern formulas over a lexicographic product".into()));
    }
    let g = |i: usize| It::Pt(t.grounds[i].clone());
    let mut lits = Vec::new();
    for (i, s) in t.slots.iter().enumerate() {
        let x = It::Var(i);
        match s {
            Slot::At(j) => lits.push(Lit::Eq(x.clone(), g(*j))),
            Slot::Gap { gap, .. } => {
                if *gap > 0 {
                    lits.push(Lit::Lt(g(gap - 1), x.clone()));
                }
                if *gap < t.grounds.len() {
                    lits.push(Lit::Lt(x.clone(), g(*gap)));
                }
            }
            Slot::Fresh(_) => {
                for (j, p) in t.grounds.iter().enumerate() {
                    if matches!(p, Point::Atom(_)) {
                        lits.push(Lit::Ne(x.clone(), g(j)));
                    }
                }
            }
            Slot::Lex { .. } => unreachable!(),
        }
        for (j, s2) in t.slots.iter().enumerate().skip(i + 1) {
            let y = It::Var(j);
            match (s, s2) {
                (Slot::Gap { gap: a, rank: r }, Slot::Gap { gap: b, rank: q }) if a == b => {
                    lits.push(match r.cmp(q) {
                        core::cmp::Ordering::Less => Lit::Lt(x.clone(), y),
                        core::cmp::Ordering::Equal => Lit::Eq(x.clone(), y),
                        core::cmp::Ordering::Greater => Lit::Lt(y, x.clone()),
                    })
                }
                (Slot::Fresh(a), Slot::Fresh(b)) => {
                    lits.push(if a == b { Lit::Eq(x.clone(), y) } else { Lit::Ne(x.clone(), y) })
                }
                _ => {}
            }
        }
    }
    Ok(from_nnf(spec, &N::And(lits.into_iter().map(N::L).collect())))
}
