//! A quick end-to-end check of the library, run by the `selftest` command.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::atoms::{Atom, StructureSpec};
use crate::autos::{absorb, extend_partial};
use crate::defsets::{mutual_symmetry, orbit_count, DefSet, Verdict};
use crate::error::Result;
use crate::forcing::{self, Condition, DenseSpec};
use crate::formula::{parse_formula, qe};
use crate::num::QuadRat;
use crate::sample;
use crate::transfer::{check_cover, scenario_catalog};
use crate::universe::{collapse, f_map, pure_sets_below};

/// Outcome of one self-test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, r: Result<(bool, String)>) -> Check {
    match r {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check { name, passed: false, detail: format!("error: {e}") },
    }
}

fn qe_example() -> Result<(bool, String)> {
    let d = StructureSpec::dlo();
    let f = parse_formula("forall z (z < x0 -> z < x1)", &d)?;
    let g = qe(&d, &f)?.to_string();
    Ok((g == "x0 <= x1", g))
}

fn support_example() -> Result<(bool, String)> {
    let s = DefSet::parse(&StructureSpec::dlo(), "{(x): 0<x & x<=5/2 | 3<=x}", &[])?;
    let c = s.minimal_support()?;
    let got = crate::universe::atoms_to_string(&c.support);
    Ok((got == "(0, 5/2, 3)", got))
}

fn orbit_example() -> Result<(bool, String)> {
    let mut got = Vec::new();
    for spec in [StructureSpec::Equality, StructureSpec::dlo()] {
        for n in 1..=4 {
            got.push(orbit_count(&spec, n)?);
        }
    }
    Ok((got == [1, 2, 5, 15, 1, 3, 13, 75], format!("{got:?}")))
}

fn interpolation_example() -> Result<(bool, String)> {
    let m = extend_partial(&StructureSpec::dlo(), &[Atom::int(1), Atom::int(3)], &[Atom::int(2), Atom::int(7)])?;
    let y = m.apply(&Atom::int(2))?;
    Ok((y == Atom::ratio(9, 2), format!("f(2) = {y}")))
}

fn absorb_example() -> Result<(bool, String)> {
    let spec = StructureSpec::dlo_over(crate::atoms::Field::QSqrt2);
    let r2 = Atom::Ord(QuadRat::sqrt2());
    let m = absorb(&spec, &[Atom::int(1), Atom::int(2)], core::slice::from_ref(&r2))?;
    let y = m.apply(&r2)?;
    let ok = y.as_value().is_some_and(|v| v.is_rational()) && m.apply(&Atom::int(1))? == Atom::int(1);
    Ok((ok, format!("sqrt2 -> {y}")))
}

fn symmetry_example() -> Result<(bool, String)> {
    let a: StructureSpec = "dlo[const=0]".parse()?;
    let b: StructureSpec = "dlo[const=1]".parse()?;
    let c: StructureSpec = "dlo[cut<sqrt2]".parse()?;
    let v1 = mutual_symmetry(&a, &b)?.verdict();
    let v2 = mutual_symmetry(&StructureSpec::dlo(), &c)?.verdict();
    Ok((v1 == Verdict::Mutual && v2 == Verdict::OneWay, format!("{v1}, {v2}")))
}

fn vstar_example() -> Result<(bool, String)> {
    let sets = pure_sets_below(4);
    let mut ok = sets.len() == 16;
    for x in &sets {
        ok &= collapse(&f_map(x)?, &BTreeMap::new())? == *x;
    }
    Ok((ok, format!("{} pure sets", sets.len())))
}

fn cover_example(seed: u64) -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for s in scenario_catalog() {
        let r = check_cover(&s, 30, seed)?;
        ok &= r.as_expected();
        parts.push(format!("{}: {}", s.name, if r.passed() { "pass" } else { "fail" }));
    }
    Ok((ok, parts.join(", ")))
}

fn forcing_example(seed: u64) -> Result<(bool, String)> {
    let mut rng = sample::rng(seed);
    let mut ok = true;
    for s in scenario_catalog().into_iter().filter(|s| !s.expected_fail) {
        let mut ds: Vec<DenseSpec> = (0..5).map(DenseSpec::DomainAt).collect();
        ds.extend(sample::random_tuple(&s.big, 3, &mut rng).into_iter().map(DenseSpec::RangeAt));
        let g = forcing::build_generic(&s, &Condition::empty(), &ds)?;
        ok &= ds.iter().all(|d| forcing::meets(g.union(), d)) && forcing::is_condition(&s, g.union());
        let p = forcing::random_condition(&s, 3, &mut rng)?;
        let (a, b) = forcing::splitting_extensions(&s, &p)?;
        ok &= forcing::leq(&a, &p) && forcing::leq(&b, &p) && !forcing::compatible(&s, &a, &b);
    }
    Ok((ok, "generic fragments and splittings".to_string()))
}

/// Run every self-test.
pub fn run(seed: u64) -> Vec<Check> {
    alloc::vec![
        check("quantifier elimination", qe_example()),
        check("minimal support", support_example()),
        check("orbit counts", orbit_example()),
        check("interpolation", interpolation_example()),
        check("absorption", absorb_example()),
        check("mutual symmetry", symmetry_example()),
        check("V* round trip", vstar_example()),
        check("cover scenarios", cover_example(seed)),
        check("forcing", forcing_example(seed)),
    ]
}
