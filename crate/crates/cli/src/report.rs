//! JSON shapes of command results. Atoms, types, formulas and maps are
//! rendered in their text syntax.

use std::collections::BTreeMap;

use orbitlab_core::defsets::{Direction, SymmetryReport};
use orbitlab_core::transfer::{CoverReport, NoncoverReport};
use orbitlab_core::{Atom, DefSet, StructureSpec};
use serde::Serialize;

pub fn atoms(a: &[Atom]) -> Vec<String> {
    a.iter().map(|x| x.to_string()).collect()
}

#[derive(Serialize)]
pub struct SetJson {
    pub spec: String,
    pub arity: usize,
    pub params: Vec<String>,
    pub matrix: String,
}

impl SetJson {
    pub fn new(s: &DefSet) -> SetJson {
        SetJson { spec: s.spec().to_string(), arity: s.arity(), params: atoms(s.params()), matrix: s.matrix().to_string() }
    }
}

#[derive(Serialize)]
pub struct DirectionJson {
    pub supported: bool,
    pub support: Option<Vec<String>>,
    pub relation: Option<String>,
    pub split: Option<[String; 2]>,
}

impl DirectionJson {
    pub fn new(d: &Direction) -> DirectionJson {
        match d {
            Direction::Supported(s) => DirectionJson { supported: true, support: Some(atoms(s)), relation: None, split: None },
            Direction::Unsupported { relation, split } => DirectionJson {
                supported: false,
                support: None,
                relation: Some(relation.clone()),
                split: Some([split.0.to_string(), split.1.to_string()]),
            },
        }
    }
}

#[derive(Serialize)]
pub struct SymmetryJson {
    pub first: String,
    pub second: String,
    pub forward: DirectionJson,
    pub backward: DirectionJson,
    pub verdict: String,
}

impl SymmetryJson {
    pub fn new(a: &StructureSpec, b: &StructureSpec, r: &SymmetryReport) -> SymmetryJson {
        SymmetryJson {
            first: a.to_string(),
            second: b.to_string(),
            forward: DirectionJson::new(&r.forward),
            backward: DirectionJson::new(&r.backward),
            verdict: r.verdict().to_string(),
        }
    }
}

#[derive(Serialize)]
pub struct CondJson {
    pub passed: bool,
    pub checked: usize,
}

#[derive(Serialize)]
pub struct WitnessJson {
    pub condition: String,
    pub instance: String,
    pub map: String,
}

#[derive(Serialize)]
pub struct CounterexampleJson {
    pub condition: String,
    pub instance: String,
    pub reason: String,
}

#[derive(Serialize)]
pub struct CoverJson {
    pub scenario: String,
    pub expected_fail: bool,
    pub budget: usize,
    pub seed: u64,
    pub conditions: BTreeMap<&'static str, CondJson>,
    pub passed: bool,
    pub as_expected: bool,
    pub witnesses: Vec<WitnessJson>,
    pub counterexamples: Vec<CounterexampleJson>,
}

impl CoverJson {
    pub fn new(r: &CoverReport) -> CoverJson {
        let cond = |c: &orbitlab_core::transfer::CondResult| CondJson { passed: c.passed, checked: c.checked };
        CoverJson {
            scenario: r.scenario.clone(),
            expected_fail: r.expected_fail,
            budget: r.budget,
            seed: r.seed,
            conditions: BTreeMap::from([("enumeration", cond(&r.a)), ("homogeneity", cond(&r.b)), ("absorption", cond(&r.c))]),
            passed: r.passed(),
            as_expected: r.as_expected(),
            witnesses: r
                .witnesses
                .iter()
                .map(|w| WitnessJson { condition: w.condition.to_string(), instance: w.instance.clone(), map: w.map.clone() })
                .collect(),
            counterexamples: r
                .counterexamples
                .iter()
                .map(|c| CounterexampleJson { condition: c.condition.to_string(), instance: c.instance.clone(), reason: c.reason.clone() })
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct PairJson {
    pub atoms: [String; 2],
    pub related: bool,
}

#[derive(Serialize)]
pub struct NoncoverJson {
    pub spec: String,
    pub relation: SetJson,
    pub equivariant: bool,
    pub related: PairJson,
    pub unrelated: PairJson,
    pub transferable: bool,
    pub explanation: String,
}

impl NoncoverJson {
    pub fn new(r: &NoncoverReport) -> NoncoverJson {
        let pair = |p: &(Atom, Atom, bool)| PairJson { atoms: [p.0.to_string(), p.1.to_string()], related: p.2 };
        NoncoverJson {
            spec: r.spec.to_string(),
            relation: SetJson::new(&r.relation),
            equivariant: r.equivariant,
            related: pair(&r.related),
            unrelated: pair(&r.unrelated),
            transferable: r.transferable,
            explanation: r.explanation.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct HomogeneityJson {
    pub p: String,
    pub q: String,
    pub sigma: Option<String>,
    pub sigma_p: Option<String>,
    pub common: Option<String>,
    pub error: Option<String>,
}

#[derive(Serialize)]
pub struct CheckJson {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}
