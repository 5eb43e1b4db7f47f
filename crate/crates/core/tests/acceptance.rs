//! Acceptance criteria, each checked against an oracle written here
//! independently of the library's own decision procedures.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use orbitlab_core::autos::{absorb, extend_partial, restrict_witness, AutoKind};
use orbitlab_core::defsets::{mutual_symmetry, orbit_count, Direction, Verdict};
use orbitlab_core::forcing::{self, Condition, DenseSpec, Membership, SimpleName};
use orbitlab_core::num::simplest_run;
use orbitlab_core::sample::{self, Rng};
use orbitlab_core::transfer::{check_cover, scenario_catalog, Scenario};
use orbitlab_core::universe::{collapse, f_map, hf_pool_supported_by, hf_supported_by, materialize, pure_sets_below};
use orbitlab_core::{Atom, DefSet, HFSet, QuadRat, StructureSpec};
use rand::seq::SliceRandom;
use rand::Rng as _;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))
}

fn spec(text: &str) -> StructureSpec {
    text.parse().unwrap()
}

// ---------------------------------------------------------------------------
// Oracles

/// Number of distinct canonical forms of `n`-tuples over `0..n`: restricted
/// growth strings for equality, dense rank vectors for the order.
fn brute_orbits(ordered: bool, n: usize) -> usize {
    let mut forms = BTreeSet::new();
    let total = n.pow(n as u32);
    for code in 0..total {
        let mut t = Vec::with_capacity(n);
        let mut c = code;
        for _ in 0..n {
            t.push(c % n);
            c /= n;
        }
        let form: Vec<usize> = if ordered {
            let mut vals = t.clone();
            vals.sort();
            vals.dedup();
            t.iter().map(|v| vals.binary_search(v).unwrap()).collect()
        } else {
            let mut seen = Vec::new();
            t.iter()
                .map(|v| match seen.iter().position(|s| s == v) {
                    Some(i) => i,
                    None => {
                        seen.push(*v);
                        seen.len() - 1
                    }
                })
                .collect()
        };
        forms.insert(form);
    }
    forms.len()
}

/// Reference positions of a DLO spec: constants and cut points.
fn dlo_refs(s: &StructureSpec) -> Vec<QuadRat> {
    match s {
        StructureSpec::Dlo { constants, cuts, .. } => constants.iter().cloned().chain(cuts.iter().map(|c| c.cutpoint.clone())).collect(),
        _ => Vec::new(),
    }
}

fn val(a: &Atom) -> &QuadRat {
    a.as_value().unwrap()
}

/// A finite set of atoms realising every type of `n`-tuples over `grounds`:
/// the grounds in the carrier plus `n` points in each gap between them.
fn grid(s: &StructureSpec, grounds: &[Atom], n: usize) -> Vec<Atom> {
    match s {
        StructureSpec::Equality => {
            let mut out: Vec<Atom> = grounds.to_vec();
            out.sort();
            out.dedup();
            let mut k = 0;
            while out.len() < grounds.len() + n {
                if !out.contains(&Atom::Eq(k)) {
                    out.push(Atom::Eq(k));
                }
                k += 1;
            }
            out.sort();
            out.dedup();
            out
        }
        StructureSpec::Dlo { field, .. } => {
            let mut pos: Vec<QuadRat> = grounds.iter().map(|a| val(a).clone()).chain(dlo_refs(s)).collect();
            pos.sort();
            pos.dedup();
            let mut out: Vec<Atom> = pos.iter().filter(|v| field.contains(v)).map(|v| Atom::Ord(v.clone())).collect();
            for i in 0..=pos.len() {
                let lo = if i == 0 { None } else { pos.get(i - 1) };
                let hi = pos.get(i);
                out.extend(simplest_run(lo, hi, n).into_iter().map(Atom::rational));
            }
            out.sort();
            out.dedup();
            out
        }
        _ => unreachable!("grid over {s}"),
    }
}

/// The atomic facts of a tuple over `b`, the constants and the cut points.
fn type_key(s: &StructureSpec, t: &[Atom], b: &[Atom]) -> Vec<i8> {
    let c = |x: std::cmp::Ordering| x as i8;
    let mut key = Vec::new();
    match s {
        StructureSpec::Equality => {
            for x in t {
                for y in b.iter().chain(t) {
                    key.push(i8::from(x == y));
                }
            }
        }
        _ => {
            let refs: Vec<QuadRat> = b.iter().map(|a| val(a).clone()).chain(dlo_refs(s)).collect();
            for x in t {
                for r in &refs {
                    key.push(c(val(x).cmp(r)));
                }
                for y in t {
                    key.push(c(val(x).cmp(val(y))));
                }
            }
        }
    }
    key
}

fn tuples(points: &[Atom], n: usize) -> Vec<Vec<Atom>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|t| points.iter().map(move |p| [t.clone(), vec![p.clone()]].concat())).collect();
    }
    out
}

/// Whether some type over `b` has members on both sides of `set`, checked on
/// a grid realising every type over `b` and the parameters.
fn grid_split(set: &DefSet, b: &[Atom]) -> bool {
    let s = set.spec();
    let grounds: Vec<Atom> = set.params().iter().chain(b).cloned().collect();
    let pts = grid(s, &grounds, set.arity());
    let mut seen: BTreeMap<Vec<i8>, bool> = BTreeMap::new();
    for t in tuples(&pts, set.arity()) {
        let inside = set.member(&t).unwrap();
        match seen.insert(type_key(s, &t, b), inside) {
            Some(prev) if prev != inside => return true,
            _ => {}
        }
    }
    false
}

/// Whether `set` is invariant under 50 random automorphisms fixing `b`,
/// half of them moving the parameters.
fn invariant_under_samples(set: &DefSet, b: &[Atom], rng: &mut Rng) -> bool {
    let s = set.spec();
    let grounds: Vec<Atom> = set.params().iter().chain(b).cloned().collect();
    let pts = grid(s, &grounds, set.arity());
    let all = tuples(&pts, set.arity());
    let movable: Vec<Atom> = set.params().iter().filter(|p| !b.contains(p) && !s.is_fixed(p)).cloned().collect();
    for k in 0..50 {
        let pi = if k % 2 == 0 || movable.is_empty() {
            sample::random_auto_fixing(s, b, rng).unwrap()
        } else {
            let moved = sample::random_same_type(s, &movable, b, rng).unwrap();
            let src: Vec<Atom> = b.iter().chain(&movable).cloned().collect();
            let dst: Vec<Atom> = b.iter().cloned().chain(moved).collect();
            extend_partial(s, &src, &dst).unwrap()
        };
        let inv = pi.invert();
        for _ in 0..40 {
            let x = all.choose(rng).unwrap();
            let inside = set.member(x).unwrap();
            if set.member(&inv.apply_tuple(x).unwrap()).unwrap() != inside || set.member(&pi.apply_tuple(x).unwrap()).unwrap() != inside {
                return false;
            }
        }
    }
    true
}

fn permutations(items: &[u64]) -> Vec<Vec<u64>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Every permutation of `pool` fixing `a` fixes `x`.
fn exhaustive_supported(x: &HFSet, a: &[Atom], pool: &[u64]) -> bool {
    let movable: Vec<u64> = pool.iter().copied().filter(|k| !a.contains(&Atom::Eq(*k))).collect();
    permutations(&movable).into_iter().all(|img| {
        let m: BTreeMap<u64, u64> = movable.iter().copied().zip(img).collect();
        let y = x
            .map_atoms(&mut |t| {
                Ok(match t {
                    Atom::Eq(k) => Atom::Eq(*m.get(k).unwrap_or(k)),
                    t => t.clone(),
                })
            })
            .unwrap();
        y == *x
    })
}

/// A finite map is a condition: injective, ordered (and placed in parts)
/// like `j` on its domain.
fn oracle_condition(sc: &Scenario, p: &BTreeMap<u64, Atom>) -> bool {
    let vals: BTreeSet<&Atom> = p.values().collect();
    if vals.len() != p.len() {
        return false;
    }
    let part = |a: &Atom| match a {
        Atom::Sum { part, inner } => Some((*part, inner.is_none())),
        _ => None,
    };
    for (i, a) in p {
        let ja = sc.j(*i);
        if sc.big.check_atom(a).is_err() || part(a) != part(&ja) || (part(a).is_some_and(|(_, star)| star) && *a != ja) {
            return false;
        }
        for (k, b) in p {
            let jb = sc.j(*k);
            let same = if sc.big.is_ordered() { a.cmp(b) == ja.cmp(&jb) } else { (a == b) == (ja == jb) };
            if !same {
                return false;
            }
        }
    }
    true
}

fn as_map(p: &Condition) -> BTreeMap<u64, Atom> {
    p.pairs().map(|(i, a)| (i, a.clone())).collect()
}

fn union_map(p: &Condition, q: &Condition) -> Option<BTreeMap<u64, Atom>> {
    let mut m = as_map(p);
    for (i, a) in q.pairs() {
        if let Some(b) = m.insert(i, a.clone()) {
            if b != *a {
                return None;
            }
        }
    }
    Some(m)
}

fn extends(p: &Condition, q: &Condition) -> bool {
    q.pairs().all(|(i, a)| p.get(i) == Some(a))
}

// ---------------------------------------------------------------------------
// Criteria

fn c1() -> Outcome {
    let start = Instant::now();
    let s = DefSet::parse(&StructureSpec::dlo(), "{(x): 0<x & x<=5/2 | 3<=x}", &[]).map_err(|e| e.to_string())?;
    let c = s.minimal_support().map_err(|e| e.to_string())?;
    let want = vec![Atom::int(0), Atom::ratio(5, 2), Atom::int(3)];
    ensure(c.support == want, || format!("support {:?}", c.support))?;
    // each point is needed: dropping it leaves a split type over the rest
    for i in 0..3 {
        let rest: Vec<Atom> = want.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, a)| a.clone()).collect();
        let full = DefSet::new(StructureSpec::dlo(), 1, want.clone(), s.matrix().clone()).map_err(|e| e.to_string())?;
        ensure(grid_split(&full, &rest), || format!("{} is not needed", want[i]))?;
    }
    let full = DefSet::new(StructureSpec::dlo(), 1, want.clone(), s.matrix().clone()).map_err(|e| e.to_string())?;
    ensure(!grid_split(&full, &want), || "the support splits a type".into())?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("support (0, 5/2, 3) in {:?}", start.elapsed()))
}

fn c2() -> Outcome {
    let start = Instant::now();
    let mut got = Vec::new();
    for (s, ordered) in [(StructureSpec::Equality, false), (StructureSpec::dlo(), true)] {
        for n in 1..=4 {
            let lib = orbit_count(&s, n).map_err(|e| e.to_string())?;
            let oracle = brute_orbits(ordered, n);
            ensure(lib == oracle, || format!("{s} n={n}: library {lib}, oracle {oracle}"))?;
            got.push(lib);
        }
    }
    ensure(got == [1, 2, 5, 15, 1, 3, 13, 75], || format!("{got:?}"))?;
    within(start, Duration::from_secs(5))?;
    Ok(format!("{got:?} in {:?}", start.elapsed()))
}

fn homogeneous_specs() -> Vec<StructureSpec> {
    vec![StructureSpec::Equality, StructureSpec::dlo(), spec("dlo[const=0]"), spec("dlo[cut<sqrt2]"), spec("dlo[field=qsqrt2, const=sqrt2]")]
}

fn c3() -> Outcome {
    let mut rng = sample::rng(31);
    let specs = homogeneous_specs();
    let mut equivariant = 0;
    for k in 0..200 {
        let s = &specs[k % specs.len()];
        let arity = rng.gen_range(1..=3);
        let set = sample::random_defset(s, arity, &mut rng).map_err(|e| e.to_string())?;
        let lib = set.equivariant().map_err(|e| e.to_string())?;
        let decomposes = match set.orbit_decompose_over(&[]) {
            Ok(ts) => {
                let back = DefSet::from_patterns(s, arity, &ts).map_err(|e| e.to_string())?;
                back.is_equal(&set).map_err(|e| e.to_string())?
            }
            Err(_) => false,
        };
        let split = grid_split(&set, &[]);
        let invariant = invariant_under_samples(&set, &[], &mut rng);
        ensure(lib == decomposes && lib == !split && lib == invariant, || {
            format!("{set} over {s}: equivariant {lib}, decomposes {decomposes}, grid split {split}, invariant {invariant}")
        })?;
        equivariant += usize::from(lib);
    }
    Ok(format!("200 sets ({equivariant} equivariant), no discrepancies"))
}

fn c4() -> Outcome {
    let mut rng = sample::rng(41);
    let specs = homogeneous_specs();
    let mut supported = 0;
    for k in 0..200 {
        let s = &specs[k % specs.len()];
        let arity = rng.gen_range(1..=2);
        let set = sample::random_defset(s, arity, &mut rng).map_err(|e| e.to_string())?;
        let mut b: Vec<Atom> = set.params().iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        if rng.gen_bool(0.5) {
            b.push(sample::random_atom(s, &mut rng));
        }
        b.sort();
        b.dedup();
        let lib = set.support_check(&b).map_err(|e| e.to_string())?;
        let split = grid_split(&set, &b);
        let invariant = invariant_under_samples(&set, &b, &mut rng);
        ensure(lib == !split && lib == invariant, || {
            format!("{set} over {s} with b = {b:?}: support_check {lib}, grid split {split}, invariant {invariant}")
        })?;
        supported += usize::from(lib);
    }
    Ok(format!("200 pairs ({supported} supported), no discrepancies"))
}

fn c5() -> Outcome {
    let mut rng = sample::rng(51);
    let specs = [StructureSpec::dlo(),
        spec("dlo[field=qsqrt2]"),
        spec("dlo[const=0, cut<sqrt2]"),
        spec("sum(dlo[field=qsqrt2], star, dlo)")];
    let mut rational_checked = 0;
    for k in 0..1000 {
        let s = &specs[k % specs.len()];
        let n = rng.gen_range(1..=5);
        let a = sample::random_tuple(s, n, &mut rng);
        let b = sample::random_same_type(s, &a, &[], &mut rng).map_err(|e| e.to_string())?;
        let m = extend_partial(s, &a, &b).map_err(|e| e.to_string())?;
        ensure(m.apply_tuple(&a).unwrap() == b, || format!("{m} does not map {a:?} to {b:?}"))?;
        let inv = m.invert();
        let mut probes = sample::random_tuple(s, 100, &mut rng);
        probes.sort();
        probes.dedup();
        let imgs = m.apply_tuple(&probes).unwrap();
        ensure(imgs.windows(2).all(|w| w[0] < w[1]), || format!("{m} is not strictly increasing"))?;
        ensure(inv.apply_tuple(&imgs).unwrap() == probes, || format!("{m} does not invert"))?;
        let rational = matches!(s, StructureSpec::Dlo { .. }) && a.iter().chain(&b).all(|x| val(x).is_rational());
        if rational {
            let r = restrict_witness(s, &a, &b).map_err(|e| e.to_string())?;
            let AutoKind::Linear(l) = r.kind() else { return Err(format!("{r} is not piecewise linear")) };
            let all_rational = l.knots().iter().all(|(x, y)| x.is_rational() && y.is_rational())
                && l.pieces().iter().all(|p| p.slope.is_rational() && p.offset.is_rational());
            ensure(all_rational && r.apply_tuple(&a).unwrap() == b, || format!("{r} has irrational data"))?;
            rational_checked += 1;
        }
    }
    let absorb_specs = [spec("dlo[field=qsqrt2]"), spec("dlo[field=qsqrt2, const=sqrt2]")];
    for k in 0..500 {
        let s = &absorb_specs[k % 2];
        let fixed: Vec<Atom> = (0..rng.gen_range(0..=3)).map(|_| Atom::rational(sample::random_rational(&mut rng))).collect();
        let movers: Vec<Atom> = sample::random_tuple(s, rng.gen_range(1..=4), &mut rng).into_iter().filter(|a| !s.is_fixed(a)).collect();
        let m = absorb(s, &fixed, &movers).map_err(|e| e.to_string())?;
        ensure(m.apply_tuple(&fixed).unwrap() == fixed, || format!("{m} moves S"))?;
        let img = m.apply_tuple(&movers).unwrap();
        ensure(img.iter().all(|x| val(x).is_rational()), || format!("{m} leaves {movers:?} outside Q"))?;
        let before: Vec<Atom> = fixed.iter().chain(&movers).cloned().chain(dlo_refs(s).into_iter().map(Atom::Ord)).collect();
        let after: Vec<Atom> = fixed.iter().chain(&img).cloned().chain(dlo_refs(s).into_iter().map(Atom::Ord)).collect();
        for i in 0..before.len() {
            for j in 0..before.len() {
                ensure(before[i].cmp(&before[j]) == after[i].cmp(&after[j]), || format!("{m} breaks the order"))?;
            }
        }
    }
    Ok(format!("1000 interpolations ({rational_checked} rational restrictions), 500 absorptions"))
}

fn c6() -> Outcome {
    let mut rng = sample::rng(61);
    let eq = StructureSpec::Equality;
    for _ in 0..300 {
        let size = rng.gen_range(1..=5);
        let pool_ids: Vec<u64> = (0..size).collect();
        let pool: Vec<Atom> = pool_ids.iter().map(|k| Atom::Eq(*k)).collect();
        let x = sample::random_hf(&pool, rng.gen_range(0..=3), &mut rng);
        let a: Vec<Atom> = pool.iter().filter(|_| rng.gen_bool(0.4)).cloned().collect();
        let lib = hf_pool_supported_by(&x, &a, &pool).map_err(|e| e.to_string())?;
        let oracle = exhaustive_supported(&x, &a, &pool_ids);
        ensure(lib == oracle, || format!("{x} over pool {size} with {a:?}: library {lib}, exhaustive {oracle}"))?;
        // support for the whole group: one atom outside the pool stands for all
        let full = hf_supported_by(&eq, &x, &a).map_err(|e| e.to_string())?;
        let wider: Vec<u64> = (0..=size).collect();
        let oracle = exhaustive_supported(&x, &a, &wider);
        ensure(full == oracle, || format!("{x} with {a:?}: hf_supported_by {full}, exhaustive {oracle}"))?;
    }
    let mut agreed = 0;
    for _ in 0..100 {
        let arity = rng.gen_range(1..=2);
        let nparams = rng.gen_range(0..=2);
        let params: Vec<Atom> = (0..nparams).map(|k| Atom::Eq(k as u64)).collect();
        let f = sample::random_formula(&eq, arity, nparams, &mut rng);
        let set = DefSet::new(eq.clone(), arity, params.clone(), f).map_err(|e| e.to_string())?;
        let size = (nparams + arity + 1).min(5);
        let pool_ids: Vec<u64> = (0..size as u64).collect();
        let pool: Vec<Atom> = pool_ids.iter().map(|k| Atom::Eq(*k)).collect();
        let x = materialize(&set, &pool).map_err(|e| e.to_string())?;
        let lib: BTreeSet<Atom> = set.minimal_support().map_err(|e| e.to_string())?.support.into_iter().collect();
        // least pool support by exhaustive search over subsets, smallest first
        let mut best: Option<BTreeSet<Atom>> = None;
        for mask in 0u32..(1 << size) {
            let sub: Vec<Atom> = (0..size).filter(|i| mask & (1 << i) != 0).map(|i| pool[i].clone()).collect();
            if exhaustive_supported(&x, &sub, &pool_ids) && best.as_ref().is_none_or(|b| sub.len() < b.len()) {
                best = Some(sub.into_iter().collect());
            }
        }
        let best = best.unwrap();
        ensure(best == lib, || format!("{set}: DefSet support {lib:?}, HF support {best:?}"))?;
        agreed += 1;
    }
    Ok(format!("300 HF sets, {agreed} DefSet/HF support comparisons, no discrepancies"))
}

fn c7() -> Outcome {
    let start = Instant::now();
    let mut rng = sample::rng(71);
    let scenarios: Vec<Scenario> = scenario_catalog().into_iter().filter(|s| !s.expected_fail).collect();
    let mut counts = [0usize; 3];
    for sc in &scenarios {
        let err = |e: orbitlab_core::Error| format!("{}: {e}", sc.name);
        ensure(oracle_condition(sc, &BTreeMap::new()), || "empty condition rejected".into())?;
        for _ in 0..200 {
            let p = forcing::random_condition(sc, 5, &mut rng).map_err(err)?;
            ensure(oracle_condition(sc, &as_map(&p)), || format!("{}: sampled {p} is not a condition", sc.name))?;
            let (q, r) = forcing::splitting_extensions(sc, &p).map_err(err)?;
            ensure(extends(&q, &p) && extends(&r, &p), || format!("{}: {q}, {r} do not extend {p}", sc.name))?;
            ensure(oracle_condition(sc, &as_map(&q)) && oracle_condition(sc, &as_map(&r)), || format!("{}: bad split of {p}", sc.name))?;
            ensure(union_map(&q, &r).is_none_or(|u| !oracle_condition(sc, &u)), || format!("{}: {q} and {r} are compatible", sc.name))?;
        }
        let mut ds: Vec<DenseSpec> = (0..10).map(DenseSpec::DomainAt).collect();
        ds.extend(sample::random_tuple(&sc.big, 10, &mut rng).into_iter().map(DenseSpec::RangeAt));
        let g = forcing::build_generic(sc, &Condition::empty(), &ds).map_err(err)?;
        let f = forcing::eval_name_f(&g);
        ensure(oracle_condition(sc, &f), || format!("{}: generic map is not a condition", sc.name))?;
        for d in &ds {
            let met = match d {
                DenseSpec::DomainAt(i) => f.contains_key(i),
                DenseSpec::RangeAt(a) => f.values().any(|v| v == a),
            };
            ensure(met, || format!("{}: {d} not met", sc.name))?;
        }
        ensure(g.chain.windows(2).all(|w| extends(&w[1], &w[0])), || format!("{}: chain not descending", sc.name))?;
        for _ in 0..500 {
            let p = forcing::random_condition(sc, 4, &mut rng).map_err(err)?;
            let q = forcing::random_condition(sc, 4, &mut rng).map_err(err)?;
            let h = forcing::almost_homog_witness(sc, &p, &q).map_err(err)?;
            let moved = h.sigma.apply_condition(sc, &p).map_err(err)?;
            let u = union_map(&moved, &q);
            ensure(u.is_some_and(|u| oracle_condition(sc, &u)), || format!("{}: sigma p = {moved} clashes with {q}", sc.name))?;
            ensure(h.sigma.apply_condition(sc, &Condition::empty()).map_err(err)?.is_empty(), || "sigma moves the empty condition".into())?;
            // σ preserves extension: a subcondition maps into the image
            let sub = Condition::from_pairs(p.pairs().take(p.len() / 2).map(|(i, a)| (i, a.clone()))).unwrap();
            ensure(extends(&moved, &h.sigma.apply_condition(sc, &sub).map_err(err)?), || "sigma breaks inclusion".into())?;
        }
        for _ in 0..200 {
            let entries: Vec<(String, Condition)> =
                (0..3).map(|i| Ok((format!("x{i}"), forcing::random_condition(sc, 3, &mut rng)?))).collect::<Result<_, orbitlab_core::Error>>().map_err(err)?;
            let name = SimpleName::new(sc, entries.clone()).map_err(err)?;
            let (label, px) = entries.choose(&mut rng).unwrap().clone();
            let mut p = forcing::random_condition(sc, 3, &mut rng).map_err(err)?;
            if rng.gen_bool(0.3) {
                if let Some(u) = union_map(&p, &px).filter(|u| oracle_condition(sc, u)) {
                    p = Condition::from_pairs(u).unwrap();
                }
            }
            let oracle_in = px.pairs().all(|(i, v)| p.get(i) == Some(v) || (p.get(i).is_none() && sc.big.is_fixed(v) && sc.j(i) == *v));
            let oracle_out = union_map(&p, &px).is_none_or(|u| !oracle_condition(sc, &u));
            match forcing::forces_membership(sc, &p, &name, &label).map_err(err)? {
                Membership::In => {
                    ensure(oracle_in && !oracle_out, || format!("{}: {p} does not force {px}", sc.name))?;
                    counts[0] += 1;
                }
                Membership::Out => {
                    ensure(oracle_out && !oracle_in, || format!("{}: {p} is compatible with {px}", sc.name))?;
                    counts[1] += 1;
                }
                Membership::Undecided { q_in, q_out } => {
                    ensure(!oracle_in && !oracle_out, || format!("{}: {p} decides {px}", sc.name))?;
                    ensure(extends(&q_in, &p) && extends(&q_in, &px) && oracle_condition(sc, &as_map(&q_in)), || "bad q_in".into())?;
                    ensure(extends(&q_out, &p) && oracle_condition(sc, &as_map(&q_out)), || "bad q_out".into())?;
                    ensure(union_map(&q_out, &px).is_none_or(|u| !oracle_condition(sc, &u)), || "q_out is compatible with p_x".into())?;
                    counts[2] += 1;
                }
            }
        }
    }
    ensure(counts.iter().all(|c| *c > 0), || format!("verdicts not all exercised: {counts:?}"))?;
    within(start, Duration::from_secs(10))?;
    Ok(format!("{} scenarios; in/out/undecided = {counts:?}; {:?}", scenarios.len(), start.elapsed()))
}

fn c8() -> Outcome {
    let mut lines = Vec::new();
    for sc in scenario_catalog() {
        let r = check_cover(&sc, 200, 8).map_err(|e| e.to_string())?;
        if sc.expected_fail {
            ensure(!r.c.passed, || format!("{} passes absorption", sc.name))?;
            let c = r.counterexamples.iter().find(|c| c.condition == "absorption").ok_or("no absorption counterexample")?;
            ensure(c.instance == "S = {0, 1}, S' = {2}", || format!("unexpected instance {}", c.instance))?;
            // B lies in [0, 1] and 1 is fixed, so 2 stays above every point of B
            let top = (0..2000).map(|i| sc.j(i)).max().unwrap();
            ensure(top == Atom::int(1), || format!("max of sampled B is {top}"))?;
            lines.push(format!("{} FAIL absorption at {}", sc.name, c.instance));
        } else {
            ensure(r.passed(), || format!("{r}"))?;
            ensure(r.b.checked >= 200 && r.c.checked >= 200, || format!("{}: too few instances", sc.name))?;
            ensure(r.witnesses.len() == r.b.checked + r.c.checked, || format!("{}: missing witnesses", sc.name))?;
            lines.push(format!("{} PASS", sc.name));
        }
    }
    Ok(lines.join("; "))
}

fn c9() -> Outcome {
    let r = mutual_symmetry(&spec("dlo[const=0]"), &spec("dlo[const=1]")).map_err(|e| e.to_string())?;
    ensure(r.verdict() == Verdict::Mutual, || format!("{r:?}"))?;
    ensure(r.forward == Direction::Supported(vec![Atom::int(0)]), || format!("forward {:?}", r.forward))?;
    ensure(r.backward == Direction::Supported(vec![Atom::int(1)]), || format!("backward {:?}", r.backward))?;
    let r = mutual_symmetry(&StructureSpec::dlo(), &spec("dlo[cut<sqrt2]")).map_err(|e| e.to_string())?;
    ensure(r.verdict() == Verdict::OneWay, || format!("{r:?}"))?;
    ensure(matches!(r.backward, Direction::Unsupported { .. }), || format!("{r:?}"))?;
    Ok("mutual with (0)/(1); one-way for the cut".into())
}

fn c10() -> Outcome {
    // V_0 = {}, V_{k+1} = all subsets of V_k
    let mut level: Vec<HFSet> = Vec::new();
    for _ in 0..4 {
        let n = level.len();
        level = (0..1u32 << n).map(|m| HFSet::set((0..n).filter(|i| m & (1 << i) != 0).map(|i| level[i].clone()))).collect();
    }
    ensure(level.len() == 16, || format!("{} sets", level.len()))?;
    let lib: BTreeSet<HFSet> = pure_sets_below(4).into_iter().collect();
    let mine: BTreeSet<HFSet> = level.iter().cloned().collect();
    ensure(lib == mine, || "pure set enumeration differs".into())?;
    let mut images = BTreeSet::new();
    for x in &level {
        let v = f_map(x).map_err(|e| e.to_string())?;
        ensure(collapse(&v, &BTreeMap::new()).map_err(|e| e.to_string())? == *x, || format!("{x} does not round-trip"))?;
        images.insert(v);
    }
    ensure(images.len() == 16, || "f is not injective".into())?;
    Ok("16 pure sets round-trip".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 minimal support", c1),
        ("2 orbit counts", c2),
        ("3 equivariance", c3),
        ("4 supports", c4),
        ("5 interpolation and absorption", c5),
        ("6 HF oracle", c6),
        ("7 forcing lab", c7),
        ("8 cover reports", c8),
        ("9 mutual symmetry", c9),
        ("10 V* round trip", c10),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let t = start.elapsed();
        match r {
            Ok(msg) => println!("PASS {name}: {msg} [{t:.2?}]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL {name}: {msg} [{t:.2?}]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
