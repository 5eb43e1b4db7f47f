//! Algebraic laws and invariants, over generated inputs.

use orbitlab_core::autos::extend_partial;
use orbitlab_core::forcing::{self, DenseSpec};
use orbitlab_core::formula::{eval, qe};
use orbitlab_core::num::{simplest_between, QuadRat, Rational};
use orbitlab_core::sample;
use orbitlab_core::transfer::scenario_catalog;
use orbitlab_core::universe::act;
use orbitlab_core::{Atom, DefSet, StructureSpec};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng as _;

fn specs() -> Vec<StructureSpec> {
    ["eq", "dlo", "dlo[const=0]", "dlo[cut<sqrt2]", "dlo[field=qsqrt2, const=sqrt2]", "sum(dlo[field=qsqrt2], star, dlo)"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
}

fn defset_specs() -> Vec<StructureSpec> {
    specs().into_iter().take(5).collect()
}

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..50, 1i64..12).prop_map(|(p, q)| Rational::new(p, q))
}

fn quad() -> impl Strategy<Value = QuadRat> {
    (rational(), rational()).prop_map(|(a, b)| QuadRat::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_laws(x in quad(), y in quad(), z in quad()) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&(&x + &y) * &z, &(&x * &z) + &(&y * &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        if !x.is_zero() {
            prop_assert_eq!(&x * &x.recip(), QuadRat::one());
        }
        if x < y {
            prop_assert!(&x + &z < &y + &z);
        }
    }

    #[test]
    fn numbers_print_and_parse(x in quad(), r in rational()) {
        prop_assert_eq!(x.to_string().parse::<QuadRat>().unwrap(), x);
        prop_assert_eq!(r.to_string().parse::<Rational>().unwrap(), r);
    }

    #[test]
    fn simplest_is_between(x in quad(), y in quad()) {
        prop_assume!(x != y);
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        let s = QuadRat::rational(simplest_between(Some(&lo), Some(&hi)));
        prop_assert!(lo < s && s < hi);
    }

    #[test]
    fn interpolation_maps_and_inverts(seed in any::<u64>(), k in 0usize..6) {
        let mut rng = sample::rng(seed);
        let s = &specs()[k];
        let a = sample::random_tuple(s, rng.gen_range(1..=5), &mut rng);
        let b = sample::random_same_type(s, &a, &[], &mut rng).unwrap();
        let m = extend_partial(s, &a, &b).unwrap();
        prop_assert_eq!(m.apply_tuple(&a).unwrap(), b.clone());
        prop_assert_eq!(m.invert().apply_tuple(&b).unwrap(), a);
        let x = sample::random_tuple(s, 8, &mut rng);
        let y = m.apply_tuple(&x).unwrap();
        for i in 0..x.len() {
            for j in 0..x.len() {
                if s.is_ordered() {
                    prop_assert_eq!(x[i].cmp(&x[j]), y[i].cmp(&y[j]));
                } else {
                    prop_assert_eq!(x[i] == x[j], y[i] == y[j]);
                }
            }
        }
    }

    #[test]
    fn composition_is_application(seed in any::<u64>(), k in 0usize..6) {
        let mut rng = sample::rng(seed);
        let s = &specs()[k];
        let p = sample::random_auto_fixing(s, &[], &mut rng).unwrap();
        let q = sample::random_auto_fixing(s, &[], &mut rng).unwrap();
        let pq = p.compose(&q).unwrap();
        for x in sample::random_tuple(s, 6, &mut rng) {
            prop_assert_eq!(pq.apply(&x).unwrap(), p.apply(&q.apply(&x).unwrap()).unwrap());
        }
    }

    #[test]
    fn action_invariance(seed in any::<u64>(), k in 0usize..5) {
        let mut rng = sample::rng(seed);
        let s = &defset_specs()[k];
        let set = sample::random_defset(s, rng.gen_range(1..=2), &mut rng).unwrap();
        let pi = sample::random_auto_fixing(s, &[], &mut rng).unwrap();
        let moved = pi.apply_set(&set).unwrap();
        for _ in 0..10 {
            let t = sample::random_tuple(s, set.arity(), &mut rng);
            prop_assert_eq!(set.member(&t).unwrap(), moved.member(&pi.apply_tuple(&t).unwrap()).unwrap());
        }
    }

    #[test]
    fn supports_are_upward_closed_and_sound(seed in any::<u64>(), k in 0usize..5) {
        let mut rng = sample::rng(seed);
        let s = &defset_specs()[k];
        let set = sample::random_defset(s, rng.gen_range(1..=2), &mut rng).unwrap();
        let mut b: Vec<Atom> = set.params().iter().filter(|_| rng.gen_bool(0.6)).cloned().collect();
        if set.support_check(&b).unwrap() {
            for _ in 0..5 {
                let pi = sample::random_auto_fixing(s, &b, &mut rng).unwrap();
                prop_assert!(pi.apply_set(&set).unwrap().is_equal(&set).unwrap());
            }
            b.push(sample::random_atom(s, &mut rng));
            prop_assert!(set.support_check(&b).unwrap());
        } else {
            prop_assert!(set.split_witness(&b).unwrap().is_some());
        }
    }

    #[test]
    fn least_support_ignores_drop_order(seed in any::<u64>(), k in 0usize..5) {
        let mut rng = sample::rng(seed);
        let s = &defset_specs()[k];
        let set = sample::random_defset(s, rng.gen_range(1..=2), &mut rng).unwrap();
        let first = set.minimal_support().unwrap();
        let mut order: Vec<usize> = (0..set.params().len()).collect();
        order.shuffle(&mut rng);
        let mut a = set.minimal_support_in_order(&order).unwrap();
        let mut b = first.support.clone();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
        let back = DefSet::from_patterns(s, set.arity(), &first.patterns).unwrap();
        prop_assert!(back.is_equal(&set).unwrap());
    }

    #[test]
    fn sets_print_and_parse(seed in any::<u64>(), k in 0usize..5) {
        let mut rng = sample::rng(seed);
        let s = &defset_specs()[k];
        let set = sample::random_defset(s, rng.gen_range(1..=3), &mut rng).unwrap();
        let back = DefSet::parse(s, &set.to_string(), &[]).unwrap();
        prop_assert!(back.is_equal(&set).unwrap());
    }

    #[test]
    fn boolean_operations(seed in any::<u64>(), k in 0usize..5) {
        let mut rng = sample::rng(seed);
        let s = &defset_specs()[k];
        let x = sample::random_defset(s, 1, &mut rng).unwrap();
        let y = sample::random_defset(s, 1, &mut rng).unwrap();
        let (u, i, d, c) = (x.union(&y).unwrap(), x.intersect(&y).unwrap(), x.difference(&y).unwrap(), x.complement().unwrap());
        for _ in 0..10 {
            let t = sample::random_tuple(s, 1, &mut rng);
            let (a, b) = (x.member(&t).unwrap(), y.member(&t).unwrap());
            prop_assert_eq!(u.member(&t).unwrap(), a || b);
            prop_assert_eq!(i.member(&t).unwrap(), a && b);
            prop_assert_eq!(d.member(&t).unwrap(), a && !b);
            prop_assert_eq!(c.member(&t).unwrap(), !a);
        }
    }

    #[test]
    fn elimination_preserves_meaning(seed in any::<u64>(), k in 0usize..5) {
        let mut rng = sample::rng(seed);
        let s = &defset_specs()[k];
        let f = sample::random_formula(s, 2, 0, &mut rng);
        let g = qe(s, &f).unwrap();
        for _ in 0..10 {
            let t = sample::random_tuple(s, 2, &mut rng);
            prop_assert_eq!(eval(s, &f, &t, &[]).unwrap(), eval(s, &g, &t, &[]).unwrap());
        }
    }

    #[test]
    fn hf_action_is_a_group_action(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let s = StructureSpec::dlo();
        let pool = sample::random_tuple(&s, 4, &mut rng);
        let x = sample::random_hf(&pool, 3, &mut rng);
        let p = sample::random_auto_fixing(&s, &[], &mut rng).unwrap();
        let q = sample::random_auto_fixing(&s, &[], &mut rng).unwrap();
        prop_assert_eq!(act(&p.compose(&q).unwrap(), &x).unwrap(), act(&p, &act(&q, &x).unwrap()).unwrap());
        prop_assert_eq!(act(&p.invert(), &act(&p, &x).unwrap()).unwrap(), x);
    }

    #[test]
    fn dense_sets_are_met(seed in any::<u64>(), k in 0usize..4) {
        let mut rng = sample::rng(seed);
        let sc = &scenario_catalog()[k];
        let p = forcing::random_condition(sc, 4, &mut rng).unwrap();
        let d = if rng.gen_bool(0.5) {
            DenseSpec::DomainAt(rng.gen_range(0..40))
        } else {
            DenseSpec::RangeAt(sample::random_atom(&sc.big, &mut rng))
        };
        let q = forcing::extend_into(sc, &p, &d).unwrap();
        prop_assert!(forcing::leq(&q, &p) && forcing::meets(&q, &d) && forcing::is_condition(sc, &q));
        let (a, b) = forcing::splitting_extensions(sc, &p).unwrap();
        prop_assert!(!forcing::compatible(sc, &a, &b));
    }
}
