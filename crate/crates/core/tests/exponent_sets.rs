mod common;

use common::{any_set, mu_squared, set};
use proptest::prelude::*;
use snumbers::{family_set, format_exponent_set, parse_exponent_set, ExponentSet, PerPrimeFamily, SetKind};

proptest! {
    #[test]
    fn format_then_parse_round_trips(s in any_set()) {
        let text = format_exponent_set(&s);
        let back = parse_exponent_set(&text).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(format_exponent_set(&back), text);
    }

    #[test]
    fn finite_indicator_counts_elements(v in prop::collection::vec(1u32..40, 1..10)) {
        let s = ExponentSet::finite(v.clone()).unwrap();
        let mut distinct = v.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let top = *distinct.last().unwrap();
        let total: i32 = (1..=top).map(|n| s.u(n)).sum();
        prop_assert_eq!(total as usize, distinct.len());
    }

    #[test]
    fn cofinite_is_complement(v in prop::collection::vec(1u32..40, 1..10)) {
        let fin = ExponentSet::finite(v.clone()).unwrap();
        let cof = ExponentSet::cofinite(v.clone()).unwrap();
        let top = *v.iter().max().unwrap();
        for n in 1..=top {
            prop_assert_eq!(cof.u(n), 1 - fin.u(n));
        }
        for n in top + 1..top + 20 {
            prop_assert_eq!(cof.u(n), 1);
        }
    }

    #[test]
    fn subset_relation_matches_membership(a in any_set(), b in any_set()) {
        // every kind is decided by its first 64 entries at these parameters
        let pointwise = (1..=64).all(|n| !a.contains(n) || b.contains(n));
        prop_assert_eq!(a.is_subset_of(&b), pointwise);
    }
}

#[test]
fn squarefree_exponents_match_trial_division() {
    let s = ExponentSet::squarefree();
    for n in 1..=10_000u32 {
        assert_eq!(s.contains(n), mu_squared(n as u64), "n = {n}");
    }
}

#[test]
fn documented_examples() {
    let s = set("finite:1,2");
    assert_eq!(s.kind(), SetKind::Finite);
    assert_eq!(s.u(3), 0);
    assert_eq!(set("squarefree").u(4), 0);
    assert_eq!(set("squarefree").u(6), 1);
    assert_eq!(set("squarefree").u(12), 0);
    let g = set("geq:2");
    assert!(!g.contains_one());
    assert_eq!(g.u(1), 0);
    for t in ["upto:3", "all", "squarefree"] {
        assert!(set(t).contains_one());
    }
}

#[test]
fn parse_errors() {
    for bad in ["", "finite:", "finite:0", "finite:1,,2", "geq:0", "upto:0", "Finite:1", "all ", "exclude:-1", "squarefree:2"] {
        assert!(parse_exponent_set(bad).is_err(), "{bad:?} should not parse");
    }
}

#[test]
fn family_examples() {
    let prefix = PerPrimeFamily::Prefix;
    assert_eq!(family_set(&prefix, 1), ExponentSet::up_to(1).unwrap());
    assert_eq!(family_set(&prefix, 3), ExponentSet::up_to(3).unwrap());
    let list: PerPrimeFamily = "list:finite:1,2:default:all".parse().unwrap();
    assert_eq!(family_set(&list, 1), set("finite:1,2"));
    assert_eq!(family_set(&list, 7), ExponentSet::all());
    let two: PerPrimeFamily = "list:finite:1;upto:3:default:exclude:2".parse().unwrap();
    assert_eq!(two.set_for(2), set("upto:3"));
    assert_eq!(two.to_string().parse::<PerPrimeFamily>().unwrap(), two);
}
