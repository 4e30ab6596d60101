#![allow(dead_code)]

use proptest::prelude::*;
use snumbers::ExponentSet;

pub fn set(s: &str) -> ExponentSet {
    s.parse().unwrap()
}

/// The six sets the route-equivalence and decomposition checks run over.
pub const SIX_SETS: [&str; 6] = ["finite:1", "finite:1,2", "finite:1,2,5", "exclude:2", "squarefree", "upto:4"];

/// Small instances of every kind.
pub fn any_set() -> impl Strategy<Value = ExponentSet> {
    prop_oneof![
        prop::collection::vec(1u32..10, 1..6).prop_map(|v| ExponentSet::finite(v).unwrap()),
        prop::collection::vec(1u32..10, 1..4).prop_map(|v| ExponentSet::cofinite(v).unwrap()),
        (1u32..7).prop_map(|k| ExponentSet::up_to(k).unwrap()),
        Just(ExponentSet::all()),
        (2u32..6).prop_map(|k| ExponentSet::geq(k).unwrap()),
        Just(ExponentSet::squarefree()),
    ]
}

pub fn set_with_one() -> impl Strategy<Value = ExponentSet> {
    any_set().prop_filter("1 in S", ExponentSet::contains_one)
}

/// Trial-division Mobius-squared, independent of the library.
pub fn mu_squared(mut n: u64) -> bool {
    let mut p = 2;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        if n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}
