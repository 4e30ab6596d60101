mod common;

use std::sync::OnceLock;

use common::{set, SIX_SETS};
use snumbers::{
    audit_lemma1, count_via_decomposition, enumerate_powerful, verify_density, verify_powerful_asymptotic,
    DecompositionCounter, FactorSieve,
};

fn big_sieve() -> &'static FactorSieve {
    static S: OnceLock<FactorSieve> = OnceLock::new();
    S.get_or_init(|| FactorSieve::new(10_000_000).unwrap())
}

#[test]
fn decomposition_identity_is_exact() {
    let sieve = FactorSieve::new(100_000).unwrap();
    let xs: Vec<u64> = (1..=100_000).collect();
    for s in SIX_SETS {
        let s = set(s);
        let dc = DecompositionCounter::new(&sieve, 100_000, &s).unwrap();
        let direct = sieve.count_members_at(&xs, &s).unwrap();
        for (&x, &c) in xs.iter().zip(&direct) {
            assert_eq!(dc.count(x).unwrap(), c, "{s} at x = {x}");
        }
        for x in [1u64, 17, 999, 65_536, 100_000] {
            assert_eq!(count_via_decomposition(&sieve, x, &s).unwrap(), direct[x as usize - 1]);
        }
    }
}

#[test]
fn residual_envelope_tripwire() {
    let xs = [10_000u64, 100_000, 1_000_000, 10_000_000];
    for s in ["finite:1", "finite:1,2", "finite:1,2,5", "exclude:2", "squarefree", "upto:4", "all"] {
        let reports = verify_density(big_sieve(), &set(s), &xs).unwrap();
        for r in &reports {
            assert!(r.normalized_residual <= 100.0, "{s}: {r:?}");
            assert!(r.exact_count <= r.x);
            assert!(r.envelope > 0.0);
            assert_eq!(r.residual, r.exact_count as f64 - r.main_term);
            assert!(r.density.error_bound <= 1e-7);
        }
        let first = &reports[0];
        let last = &reports[3];
        assert!(
            last.residual.abs() / last.x as f64 <= first.residual.abs() / first.x as f64,
            "{s}: relative residual did not shrink"
        );
    }
}

#[test]
fn zero_density_branch_counts() {
    let r = verify_density(big_sieve(), &set("geq:2"), &[1_000_000]).unwrap();
    let r = &r[0];
    assert_eq!(r.main_term, 0.0);
    assert_eq!(r.density.value, 0.0);
    assert_eq!(r.exact_count, enumerate_powerful(1_000_000).len() as u64);
    assert!((r.exact_count as f64) / 1e6 < 3e-3);
    assert!(r.exact_count as f64 <= 2.3 * 1000.0 + 1.0);
}

#[test]
fn squarefree_count_within_explicit_bound_everywhere() {
    let sieve = big_sieve();
    let q = sieve.squarefree_coprime_prefix(sieve.limit(), 1).unwrap();
    let c = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);
    for x in 1..=sieve.limit() {
        let dev = (q[x as usize] as f64 - c * x as f64).abs();
        assert!(dev <= 3.5 * (x as f64).sqrt(), "x = {x}: deviation {dev}");
    }
    let r = verify_density(sieve, &set("finite:1"), &[1_000_000]).unwrap();
    assert_eq!(r[0].exact_count, 607_926);
}

#[test]
fn audit_and_powerful_tables() {
    let sieve = FactorSieve::new(100_000).unwrap();
    let a = audit_lemma1(&sieve, &[1, 2, 6, 30], &[1000, 100_000]).unwrap();
    assert!(a.pass);
    assert_eq!(a.rows.len(), 8);
    assert!(audit_lemma1(&sieve, &[4], &[1000]).is_err());

    let rows = verify_powerful_asymptotic(&[1, 100, 1_000_000]).unwrap();
    assert_eq!(rows[0].count, 1);
    assert_eq!(rows[1].count, 14);
    assert!((rows[2].main_term - 2024.4).abs() < 0.1);
    for r in &rows {
        assert!((r.ratio - r.residual.abs() / (r.x as f64).powf(1.0 / 6.0)).abs() < 1e-12);
    }
}
