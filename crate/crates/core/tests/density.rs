mod common;

use std::sync::OnceLock;

use common::{set, set_with_one, SIX_SETS};
use proptest::prelude::*;
use snumbers::sieve::{first_primes, primes_up_to};
use snumbers::{
    density_eq11, density_eq4, density_eq8_sum_form, density_per_prime, density_zero_branch, gap_interval,
    radical_class_sum, DensityResult, ExponentSet, GapInterval, PerPrimeFamily, Route,
};

const EPS: f64 = 1e-12;

/// zeta(3) by the central-binomial series (5/2) sum (-1)^(k+1) / (k^3 C(2k, k)).
fn zeta3_oracle() -> f64 {
    let mut sum = 0.0;
    let mut binom = 1.0f64;
    for k in 1..40 {
        let kf = k as f64;
        binom *= (2.0 * kf - 1.0) * (2.0 * kf) / (kf * kf);
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        sum += sign / (kf * kf * kf * binom);
    }
    2.5 * sum
}

fn naive_product(primes: &[u64], factor: impl Fn(f64) -> f64) -> f64 {
    primes.iter().map(|&p| factor(p as f64)).product()
}

fn small_gap() -> &'static GapInterval {
    static G: OnceLock<GapInterval> = OnceLock::new();
    G.get_or_init(|| gap_interval(10_000).unwrap())
}

fn overlap(a: &DensityResult, b: &DensityResult) -> bool {
    (a.value - b.value).abs() <= a.error_bound + b.error_bound
}

#[test]
fn routes_agree_on_the_six_sets() {
    for s in SIX_SETS {
        let s = set(s);
        let e4 = density_eq4(&s, 100_000, EPS).unwrap();
        let e11 = density_eq11(&s, 100_000, EPS).unwrap();
        let e8 = density_eq8_sum_form(&s, 1_000_000).unwrap();
        assert_eq!(e4.route, Route::CharacteristicProduct);
        assert_eq!(e11.route, Route::IntermediateProduct);
        assert_eq!(e8.route, Route::PowerfulSum);
        for (a, b) in [(&e4, &e11), (&e4, &e8), (&e11, &e8)] {
            assert!(overlap(a, b), "{s}: {a:?} vs {b:?}");
        }
    }
}

#[test]
fn squarefree_and_cubefree_oracles() {
    let r = density_eq4(&set("finite:1"), 100_000, EPS).unwrap();
    let six_over_pi_sq = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);
    assert!((r.value - six_over_pi_sq).abs() <= r.error_bound);
    assert!(r.error_bound <= 2e-5);

    let r = density_eq4(&set("finite:1,2"), 1_000_000, EPS).unwrap();
    let inv_zeta3 = 1.0 / zeta3_oracle();
    assert!((inv_zeta3 - 0.831_907_372_6).abs() < 1e-10);
    assert!((r.value - inv_zeta3).abs() <= r.error_bound + 1e-15);
    assert!((r.value - inv_zeta3).abs() < 1e-6);
}

#[test]
fn squarefree_exponent_density_matches_product_form() {
    // the exponentially squarefree product with mu^2(i) - mu^2(i-1) up to i = 40
    let primes = primes_up_to(1_000_000);
    let mu2 = |n: u32| (2..=n).all(|d| n % (d * d) != 0) as i32;
    let naive = naive_product(&primes, |p| {
        1.0 + (2..=40u32).map(|i| (mu2(i) - mu2(i - 1)) as f64 * p.powi(-(i as i32))).sum::<f64>()
    });
    let r = density_eq4(&ExponentSet::squarefree(), 1_000_000, EPS).unwrap();
    assert!((r.value - naive).abs() < 1e-9);
    assert!((r.value - 0.9559).abs() < 1e-3);
}

#[test]
fn example_four_constant() {
    let r = density_per_prime(&PerPrimeFamily::Prefix, 50).unwrap();
    let naive: f64 = first_primes(50)
        .iter()
        .enumerate()
        .map(|(n, &p)| 1.0 - (p as f64).powi(-(n as i32 + 2)))
        .product();
    assert!((r.value - naive).abs() < 1e-15);
    assert!((r.value - 0.721_023_3).abs() < 5e-7);
    assert!(r.error_bound < 1e-7);

    let one = density_per_prime(&PerPrimeFamily::Prefix, 1).unwrap();
    assert_eq!(one.value, 0.75);
    assert!(one.value + one.error_bound >= r.value);
    let constant: PerPrimeFamily = "list:finite:1:default:finite:1".parse().unwrap();
    let c = density_per_prime(&constant, 1000).unwrap();
    let six_over_pi_sq = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);
    assert!((c.value - six_over_pi_sq).abs() <= c.error_bound);
    let all: PerPrimeFamily = "list:all:default:all".parse().unwrap();
    assert_eq!(density_per_prime(&all, 10).unwrap().value, 1.0);
    assert!(density_per_prime(&"list:geq:2:default:all".parse().unwrap(), 10).is_err());
}

#[test]
fn gap_examples() {
    let g = gap_interval(1_000_000).unwrap();
    assert!(g.certified);
    let primes = primes_up_to(1_000_000);
    let no2 = naive_product(&primes, |p| 1.0 - (p - 1.0) / (p * p * p));
    let with2 = naive_product(&primes, |p| 1.0 - 1.0 / (p * p * p));
    assert!((g.upper_no2.value - no2).abs() < 1e-6);
    assert!((g.lower_with2.value - with2).abs() < 1e-6);
    assert!((g.upper_no2.value - 0.7485).abs() < 1e-3);

    let tiny = gap_interval(2).unwrap();
    assert_eq!(tiny.upper_no2.value, 0.875);
    assert_eq!(tiny.lower_with2.value, 0.875);
    assert!(!tiny.certified);
    assert!(gap_interval(1_000).unwrap().certified);
    assert!(gap_interval(1).is_err());
}

#[test]
fn zero_branch() {
    for s in ["geq:2", "finite:2,3", "exclude:1"] {
        let r = density_zero_branch(&set(s)).unwrap();
        assert_eq!((r.value, r.error_bound), (0.0, 0.0));
        assert!(density_eq4(&set(s), 100, EPS).is_err());
    }
    assert!(density_zero_branch(&set("finite:1")).is_err());
}

#[test]
fn regrouped_sum_approaches_the_sum_form() {
    let six_over_pi_sq = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);
    for s in ["finite:1,2", "squarefree", "exclude:2"] {
        let s = set(s);
        let sum_form = density_eq8_sum_form(&s, 10_000_000).unwrap();
        // the product route pins the limit far more tightly than the sum form
        let limit = density_eq11(&s, 1_000_000, EPS).unwrap();
        let mut last_gap = f64::INFINITY;
        for l_max in [10u64, 100, 1000, 10_000] {
            let mut sum = 0.0;
            for l in 1..=l_max {
                let Ok(a) = radical_class_sum(&s, l, 60) else { continue };
                let weight: f64 = snumbers::sieve::trial_factorize(l)
                    .parts
                    .iter()
                    .map(|&(p, _)| 1.0 - 1.0 / (p as f64 + 1.0))
                    .product();
                sum += weight * a.value;
            }
            let partial = six_over_pi_sq * sum;
            // every term is positive, so partial sums approach from below
            assert!(partial <= limit.upper());
            let gap = limit.value - partial;
            assert!(gap < last_gap, "{s}: L = {l_max}, {gap} after {last_gap}");
            last_gap = gap;
        }
        assert!(last_gap < 1e-3, "{s}: {last_gap}");
        assert!((limit.value - sum_form.value).abs() <= sum_form.error_bound + limit.error_bound);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn radical_class_sum_is_multiplicative(s in set_with_one(), l1 in 1u64..1000, l2 in 1u64..1000, depth in 2u32..30) {
        let (Ok(a), Ok(b)) = (radical_class_sum(&s, l1, depth), radical_class_sum(&s, l2, depth)) else {
            return Ok(());
        };
        prop_assume!(gcd(l1, l2) == 1);
        let ab = radical_class_sum(&s, l1 * l2, depth).unwrap();
        let tol = ab.tail_bound + a.tail_bound * (b.value + b.tail_bound) + b.tail_bound * a.value + 1e-15;
        prop_assert!((ab.value - a.value * b.value).abs() <= tol);
    }

    #[test]
    fn densities_lie_between_six_over_pi_squared_and_one(s in set_with_one()) {
        let r = density_eq4(&s, 10_000, EPS).unwrap();
        let six_over_pi_sq = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);
        prop_assert!(r.upper() >= six_over_pi_sq - 1e-15);
        prop_assert!(r.lower() <= 1.0);
        prop_assert!((0.0..=1.0).contains(&r.value));
        prop_assert!(r.error_bound < 1.0);
    }

    #[test]
    fn densities_respect_the_gap(s in set_with_one()) {
        let g = small_gap();
        let r = density_eq4(&s, 10_000, EPS).unwrap();
        if s.contains(2) {
            prop_assert!(r.upper() >= g.lower_with2.lower());
        } else {
            prop_assert!(r.lower() <= g.upper_no2.upper());
        }
    }

    #[test]
    fn density_is_monotone(a in set_with_one(), b in set_with_one()) {
        prop_assume!(a.is_subset_of(&b));
        let da = density_eq4(&a, 10_000, EPS).unwrap();
        let db = density_eq4(&b, 10_000, EPS).unwrap();
        prop_assert!(da.lower() <= db.upper());
    }

    #[test]
    fn routes_agree_on_random_sets(s in set_with_one()) {
        let e4 = density_eq4(&s, 20_000, EPS).unwrap();
        let e11 = density_eq11(&s, 20_000, EPS).unwrap();
        let e8 = density_eq8_sum_form(&s, 100_000).unwrap();
        prop_assert!(overlap(&e4, &e11));
        prop_assert!(overlap(&e4, &e8));
        prop_assert!(overlap(&e11, &e8));
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}
