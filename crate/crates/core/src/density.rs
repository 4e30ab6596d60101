//! Natural density of `E(S)` with certified truncation bounds.
//!
//! Three independent routes compute the same number:
//!
//! * the characteristic-function Euler product
//!   `prod_p (1 + sum_{i>=2} (u(i) - u(i-1)) p^-i)`,
//! * the intermediate product
//!   `6/pi^2 prod_p (1 + (1 - 1/(p+1)) sum_{i>=2} p^-s(i))`,
//! * the sum over powerful members `a` of `E(S)`,
//!   `6/pi^2 sum_a prod_{p | a} (1 - 1/(p+1)) / a`.
//!
//! Products are accumulated in double-double arithmetic (about 106
//! significand bits) in increasing prime order, so results are
//! bit-reproducible. Every [`DensityResult`] carries an absolute error bound
//! that covers the prime tail, the truncated inner sums, and accumulated
//! rounding.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use twofloat::TwoFloat;

use crate::constants::six_over_pi_sq;
use crate::error::{Error, Result};
use crate::exponent_set::{ExponentSet, PerPrimeFamily};
use crate::powerful::{
    isqrt, powerful_members, powerful_reciprocal_tail_bound, validate_tail_constant,
    POWERFUL_TAIL_CONSTANT,
};
use crate::sieve::{first_primes, primes_up_to, trial_factorize};

/// Default per-product budget for truncated inner sums.
pub const DEFAULT_EPS: f64 = 1e-12;

/// Relative rounding allowance charged per double-double operation.
const ROUNDING_PER_OP: f64 = 1.0 / (1u128 << 100) as f64;

/// Which formula produced a density value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Route {
    /// Characteristic-function Euler product.
    #[serde(rename = "eq4")]
    CharacteristicProduct,
    /// `6/pi^2` times the product over radical classes.
    #[serde(rename = "eq11")]
    IntermediateProduct,
    /// Sum over powerful members.
    #[serde(rename = "eq8")]
    PowerfulSum,
    /// Characteristic product with a per-prime exponent set.
    #[serde(rename = "eq13")]
    PerPrimeProduct,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::CharacteristicProduct => "eq4",
            Route::IntermediateProduct => "eq11",
            Route::PowerfulSum => "eq8",
            Route::PerPrimeProduct => "eq13",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eq4" => Ok(Route::CharacteristicProduct),
            "eq11" => Ok(Route::IntermediateProduct),
            "eq8" => Ok(Route::PowerfulSum),
            "eq13" => Ok(Route::PerPrimeProduct),
            _ => Err(Error::InvalidArgument(format!("unknown route {s:?}"))),
        }
    }
}

/// A density value with a certified absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityResult {
    pub value: f64,
    pub error_bound: f64,
    /// Largest prime (or prime bound) included in the product.
    pub prime_limit: u64,
    /// Deepest exponent index summed for any prime.
    pub exponent_depth: u32,
    /// Upper limit on the summation variable for the powerful-sum route.
    pub sum_limit: Option<u64>,
    pub route: Route,
}

impl DensityResult {
    pub fn lower(&self) -> f64 {
        self.value - self.error_bound
    }

    pub fn upper(&self) -> f64 {
        self.value + self.error_bound
    }

    /// Whether the two certified intervals overlap.
    pub fn intersects(&self, other: &DensityResult) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }
}

/// A truncated sum with an absolute bound on the omitted part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundedValue {
    pub value: f64,
    pub tail_bound: f64,
}

/// Inner truncation depth `I(p) = max(2, ceil(ln(2 n / eps) / ln p))` where
/// `n` is the number of factors, so each omitted geometric tail is at most
/// `eps / (2 n)`.
#[derive(Debug, Clone, Copy)]
struct DepthPolicy {
    log_target: f64,
}

impl DepthPolicy {
    fn new(factors: usize, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidArgument(format!("eps must lie in (0, 1), got {eps}")));
        }
        Ok(Self {
            log_target: (2.0 * factors.max(1) as f64 / eps).ln(),
        })
    }

    fn depth(&self, p: u64) -> u32 {
        ((self.log_target / (p as f64).ln()).ceil() as u32).max(2)
    }
}

/// One truncated Euler factor.
#[derive(Debug, Clone, Copy)]
struct Factor {
    value: TwoFloat,
    /// Relative bound on the omitted part of this factor.
    rel_tail: f64,
    depth: u32,
    ops: u32,
}

/// `sum_{i > depth} p^-i = p^-depth / (p - 1)`, rounded up.
fn geometric_tail(p: u64, depth: u32) -> f64 {
    let pf = p as f64;
    (-(depth as f64) * pf.ln()).exp() / (pf - 1.0) * (1.0 + 1e-12)
}

fn recip(p: u64) -> TwoFloat {
    TwoFloat::new_div(1.0, p as f64)
}

/// `1 + sum_{i=2}^{I} (u(i) - u(i-1)) p^-i`, exact when `u` is constant
/// beyond `I`.
fn characteristic_factor(set: &ExponentSet, diffs: &[i8], p: u64, policy: &DepthPolicy) -> Factor {
    let ip = policy.depth(p);
    let (end, truncated) = match set.stable_from() {
        Some((m, _)) if m <= ip => (m, false),
        _ => (ip, true),
    };
    let inv = recip(p);
    let mut pw = inv * inv;
    let mut t = TwoFloat::from(0.0);
    let mut ops = 1;
    for i in 2..=end {
        let d = diffs.get(i as usize).copied().unwrap_or_else(|| (set.u(i) - set.u(i - 1)) as i8);
        match d {
            1 => t += pw,
            -1 => t -= pw,
            _ => {}
        }
        pw *= inv;
        ops += 2;
    }
    let value = t + 1.0;
    let rel_tail = if truncated {
        let tau = geometric_tail(p, end);
        let v = value.hi();
        tau / (v - tau)
    } else {
        0.0
    };
    Factor {
        value,
        rel_tail,
        depth: end,
        ops: ops + 1,
    }
}

fn difference_table(set: &ExponentSet, max_depth: u32) -> Vec<i8> {
    let end = match set.stable_from() {
        Some((m, _)) => m.min(max_depth),
        None => max_depth,
    };
    let mut v = vec![0i8; end as usize + 1];
    for i in 2..=end {
        v[i as usize] = (set.u(i) - set.u(i - 1)) as i8;
    }
    v
}

/// `1 + (1 - 1/(p+1)) sum_{i>=2} p^-s(i)`.
fn intermediate_factor(set: &ExponentSet, members: &[bool], p: u64, policy: &DepthPolicy) -> Factor {
    let ip = policy.depth(p);
    let stable = set.stable_from();
    let (end, closed_tail, truncated) = match stable {
        Some((m, full)) if m <= ip => (m.max(2) - 1, full, false),
        _ => (ip, false, true),
    };
    let inv = recip(p);
    let mut pw = inv * inv;
    let mut g = TwoFloat::from(0.0);
    let mut ops = 1;
    for e in 2..=end {
        let member = members.get(e as usize).copied().unwrap_or_else(|| set.contains(e));
        if member {
            g += pw;
        }
        pw *= inv;
        ops += 2;
    }
    if closed_tail {
        // pw = p^-max(m, 2); everything from there on is in S. Divides by an
        // f64 only: twofloat's dd/dd quotient is good to ~2^-55, not 2^-100.
        g += pw * p as f64 / (p - 1) as f64;
        ops += 3;
    }
    let weight = -recip(p + 1) + 1.0;
    let value = weight * g + 1.0;
    let rel_tail = if truncated {
        let tau = geometric_tail(p, end) * weight.hi();
        tau / value.hi()
    } else {
        0.0
    };
    Factor {
        value,
        rel_tail,
        depth: end,
        ops: ops + 4,
    }
}

fn membership_table(set: &ExponentSet, max_depth: u32) -> Vec<bool> {
    let end = match set.stable_from() {
        Some((m, _)) => m.min(max_depth),
        None => max_depth,
    };
    (0..=end).map(|e| set.contains(e)).collect()
}

/// `sum_{p > P} |log(factor_p)|` when every omitted factor deviates from 1
/// by at most `sum_{i >= d} p^-i`: bounded by `(P+1)^(2-d) / P` and
/// corrected for the logarithm of a factor below 1.
fn outer_tail(first_change: Option<u32>, prime_limit: u64) -> f64 {
    let Some(d) = first_change else {
        return 0.0;
    };
    let pl = prime_limit as f64;
    let sum = (pl + 1.0).powi(2 - d as i32) / pl;
    sum / (1.0 - 1.0 / (pl * (pl + 1.0))) * (1.0 + 1e-12)
}

/// Combines the accumulated product with its relative error sources into a
/// certified absolute bound.
fn certify(product: TwoFloat, log_error: f64, ops: u64) -> (f64, f64) {
    let value = product.hi();
    let rounding = ops as f64 * ROUNDING_PER_OP;
    let bound = value.abs() * (log_error + rounding).exp_m1() * (1.0 + 1e-12)
        + product.lo().abs()
        + f64::EPSILON * value.abs() * 1e-3;
    (value, bound)
}

fn require_one(set: &ExponentSet) -> Result<()> {
    if set.contains_one() {
        Ok(())
    } else {
        Err(Error::MissingOne(set.to_string()))
    }
}

fn require_prime_limit(prime_limit: u64) -> Result<()> {
    if prime_limit < 2 {
        return Err(Error::OutOfRange {
            value: prime_limit,
            min: 2,
            max: u64::MAX,
        });
    }
    Ok(())
}

/// Density via the characteristic-function Euler product over `p <= prime_limit`.
pub fn density_eq4(set: &ExponentSet, prime_limit: u64, eps: f64) -> Result<DensityResult> {
    require_one(set)?;
    require_prime_limit(prime_limit)?;
    let primes = primes_up_to(prime_limit);
    let policy = DepthPolicy::new(primes.len(), eps)?;
    let diffs = difference_table(set, policy.depth(2));

    let mut product = TwoFloat::from(1.0);
    let mut inner = 0.0;
    let mut ops = 0u64;
    let mut depth = 0;
    for &p in &primes {
        let f = characteristic_factor(set, &diffs, p, &policy);
        product *= f.value;
        inner += f.rel_tail / (1.0 - f.rel_tail);
        ops += f.ops as u64 + 1;
        depth = depth.max(f.depth);
    }
    let log_error = inner + outer_tail(set.first_change(), prime_limit);
    let (value, error_bound) = certify(product, log_error, ops);
    Ok(DensityResult {
        value,
        error_bound,
        prime_limit,
        exponent_depth: depth,
        sum_limit: None,
        route: Route::CharacteristicProduct,
    })
}

/// Density via `6/pi^2 prod_p (1 + (1 - 1/(p+1)) sum_{i>=2} p^-s(i))`.
pub fn density_eq11(set: &ExponentSet, prime_limit: u64, eps: f64) -> Result<DensityResult> {
    require_one(set)?;
    require_prime_limit(prime_limit)?;
    let primes = primes_up_to(prime_limit);
    let policy = DepthPolicy::new(primes.len(), eps)?;
    let members = membership_table(set, policy.depth(2));

    let mut product = six_over_pi_sq();
    let mut inner = 0.0;
    let mut ops = 0u64;
    let mut depth = 0;
    for &p in &primes {
        let f = intermediate_factor(set, &members, p, &policy);
        product *= f.value;
        inner += f.rel_tail / (1.0 - f.rel_tail);
        ops += f.ops as u64 + 1;
        depth = depth.max(f.depth);
    }
    // Omitted factors exceed 1 by at most p^(2-m) / ((p+1)(p-1)) where m is
    // the least element above 1.
    let outer = match set.min_element_above_one() {
        None => 0.0,
        Some(m) => {
            let pl = prime_limit as f64;
            (pl + 1.0).powi(2 - m as i32) / pl * (1.0 + 1e-12)
        }
    };
    let (value, error_bound) = certify(product, inner + outer, ops);
    Ok(DensityResult {
        value,
        error_bound,
        prime_limit,
        exponent_depth: depth,
        sum_limit: None,
        route: Route::IntermediateProduct,
    })
}

/// Density via the sum over powerful members `a <= a_limit` of `E(S)`.
pub fn density_eq8_sum_form(set: &ExponentSet, a_limit: u64) -> Result<DensityResult> {
    require_one(set)?;
    if a_limit < 1 {
        return Err(Error::OutOfRange {
            value: a_limit,
            min: 1,
            max: u64::MAX,
        });
    }
    let members = powerful_members(set, a_limit);
    let mut sum = TwoFloat::from(0.0);
    let mut ops = 0u64;
    let mut depth = 0;
    for m in &members {
        let mut term = recip(m.value);
        for &(p, e) in &m.parts {
            term *= -recip(p + 1) + 1.0;
            depth = depth.max(e);
        }
        sum += term;
        ops += 3 * m.parts.len() as u64 + 2;
    }
    let c = six_over_pi_sq();
    let total = c * sum;
    let tail = if set.min_element_above_one().is_none() {
        // no exponent above 1 is allowed: the only powerful member is 1
        0.0
    } else {
        validate_tail_constant()?;
        let scaled = POWERFUL_TAIL_CONSTANT / (a_limit as f64).sqrt();
        if a_limit > crate::powerful::TAIL_VALIDATION_LIMIT
            && powerful_reciprocal_tail_bound(a_limit) > scaled
        {
            return Err(Error::TailValidation(format!(
                "analytic tail at {a_limit} exceeds {POWERFUL_TAIL_CONSTANT}/sqrt(A)"
            )));
        }
        c.hi() * scaled * (1.0 + 1e-12)
    };
    let value = total.hi();
    let rounding = value * (ops as f64 + 4.0) * ROUNDING_PER_OP + total.lo().abs();
    Ok(DensityResult {
        value,
        error_bound: tail + rounding,
        prime_limit: isqrt(a_limit),
        exponent_depth: depth,
        sum_limit: Some(a_limit),
        route: Route::PowerfulSum,
    })
}

/// The density of `E(S)` when `1` is not in `S`: exactly zero.
pub fn density_zero_branch(set: &ExponentSet) -> Result<DensityResult> {
    if set.contains_one() {
        return Err(Error::ContainsOne(set.to_string()));
    }
    Ok(DensityResult {
        value: 0.0,
        error_bound: 0.0,
        prime_limit: 0,
        exponent_depth: 0,
        sum_limit: None,
        route: Route::CharacteristicProduct,
    })
}

/// `A(l) = sum over powerful members a of E(S) with radical l of 1/a`,
/// computed as the product over `p | l` of `sum_{2 <= s(i) <= depth} p^-s(i)`.
pub fn radical_class_sum(set: &ExponentSet, l: u64, depth: u32) -> Result<BoundedValue> {
    if l == 0 {
        return Err(Error::NotSquarefree(0));
    }
    let f = trial_factorize(l);
    if !f.is_squarefree() {
        return Err(Error::NotSquarefree(l));
    }
    let has_more = match set.stable_from() {
        Some((m, full)) => full || m.saturating_sub(1) > depth,
        None => true,
    };
    let mut value = TwoFloat::from(1.0);
    let mut upper = 1.0f64;
    for &(p, _) in &f.parts {
        let inv = recip(p);
        let mut pw = inv * inv;
        let mut sum = TwoFloat::from(0.0);
        for e in 2..=depth {
            if set.contains(e) {
                sum += pw;
            }
            pw *= inv;
        }
        let tau = if has_more { geometric_tail(p, depth.max(1)) } else { 0.0 };
        upper *= sum.hi() + tau;
        value *= sum;
    }
    let v = value.hi();
    let tail_bound = if has_more && !f.parts.is_empty() {
        ((upper - v) * (1.0 + 1e-12)).max(0.0)
    } else {
        0.0
    };
    Ok(BoundedValue {
        value: v,
        tail_bound,
    })
}

/// Density of `E(A)` for a per-prime family: the product of the first
/// `term_limit` factors plus a certified bound on the rest.
pub fn density_per_prime(family: &PerPrimeFamily, term_limit: u64) -> Result<DensityResult> {
    if term_limit < 1 {
        return Err(Error::OutOfRange {
            value: term_limit,
            min: 1,
            max: u64::MAX,
        });
    }
    if let PerPrimeFamily::List { sets, default } = family {
        for s in sets.iter().chain(std::iter::once(default)) {
            require_one(s)?;
        }
    }
    let t = usize::try_from(term_limit).map_err(|_| Error::InvalidArgument("too many terms".into()))?;
    let primes = first_primes(t + 1);
    let policy = DepthPolicy::new(t, DEFAULT_EPS)?;

    let mut product = TwoFloat::from(1.0);
    let mut inner = 0.0;
    let mut ops = 0u64;
    let mut depth = 0;
    for (n, &p) in primes[..t].iter().enumerate() {
        let set = family.set_for(n as u64 + 1);
        let f = characteristic_factor(&set, &[], p, &policy);
        product *= f.value;
        inner += f.rel_tail / (1.0 - f.rel_tail);
        ops += f.ops as u64 + 1;
        depth = depth.max(f.depth);
    }
    let p_last = primes[t - 1];
    let outer = match family {
        PerPrimeFamily::Prefix => {
            // factor n deviates from 1 by at most p_n^-n / (p_n - 1); with
            // p_n >= q = p_{T+1} the tail is a geometric series in 1/q
            let q = primes[t] as f64;
            let sum = (-(term_limit as f64 + 1.0) * q.ln()).exp() / ((q - 1.0) * (1.0 - 1.0 / q));
            sum / (1.0 - 1.0 / (q * (q - 1.0))) * (1.0 + 1e-12)
        }
        PerPrimeFamily::List { sets, default } => {
            let d = sets
                .iter()
                .skip(t)
                .chain(std::iter::once(default))
                .filter_map(ExponentSet::first_change)
                .min();
            outer_tail(d, p_last)
        }
    };
    let (value, error_bound) = certify(product, inner + outer, ops);
    Ok(DensityResult {
        value,
        error_bound,
        prime_limit: p_last,
        exponent_depth: depth,
        sum_limit: None,
        route: Route::PerPrimeProduct,
    })
}

/// The two products bracketing the gap in the set of densities: sets
/// without 2 have density at most `prod_p (1 - (p-1)/p^3)`, sets with 2 at
/// least `prod_p (1 - 1/p^3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapInterval {
    pub upper_no2: DensityResult,
    pub lower_with2: DensityResult,
    /// Whether the certified intervals are disjoint and ordered.
    pub certified: bool,
}

pub fn gap_interval(prime_limit: u64) -> Result<GapInterval> {
    require_prime_limit(prime_limit)?;
    let without_two = ExponentSet::cofinite([2])?;
    let with_two = ExponentSet::finite([1, 2])?;
    let upper_no2 = density_eq4(&without_two, prime_limit, DEFAULT_EPS)?;
    let lower_with2 = density_eq4(&with_two, prime_limit, DEFAULT_EPS)?;
    Ok(GapInterval {
        upper_no2,
        lower_with2,
        certified: upper_no2.upper() < lower_with2.lower(),
    })
}

/// The density of `E(S)` with an error bound at most `tolerance`, choosing
/// the prime limit automatically. Sets without 1 take the zero branch.
pub fn density_to_tolerance(set: &ExponentSet, tolerance: f64) -> Result<DensityResult> {
    if !set.contains_one() {
        return density_zero_branch(set);
    }
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tolerance}")));
    }
    let d = set.first_change();
    let eps = (tolerance / 100.0).min(DEFAULT_EPS);
    let mut p = 1000u64;
    loop {
        if outer_tail(d, p).exp_m1() <= tolerance * 0.9 || p >= 1 << 33 {
            let r = density_eq4(set, p, eps)?;
            if r.error_bound <= tolerance || p >= 1 << 33 {
                return Ok(r);
            }
        }
        p *= 2;
    }
}
