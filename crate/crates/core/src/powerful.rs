//! Powerful numbers: enumeration, the two-term counting main term, and the
//! reciprocal tail bound used by the sum-form density route.

use std::sync::OnceLock;

use crate::constants::{powerful_c1, powerful_c2, ZETA_2};
use crate::error::{Error, Result};
use crate::exponent_set::ExponentSet;
use crate::sieve::primes_up_to;

/// Constant `K` in the certified bound `sum_{a > A, a powerful} 1/a <= K / sqrt(A)`.
pub const POWERFUL_TAIL_CONSTANT: f64 = 5.0;

/// Upper end of the enumeration used to validate [`POWERFUL_TAIL_CONSTANT`].
pub const TAIL_VALIDATION_LIMIT: u64 = 100_000_000;

pub fn isqrt(n: u64) -> u64 {
    n.isqrt()
}

pub fn icbrt(n: u64) -> u64 {
    let mut r = (n as f64).cbrt() as u64;
    while r.checked_pow(3).is_none_or(|c| c > n) {
        r -= 1;
    }
    while (r + 1).checked_pow(3).is_some_and(|c| c <= n) {
        r += 1;
    }
    r
}

/// Every powerful number `<= limit` (1 included), in increasing order.
///
/// Generated as `a^2 b^3` with `b` squarefree; that representation is
/// unique, so no deduplication is needed.
pub fn enumerate_powerful(limit: u64) -> Vec<u64> {
    if limit == 0 {
        return Vec::new();
    }
    let bmax = icbrt(limit) as usize;
    let mut squarefree = vec![true; bmax + 1];
    let mut d = 2usize;
    while d * d <= bmax {
        for m in (d * d..=bmax).step_by(d * d) {
            squarefree[m] = false;
        }
        d += 1;
    }
    let mut out = Vec::new();
    for b in 1..=bmax as u64 {
        if !squarefree[b as usize] {
            continue;
        }
        let b3 = b * b * b;
        let amax = isqrt(limit / b3);
        out.extend((1..=amax).map(|a| a * a * b3));
    }
    out.sort_unstable();
    out
}

/// `zeta(3/2)/zeta(3) sqrt(x) + zeta(2/3)/zeta(2) x^(1/3)`.
pub fn powerful_main_term(x: f64) -> f64 {
    powerful_c1() * x.sqrt() + powerful_c2() * x.cbrt()
}

/// A powerful member of `E(S)` with its factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerfulMember {
    pub value: u64,
    pub parts: Vec<(u64, u32)>,
}

impl PowerfulMember {
    pub fn radical(&self) -> u64 {
        self.parts.iter().map(|&(p, _)| p).product()
    }
}

/// Powerful numbers `<= limit` whose exponents all lie in `set`, including 1,
/// in increasing order. Built by depth-first search over prime powers, so the
/// factorizations come for free.
pub fn powerful_members(set: &ExponentSet, limit: u64) -> Vec<PowerfulMember> {
    if limit == 0 {
        return Vec::new();
    }
    let allowed: Vec<u32> = (2..64).filter(|&e| set.contains(e)).collect();
    let primes = primes_up_to(isqrt(limit));
    let mut out = Vec::new();
    let mut stack = Vec::new();
    dfs(&primes, &allowed, limit, 0, 1, &mut stack, &mut out);
    out.sort_unstable_by_key(|m| m.value);
    out
}

fn dfs(
    primes: &[u64],
    allowed: &[u32],
    limit: u64,
    from: usize,
    current: u64,
    stack: &mut Vec<(u64, u32)>,
    out: &mut Vec<PowerfulMember>,
) {
    out.push(PowerfulMember {
        value: current,
        parts: stack.clone(),
    });
    let room = limit / current;
    for (i, &p) in primes.iter().enumerate().skip(from) {
        if p * p > room {
            break;
        }
        let mut pe = p * p;
        let mut e = 2;
        for &want in allowed {
            while e < want {
                match pe.checked_mul(p) {
                    Some(v) if v <= room => pe = v,
                    _ => break,
                }
                e += 1;
            }
            if e != want || pe > room {
                break;
            }
            stack.push((p, e));
            dfs(primes, allowed, limit, i + 1, current * pe, stack, out);
            stack.pop();
        }
    }
}

/// Rigorous upper bound on `sum_{a > A, a powerful} 1/a`.
///
/// Writes `a = m^2 b^3` and bounds, for each `b`, the tail
/// `sum_{m > sqrt(A / b^3)} m^{-2}` by `1/m0 + 1/m0^2` with `m0` the first
/// admissible `m` (or by `zeta(2)` when every `m` is admissible). `b` is not
/// restricted to squarefree values, which only loosens the bound.
pub fn powerful_reciprocal_tail_bound(a_limit: u64) -> f64 {
    let a = a_limit.max(1) as f64;
    let zeta2 = ZETA_2.0 * (1.0 + 1e-15);
    let bmax = icbrt(a_limit.max(1)) + 1;
    let mut total = 0.0;
    for b in 1..=bmax {
        let b3 = (b as f64).powi(3);
        let y = (a / b3).sqrt();
        let inner = if y < 1.0 {
            zeta2
        } else {
            let m0 = y.floor() + 1.0;
            1.0 / m0 + 1.0 / (m0 * m0)
        };
        total += inner / b3;
    }
    // b > bmax: every m is admissible; sum_{b > B} b^-3 <= 1/(2 B^2)
    let bf = bmax as f64;
    total += zeta2 / (2.0 * bf * bf);
    total * (1.0 + 1e-12)
}

/// Checks that `K / sqrt(A)` dominates the powerful reciprocal tail, both
/// against the exact partial sums of an enumeration up to
/// [`TAIL_VALIDATION_LIMIT`] (closed off by the analytic bound beyond it) and
/// against the analytic bound at the enumeration limit. The outcome is
/// cached.
pub fn validate_tail_constant() -> Result<()> {
    static OUTCOME: OnceLock<Result<()>> = OnceLock::new();
    OUTCOME
        .get_or_init(|| validate_tail_constant_up_to(TAIL_VALIDATION_LIMIT, POWERFUL_TAIL_CONSTANT))
        .clone()
}

pub(crate) fn validate_tail_constant_up_to(limit: u64, constant: f64) -> Result<()> {
    let powerful = enumerate_powerful(limit);
    let beyond = powerful_reciprocal_tail_bound(limit);
    if beyond > constant / (limit as f64).sqrt() {
        return Err(Error::TailValidation(format!(
            "analytic tail at {limit} is {beyond:e}, above {constant}/sqrt({limit})"
        )));
    }
    // The tail is constant on each gap between consecutive powerful numbers
    // while K/sqrt(A) decreases, so each step is checked at its right end,
    // A = a - 1, where the tail still includes 1/a.
    let mut suffix = beyond;
    for &a in powerful.iter().rev() {
        let with_a = suffix + 1.0 / a as f64;
        let at = (a - 1).max(1) as f64;
        if a > 1 && with_a > constant / at.sqrt() {
            return Err(Error::TailValidation(format!(
                "partial tail beyond {} is {with_a:e}, above {constant}/sqrt",
                a - 1
            )));
        }
        suffix = with_a;
    }
    Ok(())
}
