//! Smallest-prime-factor sieve and the exact counts built on it.

use serde::Serialize;

use crate::constants::{lemma_constants, six_over_pi_sq};
use crate::error::{check_range, Error, Result};
use crate::exponent_set::ExponentSet;

/// Default memory cap on the sieve limit.
pub const DEFAULT_SIEVE_CAP: u64 = 100_000_000;

/// Prime-exponent list of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub n: u64,
    /// `(prime, exponent)` with strictly increasing primes.
    pub parts: Vec<(u64, u32)>,
}

impl Factorization {
    /// Product of the distinct primes; 1 for `n = 1`.
    pub fn radical(&self) -> u64 {
        self.parts.iter().map(|&(p, _)| p).product()
    }

    pub fn is_squarefree(&self) -> bool {
        self.parts.iter().all(|&(_, e)| e == 1)
    }

    /// Recombines the parts; equals `n`.
    pub fn value(&self) -> u64 {
        self.parts.iter().map(|&(p, e)| p.pow(e)).product()
    }
}

/// Factorization by trial division, for moduli that may exceed the sieve.
pub fn trial_factorize(n: u64) -> Factorization {
    let mut parts = Vec::new();
    let mut m = n;
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            let mut e = 0;
            while m % d == 0 {
                m /= d;
                e += 1;
            }
            parts.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        parts.push((m, 1));
    }
    Factorization { n, parts }
}

fn squarefree_primes(r: u64) -> Result<Vec<u64>> {
    if r == 0 {
        return Err(Error::NotSquarefree(0));
    }
    let f = trial_factorize(r);
    if !f.is_squarefree() {
        return Err(Error::NotSquarefree(r));
    }
    Ok(f.parts.into_iter().map(|(p, _)| p).collect())
}

/// All primes `<= limit`, by a plain sieve of Eratosthenes over odd numbers.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    // index i represents 2i + 1
    let mut composite = vec![false; n / 2 + 1];
    let mut i = 3usize;
    while i * i <= n {
        if !composite[i / 2] {
            let mut j = i * i;
            while j <= n {
                composite[j / 2] = true;
                j += 2 * i;
            }
        }
        i += 2;
    }
    let mut primes = Vec::with_capacity(((limit as f64) / (limit as f64).ln() * 1.2) as usize + 8);
    primes.push(2);
    primes.extend(
        (1..composite.len())
            .filter(|&k| !composite[k] && 2 * k < n)
            .map(|k| (2 * k + 1) as u64),
    );
    primes
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    if count == 0 {
        return Vec::new();
    }
    let n = count.max(6) as f64;
    // p_n < n (ln n + ln ln n) for n >= 6
    let bound = (n * (n.ln() + n.ln().ln())).ceil() as u64;
    let mut p = primes_up_to(bound);
    p.truncate(count);
    p
}

/// Smallest-prime-factor table for every `n <= limit`.
#[derive(Debug, Clone)]
pub struct FactorSieve {
    limit: u64,
    /// `spf[n]` for `n >= 2`; `spf[0] = 0`, `spf[1] = 1`.
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl FactorSieve {
    /// Builds a sieve under [`DEFAULT_SIEVE_CAP`].
    pub fn new(limit: u64) -> Result<Self> {
        Self::with_cap(limit, DEFAULT_SIEVE_CAP)
    }

    /// Linear sieve: every composite is struck exactly once, by its smallest
    /// prime factor.
    pub fn with_cap(limit: u64, cap: u64) -> Result<Self> {
        if limit > cap {
            return Err(Error::SieveCap {
                requested: limit,
                cap,
            });
        }
        check_range(limit, 2, u32::MAX as u64)?;
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        spf[1] = 1;
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let lp = spf[i];
            for &p in &primes {
                let m = i * p as usize;
                if p > lp || m > n {
                    break;
                }
                spf[m] = p;
            }
        }
        Ok(Self { limit, spf, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Primes `<= limit` in increasing order.
    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn smallest_prime_factor(&self, n: u64) -> Option<u64> {
        (n >= 2 && n <= self.limit).then(|| self.spf[n as usize] as u64)
    }

    fn check(&self, n: u64) -> Result<()> {
        check_range(n, 1, self.limit)
    }

    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        self.check(n)?;
        let mut parts = Vec::new();
        self.for_each_part(n as u32, |p, e| {
            parts.push((p as u64, e));
            true
        });
        Ok(Factorization { n, parts })
    }

    /// Walks `(prime, exponent)` pairs of `n` until `f` returns false.
    /// Returns whether the walk completed.
    #[inline]
    fn for_each_part(&self, mut n: u32, mut f: impl FnMut(u32, u32) -> bool) -> bool {
        while n > 1 {
            let p = self.spf[n as usize];
            let mut e = 0;
            while self.spf[n as usize] == p {
                n /= p;
                e += 1;
            }
            if !f(p, e) {
                return false;
            }
        }
        true
    }

    #[inline]
    fn is_squarefree_unchecked(&self, mut n: u32) -> bool {
        while n > 1 {
            let p = self.spf[n as usize];
            n /= p;
            if self.spf[n as usize] == p {
                return false;
            }
        }
        true
    }

    /// Whether every exponent of `n` lies in `set`. Always true for `n = 1`.
    pub fn is_member(&self, n: u64, set: &ExponentSet) -> Result<bool> {
        self.check(n)?;
        let table = MembershipTable::new(set);
        Ok(self.for_each_part(n as u32, |_, e| table.contains(e)))
    }

    /// Exact `#{n <= x : n in E(S)}`.
    pub fn count_members(&self, x: u64, set: &ExponentSet) -> Result<u64> {
        Ok(self.count_members_at(&[x], set)?[0])
    }

    /// Counts at several checkpoints in one sweep over `1..=max(xs)`. The
    /// result is in the order of `xs`.
    pub fn count_members_at(&self, xs: &[u64], set: &ExponentSet) -> Result<Vec<u64>> {
        let table = MembershipTable::new(set);
        self.sweep_counts(xs, |n| self.for_each_part(n, |_, e| table.contains(e)))
    }

    /// Exact `b_r(x) = #{n <= x : n squarefree, gcd(n, r) = 1}`.
    pub fn count_squarefree_coprime(&self, x: u64, r: u64) -> Result<u64> {
        Ok(self.count_squarefree_coprime_at(&[x], r)?[0])
    }

    /// `b_r` at several checkpoints in one sweep.
    pub fn count_squarefree_coprime_at(&self, xs: &[u64], r: u64) -> Result<Vec<u64>> {
        let rp = squarefree_primes(r)?;
        self.sweep_counts(xs, |n| {
            rp.iter().all(|&p| n as u64 % p != 0) && self.is_squarefree_unchecked(n)
        })
    }

    /// Table of `b_r(y)` for `0 <= y <= y_max`.
    pub fn squarefree_coprime_prefix(&self, y_max: u64, r: u64) -> Result<Vec<u32>> {
        check_range(y_max, 0, self.limit)?;
        let rp = squarefree_primes(r)?;
        let mut table = Vec::with_capacity(y_max as usize + 1);
        table.push(0u32);
        let mut count = 0u32;
        for n in 1..=y_max as u32 {
            if rp.iter().all(|&p| n as u64 % p != 0) && self.is_squarefree_unchecked(n) {
                count += 1;
            }
            table.push(count);
        }
        Ok(table)
    }

    fn sweep_counts(&self, xs: &[u64], mut pred: impl FnMut(u32) -> bool) -> Result<Vec<u64>> {
        for &x in xs {
            check_range(x, 0, self.limit)?;
        }
        let mut order: Vec<usize> = (0..xs.len()).collect();
        order.sort_by_key(|&i| xs[i]);
        let mut out = vec![0u64; xs.len()];
        let mut count = 0u64;
        let mut n = 0u64;
        for i in order {
            let x = xs[i];
            while n < x {
                n += 1;
                if pred(n as u32) {
                    count += 1;
                }
            }
            out[i] = count;
        }
        Ok(out)
    }

    /// Compares `b_r(x)` with its main term against the explicit bound.
    pub fn check_lemma1_bound(&self, x: u64, r: u64) -> Result<Lemma1Check> {
        Ok(self.check_lemma1_bound_at(&[x], r)?.remove(0))
    }

    pub fn check_lemma1_bound_at(&self, xs: &[u64], r: u64) -> Result<Vec<Lemma1Check>> {
        let counts = self.count_squarefree_coprime_at(xs, r)?;
        xs.iter()
            .zip(counts)
            .map(|(&x, count)| Lemma1Check::new(r, x, count))
            .collect()
    }
}

/// Membership lookup for the exponents that occur below 2^64.
struct MembershipTable([bool; 65]);

impl MembershipTable {
    fn new(set: &ExponentSet) -> Self {
        let mut t = [false; 65];
        for (e, slot) in t.iter_mut().enumerate().skip(1) {
            *slot = set.contains(e as u32);
        }
        Self(t)
    }

    #[inline]
    fn contains(&self, e: u32) -> bool {
        self.0[e as usize]
    }
}

/// `(6/pi^2) x prod_{p | r} p/(p+1)`, the main term of `b_r(x)`.
pub fn br_main_term(x: f64, r: u64) -> Result<f64> {
    let primes = squarefree_primes(r)?;
    let density = primes
        .iter()
        .fold(six_over_pi_sq(), |acc, &p| acc * (p as f64) / ((p + 1) as f64));
    Ok((density * x).hi())
}

/// The remainder bound for `b_r(x)`: `k1 sqrt(x)` for `r = 1`, `k sqrt(x)` up
/// to the primorial cutoff, and `k exp(c sqrt(ln r)/ln ln r) sqrt(x)` above it.
pub fn lemma1_bound(x: f64, r: u64) -> f64 {
    let lc = lemma_constants();
    if r == 1 {
        lc.k1 * x.sqrt()
    } else if r <= lc.n {
        lc.k * x.sqrt()
    } else {
        // r > N >= 16, so ln ln r > 1
        let lr = (r as f64).ln();
        lc.k * (lc.c * lr.sqrt() / lr.ln()).exp() * x.sqrt()
    }
}

/// One row of the remainder audit for coprime squarefree counts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma1Check {
    pub r: u64,
    pub x: u64,
    pub count: u64,
    pub main_term: f64,
    pub residual: f64,
    pub bound: f64,
    pub ok: bool,
}

impl Lemma1Check {
    fn new(r: u64, x: u64, count: u64) -> Result<Self> {
        let main_term = br_main_term(x as f64, r)?;
        let residual = (count as f64 - main_term).abs();
        let bound = lemma1_bound(x as f64, r);
        Ok(Self {
            r,
            x,
            count,
            main_term,
            residual,
            bound,
            ok: residual <= bound,
        })
    }
}
