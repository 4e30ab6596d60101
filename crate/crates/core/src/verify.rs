//! Empirical checks tying exact counts to densities and main terms.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::constants::lemma_constants;
use crate::density::{density_to_tolerance, DensityResult};
use crate::error::{check_range, Error, Result};
use crate::exponent_set::ExponentSet;
use crate::powerful::{enumerate_powerful, powerful_main_term, powerful_members};
use crate::sieve::{FactorSieve, Lemma1Check};

/// Error bound requested for the density used in count reports.
pub const REPORT_DENSITY_TOLERANCE: f64 = 1e-7;

/// `sqrt(x) ln x exp(c sqrt(ln x) / ln ln x)`; requires `x >= 16` so that
/// `ln ln x > 1`.
pub fn envelope(x: f64) -> f64 {
    let c = lemma_constants().c;
    let lx = x.ln();
    x.sqrt() * lx * (c * lx.sqrt() / lx.ln()).exp()
}

/// Exact count at `x` against the density main term.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountReport {
    pub x: u64,
    pub exact_count: u64,
    pub density: DensityResult,
    pub main_term: f64,
    pub residual: f64,
    pub envelope: f64,
    pub normalized_residual: f64,
}

impl CountReport {
    pub fn new(x: u64, exact_count: u64, density: DensityResult) -> Self {
        let main_term = density.value * x as f64;
        let residual = exact_count as f64 - main_term;
        let envelope = envelope(x as f64);
        Self {
            x,
            exact_count,
            density,
            main_term,
            residual,
            envelope,
            normalized_residual: residual.abs() / envelope,
        }
    }
}

/// One report per `x`; the density is computed once to within
/// [`REPORT_DENSITY_TOLERANCE`], or is the exact zero when `1` is not in `S`.
pub fn verify_density(sieve: &FactorSieve, set: &ExponentSet, xs: &[u64]) -> Result<Vec<CountReport>> {
    for &x in xs {
        check_range(x, 16, sieve.limit())?;
    }
    let density = density_to_tolerance(set, REPORT_DENSITY_TOLERANCE)?;
    let counts = sieve.count_members_at(xs, set)?;
    Ok(xs
        .iter()
        .zip(counts)
        .map(|(&x, c)| CountReport::new(x, c, density))
        .collect())
}

/// Counts `E(S) ∩ [1, x]` through the unique factorization `y = a m` with `a`
/// a powerful member of `E(S)` and `m` squarefree and coprime to `a`:
/// `b_1(x) + sum_{a >= 4} b_{rad(a)}(floor(x / a))`. Equal to the direct count.
pub fn count_via_decomposition(sieve: &FactorSieve, x: u64, set: &ExponentSet) -> Result<u64> {
    if !set.contains_one() {
        return Err(Error::MissingOne(set.to_string()));
    }
    check_range(x, 0, sieve.limit())?;
    let mut total = sieve.count_squarefree_coprime(x, 1)?;
    for a in powerful_members(set, x).iter().filter(|m| m.value > 1) {
        total += sieve.count_squarefree_coprime(x / a.value, a.radical())?;
    }
    Ok(total)
}

/// Decomposition counts for every `x <= x_max` from precomputed `b_r` tables,
/// one per radical that occurs.
#[derive(Debug, Clone)]
pub struct DecompositionCounter {
    x_max: u64,
    base: Vec<u32>,
    /// `(a, index into tables)` in increasing `a`.
    members: Vec<(u64, usize)>,
    tables: Vec<Vec<u32>>,
}

impl DecompositionCounter {
    pub fn new(sieve: &FactorSieve, x_max: u64, set: &ExponentSet) -> Result<Self> {
        if !set.contains_one() {
            return Err(Error::MissingOne(set.to_string()));
        }
        check_range(x_max, 1, sieve.limit())?;
        let base = sieve.squarefree_coprime_prefix(x_max, 1)?;
        let powerful: Vec<_> = powerful_members(set, x_max)
            .into_iter()
            .filter(|m| m.value > 1)
            .collect();
        // each table only needs arguments up to x_max / (smallest a with that radical)
        let mut by_radical: BTreeMap<u64, u64> = BTreeMap::new();
        for m in &powerful {
            let e = by_radical.entry(m.radical()).or_insert(m.value);
            *e = (*e).min(m.value);
        }
        let mut index = BTreeMap::new();
        let mut tables = Vec::with_capacity(by_radical.len());
        for (&r, &amin) in &by_radical {
            index.insert(r, tables.len());
            tables.push(sieve.squarefree_coprime_prefix(x_max / amin, r)?);
        }
        let members = powerful.iter().map(|m| (m.value, index[&m.radical()])).collect();
        Ok(Self {
            x_max,
            base,
            members,
            tables,
        })
    }

    pub fn count(&self, x: u64) -> Result<u64> {
        check_range(x, 0, self.x_max)?;
        let mut total = self.base[x as usize] as u64;
        for &(a, t) in self.members.iter().take_while(|&&(a, _)| a <= x) {
            total += self.tables[t][(x / a) as usize] as u64;
        }
        Ok(total)
    }
}

/// The remainder-bound audit over a grid of moduli and arguments.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma1Audit {
    /// Rows in increasing `(r, x)` order.
    pub rows: Vec<Lemma1Check>,
    pub pass: bool,
}

pub fn audit_lemma1(sieve: &FactorSieve, rs: &[u64], xs: &[u64]) -> Result<Lemma1Audit> {
    let mut rs = rs.to_vec();
    rs.sort_unstable();
    rs.dedup();
    let mut xs = xs.to_vec();
    xs.sort_unstable();
    xs.dedup();
    let mut rows = Vec::with_capacity(rs.len() * xs.len());
    for &r in &rs {
        rows.extend(sieve.check_lemma1_bound_at(&xs, r)?);
    }
    let pass = rows.iter().all(|r| r.ok);
    Ok(Lemma1Audit { rows, pass })
}

/// Powerful-number count against the two-term main term.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerfulRow {
    pub x: u64,
    pub count: u64,
    pub main_term: f64,
    pub residual: f64,
    /// `|residual| / x^(1/6)`.
    pub ratio: f64,
}

pub fn verify_powerful_asymptotic(xs: &[u64]) -> Result<Vec<PowerfulRow>> {
    if xs.is_empty() {
        return Err(Error::InvalidArgument("no arguments given".into()));
    }
    for &x in xs {
        check_range(x, 1, u64::MAX)?;
    }
    let all = enumerate_powerful(*xs.iter().max().unwrap());
    Ok(xs
        .iter()
        .map(|&x| {
            let count = all.partition_point(|&a| a <= x) as u64;
            let main_term = powerful_main_term(x as f64);
            let residual = count as f64 - main_term;
            PowerfulRow {
                x,
                count,
                main_term,
                residual,
                ratio: residual.abs() / (x as f64).powf(1.0 / 6.0),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> ExponentSet {
        s.parse().unwrap()
    }

    #[test]
    fn report_examples() {
        let sieve = FactorSieve::new(1000).unwrap();
        let r = verify_density(&sieve, &set("finite:1,2"), &[100]).unwrap();
        assert_eq!(r[0].exact_count, 85);
        assert!((r[0].main_term - 83.190_737_258).abs() < 1e-5);
        assert!((r[0].residual - 1.809_262_742).abs() < 1e-5);
        assert_eq!(r[0].residual, r[0].exact_count as f64 - r[0].main_term);
        assert!(verify_density(&sieve, &set("finite:1"), &[15]).is_err());
        assert!(verify_density(&sieve, &set("finite:1"), &[1001]).is_err());
    }

    #[test]
    fn decomposition_examples() {
        let sieve = FactorSieve::new(1000).unwrap();
        assert_eq!(count_via_decomposition(&sieve, 100, &set("finite:1,2")).unwrap(), 85);
        assert_eq!(count_via_decomposition(&sieve, 10, &set("finite:1")).unwrap(), 7);
        for s in ["finite:1", "squarefree", "all", "upto:3"] {
            assert_eq!(count_via_decomposition(&sieve, 1, &set(s)).unwrap(), 1);
        }
        assert!(count_via_decomposition(&sieve, 10, &set("geq:2")).is_err());
    }

    #[test]
    fn decomposition_counter_matches_direct() {
        let sieve = FactorSieve::new(5000).unwrap();
        for s in ["finite:1,2", "exclude:2", "squarefree", "all"] {
            let s = set(s);
            let dc = DecompositionCounter::new(&sieve, 5000, &s).unwrap();
            for x in [1u64, 2, 3, 4, 99, 100, 2500, 4999, 5000] {
                assert_eq!(dc.count(x).unwrap(), sieve.count_members(x, &s).unwrap());
                assert_eq!(dc.count(x).unwrap(), count_via_decomposition(&sieve, x, &s).unwrap());
            }
        }
    }

    #[test]
    fn audit_examples() {
        let sieve = FactorSieve::new(100_000).unwrap();
        let a = audit_lemma1(&sieve, &[30, 1, 6, 2], &[100_000, 1000]).unwrap();
        assert!(a.pass);
        let order: Vec<(u64, u64)> = a.rows.iter().map(|r| (r.r, r.x)).collect();
        assert_eq!(order[..3], [(1, 1000), (1, 100_000), (2, 1000)]);
        assert_eq!(a.rows.len(), 8);
        assert_eq!(audit_lemma1(&sieve, &[4], &[100]), Err(Error::NotSquarefree(4)));
        let empty = audit_lemma1(&sieve, &[], &[]).unwrap();
        assert!(empty.rows.is_empty() && empty.pass);
    }

    #[test]
    fn powerful_rows() {
        let rows = verify_powerful_asymptotic(&[100, 1, 1_000_000]).unwrap();
        assert_eq!(rows[0].count, 14);
        assert_eq!(rows[1].count, 1);
        assert!((rows[2].main_term - 2024.4592).abs() < 1e-3);
        assert!(verify_powerful_asymptotic(&[]).is_err());
        assert!(verify_powerful_asymptotic(&[0]).is_err());
    }

    #[test]
    fn envelope_is_positive_from_sixteen() {
        assert!(envelope(16.0) > 0.0);
        assert!(envelope(1e6) > envelope(1e4));
    }
}
