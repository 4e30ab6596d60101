//! Exponentially S-numbers: integers all of whose prime exponents lie in a
//! prescribed set `S`.
//!
//! The crate counts them exactly with a smallest-prime-factor sieve, computes
//! their natural density by three independent routes with certified
//! truncation bounds, and provides the harness that checks exact counts
//! against the asymptotic main terms.

pub mod constants;
pub mod density;
pub mod error;
pub mod exponent_set;
pub mod powerful;
pub mod sieve;
pub mod verify;

pub use constants::{constants_fingerprint, lemma_constants, LemmaConstants};
pub use density::{
    density_eq11, density_eq4, density_eq8_sum_form, density_per_prime, density_to_tolerance,
    density_zero_branch, gap_interval, radical_class_sum, BoundedValue, DensityResult,
    GapInterval, Route,
};
pub use error::{Error, ParseError, Result};
pub use exponent_set::{
    family_set, format_exponent_set, parse_exponent_set, ExponentSet, PerPrimeFamily, SetKind,
};
pub use powerful::{enumerate_powerful, powerful_main_term};
pub use sieve::{br_main_term, Factorization, FactorSieve, Lemma1Check, DEFAULT_SIEVE_CAP};
pub use verify::{
    audit_lemma1, count_via_decomposition, envelope, verify_density, verify_powerful_asymptotic,
    CountReport, DecompositionCounter, Lemma1Audit, PowerfulRow,
};
