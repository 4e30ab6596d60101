//! Embedded analytic constants.
//!
//! Zeta values were computed to 50 digits with an independent
//! arbitrary-precision evaluator and stored as unevaluated double-double
//! pairs `(hi, lo)`; `hi` alone carries 16 correct digits. The tests recheck
//! them against an Euler–Maclaurin evaluation.

use std::sync::OnceLock;

use sha2::{Digest, Sha256};
use twofloat::TwoFloat;

/// zeta(3/2) = 2.6123753486854883433485675679...
pub const ZETA_3_2: (f64, f64) = (2.612375348685488, 1.9109248306373604e-16);
/// zeta(3) = 1.2020569031595942853997381615...
pub const ZETA_3: (f64, f64) = (1.2020569031595942, 4.875891010379532e-17);
/// zeta(2/3) = -2.4475807362336582310909957042... (negative: the continuation
/// is below the pole at 1).
pub const ZETA_2_3: (f64, f64) = (-2.4475807362336583, 1.183856316318935e-16);
/// zeta(2) = pi^2 / 6.
pub const ZETA_2: (f64, f64) = (1.6449340668482264, 3.040672350398476e-17);
/// 6 / pi^2 = 0.6079271018540266286632767792...
pub const SIX_OVER_PI_SQ: (f64, f64) = (0.6079271018540267, -2.379773927663665e-17);

/// The largest modulus for which the flat `k sqrt(x)` remainder bound on
/// coprime squarefree counts applies (one less than the primorial 29#).
pub const LEMMA_N: u64 = 6_469_693_229;

/// Leading constant used for `r = 1`.
pub const LEMMA_K1: f64 = 3.5;

pub(crate) fn dd((hi, lo): (f64, f64)) -> TwoFloat {
    TwoFloat::new_add(hi, lo)
}

pub fn six_over_pi_sq() -> TwoFloat {
    dd(SIX_OVER_PI_SQ)
}

/// zeta(3/2) / zeta(3), the leading coefficient of the powerful-number count.
pub fn powerful_c1() -> f64 {
    (dd(ZETA_3_2) / dd(ZETA_3)).hi()
}

/// zeta(2/3) / zeta(2), the (negative) second coefficient.
pub fn powerful_c2() -> f64 {
    (dd(ZETA_2_3) / dd(ZETA_2)).hi()
}

/// Constants of the explicit remainder bound for coprime squarefree counts.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LemmaConstants {
    /// `3.5 * prod_{2 <= p <= 23} (1 + 1/sqrt(p))`.
    pub k: f64,
    /// `4 * sqrt(2.4 / log 2)`.
    pub c: f64,
    pub n: u64,
    /// `k` in the `r = 1` case.
    pub k1: f64,
}

impl LemmaConstants {
    pub fn compute() -> Self {
        let k = [2.0f64, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0, 23.0]
            .iter()
            .fold(LEMMA_K1, |acc, p| acc * (1.0 + 1.0 / p.sqrt()));
        let c = 4.0 * (2.4 / std::f64::consts::LN_2).sqrt();
        Self {
            k,
            c,
            n: LEMMA_N,
            k1: LEMMA_K1,
        }
    }
}

pub fn lemma_constants() -> &'static LemmaConstants {
    static CONSTANTS: OnceLock<LemmaConstants> = OnceLock::new();
    CONSTANTS.get_or_init(LemmaConstants::compute)
}

/// Hex SHA-256 over the bit patterns of every embedded constant.
pub fn constants_fingerprint() -> String {
    let lc = lemma_constants();
    let mut h = Sha256::new();
    for (hi, lo) in [ZETA_3_2, ZETA_3, ZETA_2_3, ZETA_2, SIX_OVER_PI_SQ] {
        h.update(hi.to_bits().to_le_bytes());
        h.update(lo.to_bits().to_le_bytes());
    }
    for v in [lc.k, lc.c, lc.k1] {
        h.update(v.to_bits().to_le_bytes());
    }
    h.update(lc.n.to_le_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}
