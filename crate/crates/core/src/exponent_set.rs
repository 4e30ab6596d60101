//! Exponent sets and per-prime families of exponent sets.
//!
//! An [`ExponentSet`] is a set `S` of positive integers with a total
//! characteristic function `u(n)`. Only finitely describable sets are
//! representable, which is what lets the density routes attach certified
//! truncation bounds: every kind except [`SetKind::SquarefreeExponents`] is
//! constant from some index on.
//!
//! Textual grammar (ASCII, case-sensitive):
//!
//! ```text
//! set    := "finite:" ints | "exclude:" ints | "upto:" int | "all" | "geq:" int | "squarefree"
//! ints   := int ("," int)*
//! family := "prefix" | "list:" set (";" set)* ":default:" set
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, ParseError, Result};

/// Discriminant of an [`ExponentSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SetKind {
    Finite,
    Cofinite,
    UpTo,
    All,
    GeqThreshold,
    SquarefreeExponents,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Finite(Vec<u32>),
    Cofinite(Vec<u32>),
    UpTo(u32),
    All,
    GeqThreshold(u32),
    SquarefreeExponents,
}

/// A set of allowed prime exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentSet(Repr);

impl ExponentSet {
    /// `{a_1, ..., a_m}`. Entries are sorted and deduplicated.
    pub fn finite(elements: impl IntoIterator<Item = u32>) -> Result<Self> {
        let v = normalize(elements)?;
        Ok(Self(Repr::Finite(v)))
    }

    /// All positive integers except the listed ones.
    pub fn cofinite(excluded: impl IntoIterator<Item = u32>) -> Result<Self> {
        let v = normalize(excluded)?;
        Ok(Self(Repr::Cofinite(v)))
    }

    /// `{1, ..., k}`.
    pub fn up_to(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("upto bound must be at least 1".into()));
        }
        Ok(Self(Repr::UpTo(k)))
    }

    pub fn all() -> Self {
        Self(Repr::All)
    }

    /// `{k, k+1, ...}`. `k = 1` is the same set as [`ExponentSet::all`] and is
    /// normalized to it.
    pub fn geq(k: u32) -> Result<Self> {
        match k {
            0 => Err(Error::InvalidArgument("threshold must be at least 1".into())),
            1 => Ok(Self(Repr::All)),
            _ => Ok(Self(Repr::GeqThreshold(k))),
        }
    }

    /// The squarefree positive integers, `u(n) = mu(n)^2`.
    pub fn squarefree() -> Self {
        Self(Repr::SquarefreeExponents)
    }

    pub fn kind(&self) -> SetKind {
        match self.0 {
            Repr::Finite(_) => SetKind::Finite,
            Repr::Cofinite(_) => SetKind::Cofinite,
            Repr::UpTo(_) => SetKind::UpTo,
            Repr::All => SetKind::All,
            Repr::GeqThreshold(_) => SetKind::GeqThreshold,
            Repr::SquarefreeExponents => SetKind::SquarefreeExponents,
        }
    }

    /// Characteristic function. `n = 0` is not a positive integer and is
    /// reported as absent.
    pub fn contains(&self, n: u32) -> bool {
        if n == 0 {
            return false;
        }
        match &self.0 {
            Repr::Finite(v) => v.binary_search(&n).is_ok(),
            Repr::Cofinite(v) => v.binary_search(&n).is_err(),
            Repr::UpTo(k) => n <= *k,
            Repr::All => true,
            Repr::GeqThreshold(k) => n >= *k,
            Repr::SquarefreeExponents => is_squarefree_small(n),
        }
    }

    /// `u(n)` as a 0/1 integer.
    pub fn u(&self, n: u32) -> i32 {
        i32::from(self.contains(n))
    }

    pub fn contains_one(&self) -> bool {
        self.contains(1)
    }

    /// Smallest `m` such that membership is constant on `[m, inf)`, together
    /// with that constant value. `None` for the squarefree set, which never
    /// stabilizes.
    pub fn stable_from(&self) -> Option<(u32, bool)> {
        match &self.0 {
            Repr::Finite(v) => Some((v.last().copied().unwrap_or(0) + 1, false)),
            Repr::Cofinite(v) => Some((v.last().copied().unwrap_or(0) + 1, true)),
            Repr::UpTo(k) => Some((k + 1, false)),
            Repr::All => Some((1, true)),
            Repr::GeqThreshold(k) => Some((*k, true)),
            Repr::SquarefreeExponents => None,
        }
    }

    /// Smallest `i >= 2` with `u(i) != u(i - 1)`, or `None` when `u` is
    /// constant on all positive integers.
    pub fn first_change(&self) -> Option<u32> {
        let end = match self.stable_from() {
            Some((m, _)) => m.max(2),
            None => u32::MAX,
        };
        (2..=end).find(|&i| self.contains(i) != self.contains(i - 1))
    }

    /// Smallest element that is at least 2, if any.
    pub fn min_element_above_one(&self) -> Option<u32> {
        self.elements().find(|&e| e >= 2)
    }

    /// The elements of the set in increasing order. Infinite for every kind
    /// except `Finite` and `UpTo`.
    pub fn elements(&self) -> impl Iterator<Item = u32> + '_ {
        let end = match self.stable_from() {
            Some((m, false)) => m,
            _ => u32::MAX,
        };
        (1..end).filter(move |&n| self.contains(n))
    }

    /// Set inclusion `self ⊆ other`, decided exactly for every pair of kinds.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        match (self.stable_from(), other.stable_from()) {
            (Some((m1, b1)), Some((m2, b2))) => {
                if b1 && !b2 {
                    return false;
                }
                (1..m1.max(m2)).all(|n| !self.contains(n) || other.contains(n))
            }
            // self is the squarefree set: other must eventually contain
            // everything, and agree below that point.
            (None, Some((m, b))) => b && (1..m).all(|n| !self.contains(n) || other.contains(n)),
            // other is squarefree: self must be finite with squarefree elements.
            (Some((m, b)), None) => !b && (1..m).all(|n| !self.contains(n) || other.contains(n)),
            (None, None) => true,
        }
    }
}

fn normalize(elements: impl IntoIterator<Item = u32>) -> Result<Vec<u32>> {
    let mut v: Vec<u32> = elements.into_iter().collect();
    if v.is_empty() {
        return Err(Error::InvalidArgument("element list is empty".into()));
    }
    if v.contains(&0) {
        return Err(Error::InvalidArgument("elements must be positive".into()));
    }
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

/// Trial-division squarefree test; exponents are small.
fn is_squarefree_small(mut n: u32) -> bool {
    let mut p = 2u32;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

impl fmt::Display for ExponentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join(v: &[u32]) -> String {
            v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
        }
        match &self.0 {
            Repr::Finite(v) => write!(f, "finite:{}", join(v)),
            Repr::Cofinite(v) => write!(f, "exclude:{}", join(v)),
            Repr::UpTo(k) => write!(f, "upto:{k}"),
            Repr::All => f.write_str("all"),
            Repr::GeqThreshold(k) => write!(f, "geq:{k}"),
            Repr::SquarefreeExponents => f.write_str("squarefree"),
        }
    }
}

impl FromStr for ExponentSet {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse_set_at(s, 0)
    }
}

/// Parses the exponent-set grammar.
pub fn parse_exponent_set(text: &str) -> Result<ExponentSet, ParseError> {
    text.parse()
}

/// Canonical textual form; reparses to an identical set.
pub fn format_exponent_set(set: &ExponentSet) -> String {
    set.to_string()
}

fn parse_set_at(s: &str, offset: usize) -> Result<ExponentSet, ParseError> {
    let keyword_err = || {
        ParseError::new(
            offset,
            format!(
                "unknown exponent set {s:?}; expected finite:, exclude:, upto:, all, geq: or squarefree"
            ),
        )
    };
    let (head, rest) = match s.find(':') {
        Some(i) => (&s[..i], Some((&s[i + 1..], offset + i + 1))),
        None => (s, None),
    };
    match (head, rest) {
        ("all", None) => Ok(ExponentSet::all()),
        ("squarefree", None) => Ok(ExponentSet::squarefree()),
        ("finite", Some((body, at))) => {
            let v = parse_ints(body, at)?;
            ExponentSet::finite(v).map_err(|e| ParseError::new(at, e.to_string()))
        }
        ("exclude", Some((body, at))) => {
            let v = parse_ints(body, at)?;
            ExponentSet::cofinite(v).map_err(|e| ParseError::new(at, e.to_string()))
        }
        ("upto", Some((body, at))) => {
            let k = parse_int(body, at)?;
            ExponentSet::up_to(k).map_err(|e| ParseError::new(at, e.to_string()))
        }
        ("geq", Some((body, at))) => {
            let k = parse_int(body, at)?;
            ExponentSet::geq(k).map_err(|e| ParseError::new(at, e.to_string()))
        }
        _ => Err(keyword_err()),
    }
}

fn parse_ints(body: &str, offset: usize) -> Result<Vec<u32>, ParseError> {
    if body.is_empty() {
        return Err(ParseError::new(offset, "empty integer list"));
    }
    let mut out = Vec::new();
    let mut at = offset;
    for piece in body.split(',') {
        out.push(parse_int(piece, at)?);
        at += piece.len() + 1;
    }
    Ok(out)
}

fn parse_int(piece: &str, offset: usize) -> Result<u32, ParseError> {
    if piece.is_empty() {
        return Err(ParseError::new(offset, "expected a positive integer"));
    }
    if let Some(i) = piece.bytes().position(|b| !b.is_ascii_digit()) {
        return Err(ParseError::new(
            offset + i,
            format!("unexpected character {:?}", piece[i..].chars().next().unwrap()),
        ));
    }
    let value: u32 = piece
        .parse()
        .map_err(|_| ParseError::new(offset, format!("integer {piece} is too large")))?;
    if value == 0 {
        return Err(ParseError::new(offset, "integers must be positive"));
    }
    Ok(value)
}

/// Assignment of an exponent set `S_n` to the n-th prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PerPrimeFamily {
    /// `S_n = {1, ..., n}`.
    Prefix,
    /// Explicit sets for the first primes, `default` for every later prime.
    List {
        sets: Vec<ExponentSet>,
        default: ExponentSet,
    },
}

impl PerPrimeFamily {
    /// `S_n` for `n >= 1`.
    pub fn set_for(&self, n: u64) -> ExponentSet {
        match self {
            PerPrimeFamily::Prefix => ExponentSet(Repr::UpTo(n.clamp(1, u32::MAX as u64) as u32)),
            PerPrimeFamily::List { sets, default } => usize::try_from(n)
                .ok()
                .and_then(|n| n.checked_sub(1))
                .and_then(|i| sets.get(i))
                .unwrap_or(default)
                .clone(),
        }
    }
}

/// `S_n` of `family`.
pub fn family_set(family: &PerPrimeFamily, n: u64) -> ExponentSet {
    family.set_for(n)
}

impl fmt::Display for PerPrimeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PerPrimeFamily::Prefix => f.write_str("prefix"),
            PerPrimeFamily::List { sets, default } => {
                let body: Vec<String> = sets.iter().map(ToString::to_string).collect();
                write!(f, "list:{}:default:{default}", body.join(";"))
            }
        }
    }
}

impl FromStr for PerPrimeFamily {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        if s == "prefix" {
            return Ok(PerPrimeFamily::Prefix);
        }
        let Some(body) = s.strip_prefix("list:") else {
            return Err(ParseError::new(0, "expected \"prefix\" or \"list:...:default:...\""));
        };
        const DEFAULT: &str = ":default:";
        let Some(split) = body.rfind(DEFAULT) else {
            return Err(ParseError::new(s.len(), "missing \":default:\" tail set"));
        };
        let base = "list:".len();
        let default = parse_set_at(&body[split + DEFAULT.len()..], base + split + DEFAULT.len())?;
        let mut sets = Vec::new();
        let mut at = base;
        for piece in body[..split].split(';') {
            sets.push(parse_set_at(piece, at)?);
            at += piece.len() + 1;
        }
        Ok(PerPrimeFamily::List { sets, default })
    }
}
