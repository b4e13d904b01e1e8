//! Game configuration and strategy types shared by every other module.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Number of locations `n`, number of objects `k` and Searcher budget `h`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameConfig {
    pub n: usize,
    pub k: usize,
    #[serde(with = "rational::serde_str")]
    pub h: Rational,
}

impl GameConfig {
    /// Builds a configuration, rejecting `n = 0`, `k = 0` and `h` outside `[1, n)`.
    pub fn new(n: usize, k: usize, h: Rational) -> Result<Self> {
        let cfg = GameConfig { n, k, h };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.k == 0 {
            return Err(Error::InvalidConfig(format!("need n >= 1 and k >= 1, got n = {}, k = {}", self.n, self.k)));
        }
        if self.h < Rational::one() || self.h >= rational::int(self.n as i64) {
            return Err(Error::InvalidConfig(format!("h = {} outside [1, {})", self.h, self.n)));
        }
        Ok(())
    }
}

/// Why a [`HiderPure`] is not a legal strategy for a configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HiderViolation {
    WrongLocationCount { expected: usize, got: usize },
    WrongObjectCount { expected: usize, got: usize },
    DepthOutOfRange(Rational),
    EnergyExceeded(Rational),
}

impl fmt::Display for HiderViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HiderViolation::WrongLocationCount { expected, got } => {
                write!(f, "expected {expected} locations, got {got}")
            }
            HiderViolation::WrongObjectCount { expected, got } => {
                write!(f, "total object count {got} differs from k = {expected}")
            }
            HiderViolation::DepthOutOfRange(d) => write!(f, "depth {d} outside (0, 1]"),
            HiderViolation::EnergyExceeded(s) => {
                write!(f, "sum of deepest burial depths {s} exceeds 1")
            }
        }
    }
}

/// A Hider pure strategy: for each location, the multiset of burial depths,
/// stored sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HiderPure {
    sets: Vec<Vec<Rational>>,
}

impl HiderPure {
    pub fn new(mut sets: Vec<Vec<Rational>>) -> Self {
        for s in &mut sets {
            s.sort();
        }
        HiderPure { sets }
    }

    /// Builds a strategy from grid steps: depth `t` means `t/m`.
    pub fn from_grid(steps: &[Vec<u32>], m: u32) -> Self {
        HiderPure::new(
            steps
                .iter()
                .map(|loc| loc.iter().map(|&t| rational::rat(t as i64, m as i64)).collect())
                .collect(),
        )
    }

    pub fn sets(&self) -> &[Vec<Rational>] {
        &self.sets
    }

    pub fn n(&self) -> usize {
        self.sets.len()
    }

    pub fn object_count(&self) -> usize {
        self.sets.iter().map(Vec::len).sum()
    }

    /// `Σ_i max(S_i)`, with empty locations contributing 0.
    pub fn energy(&self) -> Rational {
        self.sets
            .iter()
            .filter_map(|s| s.last().cloned())
            .fold(Rational::zero(), |acc, d| acc + d)
    }

    /// Objects as `(location, depth)` pairs, location-major, depth ascending.
    pub fn objects(&self) -> Vec<(usize, Rational)> {
        self.sets
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.iter().map(move |d| (i, d.clone())))
            .collect()
    }

    /// Grid steps per location, or an error if some depth is not a multiple of `1/m`.
    pub fn to_grid(&self, m: u32) -> Result<Vec<Vec<u32>>> {
        let scale = rational::int(m as i64);
        self.sets
            .iter()
            .map(|s| {
                s.iter()
                    .map(|d| {
                        let t = d * &scale;
                        if t.is_integer() && t.is_positive() && t <= scale {
                            Ok(rational::floor_i64(&t) as u32)
                        } else {
                            Err(Error::OffGrid { depth: d.clone(), m })
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Relabels locations: location `i` of `self` becomes location `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> HiderPure {
        let mut sets = vec![Vec::new(); self.sets.len()];
        for (i, s) in self.sets.iter().enumerate() {
            sets[perm[i]] = s.clone();
        }
        HiderPure { sets }
    }
}

/// Order used for canonical forms: locations holding more objects first, then
/// by the ascending depth sequence. Empty locations sort last.
fn location_key(s: &[Rational]) -> (std::cmp::Reverse<usize>, &[Rational]) {
    (std::cmp::Reverse(s.len()), s)
}

impl fmt::Display for HiderPure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.sets.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            match s.len() {
                0 => write!(f, "0")?,
                1 => write!(f, "{}", s[0])?,
                _ => {
                    write!(f, "{{")?;
                    for (j, d) in s.iter().enumerate() {
                        if j > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{d}")?;
                    }
                    write!(f, "}}")?;
                }
            }
        }
        write!(f, ")")
    }
}

impl FromStr for HiderPure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse { what: "hider strategy", input: s.to_string() };
        let inner = s.trim().strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(err)?;
        let mut sets = Vec::new();
        let mut rest = inner.trim();
        while !rest.is_empty() {
            let (item, tail) = if let Some(body) = rest.strip_prefix('{') {
                let close = body.find('}').ok_or_else(err)?;
                let depths = body[..close]
                    .split(',')
                    .map(rational::parse)
                    .collect::<Result<Vec<_>>>()
                    .map_err(|_| err())?;
                (depths, &body[close + 1..])
            } else {
                let end = rest.find(',').unwrap_or(rest.len());
                let d = rational::parse(&rest[..end]).map_err(|_| err())?;
                (if d.is_zero() { Vec::new() } else { vec![d] }, &rest[end..])
            };
            sets.push(item);
            let tail = tail.trim_start();
            rest = match tail.strip_prefix(',') {
                Some(t) => t.trim_start(),
                None if tail.is_empty() => tail,
                None => return Err(err()),
            };
        }
        Ok(HiderPure::new(sets))
    }
}

impl Serialize for HiderPure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for HiderPure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Checks location count, object count, depth range `(0, 1]` and the energy
/// constraint `Σ max(S_i) ≤ 1`.
pub fn validate_hider(s: &HiderPure, cfg: &GameConfig) -> std::result::Result<(), HiderViolation> {
    if s.n() != cfg.n {
        return Err(HiderViolation::WrongLocationCount { expected: cfg.n, got: s.n() });
    }
    if s.object_count() != cfg.k {
        return Err(HiderViolation::WrongObjectCount { expected: cfg.k, got: s.object_count() });
    }
    if let Some(d) = s.sets.iter().flatten().find(|d| !d.is_positive() || **d > Rational::one()) {
        return Err(HiderViolation::DepthOutOfRange(d.clone()));
    }
    let e = s.energy();
    if e > Rational::one() {
        return Err(HiderViolation::EnergyExceeded(e));
    }
    Ok(())
}

/// Lexicographically least relabeling of `s` and the number of distinct
/// relabelings (`n!` over the factorials of repeated location multisets).
pub fn canonicalize(s: &HiderPure) -> (HiderPure, u64) {
    let mut sets = s.sets.clone();
    sets.sort_by(|a, b| location_key(a).cmp(&location_key(b)));
    let mut orbit: u64 = (1..=sets.len() as u64).product();
    let mut i = 0;
    while i < sets.len() {
        let j = (i..sets.len()).find(|&j| sets[j] != sets[i]).unwrap_or(sets.len());
        orbit /= (1..=(j - i) as u64).product::<u64>();
        i = j;
    }
    (HiderPure { sets }, orbit)
}

/// Compares two strategies by their location sequences under the canonical location order.
pub fn cmp_hiders(a: &HiderPure, b: &HiderPure) -> std::cmp::Ordering {
    a.sets
        .iter()
        .map(|s| location_key(s))
        .cmp(b.sets.iter().map(|s| location_key(s)))
}

/// A finitely supported Hider mixed strategy.
#[derive(Debug, Clone, PartialEq)]
pub struct HiderMixed {
    support: Vec<(HiderPure, Rational)>,
}

/// Serialised form of one support entry.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MixEntry {
    pub strategy: HiderPure,
    #[serde(with = "rational::serde_str")]
    pub prob: Rational,
}

impl HiderMixed {
    /// Validates positivity, exact normalisation and distinct support entries.
    pub fn new(support: Vec<(HiderPure, Rational)>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidMix("empty support".into()));
        }
        let mut seen = HashMap::new();
        let mut total = Rational::zero();
        for (s, p) in &support {
            if !p.is_positive() {
                return Err(Error::InvalidMix(format!("non-positive probability {p} on {s}")));
            }
            if seen.insert(s, ()).is_some() {
                return Err(Error::InvalidMix(format!("duplicate support entry {s}")));
            }
            total += p;
        }
        if !total.is_one() {
            return Err(Error::InvalidMix(format!("probabilities sum to {total}")));
        }
        Ok(HiderMixed { support })
    }

    /// Equiprobable mix over distinct strategies.
    pub fn uniform(strategies: Vec<HiderPure>) -> Result<Self> {
        let p = rational::rat(1, strategies.len().max(1) as i64);
        HiderMixed::new(strategies.into_iter().map(|s| (s, p.clone())).collect())
    }

    pub fn support(&self) -> &[(HiderPure, Rational)] {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn permuted(&self, perm: &[usize]) -> HiderMixed {
        HiderMixed { support: self.support.iter().map(|(s, p)| (s.permuted(perm), p.clone())).collect() }
    }

    /// Serialisable list form `[{strategy, prob}]`.
    pub fn entries(&self) -> Vec<MixEntry> {
        self.support
            .iter()
            .map(|(s, p)| MixEntry { strategy: s.clone(), prob: p.clone() })
            .collect()
    }

    pub fn from_entries(entries: Vec<MixEntry>) -> Result<Self> {
        HiderMixed::new(entries.into_iter().map(|e| (e.strategy, e.prob)).collect())
    }
}

/// Depth dug so far in each location.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigProfile {
    pub depths: Vec<Rational>,
}

impl DigProfile {
    pub fn new(depths: Vec<Rational>) -> Self {
        DigProfile { depths }
    }

    pub fn zero(n: usize) -> Self {
        DigProfile { depths: vec![Rational::zero(); n] }
    }

    pub fn total(&self) -> Rational {
        self.depths.iter().fold(Rational::zero(), |acc, d| acc + d)
    }

    pub fn le(&self, other: &DigProfile) -> bool {
        self.depths.len() == other.depths.len() && self.depths.iter().zip(&other.depths).all(|(a, b)| a <= b)
    }

    pub fn is_valid_depths(&self) -> bool {
        self.depths.iter().all(|d| !d.is_negative() && *d <= Rational::one())
    }
}

impl fmt::Display for DigProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.depths.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}
