//! Two-stage Searcher scripts and their exact evaluation.
//!
//! Stage 1 is a piecewise-linear dig schedule through waypoint profiles,
//! parametrised by total depth dug. Stage 2 starts at the first find and runs
//! an intelligent search: visit locations in a given order, digging each to the
//! deepest depth the remaining object could occupy (1 in the location of the
//! first find, `1 − d` elsewhere, `d` the depth of the first find).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::best_response::permutations;
use crate::enumeration::Grid;
use crate::error::{Error, Result};
use crate::game::{validate_hider, DigProfile, GameConfig, HiderPure};
use crate::rational::{self, Rational};

/// An intelligent-search order over locations (0-based).
pub type IsSequence = Vec<usize>;

#[derive(Debug, Clone, PartialEq)]
pub struct SearcherScript {
    /// Waypoints after the implicit all-zero start.
    pub stage1: Vec<DigProfile>,
    /// For each location in which the first object may be found, a
    /// distribution over intelligent-search orders.
    pub stage2: BTreeMap<usize, Vec<(IsSequence, Rational)>>,
    /// Average over all relabelings of the locations.
    pub relabel: bool,
}

/// Exact win probability of a script against one Hider strategy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptOutcome {
    pub win_probability: Rational,
}

/// A probability distribution over scripts.
#[derive(Debug, Clone, PartialEq)]
pub struct ScriptMix {
    pub components: Vec<(SearcherScript, Rational)>,
}

impl SearcherScript {
    pub fn new(
        stage1: Vec<DigProfile>,
        stage2: BTreeMap<usize, Vec<(IsSequence, Rational)>>,
        relabel: bool,
    ) -> Self {
        SearcherScript { stage1, stage2, relabel }
    }

    fn final_total(&self) -> Rational {
        self.stage1.last().map_or_else(Rational::zero, DigProfile::total)
    }

    pub fn validate(&self, cfg: &GameConfig) -> Result<()> {
        let mut prev = DigProfile::zero(cfg.n);
        for w in &self.stage1 {
            if w.depths.len() != cfg.n || !w.is_valid_depths() {
                return Err(Error::InvalidScript(format!("waypoint {w} is not a depth profile over {} locations", cfg.n)));
            }
            if !prev.le(w) {
                return Err(Error::InvalidScript(format!("waypoint {w} undoes digging from {prev}")));
            }
            prev = w.clone();
        }
        let used = self.final_total();
        if used > cfg.h {
            return Err(Error::ScriptBudgetExceeded { used, budget: cfg.h.clone() });
        }
        for (loc, dist) in &self.stage2 {
            if *loc >= cfg.n || dist.is_empty() {
                return Err(Error::InvalidScript(format!("bad stage-2 rule for location {}", loc + 1)));
            }
            let mut total = Rational::zero();
            for (seq, p) in dist {
                if *p <= Rational::zero() || seq.iter().any(|&j| j >= cfg.n) {
                    return Err(Error::InvalidScript(format!("bad stage-2 entry for location {}", loc + 1)));
                }
                total += p;
            }
            if !total.is_one() {
                return Err(Error::InvalidScript(format!("stage-2 probabilities for location {} sum to {total}", loc + 1)));
            }
        }
        Ok(())
    }

    /// Time (total depth dug) at which Stage 1 reaches `depth` in `location`,
    /// or `None` if it never does.
    pub fn reach_time(&self, location: usize, depth: &Rational) -> Option<Rational> {
        let mut prev = DigProfile::zero(self.stage1.first()?.depths.len());
        let mut prev_t = Rational::zero();
        for w in &self.stage1 {
            let t = w.total();
            let (a, b) = (&prev.depths[location], &w.depths[location]);
            if a < depth && depth <= b {
                return Some(&prev_t + (&t - &prev_t) * (depth - a) / (b - a));
            }
            prev = w.clone();
            prev_t = t;
        }
        None
    }

    /// Stage-1 profile at time `t` (clamped to the final waypoint).
    pub fn profile_at(&self, t: &Rational) -> DigProfile {
        let n = self.stage1.first().map_or(0, |w| w.depths.len());
        let mut prev = DigProfile::zero(n);
        let mut prev_t = Rational::zero();
        for w in &self.stage1 {
            let wt = w.total();
            if *t <= wt && wt > prev_t {
                let lambda = (t - &prev_t) / (&wt - &prev_t);
                let depths = prev
                    .depths
                    .iter()
                    .zip(&w.depths)
                    .map(|(a, b)| a + (b - a) * &lambda)
                    .collect();
                return DigProfile::new(depths);
            }
            prev = w.clone();
            prev_t = wt;
        }
        prev
    }

    /// Depths at which the win probability can change: waypoint depths and
    /// their complements.
    pub fn breakpoints(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = self
            .stage1
            .iter()
            .flat_map(|w| w.depths.iter().cloned())
            .flat_map(|d| [Rational::one() - &d, d])
            .filter(|d| *d > Rational::zero() && *d <= Rational::one())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Plays the script against `hp` with the locations already in the
    /// Searcher's labels; averages over Stage-2 randomisation only.
    pub fn play_labeled(&self, hp: &HiderPure, cfg: &GameConfig) -> Result<Rational> {
        let objects = hp.objects();
        if objects.len() != 2 {
            return Err(Error::UnsupportedK { expected: 2, got: objects.len() });
        }
        let times: Vec<Option<Rational>> = objects.iter().map(|(l, d)| self.reach_time(*l, d)).collect();
        let first = match (&times[0], &times[1]) {
            (None, None) => return Ok(Rational::zero()),
            (Some(a), Some(b)) if a == b => return Ok(Rational::one()),
            (Some(_), None) => 0,
            (None, Some(_)) => 1,
            (Some(a), Some(b)) => usize::from(b < a),
        };
        let t1 = times[first].clone().unwrap();
        let (loc, depth) = objects[first].clone();
        let profile = self.profile_at(&t1);
        let rules = self.stage2.get(&loc).ok_or(Error::MissingStage2Rule(loc + 1))?;
        Ok(rules
            .iter()
            .filter(|(seq, _)| is_dig((loc, &depth), &profile, seq, cfg, hp) == DigOutcome::Win)
            .fold(Rational::zero(), |acc, (_, p)| acc + p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DigOutcome {
    Win,
    Lose,
}

/// Stage 2 after exactly one object was found at `first_find`, with the dig
/// profile at that moment. Visits `sigma` in order, digging each location to
/// its cap (1 in the trigger location, `1 − d` elsewhere; locations already
/// past their cap cost nothing) and stops on finding the second object or
/// when the budget `h` runs out.
pub fn is_dig(
    first_find: (usize, &Rational),
    profile: &DigProfile,
    sigma: &[usize],
    cfg: &GameConfig,
    hp: &HiderPure,
) -> DigOutcome {
    let (trigger, d) = first_find;
    let mut objects = hp.objects();
    if let Some(pos) = objects.iter().position(|(l, x)| *l == trigger && x == d) {
        objects.remove(pos);
    }
    let Some((other_loc, other_depth)) = objects.first().cloned() else {
        return DigOutcome::Win;
    };
    let mut used = profile.total();
    for &j in sigma {
        let cap = if j == trigger { Rational::one() } else { Rational::one() - d };
        let cur = &profile.depths[j];
        if *cur >= cap {
            continue;
        }
        if j == other_loc && other_depth > *cur && other_depth <= cap {
            return if &used + (&other_depth - cur) <= cfg.h { DigOutcome::Win } else { DigOutcome::Lose };
        }
        used += &cap - cur;
        if used > cfg.h {
            return DigOutcome::Lose;
        }
    }
    DigOutcome::Lose
}

/// Injective placements of the occupied locations of `hp` into labels, each
/// equally likely under a uniformly random relabeling.
fn relabelings(hp: &HiderPure) -> Vec<HiderPure> {
    let n = hp.n();
    let occupied: Vec<usize> = (0..n).filter(|&i| !hp.sets()[i].is_empty()).collect();
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for perm in permutations(n) {
        let key: Vec<usize> = occupied.iter().map(|&i| perm[i]).collect();
        if seen.insert(key) {
            out.push(hp.permuted(&perm));
        }
    }
    out
}

/// Exact win probability of `script` against `hp`, averaged over location
/// labelings (if the script relabels) and Stage-2 randomisation.
pub fn script_win_prob(script: &SearcherScript, hp: &HiderPure, cfg: &GameConfig) -> Result<ScriptOutcome> {
    script.validate(cfg)?;
    if cfg.k != 2 {
        return Err(Error::UnsupportedK { expected: 2, got: cfg.k });
    }
    validate_hider(hp, cfg).map_err(|v| Error::InvalidHider(v.to_string()))?;
    let win_probability = if script.relabel {
        let labeled = relabelings(hp);
        let count = rational::int(labeled.len() as i64);
        let mut total = Rational::zero();
        for l in &labeled {
            total += script.play_labeled(l, cfg)?;
        }
        total / count
    } else {
        script.play_labeled(hp, cfg)?
    };
    Ok(ScriptOutcome { win_probability })
}

impl ScriptMix {
    pub fn single(script: SearcherScript) -> Self {
        ScriptMix { components: vec![(script, Rational::one())] }
    }

    pub fn relabel(&self) -> bool {
        self.components.iter().all(|(s, _)| s.relabel)
    }

    pub fn win_prob(&self, hp: &HiderPure, cfg: &GameConfig) -> Result<Rational> {
        let mut total = Rational::zero();
        for (s, p) in &self.components {
            total += p * script_win_prob(s, hp, cfg)?.win_probability;
        }
        Ok(total)
    }

    /// Win probability with `hp` already in the Searcher's labels.
    pub fn win_prob_labeled(&self, hp: &HiderPure, cfg: &GameConfig) -> Result<Rational> {
        let mut total = Rational::zero();
        for (s, p) in &self.components {
            s.validate(cfg)?;
            total += p * s.play_labeled(hp, cfg)?;
        }
        Ok(total)
    }

    pub fn breakpoints(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = self.components.iter().flat_map(|(s, _)| s.breakpoints()).collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Candidate depths for a scan: the grid, the script breakpoints, and the
/// midpoint of every gap between consecutive candidates.
pub fn scan_depths(mix: &ScriptMix, scan: Grid) -> Vec<Rational> {
    let mut pts: Vec<Rational> = (1..=scan.m).map(|t| rational::rat(t as i64, scan.m as i64)).collect();
    pts.extend(mix.breakpoints());
    pts.push(Rational::zero());
    pts.sort();
    pts.dedup();
    let mids: Vec<Rational> = pts.windows(2).map(|w| (&w[0] + &w[1]) / rational::int(2)).collect();
    pts.extend(mids);
    pts.retain(|d| *d > Rational::zero());
    pts.sort();
    pts.dedup();
    pts
}

/// Two-object placements over the scan depths: same-location pairs and
/// different-location pairs with depth sum at most 1. With `canonical_only`,
/// one representative per relabeling orbit.
pub fn scan_hiders(n: usize, depths: &[Rational], canonical_only: bool) -> Vec<HiderPure> {
    let mut out = Vec::new();
    let one = Rational::one();
    let place = |pairs: &[(usize, &Rational)]| {
        let mut sets = vec![Vec::new(); n];
        for (l, d) in pairs {
            sets[*l].push((*d).clone());
        }
        HiderPure::new(sets)
    };
    let loc_pairs: Vec<(usize, usize)> = if canonical_only {
        vec![(0, 1)]
    } else {
        (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect()
    };
    let single_locs: Vec<usize> = if canonical_only { vec![0] } else { (0..n).collect() };
    for (a, x) in depths.iter().enumerate() {
        for z in &depths[a..] {
            for &l in &single_locs {
                out.push(place(&[(l, x), (l, z)]));
            }
        }
        if n >= 2 {
            for y in depths.iter().take(a + 1) {
                if x + y > one {
                    continue;
                }
                for &(i, j) in &loc_pairs {
                    if canonical_only || x != y || i < j {
                        out.push(place(&[(i, x), (j, y)]));
                    }
                }
            }
        }
    }
    out
}

/// Minimum win probability of `mix` over every two-object Hider strategy with
/// depths among [`scan_depths`], and a minimising strategy (first in scan order).
pub fn script_min_win_prob(mix: &ScriptMix, cfg: &GameConfig, scan: Grid) -> Result<(Rational, HiderPure)> {
    if cfg.k != 2 {
        return Err(Error::UnsupportedK { expected: 2, got: cfg.k });
    }
    let depths = scan_depths(mix, scan);
    let hiders = scan_hiders(cfg.n, &depths, mix.relabel());
    let values: Vec<Rational> = hiders.par_iter().map(|h| mix.win_prob(h, cfg)).collect::<Result<_>>()?;
    let (idx, min) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0)))
        .ok_or_else(|| Error::Domain("empty scan".into()))?;
    Ok((min.clone(), hiders[idx].clone()))
}

fn write_seq(f: &mut fmt::Formatter<'_>, seq: &[usize]) -> fmt::Result {
    write!(f, "IS(")?;
    for j in seq {
        write!(f, "{}", j + 1)?;
    }
    write!(f, ")")
}

impl fmt::Display for SearcherScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.relabel {
            writeln!(f, "number the locations randomly")?;
        }
        let stage1: Vec<String> = self.stage1.iter().map(|w| w.to_string()).collect();
        writeln!(f, "Stage 1: {}", stage1.join(","))?;
        for (loc, dist) in &self.stage2 {
            write!(f, "Stage 2, object found in L{}: ", loc + 1)?;
            for (i, (seq, p)) in dist.iter().enumerate() {
                if i > 0 {
                    write!(f, " | ")?;
                }
                write_seq(f, seq)?;
                if dist.len() > 1 {
                    write!(f, " w.p. {p}")?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl fmt::Display for ScriptMix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, p) in &self.components {
            if self.components.len() > 1 {
                writeln!(f, "with probability {p}:")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}
