//! Exact Searcher best response against a finitely supported grid Hider mix.
//!
//! The Searcher's knowledge is an [`InfoState`]: grid steps dug per location
//! and the depths of objects found so far. Worth of a state is the
//! (unnormalised) Hider mass the Searcher can still beat from it; the
//! recursion is memoised on `(dug, found)`.
//!
//! Actions dig one location down to the next depth at which some consistent
//! Hider strategy still has an object. A step that reveals nothing for every
//! consistent strategy can always be postponed to just before the next
//! informative step in the same location without changing what is observed,
//! so restricting to these jumps loses no value. As a consequence the DP only
//! visits depths present in the support, whatever the grid resolution.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::enumeration::Grid;
use crate::error::{Error, Result};
use crate::game::{GameConfig, HiderMixed, HiderPure};
use crate::rational::{self, Rational};

/// Usable grid steps `⌊h·m⌋`: an object at a grid depth is only revealed when
/// the dig front reaches it, so a partial final step is wasted.
pub fn effective_budget(cfg: &GameConfig, grid: Grid) -> u32 {
    let steps = &cfg.h * rational::int(grid.m as i64);
    rational::floor_i64(&steps).max(0) as u32
}

/// The Searcher's knowledge during play on a grid.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InfoState {
    /// Grid steps dug per location.
    pub dug: Vec<u32>,
    /// Grid depths of objects found so far, per location, ascending.
    pub found: Vec<Vec<u32>>,
    pub budget_left: u32,
}

impl InfoState {
    pub fn initial(n: usize, budget: u32) -> Self {
        InfoState { dug: vec![0; n], found: vec![Vec::new(); n], budget_left: budget }
    }

    pub fn found_count(&self) -> usize {
        self.found.iter().map(Vec::len).sum()
    }

    /// State after digging `location` down to `to`, revealing `revealed`.
    pub fn after(&self, location: usize, to: u32, revealed: &[u32]) -> InfoState {
        let mut next = self.clone();
        next.budget_left -= to - self.dug[location];
        next.dug[location] = to;
        next.found[location].extend_from_slice(revealed);
        next.found[location].sort_unstable();
        next
    }
}

impl fmt::Display for InfoState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dug={:?} found={:?} left={}", self.dug, self.found, self.budget_left)
    }
}

/// True iff `hp`'s objects at depth `≤ dug[i]/m` in every location `i` are exactly `found[i]`.
pub fn consistent(hp: &HiderPure, s: &InfoState, grid: Grid) -> Result<bool> {
    let steps = hp.to_grid(grid.m)?;
    Ok(consistent_steps(&steps, s))
}

pub(crate) fn consistent_steps(steps: &[Vec<u32>], s: &InfoState) -> bool {
    steps.iter().zip(&s.dug).zip(&s.found).all(|((loc, &d), f)| {
        let seen: Vec<u32> = loc.iter().copied().filter(|&t| t <= d).collect();
        seen == *f
    })
}

/// One Searcher decision.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Action {
    Stop,
    /// Dig `location` from its current depth down to grid depth `to`.
    Dig { location: usize, to: u32 },
}

/// A node of an explicit adaptive Searcher policy. Children are keyed by the
/// grid depths revealed by the node's dig (empty when nothing is found).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolicyNode {
    pub state: InfoState,
    pub action: Action,
    pub children: Vec<(Vec<u32>, PolicyNode)>,
}

impl PolicyNode {
    pub fn child(&self, revealed: &[u32]) -> Option<&PolicyNode> {
        self.children.iter().find(|(obs, _)| obs.as_slice() == revealed).map(|(_, c)| c)
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(|(_, c)| c.node_count()).sum::<usize>()
    }

    fn write_tree(&self, f: &mut fmt::Formatter<'_>, depth: usize, m: u32) -> fmt::Result {
        let pad = "  ".repeat(depth);
        match self.action {
            Action::Stop => writeln!(f, "{pad}[{}] stop", self.state)?,
            Action::Dig { location, to } => {
                writeln!(f, "{pad}[{}] dig L{} to {}", self.state, location + 1, rational::rat(to as i64, m as i64))?
            }
        }
        for (obs, child) in &self.children {
            let shown: Vec<String> = obs.iter().map(|&t| rational::rat(t as i64, m as i64).to_string()).collect();
            writeln!(f, "{pad}  found {{{}}}:", shown.join(","))?;
            child.write_tree(f, depth + 2, m)?;
        }
        Ok(())
    }
}

/// An explicit deterministic adaptive policy on a grid. Observations missing
/// from the tree end the search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Policy {
    pub m: u32,
    pub k: usize,
    pub root: PolicyNode,
}

impl Policy {
    /// Plays the policy against a grid Hider (steps per location at this
    /// policy's resolution); true iff every object is found within budget.
    pub fn wins_against_steps(&self, hider: &[Vec<u32>]) -> bool {
        let mut node = &self.root;
        let mut found = 0;
        loop {
            if found == self.k {
                return true;
            }
            match node.action {
                Action::Stop => return false,
                Action::Dig { location, to } => {
                    let from = node.state.dug[location];
                    let revealed: Vec<u32> =
                        hider[location].iter().copied().filter(|&t| t > from && t <= to).collect();
                    found += revealed.len();
                    if found == self.k {
                        return true;
                    }
                    match node.child(&revealed) {
                        Some(c) => node = c,
                        None => return false,
                    }
                }
            }
        }
    }

    pub fn wins_against(&self, hp: &HiderPure) -> Result<bool> {
        Ok(self.wins_against_steps(&hp.to_grid(self.m)?))
    }

    /// Builds an explicit tree by following `rule` from the initial state,
    /// branching on every observation some strategy in `hiders` can produce.
    pub fn from_rule<F>(n: usize, k: usize, grid: Grid, budget: u32, hiders: &[Vec<Vec<u32>>], rule: F) -> Policy
    where
        F: Fn(&InfoState) -> Action,
    {
        fn build<F: Fn(&InfoState) -> Action>(
            state: InfoState,
            k: usize,
            hiders: Vec<&Vec<Vec<u32>>>,
            rule: &F,
        ) -> PolicyNode {
            let action = if state.found_count() >= k || hiders.is_empty() { Action::Stop } else { rule(&state) };
            let mut children = Vec::new();
            if let Action::Dig { location, to } = action {
                let from = state.dug[location];
                let mut groups: BTreeMap<Vec<u32>, Vec<&Vec<Vec<u32>>>> = BTreeMap::new();
                for h in hiders {
                    let revealed: Vec<u32> = h[location].iter().copied().filter(|&t| t > from && t <= to).collect();
                    groups.entry(revealed).or_default().push(h);
                }
                for (obs, group) in groups {
                    let next = state.after(location, to, &obs);
                    if next.found_count() < k {
                        children.push((obs, build(next, k, group, rule)));
                    }
                }
            }
            PolicyNode { state, action, children }
        }
        let root = build(InfoState::initial(n, budget), k, hiders.iter().collect(), &rule);
        Policy { m: grid.m, k, root }
    }

    /// Digs locations in index order, one grid step at a time, each down to
    /// the deepest depth a remaining object could still occupy given the
    /// objects already found (the Hider's energy bound), until the budget is spent.
    pub fn sequential(cfg: &GameConfig, grid: Grid, hiders: &[Vec<Vec<u32>>]) -> Policy {
        let budget = effective_budget(cfg, grid);
        let m = grid.m;
        let rule = move |s: &InfoState| {
            if s.budget_left == 0 {
                return Action::Stop;
            }
            let deepest: Vec<u32> = s.found.iter().map(|f| f.last().copied().unwrap_or(0)).collect();
            let total: u32 = deepest.iter().sum();
            for j in 0..s.dug.len() {
                let cap = m.saturating_sub(total - deepest[j]);
                if s.dug[j] < cap {
                    return Action::Dig { location: j, to: s.dug[j] + 1 };
                }
            }
            Action::Stop
        };
        Policy::from_rule(cfg.n, cfg.k, grid, budget, hiders, rule)
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.write_tree(f, 0, self.m)
    }
}

/// Result of [`best_response_value`].
#[derive(Debug, Clone)]
pub struct BestResponse {
    pub value: Rational,
    pub policy: Policy,
    /// Number of memoised information states.
    pub states: usize,
}

/// Unnormalised probability mass. `u128` when the common denominator fits,
/// arbitrary precision otherwise.
trait Mass: Clone + Ord + Zero + for<'a> std::ops::AddAssign<&'a Self> {}
impl Mass for u128 {}
impl Mass for BigUint {}

type Key = Vec<(u32, Vec<u32>)>;

struct Solver<'a, W> {
    n: usize,
    k: usize,
    budget: u32,
    support: &'a [Vec<Vec<u32>>],
    weights: &'a [W],
    fold: bool,
    memo: HashMap<Key, W>,
}

impl<'a, W: Mass> Solver<'a, W> {
    fn key(&self, s: &InfoState) -> Key {
        let mut key: Key = s.dug.iter().copied().zip(s.found.iter().cloned()).collect();
        if self.fold {
            key.sort_unstable();
        }
        key
    }

    /// Legal informative actions with the partition of `cons` they induce.
    fn actions(&self, s: &InfoState, cons: &[usize]) -> Vec<(usize, u32, Vec<(Vec<u32>, Vec<usize>)>)> {
        let mut out = Vec::new();
        for loc in 0..self.n {
            let from = s.dug[loc];
            let next = cons
                .iter()
                .filter_map(|&i| self.support[i][loc].iter().copied().find(|&t| t > from))
                .min();
            let Some(to) = next else { continue };
            if to - from > s.budget_left {
                continue;
            }
            let mut groups: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
            for &i in cons {
                let revealed: Vec<u32> = self.support[i][loc].iter().copied().filter(|&t| t == to).collect();
                groups.entry(revealed).or_default().push(i);
            }
            out.push((loc, to, groups.into_iter().collect()));
        }
        out
    }

    fn worth(&mut self, s: &InfoState, cons: &[usize]) -> W {
        if cons.is_empty() {
            return W::zero();
        }
        if s.found_count() == self.k {
            let mut total = W::zero();
            for &i in cons {
                total += &self.weights[i];
            }
            return total;
        }
        let key = self.key(s);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let mut best = W::zero();
        for (loc, to, groups) in self.actions(s, cons) {
            let mut total = W::zero();
            for (obs, group) in &groups {
                let child = s.after(loc, to, obs);
                total += &self.worth(&child, group);
            }
            if total > best {
                best = total;
            }
        }
        self.memo.insert(key, best.clone());
        best
    }

    /// Follows an optimal action everywhere (lowest location on ties; stop
    /// only when no informative dig is affordable).
    fn extract(&mut self, s: InfoState, cons: &[usize]) -> PolicyNode {
        if s.found_count() == self.k {
            return PolicyNode { state: s, action: Action::Stop, children: Vec::new() };
        }
        let mut chosen: Option<(usize, u32, Vec<(Vec<u32>, Vec<usize>)>, W)> = None;
        for (loc, to, groups) in self.actions(&s, cons) {
            let mut total = W::zero();
            for (obs, group) in &groups {
                total += &self.worth(&s.after(loc, to, obs), group);
            }
            if chosen.as_ref().map_or(true, |c| total > c.3) {
                chosen = Some((loc, to, groups, total));
            }
        }
        match chosen {
            None => PolicyNode { state: s, action: Action::Stop, children: Vec::new() },
            Some((loc, to, groups, _)) => {
                let children = groups
                    .into_iter()
                    .map(|(obs, group)| {
                        let child = s.after(loc, to, &obs);
                        (obs, self.extract(child, &group))
                    })
                    .collect();
                PolicyNode { state: s, action: Action::Dig { location: loc, to }, children }
            }
        }
    }
}

/// Checks that a support (with its weights) is invariant under every
/// relabeling of locations, which licenses folding states by location sorting.
fn is_symmetric<W: Mass + std::hash::Hash>(support: &[Vec<Vec<u32>>], weights: &[W]) -> bool {
    let n = support.first().map_or(0, Vec::len);
    let index: HashMap<&Vec<Vec<u32>>, &W> = support.iter().zip(weights).collect();
    // adjacent transpositions generate the symmetric group
    (0..n.saturating_sub(1)).all(|j| {
        support.iter().zip(weights).all(|(s, w)| {
            let mut t = s.clone();
            t.swap(j, j + 1);
            index.get(&t) == Some(&w)
        })
    })
}

fn run<W: Mass + std::hash::Hash>(
    cfg: &GameConfig,
    grid: Grid,
    support: &[Vec<Vec<u32>>],
    weights: &[W],
    fold: bool,
) -> (W, Policy, usize) {
    let budget = effective_budget(cfg, grid);
    let fold = fold && is_symmetric(support, weights);
    let mut solver = Solver { n: cfg.n, k: cfg.k, budget, support, weights, fold, memo: HashMap::new() };
    let all: Vec<usize> = (0..support.len()).collect();
    let root = InfoState::initial(cfg.n, solver.budget);
    let best = solver.worth(&root, &all);
    let tree = solver.extract(root, &all);
    let states = solver.memo.len();
    (best, Policy { m: grid.m, k: cfg.k, root: tree }, states)
}

/// Options for [`best_response_with`].
#[derive(Debug, Clone, Copy)]
pub struct BestResponseOptions {
    /// Fold information states under location relabeling when the mix is
    /// permutation invariant.
    pub fold_symmetry: bool,
}

impl Default for BestResponseOptions {
    fn default() -> Self {
        BestResponseOptions { fold_symmetry: true }
    }
}

/// Maximum, over all adaptive grid Searcher policies with `⌊h·m⌋` steps, of
/// the probability of finding all `k` objects against `mu`, with a policy
/// attaining it.
pub fn best_response_value(mu: &HiderMixed, cfg: &GameConfig, grid: Grid) -> Result<BestResponse> {
    best_response_with(mu, cfg, grid, BestResponseOptions::default())
}

pub fn best_response_with(
    mu: &HiderMixed,
    cfg: &GameConfig,
    grid: Grid,
    opts: BestResponseOptions,
) -> Result<BestResponse> {
    if mu.is_empty() {
        return Err(Error::InvalidMix("empty support".into()));
    }
    let mut support = Vec::with_capacity(mu.len());
    for (s, _) in mu.support() {
        if s.n() != cfg.n || s.object_count() != cfg.k {
            return Err(Error::InvalidHider(format!("{s} does not match n = {}, k = {}", cfg.n, cfg.k)));
        }
        support.push(s.to_grid(grid.m)?);
    }
    // common denominator turns probabilities into integer weights
    let lcm = mu
        .support()
        .iter()
        .fold(num_bigint::BigInt::from(1), |acc, (_, p)| acc.lcm(p.denom()));
    let int_weights: Vec<BigUint> = mu
        .support()
        .iter()
        .map(|(_, p)| (p.numer() * (&lcm / p.denom())).to_biguint().expect("positive weight"))
        .collect();
    let denom = Rational::from_integer(lcm.clone());
    let small = lcm.to_u128().filter(|&l| l < u128::MAX / 2);
    let (value, policy, states) = if small.is_some() {
        let weights: Vec<u128> = int_weights.iter().map(|w| w.to_u128().unwrap()).collect();
        let (w, p, s) = run(cfg, grid, &support, &weights, opts.fold_symmetry);
        (Rational::from_integer(w.into()) / denom, p, s)
    } else {
        let (w, p, s) = run(cfg, grid, &support, &int_weights, opts.fold_symmetry);
        (Rational::from_integer(w.into()) / denom, p, s)
    };
    Ok(BestResponse { value, policy, states })
}

/// All location permutations of `0..n`.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    (0..n).permutations(n).collect()
}
