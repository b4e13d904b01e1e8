//! Independent brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use caching_game::enumeration::{enumerate_grid_hiders, Grid};
use caching_game::game::{GameConfig, HiderMixed, HiderPure};
use caching_game::rational::Rational;
use caching_game::solver::{solve_matrix_game, PayoffMatrix};
use num_traits::{One, Zero};

/// All grid Hider strategies, one per labelled placement, in grid steps.
pub fn grid_hiders(cfg: &GameConfig, m: u32) -> Vec<(HiderPure, Vec<Vec<u32>>)> {
    enumerate_grid_hiders(cfg, Grid::new(m).unwrap(), false)
        .into_iter()
        .map(|(h, _)| {
            let steps = h.to_grid(m).unwrap();
            (h, steps)
        })
        .collect()
}

/// Every set of Hider strategies (as a bitmask over `hiders`) that some
/// deterministic adaptive Searcher digging one grid step at a time can win
/// against with `budget` steps.
pub fn achievable_win_sets(hiders: &[Vec<Vec<u32>>], m: u32, budget: u32) -> BTreeSet<u64> {
    assert!(hiders.len() <= 64);
    let n = hiders.first().map_or(0, Vec::len);
    let all: Vec<usize> = (0..hiders.len()).collect();
    rec(hiders, m, &vec![0; n], budget, &all)
}

fn rec(hiders: &[Vec<Vec<u32>>], m: u32, dug: &[u32], left: u32, live: &[usize]) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    let stop: u64 = live
        .iter()
        .filter(|&&i| hiders[i].iter().zip(dug).all(|(loc, &d)| loc.iter().all(|&t| t <= d)))
        .fold(0, |acc, &i| acc | 1 << i);
    out.insert(stop);
    if left == 0 {
        return out;
    }
    for j in 0..dug.len() {
        if dug[j] >= m {
            continue;
        }
        let mut next = dug.to_vec();
        next[j] += 1;
        let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
        for &i in live {
            let seen = hiders[i][j].iter().filter(|&&t| t == next[j]).count();
            match groups.iter_mut().find(|(s, _)| *s == seen) {
                Some((_, g)) => g.push(i),
                None => groups.push((seen, vec![i])),
            }
        }
        let mut combos: BTreeSet<u64> = [0u64].into_iter().collect();
        for (_, g) in &groups {
            let sub = rec(hiders, m, &next, left - 1, g);
            combos = combos.iter().flat_map(|a| sub.iter().map(move |b| a | b)).collect();
        }
        out.extend(combos);
    }
    out
}

/// Best response by exhaustive enumeration of adaptive policies.
pub fn brute_best_response(mu: &HiderMixed, cfg: &GameConfig, m: u32) -> Rational {
    let hiders = grid_hiders(cfg, m);
    let steps: Vec<Vec<Vec<u32>>> = hiders.iter().map(|(_, s)| s.clone()).collect();
    let probs: Vec<Rational> = hiders
        .iter()
        .map(|(h, _)| {
            mu.support().iter().find(|(s, _)| s == h).map_or_else(Rational::zero, |(_, p)| p.clone())
        })
        .collect();
    let budget = (&cfg.h * Rational::from_integer(m.into())).floor().to_integer();
    let budget: u32 = budget.try_into().unwrap();
    achievable_win_sets(&steps, m, budget)
        .iter()
        .map(|mask| {
            probs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).fold(Rational::zero(), |a, (_, p)| a + p)
        })
        .max()
        .unwrap()
}

/// Game value from the full matrix: every Hider strategy against every
/// distinct achievable win set.
pub fn full_matrix_value(cfg: &GameConfig, m: u32) -> Rational {
    let hiders = grid_hiders(cfg, m);
    let steps: Vec<Vec<Vec<u32>>> = hiders.iter().map(|(_, s)| s.clone()).collect();
    let budget: u32 = (&cfg.h * Rational::from_integer(m.into())).floor().to_integer().try_into().unwrap();
    let sets: Vec<u64> = achievable_win_sets(&steps, m, budget).into_iter().collect();
    let entries = (0..hiders.len())
        .map(|i| {
            sets.iter()
                .map(|s| if s >> i & 1 == 1 { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect();
    solve_matrix_game(&PayoffMatrix::new(entries)).unwrap().value
}
