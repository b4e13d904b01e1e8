//! Uniform allocation (Hider) and uniform distribution (Searcher) strategies,
//! optimal when `h < 1 + 1/k`, with value `1 / C(n+k−1, k)`.

use std::fmt;

use num_integer::binomial;

use crate::error::{Error, Result};
use crate::game::{HiderPure, GameConfig};
use crate::rational::{self, Rational};

/// Number of weak compositions of `k` into `n` parts, `C(n+k−1, k)`.
pub fn uniform_allocation_count(n: usize, k: usize) -> u128 {
    binomial((n + k - 1) as u128, k as u128)
}

/// `1 / C(n+k−1, k)`.
pub fn proposition_value(n: usize, k: usize) -> Rational {
    rational::rat(1, uniform_allocation_count(n, k) as i64)
}

/// Ordered `n`-tuples of non-negative integers summing to `k`, lexicographic.
pub fn weak_compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() + 1 == n {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for c in (0..=left).rev() {
            cur.push(c);
            rec(n, left - c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, k, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// `k_i` objects at depths `1/k, …, k_i/k` in each location `i`.
pub fn uniform_allocation(counts: &[usize]) -> HiderPure {
    let k: usize = counts.iter().sum();
    let steps: Vec<Vec<u32>> = counts.iter().map(|&c| (1..=c as u32).collect()).collect();
    HiderPure::from_grid(&steps, k as u32)
}

pub fn uniform_allocations(n: usize, k: usize) -> Vec<HiderPure> {
    weak_compositions(n, k).iter().map(|c| uniform_allocation(c)).collect()
}

/// Searcher strategy that digs each location `i` in turn until it has found
/// `counts[i]` objects there (or the location is exhausted).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformDistribution {
    pub counts: Vec<usize>,
}

impl UniformDistribution {
    pub fn all(n: usize, k: usize) -> Vec<UniformDistribution> {
        weak_compositions(n, k).into_iter().map(|counts| UniformDistribution { counts }).collect()
    }

    /// True iff the strategy finds every object of `hp` within the budget.
    pub fn wins_against(&self, hp: &HiderPure, cfg: &GameConfig) -> Result<bool> {
        if hp.n() != self.counts.len() {
            return Err(Error::InvalidHider(format!("{hp} has {} locations, expected {}", hp.n(), self.counts.len())));
        }
        let mut used = Rational::from_integer(0.into());
        let mut found = 0;
        for (set, &want) in hp.sets().iter().zip(&self.counts) {
            if want == 0 {
                continue;
            }
            let target = if set.len() >= want { set[want - 1].clone() } else { rational::int(1) };
            let reach = if used.clone() + &target <= cfg.h { target } else { &cfg.h - &used };
            found += set.iter().filter(|d| **d <= reach).count();
            used += reach;
        }
        Ok(found == hp.object_count())
    }
}

impl fmt::Display for UniformDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, c)| format!("dig L{} until finding {c} object{}", i + 1, if *c == 1 { "" } else { "s" }))
            .collect();
        write!(f, "{}", parts.join(", then "))
    }
}
