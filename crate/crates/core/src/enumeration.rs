//! Finite Hider strategy sets: every placement on the depth grid `{1/m, …, m/m}`,
//! and the two-object families `D(x)` and `E(x)`.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{canonicalize, cmp_hiders, GameConfig, HiderPure};
use crate::rational::Rational;

/// Depth grid of resolution `m`: permissible depths are `t/m` for `t = 1..=m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Grid {
    pub m: u32,
}

impl Grid {
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("grid resolution m must be at least 1".into()));
        }
        Ok(Grid { m })
    }
}

/// All grid placements as per-location step lists, in generation order.
pub(crate) fn grid_placements(n: usize, k: usize, m: u32) -> Vec<Vec<Vec<u32>>> {
    fn rec(loc: usize, n: usize, left: usize, cap: u32, cur: &mut Vec<Vec<u32>>, out: &mut Vec<Vec<Vec<u32>>>) {
        if loc == n {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for c in 0..=left {
            if c == 0 {
                cur.push(Vec::new());
                rec(loc + 1, n, left, cap, cur, out);
                cur.pop();
                continue;
            }
            for combo in (1..=cap).combinations_with_replacement(c) {
                let deepest = *combo.last().unwrap();
                cur.push(combo);
                rec(loc + 1, n, left - c, cap - deepest, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, m, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Every valid Hider strategy with all depths on the grid.
///
/// With `reduce_symmetry`, each location-relabeling orbit is listed once by its
/// canonical representative, weighted by the orbit size; otherwise every
/// strategy is listed with weight 1. Output is sorted by the canonical location
/// order.
pub fn enumerate_grid_hiders(cfg: &GameConfig, grid: Grid, reduce_symmetry: bool) -> Vec<(HiderPure, u64)> {
    let all = grid_placements(cfg.n, cfg.k, grid.m)
        .into_iter()
        .map(|p| HiderPure::from_grid(&p, grid.m));
    let mut out: Vec<(HiderPure, u64)> = if reduce_symmetry {
        let mut counts: BTreeMap<HiderPure, (u64, u64)> = BTreeMap::new();
        for s in all {
            let (c, orbit) = canonicalize(&s);
            let e = counts.entry(c).or_insert((0, orbit));
            e.0 += 1;
        }
        counts
            .into_iter()
            .map(|(c, (seen, orbit))| {
                debug_assert_eq!(seen, orbit);
                (c, orbit)
            })
            .collect()
    } else {
        all.map(|s| (s, 1)).collect()
    };
    out.sort_by(|a, b| cmp_hiders(&a.0, &b.0));
    out
}

/// Line-oriented dump: one `strategy weight` pair per line.
pub fn dump(entries: &[(HiderPure, u64)]) -> String {
    entries.iter().map(|(s, w)| format!("{s} {w}\n")).collect()
}

fn require_two_objects(cfg: &GameConfig, x: &Rational) -> Result<()> {
    if cfg.k != 2 {
        return Err(Error::UnsupportedK { expected: 2, got: cfg.k });
    }
    if *x <= Rational::from_integer(0.into()) || *x > Rational::one() {
        return Err(Error::Domain(format!("family parameter x = {x} outside (0, 1]")));
    }
    Ok(())
}

/// `D(x)`: one object at depth `x`, the other at depth `1 − x` in a different location.
pub fn family_d(x: &Rational, cfg: &GameConfig) -> Result<Vec<HiderPure>> {
    require_two_objects(cfg, x)?;
    let y = Rational::one() - x;
    if y == Rational::from_integer(0.into()) {
        // D(1) would need an object at depth 0.
        return Err(Error::Domain("D(1) places an object at depth 0".into()));
    }
    let mut out = Vec::new();
    for i in 0..cfg.n {
        for j in 0..cfg.n {
            if i == j {
                continue;
            }
            let mut sets = vec![Vec::new(); cfg.n];
            sets[i].push(x.clone());
            sets[j].push(y.clone());
            out.push(HiderPure::new(sets));
        }
    }
    out.sort_by(cmp_hiders);
    out.dedup();
    Ok(out)
}

/// `E(x)`: both objects in one location, at depths `x` and `1`.
pub fn family_e(x: &Rational, cfg: &GameConfig) -> Result<Vec<HiderPure>> {
    require_two_objects(cfg, x)?;
    let mut out: Vec<HiderPure> = (0..cfg.n)
        .map(|i| {
            let mut sets = vec![Vec::new(); cfg.n];
            sets[i] = vec![x.clone(), Rational::one()];
            HiderPure::new(sets)
        })
        .collect();
    out.sort_by(cmp_hiders);
    Ok(out)
}
