//! The large-`n` Searcher for two objects: dig locations to depth 1 in a random
//! order until the first object turns up at depth `y`, then dig the remaining
//! locations, in the same order, to depth `1 − y`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Hider replies evaluated against the asymptotic Searcher.
#[derive(Debug, Clone, PartialEq)]
pub enum AsymptoticHider {
    /// Both objects at depth 1 in one location.
    SameLocation,
    /// Objects at depths `y` and `1 − y` in distinct locations, `0 < y ≤ 1/2`.
    Split(Rational),
}

fn check_domain(n: usize, h: &Rational) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("need at least 2 locations, got {n}")));
    }
    if *h < Rational::one() || *h >= rational::int(n as i64) {
        return Err(Error::Domain(format!("h = {h} outside [1, {n})")));
    }
    Ok(())
}

fn check_split(y: &Rational) -> Result<()> {
    if *y <= Rational::zero() || *y > rational::rat(1, 2) {
        return Err(Error::Domain(format!("split depth y = {y} outside (0, 1/2]")));
    }
    Ok(())
}

/// Exact win condition when the shallow object is `i`-th and the deep one
/// `j`-th in the Searcher's order (1-based, `i ≠ j`).
pub fn wins_at(i: usize, j: usize, y: &Rational, h: &Rational) -> bool {
    let (i, j) = (rational::int(i as i64), rational::int(j as i64));
    let one = Rational::one();
    let cost = if i < j {
        &i - &one + y + (&one - y) * (&j - &i)
    } else {
        &j - &one + (&one - y) + y * (&i - &j)
    };
    cost <= *h
}

/// Exact win probability of the asymptotic Searcher against `hider`.
pub fn asymptotic_win_prob(n: usize, h: &Rational, hider: &AsymptoticHider) -> Result<Rational> {
    check_domain(n, h)?;
    match hider {
        AsymptoticHider::SameLocation => Ok(rational::rat(rational::floor_i64(h), n as i64)),
        AsymptoticHider::Split(y) => {
            check_split(y)?;
            let wins = (1..=n)
                .flat_map(|i| (1..=n).map(move |j| (i, j)))
                .filter(|&(i, j)| i != j && wins_at(i, j, y, h))
                .count();
            Ok(rational::rat(wins as i64, (n * (n - 1)) as i64))
        }
    }
}

/// Ordered pairs `i ≠ j` in `1..=n` with `i·y + j·(1 − y) ≤ h`, a sufficient
/// condition for a win.
pub fn lattice_count(n: usize, h: &Rational, y: &Rational) -> Result<usize> {
    check_domain(n, h)?;
    check_split(y)?;
    let one = Rational::one();
    Ok((1..=n)
        .flat_map(|i| (1..=n).map(move |j| (i, j)))
        .filter(|&(i, j)| {
            i != j && rational::int(i as i64) * y + rational::int(j as i64) * (&one - y) <= *h
        })
        .count())
}

/// The guaranteed win probability `h/n − 2/n`.
pub fn lower_bound(n: usize, h: &Rational) -> Rational {
    (h - rational::int(2)) / rational::int(n as i64)
}

/// The Hider's cap `⌊h⌋/n` from hiding both objects at depth 1 in a random location.
pub fn upper_bound(n: usize, h: &Rational) -> Rational {
    rational::rat(rational::floor_i64(h), n as i64)
}
