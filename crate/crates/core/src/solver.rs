//! Exact solution of the grid game: every grid Hider strategy is a row,
//! Searcher policies are generated as columns by the best-response DP, and each
//! restricted matrix game is solved by exact simplex.
//!
//! With symmetry reduction, rows are location-relabeling orbits and a column
//! is a policy played under a uniformly random relabeling, so its payoff
//! against an orbit is the win rate averaged over the orbit's members.

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::best_response::{best_response_value, permutations, Policy};
use crate::enumeration::{enumerate_grid_hiders, Grid};
use crate::error::{Error, Result};
use crate::game::{GameConfig, HiderMixed, HiderPure, MixEntry};
use crate::lp;
use crate::rational::{self, Rational};

/// Payoff to the column player (Searcher, maximiser); rows belong to the
/// Hider (minimiser).
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffMatrix {
    pub entries: Vec<Vec<Rational>>,
}

impl PayoffMatrix {
    pub fn new(entries: Vec<Vec<Rational>>) -> Self {
        PayoffMatrix { entries }
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, Vec::len)
    }

    /// Largest payoff the column player can get against `row_mix`.
    pub fn row_guarantee(&self, row_mix: &[Rational]) -> Rational {
        (0..self.cols())
            .map(|c| {
                self.entries
                    .iter()
                    .zip(row_mix)
                    .fold(Rational::zero(), |acc, (row, p)| acc + &row[c] * p)
            })
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Smallest payoff `col_mix` concedes against any row.
    pub fn col_guarantee(&self, col_mix: &[Rational]) -> Rational {
        self.entries
            .iter()
            .map(|row| row.iter().zip(col_mix).fold(Rational::zero(), |acc, (a, q)| acc + a * q))
            .min()
            .unwrap_or_else(Rational::zero)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSolution {
    pub value: Rational,
    pub row_mix: Vec<Rational>,
    pub col_mix: Vec<Rational>,
}

/// Minimax value and optimal mixed strategies of a matrix game, exactly.
///
/// The LP is `max Σx s.t. Gᵀx ≤ 1` over the minimiser's strategies, with `G`
/// shifted to be at least 1; the maximiser's mix comes from the optimal duals.
/// When there are more columns than rows the game is transposed (payoffs
/// negated) first, so the tableau has one constraint per row.
pub fn solve_matrix_game(m: &PayoffMatrix) -> Result<MatrixSolution> {
    let rows = m.rows();
    let cols = m.cols();
    if rows == 0 || cols == 0 {
        return Err(Error::EmptyMatrix);
    }
    if m.entries.iter().any(|r| r.len() != cols) {
        return Err(Error::Domain("ragged payoff matrix".into()));
    }
    let sol = if cols > rows {
        let flipped: Vec<Vec<Rational>> =
            (0..cols).map(|c| (0..rows).map(|r| -&m.entries[r][c]).collect()).collect();
        let (value, col_mix, row_mix) = solve_for_minimiser(&flipped)?;
        MatrixSolution { value: -value, row_mix, col_mix }
    } else {
        let (value, row_mix, col_mix) = solve_for_minimiser(&m.entries)?;
        MatrixSolution { value, row_mix, col_mix }
    };
    debug_assert_eq!(m.row_guarantee(&sol.row_mix), sol.value);
    debug_assert_eq!(m.col_guarantee(&sol.col_mix), sol.value);
    Ok(sol)
}

/// `entries[r][c]` is paid by row player `r` (minimiser) to column player `c`.
/// Returns the value, the row mix and the column mix.
fn solve_for_minimiser(entries: &[Vec<Rational>]) -> Result<(Rational, Vec<Rational>, Vec<Rational>)> {
    let rows = entries.len();
    let cols = entries[0].len();
    let min = entries.iter().flatten().min().cloned().unwrap();
    let shift = Rational::one() - min;
    let a: Vec<Vec<Rational>> =
        (0..cols).map(|c| (0..rows).map(|r| &entries[r][c] + &shift).collect()).collect();
    let b = vec![Rational::one(); cols];
    let obj = vec![Rational::one(); rows];
    let sol = lp::maximize(&a, &b, &obj)?;
    let shifted_value = Rational::one() / &sol.objective;
    let row_mix: Vec<Rational> = sol.x.iter().map(|v| v * &shifted_value).collect();
    let col_mix: Vec<Rational> = sol.duals.iter().map(|v| v * &shifted_value).collect();
    Ok((shifted_value - shift, row_mix, col_mix))
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Rows are relabeling orbits and columns are played under random relabeling.
    pub reduce_symmetry: bool,
    /// Safety valve on double-oracle iterations.
    pub max_iterations: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { reduce_symmetry: true, max_iterations: 10_000 }
    }
}

/// Value and optimal strategies of the grid game.
#[derive(Debug, Clone, PartialEq)]
pub struct GameSolution {
    pub cfg: GameConfig,
    pub grid: Grid,
    pub value: Rational,
    pub hider_mix: HiderMixed,
    /// Generated policies with their probability (zero-probability columns dropped).
    pub searcher_mix: Vec<(Policy, Rational)>,
    /// Whether each Searcher policy is played under a uniformly random relabeling of locations.
    pub relabel: bool,
    pub iterations: usize,
    /// Restricted-LP value after each iteration.
    pub lp_values: Vec<Rational>,
}

struct Row {
    members: Vec<Vec<Vec<u32>>>,
}

fn build_rows(cfg: &GameConfig, grid: Grid, reduce: bool) -> Result<Vec<Row>> {
    let perms = if reduce { permutations(cfg.n) } else { vec![(0..cfg.n).collect()] };
    enumerate_grid_hiders(cfg, grid, reduce)
        .into_iter()
        .map(|(s, _)| {
            let mut seen = HashSet::new();
            let mut members = Vec::new();
            for p in &perms {
                let t = s.permuted(p);
                if seen.insert(t.clone()) {
                    members.push(t.to_grid(grid.m)?);
                }
            }
            Ok(Row { members })
        })
        .collect()
}

fn column(policy: &Policy, rows: &[Row]) -> Vec<Rational> {
    rows.par_iter()
        .map(|row| {
            let wins = row.members.iter().filter(|h| policy.wins_against_steps(h)).count();
            rational::rat(wins as i64, row.members.len() as i64)
        })
        .collect()
}

pub fn solve_game(cfg: &GameConfig, grid: Grid) -> Result<GameSolution> {
    solve_game_with(cfg, grid, SolveOptions::default())
}

/// Double oracle: solve the LP over the current columns, compute the
/// Searcher's best response to the LP's Hider mix, add it while it beats the
/// LP value, stop at exact equality.
pub fn solve_game_with(cfg: &GameConfig, grid: Grid, opts: SolveOptions) -> Result<GameSolution> {
    cfg.validate()?;
    let rows = build_rows(cfg, grid, opts.reduce_symmetry)?;
    let all_hiders: Vec<Vec<Vec<u32>>> = rows.iter().flat_map(|r| r.members.iter().cloned()).collect();
    let mut policies = vec![Policy::sequential(cfg, grid, &all_hiders)];
    let mut columns = vec![column(&policies[0], &rows)];
    let mut lp_values = Vec::new();

    for iteration in 1..=opts.max_iterations {
        let matrix = PayoffMatrix::new(
            (0..rows.len()).map(|r| columns.iter().map(|c| c[r].clone()).collect()).collect(),
        );
        let sol = solve_matrix_game(&matrix)?;
        lp_values.push(sol.value.clone());
        let hider_mix = expand_mix(&rows, &sol.row_mix, grid)?;
        let br = best_response_value(&hider_mix, cfg, grid)?;
        if br.value < sol.value {
            return Err(Error::Domain(format!(
                "best response {} below restricted value {}",
                br.value, sol.value
            )));
        }
        if br.value == sol.value {
            let searcher_mix = policies
                .into_iter()
                .zip(sol.col_mix)
                .filter(|(_, q)| q.is_positive())
                .collect();
            return Ok(GameSolution {
                cfg: cfg.clone(),
                grid,
                value: sol.value,
                hider_mix,
                searcher_mix,
                relabel: opts.reduce_symmetry,
                iterations: iteration,
                lp_values,
            });
        }
        let col = column(&br.policy, &rows);
        if columns.contains(&col) {
            return Err(Error::Domain("best response duplicates an existing column".into()));
        }
        policies.push(br.policy);
        columns.push(col);
    }
    Err(Error::Domain(format!("double oracle did not converge in {} iterations", opts.max_iterations)))
}

fn expand_mix(rows: &[Row], row_mix: &[Rational], grid: Grid) -> Result<HiderMixed> {
    let mut support = Vec::new();
    for (row, p) in rows.iter().zip(row_mix) {
        if !p.is_positive() {
            continue;
        }
        let share = p / rational::int(row.members.len() as i64);
        for member in &row.members {
            support.push((HiderPure::from_grid(member, grid.m), share.clone()));
        }
    }
    HiderMixed::new(support)
}

impl GameSolution {
    /// Win probability of the Searcher mix against one Hider pure strategy.
    pub fn searcher_win_probability(&self, hp: &HiderPure) -> Result<Rational> {
        let members: Vec<Vec<Vec<u32>>> = if self.relabel {
            let mut seen = HashSet::new();
            permutations(self.cfg.n)
                .iter()
                .map(|p| hp.permuted(p))
                .filter(|t| seen.insert(t.clone()))
                .map(|t| t.to_grid(self.grid.m))
                .collect::<Result<_>>()?
        } else {
            vec![hp.to_grid(self.grid.m)?]
        };
        let count = rational::int(members.len() as i64);
        Ok(self.searcher_mix.iter().fold(Rational::zero(), |acc, (policy, q)| {
            let wins = members.iter().filter(|h| policy.wins_against_steps(h)).count();
            acc + q * rational::int(wins as i64) / &count
        }))
    }

    /// Re-checks optimality from scratch: the Hider mix concedes exactly the
    /// value to a best response, and the Searcher mix wins with at least the
    /// value against every grid Hider strategy.
    pub fn certify(&self) -> Result<bool> {
        let br = best_response_value(&self.hider_mix, &self.cfg, self.grid)?;
        if br.value != self.value {
            return Ok(false);
        }
        for (hp, _) in enumerate_grid_hiders(&self.cfg, self.grid, false) {
            if self.searcher_win_probability(&hp)? < self.value {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_doc(&self) -> SolutionDoc {
        SolutionDoc {
            config: self.cfg.clone(),
            grid: self.grid,
            value: self.value.clone(),
            hider_mix: self.hider_mix.entries(),
            searcher_policies: self
                .searcher_mix
                .iter()
                .enumerate()
                .map(|(id, (policy, prob))| PolicyEntry { id, prob: prob.clone(), policy: policy.clone() })
                .collect(),
            relabel: self.relabel,
            iterations: self.iterations,
            lp_values: self.lp_values.iter().map(rational::format).collect(),
        }
    }

    pub fn from_doc(doc: SolutionDoc) -> Result<Self> {
        let lp_values = doc.lp_values.iter().map(|s| rational::parse(s)).collect::<Result<_>>()?;
        Ok(GameSolution {
            cfg: doc.config,
            grid: doc.grid,
            value: doc.value,
            hider_mix: HiderMixed::from_entries(doc.hider_mix)?,
            searcher_mix: doc.searcher_policies.into_iter().map(|e| (e.policy, e.prob)).collect(),
            relabel: doc.relabel,
            iterations: doc.iterations,
            lp_values,
        })
    }

    /// `n,k,h,m,value` for table assembly.
    pub fn csv_row(&self) -> String {
        format!("{},{},{},{},{}", self.cfg.n, self.cfg.k, self.cfg.h, self.grid.m, self.value)
    }
}

/// JSON form of a [`GameSolution`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionDoc {
    pub config: GameConfig,
    pub grid: Grid,
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
    pub hider_mix: Vec<MixEntry>,
    pub searcher_policies: Vec<PolicyEntry>,
    pub relabel: bool,
    pub iterations: usize,
    pub lp_values: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolicyEntry {
    pub id: usize,
    #[serde(with = "rational::serde_str")]
    pub prob: Rational,
    pub policy: Policy,
}
