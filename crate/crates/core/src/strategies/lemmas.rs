//! The four optimal strategy pairs for two objects in four locations, on the
//! budget intervals `[7/4,9/5)`, `[9/5,11/6)`, `[11/6,2)` and `[11/5,7/3)`,
//! plus the per-case win tables used to check the Searcher scripts.

use std::collections::BTreeMap;

use crate::best_response::best_response_value;
use crate::enumeration::{family_d, family_e, Grid};
use crate::error::{Error, Result};
use crate::game::{DigProfile, GameConfig, HiderMixed, HiderPure};
use crate::rational::{rat, Rational};
use crate::strategies::script::{scan_depths, script_min_win_prob, IsSequence, ScriptMix, SearcherScript};

/// Budget interval, value and DP grid of one solved case.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaInfo {
    pub id: u32,
    pub h_low: Rational,
    pub h_high: Rational,
    pub value: Rational,
    /// Grid on which the Hider mix is checked by best response.
    pub grid_m: u32,
}

impl LemmaInfo {
    /// Configuration at the left endpoint of the budget interval, the binding case.
    pub fn config(&self) -> GameConfig {
        GameConfig { n: 4, k: 2, h: self.h_low.clone() }
    }

    /// Largest budget in the interval that the grid can tell apart from `h_high`.
    pub fn h_top(&self) -> Rational {
        let m = rat(self.grid_m as i64, 1);
        let steps = (&self.h_high * &m).ceil() - rat(1, 1);
        steps / m
    }
}

/// Outcome of checking both halves of a solved case.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub info: LemmaInfo,
    /// Minimum Searcher win probability over the scanned Hider strategies at `h_low`.
    pub searcher_min: Rational,
    pub searcher_minimiser: HiderPure,
    /// Best-response value against the Hider mix at `h_top`.
    pub hider_best_response: Rational,
}

impl LemmaReport {
    pub fn searcher_ok(&self) -> bool {
        self.searcher_min == self.info.value
    }

    pub fn hider_ok(&self) -> bool {
        self.hider_best_response == self.info.value
    }

    pub fn passed(&self) -> bool {
        self.searcher_ok() && self.hider_ok()
    }
}

/// Checks the Searcher script by exhaustive scan on a `scan` grid (plus the
/// script breakpoints) and the Hider mix by exact best response.
pub fn verify_lemma(id: u32, scan: Grid) -> Result<LemmaReport> {
    let info = lemma_info(id)?;
    let script = lemma_script(id)?;
    let (searcher_min, searcher_minimiser) = script_min_win_prob(&script, &info.config(), scan)?;
    let top = GameConfig { n: 4, k: 2, h: info.h_top() };
    let hider = lemma_hider(id)?;
    let hider_best_response = best_response_value(&hider, &top, Grid::new(info.grid_m)?)?.value;
    Ok(LemmaReport { info, searcher_min, searcher_minimiser, hider_best_response })
}

pub const LEMMA_IDS: [u32; 4] = [2, 3, 4, 5];

pub fn lemma_info(id: u32) -> Result<LemmaInfo> {
    let (h_low, h_high, value, grid_m) = match id {
        2 => (rat(11, 6), rat(2, 1), rat(1, 4), 6),
        3 => (rat(11, 5), rat(7, 3), rat(9, 20), 15),
        4 => (rat(7, 4), rat(9, 5), rat(9, 40), 20),
        5 => (rat(9, 5), rat(11, 6), rat(7, 30), 30),
        _ => return Err(Error::UnknownLemma(id)),
    };
    Ok(LemmaInfo { id, h_low, h_high, value, grid_m })
}

/// Uniform Hider mix over the union of `D(x)` for `ds` and `E(x)` for `es`.
fn union_mix(ds: &[(i64, i64)], es: &[(i64, i64)]) -> Result<HiderMixed> {
    let cfg = GameConfig { n: 4, k: 2, h: rat(2, 1) };
    let mut all: Vec<HiderPure> = Vec::new();
    for &(p, q) in ds {
        all.extend(family_d(&rat(p, q), &cfg)?);
    }
    for &(p, q) in es {
        all.extend(family_e(&rat(p, q), &cfg)?);
    }
    HiderMixed::uniform(all)
}

pub fn lemma_hider(id: u32) -> Result<HiderMixed> {
    match id {
        2 => union_mix(&[], &[(1, 1)]),
        3 => union_mix(&[(1, 3)], &[(1, 3), (2, 3)]),
        4 => union_mix(&[(1, 5), (2, 5)], &[(1, 5), (2, 5), (3, 5), (4, 5)]),
        5 => union_mix(&[(1, 6), (1, 2)], &[(1, 6), (1, 2), (5, 6)]),
        _ => Err(Error::UnknownLemma(id)),
    }
}

fn wp(ds: [(i64, i64); 4]) -> DigProfile {
    DigProfile::new(ds.iter().map(|&(p, q)| rat(p, q)).collect())
}

/// Parses an order such as `"1234"` (1-based location digits).
fn seq(s: &str) -> IsSequence {
    s.bytes().map(|b| (b - b'1') as usize).collect()
}

fn rule(entries: &[(&str, Rational)]) -> Vec<(IsSequence, Rational)> {
    entries.iter().map(|(s, p)| (seq(s), p.clone())).collect()
}

fn script(stage1: Vec<DigProfile>, l1: Vec<(IsSequence, Rational)>, l2: Vec<(IsSequence, Rational)>) -> SearcherScript {
    let mut stage2 = BTreeMap::new();
    stage2.insert(0, l1);
    stage2.insert(1, l2);
    SearcherScript::new(stage1, stage2, true)
}

/// Searcher script of each case. For the `[11/6,2)` case a find in `L2` is
/// followed by `IS(134)`: that is the search traced in the case analysis
/// (dig `L1` and `L3` to `1 − y`); the `IS(234)` form loses to `(x,y,0,0)` with
/// `x` just above `1/2`.
pub fn lemma_script(id: u32) -> Result<ScriptMix> {
    let one = rat(1, 1);
    let z = (0, 1);
    match id {
        2 => Ok(ScriptMix::single(script(
            vec![wp([(1, 2), z, z, z]), wp([(1, 2), (1, 2), z, z]), wp([(1, 1), (1, 2), z, z])],
            rule(&[("1234", one.clone())]),
            rule(&[("134", one)]),
        ))),
        3 => Ok(ScriptMix::single(script(
            vec![
                wp([(3, 5), z, z, z]),
                wp([(3, 5), (2, 5), z, z]),
                wp([(4, 5), (3, 5), z, z]),
                wp([(4, 5), (4, 5), z, z]),
                wp([(1, 1), (4, 5), z, z]),
                wp([(1, 1), (1, 1), z, z]),
            ],
            rule(&[("1234", one)]),
            rule(&[("1234", rat(4, 5)), ("134", rat(1, 5))]),
        ))),
        4 => Ok(ScriptMix {
            components: vec![
                (
                    script(
                        vec![
                            wp([(3, 4), z, z, z]),
                            wp([(3, 4), (1, 4), z, z]),
                            wp([(1, 1), (1, 4), z, z]),
                            wp([(1, 1), (3, 4), z, z]),
                        ],
                        rule(&[("1234", one.clone())]),
                        rule(&[("134", one.clone())]),
                    ),
                    rat(3, 4),
                ),
                (
                    script(
                        vec![wp([(3, 4), z, z, z]), wp([(3, 4), (3, 4), z, z]), wp([(1, 1), (3, 4), z, z])],
                        rule(&[("1234", rat(3, 5)), ("234", rat(2, 5))]),
                        rule(&[("134", one)]),
                    ),
                    rat(1, 4),
                ),
            ],
        }),
        5 => Ok(ScriptMix {
            components: vec![
                (
                    script(
                        vec![wp([(1, 1), z, z, z]), wp([(1, 1), (4, 5), z, z])],
                        rule(&[("1234", one.clone())]),
                        rule(&[("34", one.clone())]),
                    ),
                    rat(2, 3),
                ),
                (
                    script(
                        vec![
                            wp([(3, 5), z, z, z]),
                            wp([(3, 5), (3, 5), z, z]),
                            wp([(1, 1), (3, 5), z, z]),
                            wp([(1, 1), (4, 5), z, z]),
                        ],
                        rule(&[("1234", rat(4, 5)), ("234", rat(1, 5))]),
                        rule(&[("134", one)]),
                    ),
                    rat(1, 3),
                ),
            ],
        }),
        _ => Err(Error::UnknownLemma(id)),
    }
}

/// Which depths a case table covers (objects in different locations, deeper at
/// `x`, shallower at `y ≤ x`, `x + y ≤ 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct Regime {
    pub x_min: Rational,
    pub x_max: Rational,
}

impl Regime {
    pub fn contains(&self, x: &Rational, y: &Rational) -> bool {
        *x >= self.x_min && *x <= self.x_max && y <= x && x + y <= rat(1, 1)
    }
}

/// One column of a case table: the placements (in the Searcher's labels) it
/// groups and the published minimum win probability.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseColumn {
    /// `(location of x, location of y)` pairs, 0-based.
    pub placements: Vec<(usize, usize)>,
    pub claimed: Rational,
}

impl CaseColumn {
    /// Label such as `(x,0,y,0) or (y,0,x,0)`.
    pub fn label(&self, n: usize) -> String {
        self.placements
            .iter()
            .map(|&(lx, ly)| {
                let cells: Vec<&str> = (0..n)
                    .map(|i| if i == lx { "x" } else if i == ly { "y" } else { "0" })
                    .collect();
                format!("({})", cells.join(","))
            })
            .collect::<Vec<_>>()
            .join(" or ")
    }

    pub fn hider(lx: usize, ly: usize, x: &Rational, y: &Rational) -> HiderPure {
        let mut sets = vec![Vec::new(); 4];
        sets[lx].push(x.clone());
        sets[ly].push(y.clone());
        HiderPure::new(sets)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseTable {
    pub name: &'static str,
    pub lemma: u32,
    pub regime: Regime,
    pub columns: Vec<CaseColumn>,
}

fn col(placements: &[(usize, usize)], claimed: Rational) -> CaseColumn {
    CaseColumn { placements: placements.to_vec(), claimed }
}

/// Published per-ordering Searcher win tables for the two mixed scripts.
pub fn case_tables() -> Vec<CaseTable> {
    let one = rat(1, 1);
    vec![
        CaseTable {
            name: "Table 3",
            lemma: 4,
            regime: Regime { x_min: rat(3, 4), x_max: one.clone() },
            columns: vec![
                col(&[(0, 1)], one.clone()),
                col(&[(1, 0)], rat(1, 4) * rat(2, 5)),
                col(&[(0, 2)], rat(3, 4) + rat(1, 4) * rat(2, 5)),
                col(&[(0, 3)], rat(3, 4)),
            ],
        },
        CaseTable {
            name: "Table 4",
            lemma: 4,
            regime: Regime { x_min: rat(0, 1), x_max: rat(3, 4) },
            columns: vec![
                col(&[(0, 1), (1, 0)], one.clone()),
                col(&[(0, 2), (2, 0)], rat(1, 10)),
                col(&[(1, 2), (2, 1)], rat(1, 4)),
            ],
        },
        CaseTable {
            name: "Table 6",
            lemma: 5,
            regime: Regime { x_min: rat(4, 5), x_max: one.clone() },
            columns: vec![
                col(&[(0, 1)], one.clone()),
                col(&[(1, 0)], rat(1, 3) * rat(1, 5)),
                col(&[(0, 2)], one.clone()),
                col(&[(0, 3)], rat(2, 3) + rat(1, 3) * rat(1, 5)),
            ],
        },
        CaseTable {
            name: "Table 7",
            lemma: 5,
            regime: Regime { x_min: rat(3, 5), x_max: rat(4, 5) },
            columns: vec![
                col(&[(0, 1)], one.clone()),
                col(&[(1, 0)], one.clone()),
                col(&[(0, 2)], rat(11, 15)),
                col(&[(2, 0)], rat(1, 15)),
                col(&[(2, 1)], rat(1, 3)),
            ],
        },
        CaseTable {
            name: "Table 8",
            lemma: 5,
            regime: Regime { x_min: rat(0, 1), x_max: rat(3, 5) },
            columns: vec![
                col(&[(0, 1), (1, 0)], one),
                col(&[(0, 2), (2, 0)], rat(1, 15)),
                col(&[(1, 2), (2, 1)], rat(1, 3)),
            ],
        },
    ]
}

/// Minimum of the case table column over the regime's scan points, with a
/// minimising `(x, y)`.
pub fn column_minimum(table: &CaseTable, column: &CaseColumn, scan: Grid) -> Result<(Rational, Rational, Rational)> {
    let info = lemma_info(table.lemma)?;
    let cfg = info.config();
    let mix = lemma_script(table.lemma)?;
    let depths = scan_depths(&mix, scan);
    let mut best: Option<(Rational, Rational, Rational)> = None;
    for x in &depths {
        for y in &depths {
            if !table.regime.contains(x, y) {
                continue;
            }
            for &(lx, ly) in &column.placements {
                let w = mix.win_prob_labeled(&CaseColumn::hider(lx, ly, x, y), &cfg)?;
                if best.as_ref().map_or(true, |b| w < b.0) {
                    best = Some((w, x.clone(), y.clone()));
                }
            }
        }
    }
    best.ok_or_else(|| Error::Domain(format!("{} has no scan points", table.name)))
}
