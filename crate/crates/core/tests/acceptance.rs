//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! A criterion listed in `KNOWN_FAILURES` is reported as FAIL without failing
//! the run; if it starts passing the run fails so the list gets updated.

mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use caching_game::best_response::{best_response_with, BestResponseOptions};
use caching_game::enumeration::enumerate_grid_hiders;
use caching_game::rational::{rat, Rational};
use caching_game::solver::{solve_game_with, PayoffMatrix, SolveOptions};
use caching_game::strategies::asymptotic::{asymptotic_win_prob, lattice_count, lower_bound, AsymptoticHider};
use caching_game::strategies::lemmas::{
    case_tables, column_minimum, lemma_info, lemma_script, verify_lemma, LEMMA_IDS,
};
use caching_game::strategies::script::script_min_win_prob;
use caching_game::strategies::uniform::{proposition_value, uniform_allocation_count, uniform_allocations};
use caching_game::{best_response_value, solve_game, solve_matrix_game, GameConfig, Grid, HiderMixed};
use num_integer::binomial;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KNOWN_FAILURES: &[&str] = &["1.lemma3"];

struct Report {
    results: Vec<(String, bool)>,
}

impl Report {
    fn check(&mut self, id: &str, ok: bool, detail: String) {
        println!("{} {id}: {detail}", if ok { "PASS" } else { "FAIL" });
        self.results.push((id.to_string(), ok));
    }
}

fn cfg(n: usize, k: usize, h: Rational) -> GameConfig {
    GameConfig::new(n, k, h).unwrap()
}

fn lemmas(r: &mut Report) {
    for id in LEMMA_IDS {
        let t = Instant::now();
        let rep = verify_lemma(id, Grid::new(60).unwrap()).unwrap();
        let info = &rep.info;
        r.check(
            &format!("1.lemma{id}"),
            rep.passed(),
            format!(
                "claimed {} | hider best response {} (m={}, h={}) {} | script min {} (scan 60, h={}) {} at {} [{:.1?}]",
                info.value,
                rep.hider_best_response,
                info.grid_m,
                info.h_top(),
                if rep.hider_ok() { "ok" } else { "MISMATCH" },
                rep.searcher_min,
                info.h_low,
                if rep.searcher_ok() { "ok" } else { "MISMATCH" },
                rep.searcher_minimiser,
                t.elapsed()
            ),
        );
    }
    // the lemma statement's IS(234) reading, for the record
    let mut printed = lemma_script(2).unwrap();
    printed.components[0].0.stage2.insert(1, vec![(vec![1, 2, 3], rat(1, 1))]);
    let (v, at) = script_min_win_prob(&printed, &lemma_info(2).unwrap().config(), Grid::new(60).unwrap()).unwrap();
    println!("info 1.lemma2: with IS(234) after a find in L2 the script minimum is {v} at {at}");
}

fn full_solves(r: &mut Report) {
    let cases = [
        (2, 2, rat(1, 1), 2, rat(1, 3)),
        (2, 2, rat(3, 2), 2, rat(1, 2)),
        (4, 2, rat(1, 1), 2, rat(1, 10)),
        (4, 2, rat(11, 6), 6, rat(1, 4)),
    ];
    for (n, k, h, m, want) in cases {
        let t = Instant::now();
        let s = solve_game(&cfg(n, k, h.clone()), Grid::new(m).unwrap()).unwrap();
        let certified = s.certify().unwrap();
        r.check(
            &format!("2.solve(n={n},k={k},h={h},m={m})"),
            s.value == want && certified,
            format!("value {} expected {want}, certified {certified}, {} iterations [{:.1?}]", s.value, s.iterations, t.elapsed()),
        );
    }
}

fn proposition(r: &mut Report) {
    for (n, k) in [(2usize, 2usize), (3, 2), (4, 2), (2, 3), (3, 3)] {
        let s = solve_game(&cfg(n, k, rat(1, 1)), Grid::new(k as u32).unwrap()).unwrap();
        let count = uniform_allocation_count(n, k);
        let ok = s.value == proposition_value(n, k)
            && count == binomial((n + k - 1) as u128, k as u128)
            && uniform_allocations(n, k).len() as u128 == count;
        r.check(
            &format!("3.proposition(n={n},k={k})"),
            ok,
            format!("solve {} vs 1/C({},{}) = {}", s.value, n + k - 1, k, proposition_value(n, k)),
        );
    }
}

fn asymptotic(r: &mut Report) {
    let mut checked = 0usize;
    let mut violations = Vec::new();
    let mut lattice_below = 0usize;
    let mut tightest: Option<(Rational, String)> = None;
    for n in 4..=50usize {
        for hh in n.div_ceil(2)..n {
            let h = rat(hh as i64, 1);
            let bound = lower_bound(n, &h);
            let same = asymptotic_win_prob(n, &h, &AsymptoticHider::SameLocation).unwrap();
            if same != rat(hh as i64, n as i64) || same < bound {
                violations.push(format!("same n={n} h={h}"));
            }
            for t in 1..=30 {
                let y = rat(t, 60);
                let p = asymptotic_win_prob(n, &h, &AsymptoticHider::Split(y.clone())).unwrap();
                let lattice = lattice_count(n, &h, &y).unwrap() as i64;
                checked += 1;
                if p < bound || p < rat(lattice, (n * (n - 1)) as i64) {
                    violations.push(format!("n={n} h={h} y={y}"));
                }
                if rat(lattice, (n * n) as i64) < bound {
                    lattice_below += 1;
                }
                let slack = &p - &bound;
                if tightest.as_ref().map_or(true, |(s, _)| slack < *s) {
                    tightest = Some((slack, format!("n={n} h={h} y={y}")));
                }
            }
        }
    }
    let (slack, at) = tightest.unwrap();
    r.check(
        "4.asymptotic",
        violations.is_empty(),
        format!(
            "{checked} split cases, {} violations{}; smallest slack {slack} at {at}",
            violations.len(),
            violations.first().map(|v| format!(" (first {v})")).unwrap_or_default()
        ),
    );
    println!("info 4.asymptotic: lattice/n^2 below h/n - 2/n in {lattice_below} cases (exact pair count is used for the gate)");
}

fn tables(r: &mut Report) {
    for table in case_tables() {
        for column in &table.columns {
            let (w, x, y) = column_minimum(&table, column, Grid::new(60).unwrap()).unwrap();
            r.check(
                &format!("5.{}[{}]", table.name.replace(' ', ""), column.label(4)),
                w == column.claimed,
                format!("minimum {w} (at x={x}, y={y}) vs table {}", column.claimed),
            );
        }
    }
}

fn remaining_rows(r: &mut Report) {
    let rows = [
        ("[3/2,5/3)", rat(3, 2), rat(3, 20)),
        ("[5/3,7/4)", rat(5, 3), rat(1, 5)),
        ("[2,11/5)", rat(2, 1), rat(2, 5)),
        ("[7/3,3)", rat(7, 3), rat(1, 2)),
        ("[3,4)", rat(3, 1), rat(3, 4)),
    ];
    for (label, h, claimed) in rows {
        let t = Instant::now();
        let values: BTreeMap<u32, Rational> = (1..=5u32)
            .map(|m| (m, solve_game(&cfg(4, 2, h.clone()), Grid::new(m).unwrap()).unwrap().value))
            .collect();
        let bound_ok = values.values().all(|v| *v >= claimed);
        let refine_ok = values[&2] <= values[&1] && values[&4] <= values[&2];
        let exact = values.iter().find(|(_, v)| **v == claimed).map(|(m, _)| *m);
        let listing: Vec<String> = values.iter().map(|(m, v)| format!("m={m}:{v}")).collect();
        r.check(
            &format!("6.row{label}"),
            bound_ok && refine_ok,
            format!(
                "claimed {claimed}; {} ; one-sided bound {} ; m->2m non-increasing {} ; exact at {} [{:.1?}]",
                listing.join(" "),
                if bound_ok { "holds" } else { "VIOLATED" },
                if refine_ok { "holds" } else { "VIOLATED" },
                exact.map_or("no m <= 5".to_string(), |m| format!("m={m}")),
                t.elapsed()
            ),
        );
    }
}

fn oracles(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut br_cases = 0;
    let mut br_bad = 0;
    let mut solve_cases = 0;
    let mut solve_bad = 0;
    for k in 1..=2 {
        for h in [rat(1, 1), rat(5, 4), rat(3, 2), rat(7, 4)] {
            for m in 1..=2u32 {
                let c = cfg(2, k, h.clone());
                let grid = Grid::new(m).unwrap();
                let hiders = common::grid_hiders(&c, m);
                let mut mixes = vec![HiderMixed::uniform(hiders.iter().map(|(s, _)| s.clone()).collect()).unwrap()];
                for _ in 0..8 {
                    let ws: Vec<i64> = hiders.iter().map(|_| rng.gen_range(1..5)).collect();
                    let tot: i64 = ws.iter().sum();
                    mixes.push(
                        HiderMixed::new(hiders.iter().zip(&ws).map(|((s, _), &w)| (s.clone(), rat(w, tot))).collect())
                            .unwrap(),
                    );
                }
                for mu in &mixes {
                    br_cases += 1;
                    if best_response_value(mu, &c, grid).unwrap().value != common::brute_best_response(mu, &c, m) {
                        br_bad += 1;
                    }
                }
                solve_cases += 1;
                if solve_game(&c, grid).unwrap().value != common::full_matrix_value(&c, m) {
                    solve_bad += 1;
                }
            }
        }
    }
    r.check(
        "7.best-response-oracle",
        br_bad == 0,
        format!("{br_cases} mixes vs exhaustive policy-tree enumeration, {br_bad} mismatches"),
    );
    r.check(
        "7.solve-oracle",
        solve_bad == 0,
        format!("{solve_cases} games vs full-matrix LP over all policies, {solve_bad} mismatches"),
    );
}

fn invariants(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    // permutation invariance of the best-response value, folding on and off
    let mut perm_bad = 0;
    let c = cfg(3, 2, rat(3, 2));
    let grid = Grid::new(3).unwrap();
    let all: Vec<_> = enumerate_grid_hiders(&c, grid, false).into_iter().map(|(s, _)| s).collect();
    for _ in 0..6 {
        let ws: Vec<i64> = all.iter().map(|_| rng.gen_range(0..3)).collect();
        let tot: i64 = ws.iter().sum();
        let mu = HiderMixed::new(
            all.iter().zip(&ws).filter(|(_, &w)| w > 0).map(|(s, &w)| (s.clone(), rat(w, tot))).collect(),
        )
        .unwrap();
        let base = best_response_value(&mu, &c, grid).unwrap().value;
        for perm in [[1, 2, 0], [2, 1, 0], [0, 2, 1]] {
            let v = best_response_with(&mu.permuted(&perm), &c, grid, BestResponseOptions { fold_symmetry: false })
                .unwrap()
                .value;
            if v != base {
                perm_bad += 1;
            }
        }
    }
    r.check("8.permutation-invariance", perm_bad == 0, format!("{perm_bad} mismatches over 18 relabelings"));

    // monotone in budget
    let mut mono_bad = 0;
    for n in 2..=4usize {
        let c1 = cfg(n, 2, rat(1, 1));
        let mu = HiderMixed::uniform(
            enumerate_grid_hiders(&c1, Grid::new(2).unwrap(), false).into_iter().map(|(s, _)| s).collect(),
        )
        .unwrap();
        let mut last = rat(0, 1);
        for steps in 2..(2 * n as i64) {
            let v = best_response_value(&mu, &cfg(n, 2, rat(steps, 2)), Grid::new(2).unwrap()).unwrap().value;
            if v < last {
                mono_bad += 1;
            }
            last = v;
        }
    }
    let mut last = rat(0, 1);
    for steps in 2..8 {
        let v = solve_game(&cfg(4, 2, rat(steps, 2)), Grid::new(2).unwrap()).unwrap().value;
        if v < last {
            mono_bad += 1;
        }
        last = v;
    }
    r.check("8.budget-monotonicity", mono_bad == 0, format!("{mono_bad} decreases in best response and game value"));

    // zero duality gap on random matrices and on solved games
    let mut gap_bad = 0;
    for _ in 0..40 {
        let rows = rng.gen_range(1..6);
        let cols = rng.gen_range(1..6);
        let m = PayoffMatrix::new(
            (0..rows).map(|_| (0..cols).map(|_| rat(rng.gen_range(-5..6), rng.gen_range(1..4))).collect()).collect(),
        );
        let s = solve_matrix_game(&m).unwrap();
        if m.row_guarantee(&s.row_mix) != s.value || m.col_guarantee(&s.col_mix) != s.value {
            gap_bad += 1;
        }
    }
    for (n, h, m) in [(3usize, rat(3, 2), 2u32), (3, rat(2, 1), 3), (4, rat(3, 2), 3)] {
        let s = solve_game_with(&cfg(n, 2, h), Grid::new(m).unwrap(), SolveOptions::default()).unwrap();
        if !s.certify().unwrap() || s.lp_values.windows(2).any(|w| w[1] < w[0]) {
            gap_bad += 1;
        }
    }
    r.check("8.duality-gap", gap_bad == 0, format!("{gap_bad} nonzero gaps or uncertified solutions"));

    // orbit weights add up to the full enumeration
    let mut orbit_bad = 0;
    for n in 1..=4usize {
        for k in 1..=3usize {
            for m in 1..=3u32 {
                let c = GameConfig { n, k, h: rat(1, 1) };
                let full = enumerate_grid_hiders(&c, Grid::new(m).unwrap(), false).len() as u64;
                let reduced: u64 =
                    enumerate_grid_hiders(&c, Grid::new(m).unwrap(), true).iter().map(|(_, w)| *w).sum();
                if full != reduced {
                    orbit_bad += 1;
                }
            }
        }
    }
    r.check("8.orbit-weights", orbit_bad == 0, format!("{orbit_bad} mismatches for n<=4, k<=3, m<=3"));

    // script evaluation is monotone in the budget
    let mut script_bad = 0;
    for id in LEMMA_IDS {
        let info = lemma_info(id).unwrap();
        let mix = lemma_script(id).unwrap();
        let lo = info.config();
        let hi = GameConfig { h: &info.h_high - rat(1, 600), ..lo.clone() };
        for s in caching_game::strategies::script::scan_hiders(4, &[rat(1, 5), rat(1, 3), rat(1, 2), rat(2, 3), rat(1, 1)], true) {
            if mix.win_prob(&s, &hi).unwrap() < mix.win_prob(&s, &lo).unwrap() {
                script_bad += 1;
            }
        }
    }
    r.check("8.script-budget-monotonicity", script_bad == 0, format!("{script_bad} decreases between interval endpoints"));
}

fn main() {
    let mut r = Report { results: Vec::new() };
    lemmas(&mut r);
    full_solves(&mut r);
    proposition(&mut r);
    asymptotic(&mut r);
    tables(&mut r);
    remaining_rows(&mut r);
    oracles(&mut r);
    invariants(&mut r);

    let passed = r.results.iter().filter(|(_, ok)| *ok).count();
    println!("acceptance: {passed}/{} criteria passed", r.results.len());
    let mut unexpected = Vec::new();
    for (id, ok) in &r.results {
        let known = KNOWN_FAILURES.contains(&id.as_str());
        if !ok && !known {
            unexpected.push(format!("{id} failed"));
        }
        if *ok && known {
            unexpected.push(format!("{id} now passes; remove it from KNOWN_FAILURES"));
        }
    }
    for id in KNOWN_FAILURES {
        if r.results.iter().any(|(i, ok)| i == id && !ok) {
            println!("known failure {id}: see the analysis in the project notes");
        }
    }
    if !unexpected.is_empty() {
        eprintln!("{}", unexpected.join("\n"));
        std::process::exit(1);
    }
}
