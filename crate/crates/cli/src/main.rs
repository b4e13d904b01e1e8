mod cache;
mod commands;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use caching_game::rational::{self, Rational};
use caching_game::GameConfig;
use clap::{Args, Parser, Subcommand};

use crate::cache::Cache;

#[derive(Parser, Debug)]
#[command(name = "caching-game", version, about = "Exact solver for the caching game")]
struct Cli {
    /// Directory for cached results
    #[arg(long, global = true, env = "CACHING_GAME_CACHE_DIR", default_value = ".cache")]
    cache_dir: PathBuf,

    /// Neither read nor write the cache
    #[arg(long, global = true)]
    no_cache: bool,

    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write the output here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Add decimal approximations next to exact values
    #[arg(long, global = true)]
    decimal: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GameArgs {
    /// Number of locations
    #[arg(long)]
    n: usize,
    /// Number of objects
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Dig budget, as p/q
    #[arg(long, value_parser = parse_rational)]
    h: Rational,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the grid game exactly (JSON)
    Solve {
        #[command(flatten)]
        game: GameArgs,
        /// Hider depths are multiples of 1/m
        #[arg(long)]
        m: u32,
    },
    /// Check both strategies of one of the solved cases (2, 3, 4 or 5)
    VerifyLemma {
        lemma: u32,
        #[arg(long, default_value_t = 60)]
        scan_m: u32,
    },
    /// Values of the two-object, four-location game for every budget interval
    Table1 {
        #[arg(long)]
        csv: bool,
        /// Grid for the rows not covered by a closed form (default: per-row)
        #[arg(long)]
        m: Option<u32>,
        #[arg(long, default_value_t = 60)]
        scan_m: u32,
    },
    /// Win probabilities of the large-n Searcher strategy
    Asymptotic {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_rational)]
        h: Rational,
        /// A single split depth; default scans y = t/scan_m up to 1/2
        #[arg(long, value_parser = parse_rational)]
        y: Option<Rational>,
        #[arg(long, default_value_t = 60)]
        scan_m: u32,
    },
    /// Uniform allocation strategies and the value 1/C(n+k-1,k)
    Proposition {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Also solve the game at h = 1 on the grid m = k
        #[arg(long)]
        check: bool,
    },
    /// List grid Hider strategies with orbit weights
    Enumerate {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long)]
        m: u32,
        /// One strategy per relabeling orbit
        #[arg(long)]
        reduce: bool,
    },
}

fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

fn config(game: &GameArgs) -> Result<GameConfig> {
    Ok(GameConfig::new(game.n, game.k, game.h.clone())?)
}

/// Output text and whether a verification passed.
fn run(cli: &Cli) -> Result<(String, bool)> {
    let cache = Cache::new(&cli.cache_dir, !cli.no_cache);
    match &cli.command {
        Command::Solve { game, m } => {
            let text = commands::solve(&cache, &config(game)?, *m)?;
            if cli.decimal {
                let v = commands::solved_value(&text)?;
                eprintln!("value ≈ {:.6}", rational::to_f64(&v));
            }
            Ok((text, true))
        }
        Command::VerifyLemma { lemma, scan_m } => commands::verify(&cache, *lemma, *scan_m),
        Command::Table1 { csv, m, scan_m } => {
            let rows = commands::table1(&cache, *m, *scan_m)?;
            let ok = rows.iter().all(|r| r.status != "FAIL" && r.status != "MISMATCH" && r.status != "BELOW-CLAIM");
            Ok((commands::render_table(&rows, *csv, cli.decimal), ok))
        }
        Command::Asymptotic { n, h, y, scan_m } => {
            Ok((commands::asymptotic(*n, h, y.clone(), *scan_m, cli.decimal)?, true))
        }
        Command::Proposition { n, k, check } => Ok((commands::proposition(&cache, *n, *k, *check)?, true)),
        Command::Enumerate { game, m, reduce } => {
            let cfg = GameConfig { n: game.n, k: game.k, h: game.h.clone() };
            if cfg.n == 0 || cfg.k == 0 {
                anyhow::bail!("n and k must be positive");
            }
            Ok((commands::enumerate(&cfg, *m, *reduce)?, true))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let (text, ok) = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, &text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
