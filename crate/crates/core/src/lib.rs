//! Exact solver and strategy verifier for the two-player zero-sum caching game.
//!
//! A Hider buries `k` objects among `n` locations, digging to a total depth of
//! at most 1 (the sum over locations of the deepest burial). A Searcher with a
//! dig budget `h` wins iff he unearths every object. All arithmetic is exact.
//!
//! The crate is organised as:
//!
//! - [`rational`] and [`game`]: exact numbers, configurations, Hider strategies.
//! - [`enumeration`]: grid-discretised Hider strategy sets and the `D(x)`/`E(x)` families.
//! - [`best_response`]: the Searcher's exact best response against a finite Hider mix.
//! - [`lp`] and [`solver`]: exact simplex for matrix games and the double-oracle loop.
//! - [`strategies`]: named scripted strategies, their exact evaluation, the
//!   asymptotic Searcher and the uniform allocation strategies.

pub mod best_response;
pub mod enumeration;
pub mod error;
pub mod game;
pub mod lp;
pub mod rational;
pub mod solver;
pub mod strategies;

pub use best_response::{best_response_value, effective_budget, BestResponse, InfoState, Policy, PolicyNode};
pub use enumeration::{enumerate_grid_hiders, family_d, family_e, Grid};
pub use error::{Error, Result};
pub use game::{canonicalize, validate_hider, DigProfile, GameConfig, HiderMixed, HiderPure};
pub use rational::Rational;
pub use solver::{solve_game, solve_matrix_game, GameSolution, MatrixSolution};
