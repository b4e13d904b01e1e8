//! Dense exact simplex over rationals with Bland's anti-cycling rule.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub objective: Rational,
    pub x: Vec<Rational>,
    /// Optimal dual values, one per constraint.
    pub duals: Vec<Rational>,
    pub pivots: usize,
}

/// Maximises `c·x` subject to `A x ≤ b`, `x ≥ 0`, for `b ≥ 0` (so the origin is
/// feasible and no phase one is needed).
pub fn maximize(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> Result<LpSolution> {
    let rows = a.len();
    let vars = c.len();
    if a.iter().any(|r| r.len() != vars) || b.len() != rows {
        return Err(Error::Domain("ragged LP data".into()));
    }
    if b.iter().any(|v| v.is_negative()) {
        return Err(Error::Domain("LP right-hand side must be non-negative".into()));
    }
    let width = vars + rows + 1;
    let rhs = width - 1;
    let mut t: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = Vec::with_capacity(width);
            r.extend(row.iter().cloned());
            r.extend((0..rows).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r.push(b[i].clone());
            r
        })
        .collect();
    let mut obj: Vec<Rational> = c.iter().map(|v| -v).collect();
    obj.extend(std::iter::repeat(Rational::zero()).take(rows + 1));
    let mut basis: Vec<usize> = (vars..vars + rows).collect();
    let mut pivots = 0;

    while let Some(enter) = (0..rhs).find(|&j| obj[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[rhs] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((pr, _)) = leave else {
            return Err(Error::Domain("LP is unbounded".into()));
        };
        let pv = t[pr][enter].clone();
        for v in t[pr].iter_mut() {
            if !v.is_zero() {
                *v /= &pv;
            }
        }
        let pivot_row = t[pr].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == pr || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for (v, p) in obj.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        basis[pr] = enter;
        pivots += 1;
    }

    let mut x = vec![Rational::zero(); vars];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < vars {
            x[bv] = t[i][rhs].clone();
        }
    }
    let duals = (0..rows).map(|i| obj[vars + i].clone()).collect();
    Ok(LpSolution { objective: obj[rhs].clone(), x, duals, pivots })
}
