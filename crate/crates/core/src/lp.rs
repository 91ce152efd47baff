//! Dense tableau simplex for `max c^T x` subject to `A x <= b`, `x >= 0`, `b >= 0`.
//!
//! The slack basis is feasible for `b >= 0`, so no phase one is needed. Bland's
//! rule keeps degenerate pivots from cycling.

use crate::error::{GaborError, Result};

const PIVOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub value: f64,
    pub pivots: usize,
}

/// Solves the LP; `a` is row-major with one row per constraint.
pub fn maximize(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<LpSolution> {
    let m = a.len();
    let nv = c.len();
    if b.len() != m || a.iter().any(|row| row.len() != nv) {
        return Err(GaborError::DimensionMismatch("LP data has inconsistent sizes".into()));
    }
    if b.iter().any(|&v| v < 0.0 || !v.is_finite()) {
        return Err(GaborError::DomainError("LP right-hand side must be nonnegative".into()));
    }
    let width = nv + m + 1;
    // rows 0..m are constraints, row m is the objective row (reduced costs)
    let mut t = vec![vec![0.0; width]; m + 1];
    for i in 0..m {
        t[i][..nv].copy_from_slice(&a[i]);
        t[i][nv + i] = 1.0;
        t[i][width - 1] = b[i];
    }
    for j in 0..nv {
        t[m][j] = -c[j];
    }
    let mut basis: Vec<usize> = (nv..nv + m).collect();
    let max_pivots = 50 * (m + nv + 10);
    let mut pivots = 0;
    loop {
        let Some(col) = (0..nv + m).find(|&j| t[m][j] < -PIVOT_TOL) else {
            break;
        };
        let mut row: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..m {
            if t[i][col] > PIVOT_TOL {
                let ratio = t[i][width - 1] / t[i][col];
                let better = match row {
                    None => true,
                    Some(r) => ratio < best - PIVOT_TOL || (ratio <= best + PIVOT_TOL && basis[i] < basis[r]),
                };
                if better {
                    best = ratio;
                    row = Some(i);
                }
            }
        }
        let Some(r) = row else {
            return Err(GaborError::DomainError("LP is unbounded".into()));
        };
        let p = t[r][col];
        for v in t[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = t[r].clone();
        for (i, row_i) in t.iter_mut().enumerate() {
            if i != r {
                let f = row_i[col];
                if f != 0.0 {
                    for (v, pv) in row_i.iter_mut().zip(&pivot_row) {
                        *v -= f * pv;
                    }
                }
            }
        }
        basis[r] = col;
        pivots += 1;
        if pivots > max_pivots {
            return Err(GaborError::NoConvergence {
                iterations: pivots,
                lower: f64::NEG_INFINITY,
                upper: t[m][width - 1],
            });
        }
    }
    let mut x = vec![0.0; nv];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < nv {
            x[bv] = t[i][width - 1].max(0.0);
        }
    }
    Ok(LpSolution {
        x,
        value: t[m][width - 1],
        pivots,
    })
}
