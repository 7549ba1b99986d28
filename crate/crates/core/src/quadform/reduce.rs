//! Size reduction of small positive-definite Gram matrices.

use super::lattice::GramMatrix;
use crate::{invalid, Result};

/// Reduces a positive-definite Gram matrix (dimension at most 4) by
/// unimodular base changes until the diagonal is sorted increasingly and
/// every off-diagonal entry satisfies `|g_ij| <= g_ii` for `i < j`.
///
/// The algorithm alternates two moves: swap basis vectors to sort the
/// diagonal, and subtract the rounded projection `t = round(g_ij / g_ii)`
/// of a later vector onto an earlier one.  Each projection step strictly
/// decreases the trace, so the loop terminates.
pub fn minkowski_reduce(gram: &GramMatrix) -> Result<GramMatrix> {
    if !gram.is_positive_definite() {
        return invalid("reduction requires a positive-definite Gram matrix");
    }
    let n = gram.dim();
    let mut g: Vec<Vec<i64>> = gram.rows().to_vec();

    // returns true if any entry changed
    let sort_diagonal = |g: &mut Vec<Vec<i64>>| -> bool {
        let mut changed = false;
        for i in 0..g.len() {
            for j in (i + 1)..g.len() {
                if g[j][j] < g[i][i] {
                    g.swap(i, j);
                    for row in g.iter_mut() {
                        row.swap(i, j);
                    }
                    changed = true;
                }
            }
        }
        changed
    };

    let mut steps = 0usize;
    loop {
        steps += 1;
        if steps > 10_000 {
            return invalid("Gram reduction did not stabilize");
        }
        sort_diagonal(&mut g);
        let mut changed = false;
        for i in 0..n {
            for j in (i + 1)..n {
                // nearest integer to g_ij / g_ii (ties round up); guarantees
                // |g_ij - t g_ii| <= g_ii / 2 afterwards
                let t = (2 * g[i][j] + g[i][i]).div_euclid(2 * g[i][i]);
                if t != 0 {
                    // b_j <- b_j - t b_i
                    for k in 0..n {
                        g[j][k] -= t * g[i][k];
                    }
                    for row in g.iter_mut() {
                        row[j] -= t * row[i];
                    }
                    changed = true;
                }
            }
        }
        if !changed && !sort_diagonal(&mut g) {
            break;
        }
    }

    let reduced = GramMatrix::new(g)?;
    debug_assert!(reduced.is_positive_definite());
    for i in 0..n {
        for j in (i + 1)..n {
            debug_assert!(reduced.entry(i, j).abs() <= reduced.entry(i, i));
        }
    }
    Ok(reduced)
}
