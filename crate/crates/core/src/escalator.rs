//! Escalation of coefficient tuples toward universal forms.
//!
//! A tuple a = (a₁ ≤ … ≤ a_k) fails to be universal when some n — its
//! *truant*, the least nonrepresentable value — exists. Escalation appends
//! every coefficient k ∈ [a_k, t] to a tuple with truant t: any universal
//! extension must use one of those, since n = t itself has to be covered by
//! the new term. Iterating from the empty tuple enumerates exactly the
//! candidate tuples every universal form must extend.
//!
//! Invariant relied on throughout: a truant reported at one scan limit is the
//! global least gap, because representable sets only grow with the limit.

use crate::polygonal::RepMask;
use crate::{invalid, Error, Result};
use rayon::prelude::*;
use serde::Serialize;

/// Hard ceiling for the doubling rescan of apparently-universal tuples.
pub const MAX_SCAN_LIMIT: u64 = 1_000_000;

/// One tuple in the escalation tree.
#[derive(Debug, Clone, Serialize)]
pub struct EscalatorNode {
    pub coeffs: Vec<u64>,
    /// Least nonrepresentable value, or None when none exists below the
    /// recorded scan limit.
    pub truant: Option<u64>,
    /// Limit that the stored truant status was certified against.
    pub scan_limit: u64,
    pub children: Vec<EscalatorNode>,
}

impl EscalatorNode {
    /// All nodes whose tuple has exactly `len` coefficients.
    pub fn nodes_with_len(&self, len: usize) -> Vec<&EscalatorNode> {
        let mut out = Vec::new();
        self.walk(&mut |n| {
            if n.coeffs.len() == len {
                out.push(n);
            }
        });
        out
    }

    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a EscalatorNode)) {
        f(self);
        for c in &self.children {
            c.walk(f);
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(|c| c.node_count()).sum::<usize>()
    }

    /// Largest truant anywhere in the subtree.
    pub fn max_truant(&self) -> u64 {
        let mut best = 0;
        self.walk(&mut |n| {
            if let Some(t) = n.truant {
                best = best.max(t);
            }
        });
        best
    }
}

/// Least n ≤ scan_limit not represented by Σ aⱼ·p_m(xⱼ).
pub fn truant(m: u32, coeffs: &[u64], scan_limit: u64) -> Result<Option<u64>> {
    check_limit(scan_limit)?;
    Ok(RepMask::build(m, coeffs, scan_limit)?.first_missing())
}

fn check_limit(scan_limit: u64) -> Result<()> {
    if scan_limit < 200 {
        return invalid("scan limit below 200 cannot certify small truants");
    }
    Ok(())
}

/// Full escalation tree from the empty tuple, expanding nodes that still have
/// a truant until tuples reach `depth` coefficients.
///
/// A node with no truant at the base scan limit is rescanned with doubled
/// limits (up to [`MAX_SCAN_LIMIT`]) before being accepted as universal;
/// tuples of at most three coefficients are never accepted that way — running
/// out of scan room there reports [`Error::ScanExhausted`] instead, since no
/// such short tuple can cover everything.
pub fn escalate(m: u32, depth: u32, scan_limit: u64) -> Result<EscalatorNode> {
    check_limit(scan_limit)?;
    let mask = RepMask::empty_tuple(scan_limit);
    build_node(m, Vec::new(), mask, depth)
}

fn build_node(
    m: u32,
    coeffs: Vec<u64>,
    mut mask: RepMask,
    depth_left: u32,
) -> Result<EscalatorNode> {
    let mut scan_limit = mask.limit();
    let mut truant = mask.first_missing();
    if truant.is_none() && depth_left > 0 {
        while truant.is_none() && scan_limit < MAX_SCAN_LIMIT {
            scan_limit = (scan_limit * 2).min(MAX_SCAN_LIMIT);
            mask = RepMask::build(m, &coeffs, scan_limit)?;
            truant = mask.first_missing();
        }
        if truant.is_none() && coeffs.len() <= 3 {
            return Err(Error::ScanExhausted {
                coeffs,
                limit: scan_limit,
            });
        }
    }
    let children = match truant {
        Some(t) if depth_left > 0 => {
            let lo = *coeffs.last().unwrap_or(&1);
            (lo..=t)
                .into_par_iter()
                .map(|k| {
                    let mut c = coeffs.clone();
                    c.push(k);
                    let child_mask = mask.extended(m, k)?;
                    build_node(m, c, child_mask, depth_left - 1)
                })
                .collect::<Result<Vec<_>>>()?
        }
        _ => Vec::new(),
    };
    Ok(EscalatorNode {
        coeffs,
        truant,
        scan_limit,
        children,
    })
}
