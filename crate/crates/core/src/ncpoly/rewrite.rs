//! Plain adjacent-swap rewriting with a selectable redex strategy.
//!
//! Slow and uncached; it exists as an independent reference for the
//! memoized product engine.

use std::collections::BTreeMap;

use super::tensor::{is_canonical, Letter};
use crate::scalars::GradedScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    LeftInnermost,
    RightInnermost,
}

#[derive(Clone, Debug, Default)]
pub struct RewriteStats {
    pub steps: u64,
    /// Largest number of swaps applied to a single monomial before it became
    /// canonical or was split.
    pub max_steps_per_monomial: u64,
    /// Largest length of any monomial that entered the queue.
    pub max_len: usize,
}

fn redex<L: Letter>(w: &[L], s: Strategy) -> Option<usize> {
    let mut it = (0..w.len().saturating_sub(1)).filter(|&p| w[p] > w[p + 1]);
    match s {
        Strategy::LeftInnermost => it.next(),
        Strategy::RightInnermost => it.last(),
    }
}

/// Canonical form of `Σ c w` by repeated swaps `xy -> yx + [x, y]`.
pub fn rewrite<L: Letter>(input: &[(GradedScalar, Vec<L>)], n: u32, strategy: Strategy) -> (BTreeMap<Vec<L>, GradedScalar>, RewriteStats) {
    let mut out: BTreeMap<Vec<L>, GradedScalar> = BTreeMap::new();
    let mut stats = RewriteStats::default();
    let mut queue: Vec<(GradedScalar, Vec<L>)> = input.iter().map(|(c, w)| (c.truncate(n), w.clone())).collect();
    while let Some((c, mut w)) = queue.pop() {
        if c.is_zero() {
            continue;
        }
        stats.max_len = stats.max_len.max(w.len());
        let mut local = 0u64;
        while let Some(p) = redex(&w, strategy) {
            let (x, y) = (w[p], w[p + 1]);
            for (bc, bw) in L::bracket(x, y) {
                let coeff = c.mul_trunc(&bc, n);
                if coeff.is_zero() {
                    continue;
                }
                let mut nw = w[..p].to_vec();
                nw.extend(bw);
                nw.extend_from_slice(&w[p + 2..]);
                queue.push((coeff, nw));
            }
            w.swap(p, p + 1);
            local += 1;
            stats.steps += 1;
        }
        debug_assert!(is_canonical(&w));
        stats.max_steps_per_monomial = stats.max_steps_per_monomial.max(local);
        let e = out.entry(w.clone()).or_default();
        e.add_assign(&c);
        if e.is_zero() {
            out.remove(&w);
        }
    }
    (out, stats)
}
