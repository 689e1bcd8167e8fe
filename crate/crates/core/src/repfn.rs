//! Representation functions.
//!
//! `R_S(n)` counts unordered pairs `s < s'` of `S` with `s + s' = n`;
//! `R_{C,D}(n)` counts ordered pairs `(c, d) ∈ C × D` with `c + d = n`.
//! Profiles are computed by a word-parallel convolution of bit-vectors: for
//! each `n` the ordered count is the popcount of `S` ANDed with a reversed,
//! shifted copy of the other set, 64 elements per step.

use serde::{Deserialize, Serialize};

use crate::natset::NatSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ProfileKind {
    Same,
    Cross,
}

/// `counts[n]` for `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepProfile {
    pub kind: ProfileKind,
    pub n_max: usize,
    pub counts: Vec<u64>,
}

impl RepProfile {
    pub fn get(&self, n: usize) -> u64 {
        self.counts.get(n).copied().unwrap_or(0)
    }

    /// Least `n` where the two profiles differ, comparing through the
    /// shorter `n_max`.
    pub fn first_difference(&self, other: &RepProfile) -> Option<usize> {
        self.counts
            .iter()
            .zip(&other.counts)
            .position(|(a, b)| a != b)
    }
}

pub fn rep_same(s: &NatSet, n: usize) -> u64 {
    let mut count = 0;
    let mut lo = n.saturating_sub(s.bound());
    while 2 * lo < n {
        if s.contains(lo) && s.contains(n - lo) {
            count += 1;
        }
        lo += 1;
    }
    count
}

pub fn rep_cross(c: &NatSet, d: &NatSet, n: usize) -> u64 {
    let lo = n.saturating_sub(d.bound());
    let hi = n.min(c.bound());
    (lo..=hi)
        .filter(|&x| c.contains(x) && d.contains(n - x))
        .count() as u64
}

/// Profile of `R_S` through `n_max`.
pub fn rep_profile(s: &NatSet, n_max: usize) -> RepProfile {
    let ordered = ordered_counts(s, s, n_max);
    let counts = ordered
        .into_iter()
        .enumerate()
        .map(|(n, k)| {
            let diagonal = (n % 2 == 0 && s.contains(n / 2)) as u64;
            (k - diagonal) / 2
        })
        .collect();
    RepProfile {
        kind: ProfileKind::Same,
        n_max,
        counts,
    }
}

/// Profile of `R_{C,D}` through `n_max`.
pub fn cross_profile(c: &NatSet, d: &NatSet, n_max: usize) -> RepProfile {
    RepProfile {
        kind: ProfileKind::Cross,
        n_max,
        counts: ordered_counts(c, d, n_max),
    }
}

/// Least `n <= n_max` with `R_C(n) != R_D(n)`.
pub fn first_divergence(c: &NatSet, d: &NatSet, n_max: usize) -> Option<usize> {
    rep_profile(c, n_max).first_difference(&rep_profile(d, n_max))
}

/// `|{x : a ∋ x, b ∋ n - x}|` for each `n <= n_max`.
fn ordered_counts(a: &NatSet, b: &NatSet, n_max: usize) -> Vec<u64> {
    let rev = reversed_words(b);
    let b_bound = b.bound();
    let a_words = a.words();
    (0..=n_max)
        .map(|n| {
            // x ranges over [max(0, n - b_bound), min(n, a_bound)]; the
            // partner n - x sits at reversed index x + b_bound - n.
            let lo = n.saturating_sub(b_bound);
            let hi = n.min(a.bound());
            if lo > hi {
                return 0;
            }
            let rev_start = lo + b_bound - n;
            and_popcount(a_words, lo, &rev, rev_start, hi - lo + 1)
        })
        .collect()
}

fn reversed_words(s: &NatSet) -> Vec<u64> {
    let bound = s.bound();
    let mut out = vec![0u64; bound / 64 + 1];
    for e in s.iter() {
        let r = bound - e;
        out[r / 64] |= 1u64 << (r % 64);
    }
    out
}

/// 64 bits starting at bit `pos`, zero-filled past the end.
#[inline]
fn window(words: &[u64], pos: usize) -> u64 {
    let w = pos / 64;
    let sh = pos % 64;
    let lo = words.get(w).copied().unwrap_or(0) >> sh;
    if sh == 0 {
        lo
    } else {
        lo | (words.get(w + 1).copied().unwrap_or(0) << (64 - sh))
    }
}

fn and_popcount(a: &[u64], a_start: usize, b: &[u64], b_start: usize, len: usize) -> u64 {
    let mut total = 0u64;
    let mut off = 0;
    while off < len {
        let take = (len - off).min(64);
        let mask = if take == 64 { !0 } else { (1u64 << take) - 1 };
        let x = window(a, a_start + off) & window(b, b_start + off) & mask;
        total += x.count_ones() as u64;
        off += take;
    }
    total
}
