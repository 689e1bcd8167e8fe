//! Exhaustive and determinizer-driven searches for balanced pairs.
//!
//! Work is split over shared-set choices: every `(m, R)` in the scanned
//! range gets a global index in enumeration order (m ascending, then `R`
//! lexicographic) and shard `i` of `N` owns the indices `≡ i (mod N)`.
//! Certificates from disjoint shards merge associatively and commutatively.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::PartitionPair;
use crate::error::{Error, Result};
use crate::natset::NatSet;
use crate::solver::solve_and_verify;

/// Largest `m` accepted by brute-force enumeration.
pub const MAX_BRUTE_M: usize = 20;
/// Largest shared-set size the searches accept.
pub const MAX_SHARED: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Mode {
    Brute,
    Determinized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShardSpec {
    pub count: usize,
    pub index: usize,
}

impl ShardSpec {
    pub const WHOLE: ShardSpec = ShardSpec { count: 1, index: 0 };

    pub fn new(count: usize, index: usize) -> Result<Self> {
        if count == 0 || index >= count {
            return Err(Error::Precondition(format!(
                "shard index {index} is not in [0, {count})"
            )));
        }
        Ok(ShardSpec { count, index })
    }

    fn owns(&self, global: usize) -> bool {
        global % self.count == self.index
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShardInfo {
    pub count: usize,
    pub indices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Solution {
    pub m: usize,
    pub intersection: NatSet,
    pub pair: PartitionPair,
}

impl Solution {
    fn sort_key(&self) -> (usize, Vec<usize>, Vec<usize>) {
        (self.m, self.intersection.to_vec(), self.pair.c().to_vec())
    }
}

/// A shared set on which brute force and the determinizer disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub m: usize,
    pub intersection: NatSet,
    pub brute_pairs: usize,
    pub determinized: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniquenessSummary {
    pub max_pairs_per_intersection: usize,
    /// Shared sets with more than one canonical pair.
    pub violations: Vec<Solution>,
    pub determinizer_mismatches: Vec<Mismatch>,
}

impl UniquenessSummary {
    pub fn is_clean(&self) -> bool {
        self.max_pairs_per_intersection <= 1
            && self.violations.is_empty()
            && self.determinizer_mismatches.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchCertificate {
    pub mode: Mode,
    pub m_range: [usize; 2],
    pub k: usize,
    pub shards: ShardInfo,
    pub intersections_examined: u64,
    pub candidates_examined: u64,
    pub solutions: Vec<Solution>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uniqueness: Option<UniquenessSummary>,
}

impl SearchCertificate {
    /// Solutions at a given `m`.
    pub fn at(&self, m: usize) -> impl Iterator<Item = &Solution> {
        self.solutions.iter().filter(move |s| s.m == m)
    }

    pub fn solution_ms(&self) -> Vec<usize> {
        let mut ms: Vec<usize> = self.solutions.iter().map(|s| s.m).collect();
        ms.dedup();
        ms
    }

    /// Combines certificates of disjoint shards of the same scan.
    pub fn merge(mut self, other: SearchCertificate) -> Result<SearchCertificate> {
        if self.mode != other.mode
            || self.m_range != other.m_range
            || self.k != other.k
            || self.shards.count != other.shards.count
        {
            return Err(Error::Precondition(
                "certificates come from different scans".into(),
            ));
        }
        if other
            .shards
            .indices
            .iter()
            .any(|i| self.shards.indices.contains(i))
        {
            return Err(Error::Precondition("shards overlap".into()));
        }
        self.shards.indices.extend(other.shards.indices);
        self.shards.indices.sort_unstable();
        self.intersections_examined += other.intersections_examined;
        self.candidates_examined += other.candidates_examined;
        self.solutions.extend(other.solutions);
        self.solutions.sort_by_key(Solution::sort_key);
        self.uniqueness = match (self.uniqueness, other.uniqueness) {
            (Some(mut a), Some(b)) => {
                a.max_pairs_per_intersection = a
                    .max_pairs_per_intersection
                    .max(b.max_pairs_per_intersection);
                a.violations.extend(b.violations);
                a.violations.sort_by_key(Solution::sort_key);
                a.determinizer_mismatches.extend(b.determinizer_mismatches);
                a.determinizer_mismatches
                    .sort_by_key(|x| (x.m, x.intersection.to_vec()));
                Some(a)
            }
            (a, b) => a.or(b),
        };
        Ok(self)
    }
}

/// All `k`-subsets of `[lo, hi]` in lexicographic order.
fn subsets(lo: usize, hi: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, hi: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let need = k - cur.len();
        let mut x = start;
        while x + need <= hi + 1 {
            cur.push(x);
            rec(x + 1, hi, k, cur, out);
            cur.pop();
            x += 1;
        }
    }
    let mut out = Vec::new();
    if lo <= hi || k == 0 {
        rec(lo, hi, k, &mut Vec::new(), &mut out);
    }
    out
}

fn check_k(k: usize) -> Result<()> {
    if k > MAX_SHARED {
        return Err(Error::TooLarge {
            name: "k",
            value: k,
            max: MAX_SHARED,
        });
    }
    Ok(())
}

fn check_brute_m(m: usize) -> Result<()> {
    if m > MAX_BRUTE_M {
        return Err(Error::TooLarge {
            name: "m",
            value: m,
            max: MAX_BRUTE_M,
        });
    }
    if m == 0 {
        return Err(Error::ZeroM);
    }
    Ok(())
}

/// `R_S(n)` for a bitmask set.
#[inline]
fn mask_rep(s: u64, n: usize, m: usize) -> u32 {
    let mut count = 0;
    let mut lo = n.saturating_sub(m);
    while 2 * lo < n {
        count += ((s >> lo) & (s >> (n - lo)) & 1) as u32;
        lo += 1;
    }
    count
}

fn mask_balanced(c: u64, d: u64, m: usize) -> bool {
    (1..2 * m).all(|n| mask_rep(c, n, m) == mask_rep(d, n, m))
}

fn mask_to_set(mask: u64, m: usize) -> NatSet {
    NatSet::with_bound(m, (0..=m).filter(|&i| (mask >> i) & 1 == 1))
        .expect("mask bits lie in [0, m]")
}

/// Canonical balanced pairs for one `(m, R)`, and the number of candidates
/// tried.
fn brute_for(m: usize, shared: &[usize]) -> (Vec<PartitionPair>, u64) {
    let shared_mask: u64 = shared.iter().map(|&r| 1u64 << r).sum();
    let mut free: Vec<usize> = (1..=m).filter(|&i| shared_mask >> i & 1 == 0).collect();
    let mut base_c = shared_mask | 1;
    let base_d = shared_mask;
    if shared_mask & 1 == 1 && !free.is_empty() {
        // 0 is shared: the least unshared element fixes the orientation.
        base_c |= 1u64 << free.remove(0);
    }
    let total = 1u64 << free.len();
    let mut found = Vec::new();
    for assign in 0..total {
        let mut c = base_c;
        let mut d = base_d;
        for (bit, &e) in free.iter().enumerate() {
            if assign >> bit & 1 == 1 {
                d |= 1 << e;
            } else {
                c |= 1 << e;
            }
        }
        if mask_balanced(c, d, m) {
            let pair = PartitionPair::new(m, mask_to_set(c, m), mask_to_set(d, m))
                .expect("enumeration yields canonical covering pairs");
            found.push(pair);
        }
    }
    (found, total)
}

/// Every canonical pair with `C ∪ D = [0, m]`, `|C ∩ D| = k` and
/// `R_C ≡ R_D`, by full enumeration (shared sets may contain 0).
pub fn brute_force_pairs(m: usize, k: usize) -> Result<Vec<PartitionPair>> {
    let cert = brute_scan(m, m, k, ShardSpec::WHOLE)?;
    Ok(cert.solutions.into_iter().map(|s| s.pair).collect())
}

fn tasks(
    m_min: usize,
    m_max: usize,
    k: usize,
    first: usize,
    shard: ShardSpec,
) -> Vec<(usize, Vec<usize>)> {
    let mut out = Vec::new();
    let mut global = 0usize;
    for m in m_min..=m_max {
        for r in subsets(first, m, k) {
            if shard.owns(global) {
                out.push((m, r));
            }
            global += 1;
        }
    }
    out
}

/// `(m, R, pairs, candidates, det)`; `det` is `(agrees, determinizer solved)`
/// for shared sets avoiding 0.
type ScanRow = (
    usize,
    Vec<usize>,
    Vec<PartitionPair>,
    u64,
    Option<(bool, bool)>,
);

/// Brute-force scan over `m_min..=m_max`, with a uniqueness summary that
/// also compares each shared set against the determinizer.
pub fn brute_scan(
    m_min: usize,
    m_max: usize,
    k: usize,
    shard: ShardSpec,
) -> Result<SearchCertificate> {
    check_k(k)?;
    check_brute_m(m_max)?;
    check_brute_m(m_min.max(1))?;
    let work = tasks(m_min.max(1), m_max, k, 0, shard);

    let results: Vec<ScanRow> = work
        .into_par_iter()
        .map(|(m, r)| {
            let (pairs, tried) = brute_for(m, &r);
            let det = if r.first() == Some(&0) {
                None
            } else {
                let shared = NatSet::with_bound(m, r.iter().copied()).expect("subset of [0, m]");
                let outcome =
                    solve_and_verify(m, &shared, false).expect("valid determinizer input");
                let agrees = match (outcome.solution(), pairs.as_slice()) {
                    (None, []) => true,
                    (Some(p), [q]) => p == q,
                    _ => false,
                };
                Some((agrees, outcome.is_solved()))
            };
            (m, r, pairs, tried, det)
        })
        .collect();

    let mut cert = empty_certificate(Mode::Brute, m_min, m_max, k, shard);
    let mut summary = UniquenessSummary {
        max_pairs_per_intersection: 0,
        violations: Vec::new(),
        determinizer_mismatches: Vec::new(),
    };
    for (m, r, pairs, tried, det) in results {
        cert.intersections_examined += 1;
        cert.candidates_examined += tried;
        let intersection = NatSet::with_bound(m, r).expect("subset of [0, m]");
        summary.max_pairs_per_intersection = summary.max_pairs_per_intersection.max(pairs.len());
        if let Some((false, solved)) = det {
            summary.determinizer_mismatches.push(Mismatch {
                m,
                intersection: intersection.clone(),
                brute_pairs: pairs.len(),
                determinized: solved,
            });
        }
        let many = pairs.len() > 1;
        for pair in pairs {
            let sol = Solution {
                m,
                intersection: intersection.clone(),
                pair,
            };
            if many {
                summary.violations.push(sol.clone());
            }
            cert.solutions.push(sol);
        }
    }
    cert.solutions.sort_by_key(Solution::sort_key);
    cert.uniqueness = Some(summary);
    Ok(cert)
}

/// One determinizer call per shared set `R ⊆ [1, m]` of size `k`.
pub fn scan_determinized(
    m_min: usize,
    m_max: usize,
    k: usize,
    shard: ShardSpec,
) -> Result<SearchCertificate> {
    check_k(k)?;
    let work = tasks(m_min.max(1), m_max, k, 1, shard);
    let results: Vec<(usize, Vec<usize>, Option<PartitionPair>)> = work
        .into_par_iter()
        .map(|(m, r)| {
            let shared = NatSet::with_bound(m, r.iter().copied()).expect("subset of [1, m]");
            let outcome = solve_and_verify(m, &shared, false).expect("valid determinizer input");
            (m, r, outcome.solution().cloned())
        })
        .collect();

    let mut cert = empty_certificate(Mode::Determinized, m_min, m_max, k, shard);
    for (m, r, pair) in results {
        cert.intersections_examined += 1;
        cert.candidates_examined += 1;
        if let Some(pair) = pair {
            cert.solutions.push(Solution {
                m,
                intersection: NatSet::with_bound(m, r).expect("subset of [1, m]"),
                pair,
            });
        }
    }
    cert.solutions.sort_by_key(Solution::sort_key);
    Ok(cert)
}

/// Brute-force certificate for a single `m` that at most one canonical
/// pair exists per shared set, and that it is the determinizer's pair.
pub fn uniqueness_report(m: usize, k: usize) -> Result<SearchCertificate> {
    brute_scan(m, m, k, ShardSpec::WHOLE)
}

fn empty_certificate(
    mode: Mode,
    m_min: usize,
    m_max: usize,
    k: usize,
    shard: ShardSpec,
) -> SearchCertificate {
    SearchCertificate {
        mode,
        m_range: [m_min, m_max],
        k,
        shards: ShardInfo {
            count: shard.count,
            indices: vec![shard.index],
        },
        intersections_examined: 0,
        candidates_examined: 0,
        solutions: Vec::new(),
        uniqueness: None,
    }
}

/// Solutions grouped by `m`, for reporting.
pub fn by_m(cert: &SearchCertificate) -> BTreeMap<usize, Vec<Vec<usize>>> {
    let mut out: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
    for s in &cert.solutions {
        out.entry(s.m).or_default().push(s.intersection.to_vec());
    }
    out
}
