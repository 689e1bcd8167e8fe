//! Element-by-element reconstruction of the unique candidate pair for a
//! given `m` and shared set `R`.
//!
//! Elements `0..n` are already placed when `n` is decided. The only pair
//! summing to `n` that involves `n` itself is `(0, n)`, and `0 ∈ C \ D`, so
//! with `Δ(n)` the imbalance `R_C(n) - R_D(n)` over placed elements:
//!
//! * `n ∈ R` needs `Δ(n) = -1` (n joins both sides);
//! * otherwise `n` joins `C` when `Δ(n) = -1`, `D` when `Δ(n) = 0`;
//! * any other `Δ(n)` makes the instance infeasible at `n`.
//!
//! `Δ` is kept up to date as elements are placed, O(m²) overall.

use serde::{Serialize, Serializer};

use crate::constructions::PartitionPair;
use crate::error::{Error, Result};
use crate::natset::NatSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    #[serde(rename = "C")]
    C,
    #[serde(rename = "D")]
    D,
    #[serde(rename = "BOTH")]
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub n: usize,
    pub delta: i64,
    pub placed: Option<Side>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveStatus {
    Solved,
    /// No placement of `n` balances `R_C(n)` and `R_D(n)`.
    InfeasibleAt {
        n: usize,
        reason: String,
    },
    /// The forced candidate is balanced through `m` but not through `2m`.
    TailFailure {
        n: usize,
    },
}

impl SolveStatus {
    fn label(&self) -> &'static str {
        match self {
            SolveStatus::Solved => "SOLVED",
            SolveStatus::InfeasibleAt { .. } => "INFEASIBLE_AT",
            SolveStatus::TailFailure { .. } => "TAIL_FAILURE",
        }
    }

    pub fn fail_at(&self) -> Option<usize> {
        match self {
            SolveStatus::Solved => None,
            SolveStatus::InfeasibleAt { n, .. } | SolveStatus::TailFailure { n } => Some(*n),
        }
    }
}

/// Result of a solve. On `TailFailure` the forced candidate is kept in
/// `pair` for inspection; on `InfeasibleAt` there is no pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub pair: Option<PartitionPair>,
    pub trace: Option<Vec<TraceStep>>,
}

impl SolveOutcome {
    pub fn is_solved(&self) -> bool {
        self.status == SolveStatus::Solved
    }

    /// The pair, only when solved.
    pub fn solution(&self) -> Option<&PartitionPair> {
        match self.status {
            SolveStatus::Solved => self.pair.as_ref(),
            _ => None,
        }
    }
}

impl Serialize for SolveOutcome {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            status: &'static str,
            pair: Option<&'a PartitionPair>,
            fail_at: Option<usize>,
            #[serde(skip_serializing_if = "Option::is_none")]
            reason: Option<&'a str>,
            #[serde(skip_serializing_if = "Option::is_none")]
            trace: Option<&'a [TraceStep]>,
        }
        let reason = match &self.status {
            SolveStatus::InfeasibleAt { reason, .. } => Some(reason.as_str()),
            _ => None,
        };
        Wire {
            status: self.status.label(),
            pair: self.pair.as_ref(),
            fail_at: self.status.fail_at(),
            reason,
            trace: self.trace.as_deref(),
        }
        .serialize(serializer)
    }
}

/// Forces membership for `n = 1..=m` so that `R_C(n) = R_D(n)` for all
/// `n <= m`. Does not look at sums above `m`.
pub fn determinize(m: usize, shared: &NatSet, with_trace: bool) -> Result<SolveOutcome> {
    if m == 0 {
        return Err(if shared.is_empty() {
            Error::ZeroM
        } else {
            Error::Precondition("shared elements given but [1, m] is empty".into())
        });
    }
    if shared.contains(0) {
        return Err(Error::ZeroShared);
    }
    if let Some(top) = shared.max() {
        if top > m {
            return Err(Error::OutOfBound {
                element: top,
                bound: m,
            });
        }
    }

    // delta[n] = R_C(n) - R_D(n) restricted to already placed elements.
    let mut delta = vec![0i64; m + 1];
    let mut placed_c: Vec<usize> = vec![0];
    let mut placed_d: Vec<usize> = Vec::new();
    let mut trace = with_trace.then(Vec::new);

    for n in 1..=m {
        let dn = delta[n];
        let side = if shared.contains(n) {
            (dn == -1).then_some(Side::Both)
        } else {
            match dn {
                -1 => Some(Side::C),
                0 => Some(Side::D),
                _ => None,
            }
        };
        if let Some(t) = trace.as_mut() {
            t.push(TraceStep {
                n,
                delta: dn,
                placed: side,
            });
        }
        let Some(side) = side else {
            let reason = if shared.contains(n) {
                format!("shared element needs imbalance -1, found {dn}")
            } else {
                format!("imbalance {dn} cannot be corrected by one element")
            };
            return Ok(SolveOutcome {
                status: SolveStatus::InfeasibleAt { n, reason },
                pair: None,
                trace,
            });
        };
        if matches!(side, Side::C | Side::Both) {
            for &e in &placed_c {
                if n + e <= m {
                    delta[n + e] += 1;
                }
            }
            placed_c.push(n);
        }
        if matches!(side, Side::D | Side::Both) {
            for &e in &placed_d {
                if n + e <= m {
                    delta[n + e] -= 1;
                }
            }
            placed_d.push(n);
        }
    }

    let c = NatSet::with_bound(m, placed_c)?;
    let d = NatSet::with_bound(m, placed_d)?;
    let pair = PartitionPair::new(m, c, d)?;
    Ok(SolveOutcome {
        status: SolveStatus::Solved,
        pair: Some(pair),
        trace,
    })
}

/// [`determinize`] followed by a full profile comparison through `2m`.
pub fn solve_and_verify(m: usize, shared: &NatSet, with_trace: bool) -> Result<SolveOutcome> {
    let mut outcome = determinize(m, shared, with_trace)?;
    if let Some(pair) = &outcome.pair {
        if let Some(n) = pair.first_divergence() {
            outcome.status = SolveStatus::TailFailure { n };
        }
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{adjacent_pair, disjoint_pair, singleton_pair, spread_pair};
    use crate::repfn::rep_same;

    fn set(xs: &[usize]) -> NatSet {
        NatSet::from_elements(xs.iter().copied())
    }

    #[test]
    fn recovers_families() {
        let out = determinize(7, &NatSet::empty(), false).unwrap();
        assert_eq!(out.solution(), Some(&disjoint_pair(3).unwrap()));
        let out = determinize(13, &set(&[6, 7]), false).unwrap();
        assert_eq!(out.solution(), Some(&adjacent_pair(1).unwrap()));
        let out = determinize(13, &set(&[3, 10]), false).unwrap();
        assert_eq!(out.solution(), Some(&spread_pair(1).unwrap()));
        let out = solve_and_verify(6, &set(&[3]), false).unwrap();
        assert_eq!(out.solution(), Some(&singleton_pair(1).unwrap()));
        let out = solve_and_verify(13, &set(&[6, 7]), false).unwrap();
        assert!(out.is_solved());
    }

    #[test]
    fn tail_failure_past_maximal_m() {
        let out = solve_and_verify(14, &set(&[6, 7]), false).unwrap();
        // 14 is forced into D, so 1 + 14 gives D an extra pair at 15.
        assert_eq!(out.status, SolveStatus::TailFailure { n: 15 });
        let pair = out.pair.unwrap();
        assert!(pair.d().contains(12) && pair.d().contains(14));
        assert!(!pair.c().contains(12) && !pair.c().contains(14));
        assert_eq!(rep_same(pair.c(), 15), 2);
        assert_eq!(rep_same(pair.d(), 15), 3);
        assert_eq!(rep_same(pair.c(), 26), 0);
        assert_eq!(rep_same(pair.d(), 26), 1);
    }

    #[test]
    fn infeasible() {
        // n = 1 has imbalance 0, so a shared 1 cannot be placed.
        let out = determinize(5, &set(&[1]), true).unwrap();
        assert!(matches!(out.status, SolveStatus::InfeasibleAt { n: 1, .. }));
        assert!(out.pair.is_none());
        assert_eq!(out.trace.unwrap().len(), 1);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(determinize(5, &set(&[0, 3]), false), Err(Error::ZeroShared));
        assert!(determinize(0, &set(&[1]), false).is_err());
        assert_eq!(determinize(0, &NatSet::empty(), false), Err(Error::ZeroM));
        assert!(matches!(
            determinize(5, &set(&[6]), false),
            Err(Error::OutOfBound { .. })
        ));
    }

    #[test]
    fn trace_is_deterministic() {
        let a = determinize(13, &set(&[6, 7]), true).unwrap();
        let b = determinize(13, &set(&[6, 7]), true).unwrap();
        assert_eq!(a, b);
        let trace = a.trace.unwrap();
        assert_eq!(trace.len(), 13);
        assert_eq!(trace[5].placed, Some(Side::Both));
        assert_eq!(trace[0].placed, Some(Side::D));
    }

    #[test]
    fn outcome_json() {
        let out = solve_and_verify(14, &set(&[6, 7]), false).unwrap();
        let v: serde_json::Value = serde_json::to_value(&out).unwrap();
        assert_eq!(v["status"], "TAIL_FAILURE");
        assert_eq!(v["fail_at"], 15);
        assert!(v.get("trace").is_none());
        let ok = solve_and_verify(6, &set(&[3]), false).unwrap();
        let v: serde_json::Value = serde_json::to_value(&ok).unwrap();
        assert_eq!(v["status"], "SOLVED");
        assert!(v["fail_at"].is_null());
        assert_eq!(v["pair"]["intersection"], serde_json::json!([3]));
    }
}
