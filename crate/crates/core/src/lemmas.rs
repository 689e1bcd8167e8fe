//! Finite-range checks of the digit-pattern lemmas, the truncated
//! Thue–Morse witness, and reflection closure.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::PartitionPair;
use crate::error::{Error, Result};
use crate::natset::{tm_class, NatSet, TmClass};
use crate::repfn::rep_same;

/// First `M` of a regular scan. `M = 1` has an empty premise and `M = 2`
/// satisfies the odd-ones premise while missing its conclusion; both are
/// reported separately as boundary cases on request.
pub const SCAN_START: u64 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    #[serde(rename = "M")]
    pub m: u64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryCase {
    #[serde(rename = "M")]
    pub m: u64,
    pub premise: bool,
    pub conclusion: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub range: [u64; 2],
    pub hits: Vec<u64>,
    pub violations: Vec<Violation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Vec<BoundaryCase>>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl PartialEq for LemmaReport {
    fn eq(&self, other: &Self) -> bool {
        self.lemma == other.lemma
            && self.range == other.range
            && self.hits == other.hits
            && self.violations == other.violations
            && self.boundary == other.boundary
    }
}

impl LemmaReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `⌈log₂ M⌉` for `M >= 1`.
fn ceil_log2(m: u64) -> u32 {
    if m <= 1 {
        0
    } else {
        64 - (m - 1).leading_zeros()
    }
}

/// `M - 2^i` lies in `class` for every `0 <= i < ⌈log₂ M⌉`.
pub fn digit_premise(m: u64, class: TmClass) -> bool {
    (0..ceil_log2(m)).all(|i| class.contains(m - (1u64 << i)))
}

/// `M = 2^L - 1` with `L = ⌈log₂ M⌉` odd (even-ones class) or even
/// (odd-ones class).
pub fn digit_conclusion(m: u64, class: TmClass) -> bool {
    let l = ceil_log2(m);
    let parity_ok = match class {
        TmClass::EvenOnes => l % 2 == 1,
        TmClass::OddOnes => l.is_multiple_of(2),
    };
    parity_ok && (1u64 << l) - 1 == m
}

fn lemma_name(class: TmClass) -> &'static str {
    match class {
        TmClass::EvenOnes => "digit-pattern-even-ones",
        TmClass::OddOnes => "digit-pattern-odd-ones",
    }
}

/// Scans `M` in `[3, m_max]` for the premise and checks the conclusion on
/// every hit. With `include_boundary`, `M = 1, 2` are evaluated too and
/// listed under `boundary` without counting as violations.
pub fn verify_digit_lemma(
    m_max: u64,
    class: TmClass,
    include_boundary: bool,
) -> Result<LemmaReport> {
    if m_max < SCAN_START {
        return Err(Error::Precondition(format!(
            "M_max = {m_max} is below {SCAN_START}"
        )));
    }
    let start = Instant::now();
    let hits: Vec<u64> = (SCAN_START..=m_max)
        .into_par_iter()
        .filter(|&m| digit_premise(m, class))
        .collect();
    let violations = hits
        .iter()
        .filter(|&&m| !digit_conclusion(m, class))
        .map(|&m| Violation {
            m,
            detail: format!(
                "ceil(log2 M) = {}, expected {} parity and M = 2^{} - 1",
                ceil_log2(m),
                if class == TmClass::EvenOnes {
                    "odd"
                } else {
                    "even"
                },
                ceil_log2(m)
            ),
        })
        .collect();
    let boundary = include_boundary.then(|| {
        (1..SCAN_START)
            .map(|m| BoundaryCase {
                m,
                premise: digit_premise(m, class),
                conclusion: digit_conclusion(m, class),
            })
            .collect()
    });
    Ok(LemmaReport {
        lemma: lemma_name(class).to_string(),
        range: [SCAN_START, m_max],
        hits,
        violations,
        boundary,
        elapsed: start.elapsed(),
    })
}

pub fn is_mersenne(m: u64) -> bool {
    m & (m + 1) == 0
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub m: u64,
    pub witness: u64,
    pub count_even_ones: u64,
    pub count_odd_ones: u64,
}

/// Least `n` in `(m, 2m)` with `R_{A ∩ [0,m]}(n) != R_{B ∩ [0,m]}(n)`.
///
/// `m = 2^l - 1` is rejected. [`Error::NoWitness`] would mean the scan
/// found a counterexample.
pub fn separating_witness(m: u64) -> Result<Witness> {
    if is_mersenne(m) {
        return Err(Error::Precondition(format!("m = {m} has the form 2^l - 1")));
    }
    let bound = m as usize;
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for x in 0..=m {
        match tm_class(x) {
            TmClass::EvenOnes => a.push(x as usize),
            TmClass::OddOnes => b.push(x as usize),
        }
    }
    let a = NatSet::with_bound(bound, a)?;
    let b = NatSet::with_bound(bound, b)?;
    for n in (bound + 1)..(2 * bound) {
        let (ra, rb) = (rep_same(&a, n), rep_same(&b, n));
        if ra != rb {
            return Ok(Witness {
                m,
                witness: n as u64,
                count_even_ones: ra,
                count_odd_ones: rb,
            });
        }
    }
    Err(Error::NoWitness { m })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReflectReport {
    pub ok: bool,
    pub reflected: PartitionPair,
    pub expected_intersection: NatSet,
    pub intersection_matches: bool,
    pub original_balanced: bool,
    pub reflected_balanced: bool,
}

/// Reflects `(C, D)` to `(m - C, m - D)` and checks the result is a
/// canonical covering pair with shared set `m - (C ∩ D)` that is balanced
/// whenever the original is.
pub fn reflect_check(pair: &PartitionPair) -> Result<ReflectReport> {
    let m = pair.m();
    let reflected = pair.reflect()?;
    let expected_intersection = pair.intersection().reflect(m)?;
    let intersection_matches = reflected.intersection() == &expected_intersection;
    let original_balanced = pair.is_balanced();
    let reflected_balanced = reflected.is_balanced();
    Ok(ReflectReport {
        ok: intersection_matches && (!original_balanced || reflected_balanced),
        reflected,
        expected_intersection,
        intersection_matches,
        original_balanced,
        reflected_balanced,
    })
}
