//! Partition pairs and the explicit families of balanced pairs.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::natset::{tm_prefix, NatSet, TmClass};
use crate::repfn::first_divergence;

/// Largest family parameter the builders accept (m ≈ 6.7e7 at this cap).
pub const MAX_FAMILY_L: u32 = 12;

/// `C ∪ D = [0, m]` with the shared part `C ∩ D` cached.
///
/// Orientation is canonical: `0 ∈ C`, and when `0` is shared the least
/// element outside the intersection belongs to `C`.
#[derive(Clone, PartialEq, Eq)]
pub struct PartitionPair {
    m: usize,
    c: NatSet,
    d: NatSet,
    shared: NatSet,
}

impl PartitionPair {
    /// Validates covering, bounds and canonical orientation.
    pub fn new(m: usize, c: NatSet, d: NatSet) -> Result<Self> {
        let pair = PartitionPair::unoriented(m, c, d)?;
        if !pair.c.contains(0) {
            return Err(Error::ZeroNotInC);
        }
        if let Some(e) = pair.least_unshared() {
            if pair.shared.contains(0) && !pair.c.contains(e) {
                return Err(Error::NotCanonical { element: e });
            }
        }
        Ok(pair)
    }

    /// Like [`PartitionPair::new`], swapping `C` and `D` when needed to reach
    /// canonical orientation.
    pub fn canonicalize(m: usize, c: NatSet, d: NatSet) -> Result<Self> {
        let pair = PartitionPair::unoriented(m, c, d)?;
        let swap = if pair.shared.contains(0) {
            pair.least_unshared().is_some_and(|e| !pair.c.contains(e))
        } else {
            !pair.c.contains(0)
        };
        if swap {
            PartitionPair::new(m, pair.d, pair.c)
        } else {
            Ok(pair)
        }
    }

    fn unoriented(m: usize, c: NatSet, d: NatSet) -> Result<Self> {
        for s in [&c, &d] {
            if let Some(top) = s.max() {
                if top > m {
                    return Err(Error::OutOfBound {
                        element: top,
                        bound: m,
                    });
                }
            }
        }
        let (c, d) = (c.truncate(m), d.truncate(m));
        let union = c.union(&d);
        if let Some(missing) = (0..=m).find(|&n| !union.contains(n)) {
            return Err(Error::UnionGap { m, missing });
        }
        let shared = c.intersection(&d);
        Ok(PartitionPair { m, c, d, shared })
    }

    fn least_unshared(&self) -> Option<usize> {
        (0..=self.m).find(|&n| !self.shared.contains(n))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn c(&self) -> &NatSet {
        &self.c
    }

    pub fn d(&self) -> &NatSet {
        &self.d
    }

    pub fn intersection(&self) -> &NatSet {
        &self.shared
    }

    /// `(r1, r2)` when exactly two elements are shared.
    pub fn shared_pair(&self) -> Result<(usize, usize)> {
        let v = self.shared.to_vec();
        match v.as_slice() {
            [r1, r2] => Ok((*r1, *r2)),
            _ => Err(Error::IntersectionSize {
                expected: 2,
                found: v.len(),
            }),
        }
    }

    /// Least `n <= 2m` with `R_C(n) != R_D(n)`. Beyond `2m` both vanish.
    pub fn first_divergence(&self) -> Option<usize> {
        first_divergence(&self.c, &self.d, 2 * self.m)
    }

    pub fn is_balanced(&self) -> bool {
        self.first_divergence().is_none()
    }

    pub(crate) fn require_balanced(&self) -> Result<()> {
        match self.first_divergence() {
            Some(n) => Err(Error::Unbalanced { n }),
            None => Ok(()),
        }
    }

    /// `(m - C, m - D)`, reoriented canonically.
    pub fn reflect(&self) -> Result<PartitionPair> {
        PartitionPair::canonicalize(self.m, self.c.reflect(self.m)?, self.d.reflect(self.m)?)
    }
}

impl fmt::Debug for PartitionPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PartitionPair")
            .field("m", &self.m)
            .field("C", &self.c)
            .field("D", &self.d)
            .field("intersection", &self.shared)
            .finish()
    }
}

/// On-disk form of a pair. `intersection` is optional on input and is
/// checked against the recomputed value when present.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairFile {
    pub m: usize,
    #[serde(rename = "C")]
    pub c: NatSet,
    #[serde(rename = "D")]
    pub d: NatSet,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intersection: Option<NatSet>,
}

impl TryFrom<PairFile> for PartitionPair {
    type Error = Error;

    fn try_from(file: PairFile) -> Result<Self> {
        let pair = PartitionPair::new(file.m, file.c, file.d)?;
        if let Some(stored) = file.intersection {
            if stored != pair.shared {
                return Err(Error::IntersectionMismatch {
                    stored: stored.to_vec(),
                    actual: pair.shared.to_vec(),
                });
            }
        }
        Ok(pair)
    }
}

impl From<&PartitionPair> for PairFile {
    fn from(pair: &PartitionPair) -> Self {
        PairFile {
            m: pair.m,
            c: pair.c.clone(),
            d: pair.d.clone(),
            intersection: Some(pair.shared.clone()),
        }
    }
}

impl Serialize for PartitionPair {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PairFile::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PartitionPair {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let file = PairFile::deserialize(deserializer)?;
        PartitionPair::try_from(file).map_err(serde::de::Error::custom)
    }
}

/// The explicit balanced families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `C = A_{2l+1} ∪ (2^{2l+1}-2 + B_{2l+1})`, shared `{2^{2l+1}-2, 2^{2l+1}-1}`.
    Adjacent,
    /// Three-block pair with shared `{2^{2l}-1, 2^{2l+1}+2^{2l}-2}`.
    Spread,
    /// `C = A_{2l} ∪ (2^{2l}-1 + B_{2l})`, shared `{2^{2l}-1}`.
    Singleton,
    /// `C = A_l`, `D = B_l`, nothing shared.
    Disjoint,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Adjacent,
        Family::Spread,
        Family::Singleton,
        Family::Disjoint,
    ];

    pub fn build(self, l: u32) -> Result<PartitionPair> {
        match self {
            Family::Adjacent => adjacent_pair(l),
            Family::Spread => spread_pair(l),
            Family::Singleton => singleton_pair(l),
            Family::Disjoint => disjoint_pair(l),
        }
    }
}

fn check_l(l: u32) -> Result<()> {
    if l == 0 {
        return Err(Error::ZeroLength);
    }
    if l > MAX_FAMILY_L {
        return Err(Error::TooLarge {
            name: "l",
            value: l as usize,
            max: MAX_FAMILY_L as usize,
        });
    }
    Ok(())
}

fn halves(bits: u32) -> Result<(NatSet, NatSet)> {
    Ok((
        tm_prefix(bits, TmClass::EvenOnes)?,
        tm_prefix(bits, TmClass::OddOnes)?,
    ))
}

/// Shared `{2^{2l+1}-2, 2^{2l+1}-1}`, `m = 2^{2l+2}-3`.
pub fn adjacent_pair(l: u32) -> Result<PartitionPair> {
    check_l(l)?;
    let (a, b) = halves(2 * l + 1)?;
    let offset = (1usize << (2 * l + 1)) - 2;
    let m = (1usize << (2 * l + 2)) - 3;
    let c = a.union(&b.shift(offset));
    let d = b.union(&a.shift(offset));
    PartitionPair::new(m, c, d)
}

/// Shared `{2^{2l}-1, 2^{2l+1}+2^{2l}-2}`, `m = 2^{2l+2}-3`.
pub fn spread_pair(l: u32) -> Result<PartitionPair> {
    check_l(l)?;
    let (a, b) = halves(2 * l)?;
    let inner = (1usize << (2 * l)) - 1;
    let outer = (1usize << (2 * l + 1)) - 1;
    let m = (1usize << (2 * l + 2)) - 3;
    let c = a
        .union(&b.shift(inner))
        .union(&b.union(&a.shift(inner)).shift(outer));
    let d = b
        .union(&a.shift(inner))
        .union(&a.union(&b.shift(inner)).shift(outer));
    PartitionPair::new(m, c, d)
}

/// Shared `{2^{2l}-1}`, `m = 2^{2l+1}-2`.
pub fn singleton_pair(l: u32) -> Result<PartitionPair> {
    check_l(l)?;
    let (a, b) = halves(2 * l)?;
    let offset = (1usize << (2 * l)) - 1;
    let m = (1usize << (2 * l + 1)) - 2;
    PartitionPair::new(m, a.union(&b.shift(offset)), b.union(&a.shift(offset)))
}

/// `(A_l, B_l)`, `m = 2^l - 1`.
pub fn disjoint_pair(l: u32) -> Result<PartitionPair> {
    check_l(l)?;
    let (a, b) = halves(l)?;
    PartitionPair::new((1usize << l) - 1, a, b)
}
