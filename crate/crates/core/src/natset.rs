//! Bounded sets of nonnegative integers and the Thue–Morse classification.
//!
//! A [`NatSet`] is an immutable bit-vector over `[0, bound]`. All algebra
//! returns fresh values, and bounds grow explicitly under [`NatSet::shift`].

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest prefix exponent accepted by [`tm_prefix`] (2^30 bits = 128 MiB).
pub const MAX_PREFIX_BITS: u32 = 30;

/// Bit `i` is set iff `i` has an even number of ones, for `i` in `0..64`.
const EVEN_ONES_WORD: u64 = 0x9669_6996_6996_9669;

/// Which half of the Thue–Morse partition of the naturals a number lies in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TmClass {
    /// Even binary digit sum (the set usually called `A`).
    EvenOnes,
    /// Odd binary digit sum (the set usually called `B`).
    OddOnes,
}

impl TmClass {
    pub fn complement(self) -> Self {
        match self {
            TmClass::EvenOnes => TmClass::OddOnes,
            TmClass::OddOnes => TmClass::EvenOnes,
        }
    }

    pub fn contains(self, n: u64) -> bool {
        tm_class(n) == self
    }
}

impl fmt::Display for TmClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TmClass::EvenOnes => "EVEN_ONES",
            TmClass::OddOnes => "ODD_ONES",
        })
    }
}

pub fn tm_class(n: u64) -> TmClass {
    if n.count_ones().is_multiple_of(2) {
        TmClass::EvenOnes
    } else {
        TmClass::OddOnes
    }
}

/// `A ∩ [0, 2^l - 1]` or `B ∩ [0, 2^l - 1]`, with bound `2^l - 1`.
pub fn tm_prefix(l: u32, class: TmClass) -> Result<NatSet> {
    if l == 0 {
        return Err(Error::ZeroLength);
    }
    if l > MAX_PREFIX_BITS {
        return Err(Error::TooLarge {
            name: "l",
            value: l as usize,
            max: MAX_PREFIX_BITS as usize,
        });
    }
    let bound = (1usize << l) - 1;
    let len = 1usize << l;
    let mut words = vec![0u64; words_for(bound)];
    for (w, word) in words.iter_mut().enumerate() {
        // parity(64w + i) = parity(w) xor parity(i)
        let base = if (w as u64).count_ones().is_multiple_of(2) {
            EVEN_ONES_WORD
        } else {
            !EVEN_ONES_WORD
        };
        *word = match class {
            TmClass::EvenOnes => base,
            TmClass::OddOnes => !base,
        };
    }
    if len < 64 {
        words[0] &= (1u64 << len) - 1;
    }
    Ok(NatSet { bound, words })
}

fn words_for(bound: usize) -> usize {
    bound / 64 + 1
}

/// Finite set of nonnegative integers with an explicit largest representable
/// element. Equality compares members only, not bounds.
#[derive(Clone)]
pub struct NatSet {
    bound: usize,
    words: Vec<u64>,
}

impl NatSet {
    pub fn empty() -> Self {
        NatSet {
            bound: 0,
            words: vec![0],
        }
    }

    /// Empty set able to hold elements up to `bound`.
    pub fn with_capacity(bound: usize) -> Self {
        NatSet {
            bound,
            words: vec![0; words_for(bound)],
        }
    }

    /// Set whose bound is its largest element (0 when empty).
    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Self {
        let elements: Vec<usize> = elements.into_iter().collect();
        let bound = elements.iter().copied().max().unwrap_or(0);
        let mut set = NatSet::with_capacity(bound);
        for e in elements {
            set.set(e);
        }
        set
    }

    pub fn with_bound<I: IntoIterator<Item = usize>>(bound: usize, elements: I) -> Result<Self> {
        let mut set = NatSet::with_capacity(bound);
        for e in elements {
            if e > bound {
                return Err(Error::OutOfBound { element: e, bound });
            }
            set.set(e);
        }
        Ok(set)
    }

    /// The integer interval `[lo, hi]`, bound `hi`. Empty when `lo > hi`.
    pub fn interval(lo: usize, hi: usize) -> Self {
        let mut set = NatSet::with_capacity(hi);
        for e in lo..=hi {
            set.set(e);
        }
        set
    }

    pub(crate) fn set(&mut self, e: usize) {
        debug_assert!(e <= self.bound);
        self.words[e / 64] |= 1u64 << (e % 64);
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Characteristic function: 1 if `n` is a member, else 0.
    pub fn chi(&self, n: usize) -> u8 {
        self.contains(n) as u8
    }

    pub fn contains(&self, n: usize) -> bool {
        n <= self.bound && (self.words[n / 64] >> (n % 64)) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn max(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    pub fn min(&self) -> Option<usize> {
        self.iter().next()
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * 64 + bit)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// `{s + t : s ∈ self}` with bound `self.bound + t`.
    pub fn shift(&self, t: usize) -> Self {
        let mut out = NatSet::with_capacity(self.bound + t);
        for e in self.iter() {
            out.set(e + t);
        }
        out
    }

    /// `{m - s : s ∈ self}` with bound `m`.
    pub fn reflect(&self, m: usize) -> Result<Self> {
        if let Some(top) = self.max() {
            if top > m {
                return Err(Error::OutOfBound {
                    element: top,
                    bound: m,
                });
            }
        }
        let mut out = NatSet::with_capacity(m);
        for e in self.iter() {
            out.set(m - e);
        }
        Ok(out)
    }

    pub fn union(&self, other: &NatSet) -> Self {
        let (big, small) = if self.bound >= other.bound {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = big.clone();
        for (w, s) in out.words.iter_mut().zip(&small.words) {
            *w |= s;
        }
        out
    }

    /// Intersection; the bound is the smaller of the two bounds.
    pub fn intersection(&self, other: &NatSet) -> Self {
        let bound = self.bound.min(other.bound);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & b)
            .take(words_for(bound))
            .collect();
        NatSet { bound, words }
    }

    /// Members of `self` not in `other`; bound unchanged.
    pub fn difference(&self, other: &NatSet) -> Self {
        let mut out = self.clone();
        for (w, o) in out.words.iter_mut().zip(&other.words) {
            *w &= !o;
        }
        out.clear_above_bound();
        out
    }

    /// `self ∩ [0, hi]`, bound `hi`.
    pub fn truncate(&self, hi: usize) -> Self {
        let mut out = NatSet::with_capacity(hi);
        let n = out.words.len().min(self.words.len());
        out.words[..n].copy_from_slice(&self.words[..n]);
        out.clear_above_bound();
        out
    }

    /// `self ∩ [lo, hi]`, bound `hi`.
    pub fn slice(&self, lo: usize, hi: usize) -> Self {
        let mut out = NatSet::with_capacity(hi);
        for e in self.iter().skip_while(|&e| e < lo).take_while(|&e| e <= hi) {
            out.set(e);
        }
        out
    }

    /// Same members, bound raised to `bound` (never lowered below `max`).
    pub fn widen(&self, bound: usize) -> Self {
        let bound = bound.max(self.bound);
        let mut words = self.words.clone();
        words.resize(words_for(bound), 0);
        NatSet { bound, words }
    }

    fn clear_above_bound(&mut self) {
        let used = self.bound % 64 + 1;
        if used < 64 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << used) - 1;
            }
        }
    }
}

impl PartialEq for NatSet {
    fn eq(&self, other: &Self) -> bool {
        let n = self.words.len().max(other.words.len());
        (0..n).all(|i| {
            self.words.get(i).copied().unwrap_or(0) == other.words.get(i).copied().unwrap_or(0)
        })
    }
}

impl Eq for NatSet {}

impl fmt::Debug for NatSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for NatSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        NatSet::from_elements(iter)
    }
}

impl Serialize for NatSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for NatSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let elements = Vec::<usize>::deserialize(deserializer)?;
        if let Some(position) = elements.windows(2).position(|w| w[0] >= w[1]) {
            return Err(serde::de::Error::custom(Error::Unsorted {
                position: position + 1,
            }));
        }
        Ok(NatSet::from_elements(elements))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[usize]) -> NatSet {
        NatSet::from_elements(xs.iter().copied())
    }

    #[test]
    fn classes() {
        assert_eq!(tm_class(0), TmClass::EvenOnes);
        assert_eq!(tm_class(3), TmClass::EvenOnes);
        assert_eq!(tm_class(1), TmClass::OddOnes);
        assert_eq!(
            TmClass::EvenOnes.complement().complement(),
            TmClass::EvenOnes
        );
    }

    #[test]
    fn class_recursion() {
        for n in 0..5000u64 {
            assert_eq!(tm_class(2 * n), tm_class(n));
            assert_eq!(tm_class(2 * n + 1), tm_class(n).complement());
        }
    }

    #[test]
    fn prefixes() {
        assert_eq!(tm_prefix(1, TmClass::EvenOnes).unwrap(), set(&[0]));
        assert_eq!(tm_prefix(3, TmClass::EvenOnes).unwrap(), set(&[0, 3, 5, 6]));
        assert_eq!(tm_prefix(3, TmClass::OddOnes).unwrap(), set(&[1, 2, 4, 7]));
        assert_eq!(tm_prefix(3, TmClass::OddOnes).unwrap().bound(), 7);
        assert_eq!(tm_prefix(0, TmClass::EvenOnes), Err(Error::ZeroLength));
    }

    #[test]
    fn prefix_matches_popcount() {
        for l in 1..=12 {
            let a = tm_prefix(l, TmClass::EvenOnes).unwrap();
            let b = tm_prefix(l, TmClass::OddOnes).unwrap();
            for n in 0..(1usize << l) {
                let even = (n as u64).count_ones().is_multiple_of(2);
                assert_eq!(a.contains(n), even, "l={l} n={n}");
                assert_eq!(b.contains(n), !even, "l={l} n={n}");
            }
            assert!(!a.contains(1 << l));
            assert!(!b.contains(1 << l));
        }
    }

    #[test]
    fn prefix_partition_and_doubling() {
        for l in 1..=16 {
            let a = tm_prefix(l, TmClass::EvenOnes).unwrap();
            let b = tm_prefix(l, TmClass::OddOnes).unwrap();
            assert_eq!(a.union(&b), NatSet::interval(0, (1 << l) - 1));
            assert!(a.intersection(&b).is_empty());
            let a_next = tm_prefix(l + 1, TmClass::EvenOnes).unwrap();
            let b_next = tm_prefix(l + 1, TmClass::OddOnes).unwrap();
            assert_eq!(a_next, a.union(&b.shift(1 << l)));
            assert_eq!(b_next, b.union(&a.shift(1 << l)));
        }
    }

    #[test]
    fn shifting() {
        assert_eq!(set(&[0, 3]).shift(0), set(&[0, 3]));
        let s = set(&[1, 2, 4, 7]).shift(6);
        assert_eq!(s, set(&[7, 8, 10, 13]));
        assert_eq!(s.bound(), 13);
        assert!(NatSet::empty().shift(5).is_empty());
    }

    #[test]
    fn reflecting() {
        let c = set(&[0, 3, 5, 6, 7, 8, 10, 13]);
        assert_eq!(c.reflect(13).unwrap(), c);
        assert_eq!(set(&[0]).reflect(5).unwrap(), set(&[5]));
        assert_eq!(set(&[1, 2, 4, 7]).reflect(7).unwrap(), set(&[0, 3, 5, 6]));
        assert_eq!(
            set(&[1, 9]).reflect(8),
            Err(Error::OutOfBound {
                element: 9,
                bound: 8
            })
        );
    }

    #[test]
    fn membership_beyond_bound() {
        let s = set(&[2, 64, 130]);
        assert_eq!(s.bound(), 130);
        assert_eq!(s.chi(130), 1);
        assert_eq!(s.chi(131), 0);
        assert_eq!(s.chi(10_000), 0);
        assert_eq!(s.len(), 3);
        assert_eq!(s.max(), Some(130));
        assert_eq!(NatSet::empty().max(), None);
        assert_eq!(NatSet::empty().bound(), 0);
    }

    #[test]
    fn algebra() {
        let a = set(&[0, 5, 70, 200]);
        let b = set(&[5, 6, 200]);
        assert_eq!(a.intersection(&b), set(&[5, 200]));
        assert_eq!(a.difference(&b), set(&[0, 70]));
        assert_eq!(a.truncate(69), set(&[0, 5]));
        assert_eq!(a.truncate(69).bound(), 69);
        assert_eq!(a.slice(5, 70), set(&[5, 70]));
        assert_eq!(a.union(&b).to_vec(), vec![0, 5, 6, 70, 200]);
    }

    #[test]
    fn json_is_sorted_array() {
        let s = set(&[7, 1, 64]);
        assert_eq!(serde_json::to_string(&s).unwrap(), "[1,7,64]");
        let back: NatSet = serde_json::from_str("[1,7,64]").unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<NatSet>("[3,1]").is_err());
        assert!(serde_json::from_str::<NatSet>("[1,1]").is_err());
    }
}
