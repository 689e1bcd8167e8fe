//! Exact integer polynomials and the generating-function identities for
//! partition pairs.
//!
//! With `p_S(x) = Σ χ_S(i) x^i` and `G_m(x) = 1 + x + ... + x^m`:
//!
//! * square identity: `p_S(x)^2 - p_S(x^2) = 2 Σ R_S(n) x^n` for every `S`;
//! * complement identity: `p_D = G_m - p_C + x^{r1} + x^{r2}` whenever
//!   `C ∪ D = [0, m]` and `C ∩ D = {r1, r2}`;
//! * balance identity: `2 p_C(x^2) = G_m(x^2) + 2 p_C x^{r1} + 2 p_C x^{r2}
//!   + 2 p_C G_m - G_m^2 - 2 x^{r1} G_m - 2 x^{r2} G_m - 2 x^{r1+r2}`, which
//!   holds exactly when additionally `R_C ≡ R_D`.
//!
//! Rational generating functions are replaced by their finite geometric
//! expansions, so all arithmetic stays in the integers.

use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::constructions::PartitionPair;
use crate::error::{Error, Result};
use crate::natset::NatSet;
use crate::repfn::rep_profile;

const KARATSUBA_CUTOFF: usize = 32;

/// Integer polynomial, `coeffs[i]` is the coefficient of `x^i`. Trailing
/// zeros are always stripped, so the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly::default()
    }

    pub fn from_coeffs(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn monomial(c: i64, exp: usize) -> Self {
        let mut coeffs = vec![0; exp + 1];
        coeffs[exp] = c;
        IntPoly::from_coeffs(coeffs)
    }

    /// `1 + x^step + x^{2 step} + ... + x^{terms-1 step}`.
    pub fn geometric(terms: usize, step: usize) -> Self {
        if terms == 0 {
            return IntPoly::zero();
        }
        let mut coeffs = vec![0; (terms - 1) * step + 1];
        for i in 0..terms {
            coeffs[i * step] = 1;
        }
        IntPoly::from_coeffs(coeffs)
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, k: i64) -> Self {
        IntPoly::from_coeffs(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        IntPoly { coeffs }
    }

    /// `p(x^2)`.
    pub fn compose_square(&self) -> Self {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![0; 2 * self.coeffs.len() - 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[2 * i] = c;
        }
        IntPoly { coeffs }
    }

    /// Least exponent `<= upto` where the two polynomials differ.
    pub fn first_difference(&self, other: &IntPoly, upto: usize) -> Option<usize> {
        (0..=upto).find(|&i| self.coeff(i) != other.coeff(i))
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        self.scale(-1)
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![0; self.coeffs.len() + rhs.coeffs.len() - 1];
        karatsuba(&self.coeffs, &rhs.coeffs, &mut out);
        IntPoly::from_coeffs(out)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $f(self, rhs: IntPoly) -> IntPoly { (&self).$f(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

/// Accumulates `a * b` into `out` (`out.len() >= a.len() + b.len() - 1`).
fn karatsuba(a: &[i64], b: &[i64], out: &mut [i64]) {
    if a.len() < KARATSUBA_CUTOFF || b.len() < KARATSUBA_CUTOFF {
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        return;
    }
    let half = a.len().max(b.len()) / 2;
    let (a0, a1) = a.split_at(half.min(a.len()));
    let (b0, b1) = b.split_at(half.min(b.len()));
    if a1.is_empty() || b1.is_empty() {
        // Unbalanced: split only the longer operand.
        let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
        let (l0, l1) = long.split_at(half);
        karatsuba(l0, short, out);
        karatsuba(l1, short, &mut out[half..]);
        return;
    }

    let mut z0 = vec![0; a0.len() + b0.len() - 1];
    let mut z2 = vec![0; a1.len() + b1.len() - 1];
    karatsuba(a0, b0, &mut z0);
    karatsuba(a1, b1, &mut z2);

    let sa: Vec<i64> = (0..half.max(a1.len()))
        .map(|i| a0.get(i).copied().unwrap_or(0) + a1.get(i).copied().unwrap_or(0))
        .collect();
    let sb: Vec<i64> = (0..half.max(b1.len()))
        .map(|i| b0.get(i).copied().unwrap_or(0) + b1.get(i).copied().unwrap_or(0))
        .collect();
    let mut z1 = vec![0; sa.len() + sb.len() - 1];
    karatsuba(&sa, &sb, &mut z1);
    for (i, v) in z0.iter().enumerate() {
        z1[i] -= v;
    }
    for (i, v) in z2.iter().enumerate() {
        z1[i] -= v;
    }

    for (i, v) in z0.into_iter().enumerate() {
        out[i] += v;
    }
    for (i, v) in z1.into_iter().enumerate() {
        if v != 0 {
            out[half + i] += v;
        }
    }
    for (i, v) in z2.into_iter().enumerate() {
        out[2 * half + i] += v;
    }
}

/// `p_S(x) = Σ χ_S(i) x^i`.
pub fn char_poly(s: &NatSet) -> IntPoly {
    let mut coeffs = vec![0; s.max().map_or(0, |m| m + 1)];
    for e in s.iter() {
        coeffs[e] = 1;
    }
    IntPoly::from_coeffs(coeffs)
}

/// Checks `p_S(x)^2 - p_S(x^2) = 2 Σ R_S(n) x^n` through `x^degree`.
pub fn square_identity_holds(s: &NatSet, degree: usize) -> Result<bool> {
    let top = s.max().unwrap_or(0);
    if degree < 2 * top {
        return Err(Error::Precondition(format!(
            "degree {degree} is below twice the largest element {top}"
        )));
    }
    let p = char_poly(s);
    let lhs = &(&p * &p) - &p.compose_square();
    let profile = rep_profile(s, degree);
    let rhs = IntPoly::from_coeffs(profile.counts.iter().map(|&c| 2 * c as i64).collect());
    Ok(lhs.first_difference(&rhs, degree).is_none())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub holds: bool,
    pub first_failure: Option<usize>,
}

impl IdentityCheck {
    fn compare(lhs: &IntPoly, rhs: &IntPoly, upto: usize) -> Self {
        let first_failure = lhs.first_difference(rhs, upto);
        IdentityCheck {
            holds: first_failure.is_none(),
            first_failure,
        }
    }
}

/// Outcome of the complement and balance identities for a pair with two
/// shared elements, compared coefficientwise through `x^{2m+2}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub m: usize,
    pub degree: usize,
    pub complement: IdentityCheck,
    pub balance: IdentityCheck,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.complement.holds && self.balance.holds
    }
}

pub fn check_pair_identities(pair: &PartitionPair) -> Result<IdentityReport> {
    let (r1, r2) = pair.shared_pair()?;
    let m = pair.m();
    let degree = 2 * m + 2;
    let pc = char_poly(pair.c());
    let pd = char_poly(pair.d());
    let g = IntPoly::geometric(m + 1, 1);
    let g_sq = IntPoly::geometric(m + 1, 2);
    let x1 = IntPoly::monomial(1, r1);
    let x2 = IntPoly::monomial(1, r2);

    let complement_rhs = &(&(&g - &pc) + &x1) + &x2;
    let complement = IdentityCheck::compare(&pd, &complement_rhs, degree);

    let lhs = pc.compose_square().scale(2);
    let mut rhs = g_sq;
    rhs = &rhs + &pc.shift(r1).scale(2);
    rhs = &rhs + &pc.shift(r2).scale(2);
    rhs = &rhs + &(&pc * &g).scale(2);
    rhs = &rhs - &(&g * &g);
    rhs = &rhs - &g.shift(r1).scale(2);
    rhs = &rhs - &g.shift(r2).scale(2);
    rhs = &rhs - &IntPoly::monomial(2, r1 + r2);
    let balance = IdentityCheck::compare(&lhs, &rhs, degree);

    Ok(IdentityReport {
        m,
        degree,
        complement,
        balance,
    })
}

/// The three χ-recurrences obtained by comparing neighbouring coefficients
/// of the balance identity at an even exponent `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Recurrence {
    /// `χ(k/2) = χ(k-r1) - χ(k+1-r1) - χ(k+1) + 1`, for
    /// `r1 <= k < k+1 < min(r2, 2 r1) <= m`.
    Gap,
    /// `χ(k/2) = χ(k-r1) - χ(k-1-r2) + χ(k)`, for
    /// `r2 < k < k+1 < 2 r1` and `r1 + r2 <= m`.
    Straddle,
    /// `χ(k/2) = χ(k-r2) - χ(k+1-r1) - χ(k+1) + 1`, same window as
    /// [`Recurrence::Straddle`].
    Shifted,
}

impl Recurrence {
    pub const ALL: [Recurrence; 3] = [Recurrence::Gap, Recurrence::Straddle, Recurrence::Shifted];

    fn in_window(self, k: usize, r1: usize, r2: usize, m: usize) -> bool {
        match self {
            Recurrence::Gap => {
                let cap = r2.min(2 * r1);
                r1 <= k && k + 1 < cap && cap <= m
            }
            Recurrence::Straddle | Recurrence::Shifted => r2 < k && k + 1 < 2 * r1 && r1 + r2 <= m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ProbeOutcome {
    Holds,
    Fails,
    NotApplicable,
}

/// Evaluates one χ-recurrence at even `k` on the `C` side of a balanced
/// pair; outside the recurrence's window the result is `NotApplicable`.
pub fn chi_probe(pair: &PartitionPair, which: Recurrence, k: usize) -> Result<ProbeOutcome> {
    if !k.is_multiple_of(2) {
        return Err(Error::Precondition(format!("k = {k} must be even")));
    }
    let (r1, r2) = pair.shared_pair()?;
    pair.require_balanced()?;
    if !which.in_window(k, r1, r2, pair.m()) {
        return Ok(ProbeOutcome::NotApplicable);
    }
    let chi = |n: usize| pair.c().chi(n) as i64;
    let lhs = chi(k / 2);
    let rhs = match which {
        Recurrence::Gap => chi(k - r1) - chi(k + 1 - r1) - chi(k + 1) + 1,
        Recurrence::Straddle => chi(k - r1) - chi(k - 1 - r2) + chi(k),
        Recurrence::Shifted => chi(k - r2) - chi(k + 1 - r1) - chi(k + 1) + 1,
    };
    Ok(if lhs == rhs {
        ProbeOutcome::Holds
    } else {
        ProbeOutcome::Fails
    })
}

/// True iff `r1 / 2 ∈ C` for a balanced pair with even `r1` and
/// `r1 + r2 <= m`.
pub fn half_r1_in_c(pair: &PartitionPair) -> Result<bool> {
    let (r1, r2) = pair.shared_pair()?;
    if r1 % 2 != 0 {
        return Err(Error::Precondition(format!("r1 = {r1} is odd")));
    }
    if r1 + r2 > pair.m() {
        return Err(Error::Precondition(format!(
            "r1 + r2 = {} exceeds m = {}",
            r1 + r2,
            pair.m()
        )));
    }
    pair.require_balanced()?;
    Ok(pair.c().contains(r1 / 2))
}
