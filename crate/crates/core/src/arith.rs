//! Positive rationals as prime-exponent vectors.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

/// Prime factorization by trial division. `factorize(1)` is empty.
pub fn factorize(mut n: u64) -> BTreeMap<u64, i64> {
    assert!(n > 0, "cannot factor zero");
    let mut out = BTreeMap::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        while n.is_multiple_of(p) {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

/// A positive rational, stored as `prime -> exponent` with zero exponents
/// dropped, so equality is equality of rationals.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(BTreeMap<u64, i64>);

impl ExponentVector {
    pub fn one() -> Self {
        ExponentVector(BTreeMap::new())
    }

    pub fn from_int(n: u64) -> Self {
        ExponentVector(factorize(n))
    }

    /// `|num| / |den|`; both must be non-zero.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_int(num.unsigned_abs()).div(&Self::from_int(den.unsigned_abs()))
    }

    pub fn from_map(map: BTreeMap<u64, i64>) -> Self {
        ExponentVector(map.into_iter().filter(|&(_, e)| e != 0).collect())
    }

    pub fn exponent(&self, p: u64) -> i64 {
        self.0.get(&p).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.0.iter().map(|(&p, &e)| (p, e))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// True when the rational is an integer.
    pub fn is_integral(&self) -> bool {
        self.0.values().all(|&e| e > 0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut m = self.0.clone();
        for (&p, &e) in &other.0 {
            *m.entry(p).or_insert(0) += e;
        }
        Self::from_map(m)
    }

    pub fn inv(&self) -> Self {
        ExponentVector(self.0.iter().map(|(&p, &e)| (p, -e)).collect())
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    pub fn pow(&self, k: i64) -> Self {
        Self::from_map(self.0.iter().map(|(&p, &e)| (p, e * k)).collect())
    }

    /// Exponents over the given prime list, or `None` if the support is not
    /// contained in it.
    pub fn coordinates(&self, primes: &[u64]) -> Option<Vec<i64>> {
        if self.0.keys().any(|p| primes.binary_search(p).is_err()) {
            return None;
        }
        Some(primes.iter().map(|&p| self.exponent(p)).collect())
    }

    pub fn from_coordinates(primes: &[u64], coords: &[i64]) -> Self {
        Self::from_map(primes.iter().copied().zip(coords.iter().copied()).collect())
    }

    fn part(&self, positive: bool) -> BigUint {
        let mut acc = BigUint::one();
        for (&p, &e) in &self.0 {
            if (e > 0) == positive {
                acc *= BigUint::from(p).pow(e.unsigned_abs() as u32);
            }
        }
        acc
    }

    pub fn numer(&self) -> BigUint {
        self.part(true)
    }

    pub fn denom(&self) -> BigUint {
        self.part(false)
    }

    /// The value as an integer, if it is one and fits.
    pub fn to_u128(&self) -> Option<u128> {
        if !self.is_integral() {
            return None;
        }
        self.0.iter().try_fold(1u128, |acc, (&p, &e)| {
            (p as u128).checked_pow(e as u32).and_then(|x| acc.checked_mul(x))
        })
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.denom();
        if d.is_one() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), d)
        }
    }
}

/// A non-zero rational as a sign and a magnitude.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedRational {
    pub sign: i8,
    pub magnitude: ExponentVector,
}

impl SignedRational {
    pub fn one() -> Self {
        SignedRational { sign: 1, magnitude: ExponentVector::one() }
    }

    /// `num / den` for non-zero integers.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        let sign = if (num < 0) == (den < 0) { 1 } else { -1 };
        SignedRational { sign, magnitude: ExponentVector::from_ratio(num, den) }
    }

    pub fn mul(&self, other: &Self) -> Self {
        SignedRational { sign: self.sign * other.sign, magnitude: self.magnitude.mul(&other.magnitude) }
    }
}

impl fmt::Display for SignedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            f.write_str("-")?;
        }
        write!(f, "{}", self.magnitude)
    }
}
