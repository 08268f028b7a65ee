//! Exact integer and rational primitives: gcd/lcm, extended gcd, reduced
//! rationals, and Chinese-remainder merging for moduli that need not be
//! coprime.
//!
//! Everything is generic over [`Int`]. Arithmetic that can leave the range of
//! the scalar type is checked and reported as [`NumError::Overflow`]; nothing
//! wraps silently.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::Int;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumError {
    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("modulus must be positive, got {0}")]
    NonPositiveModulus(String),
    #[error("congruence system must not be empty")]
    EmptySystem,
    #[error("lcm of an empty list")]
    EmptyList,
    #[error("lcm argument must be positive, got {0}")]
    NonPositiveValue(String),
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}

/// Greatest common divisor of `|a|` and `|b|`; `gcd(0, 0) = 0`.
pub fn gcd<I: Int>(a: I, b: I) -> I {
    let (mut a, mut b) = (a.abs(), b.abs());
    while !b.is_zero() {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Extended Euclid: returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b)`.
///
/// Inputs must be non-negative. The Bezout coefficients satisfy
/// `|x| <= b/g` and `|y| <= a/g`, so they never overflow.
pub fn ext_gcd<I: Int>(a: I, b: I) -> (I, I, I) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (I::one(), I::zero());
    let (mut old_t, mut t) = (I::zero(), I::one());
    while !r.is_zero() {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    (old_r, old_s, old_t)
}

/// Least common multiple of two positive integers.
pub fn lcm<I: Int>(a: I, b: I) -> Result<I, NumError> {
    let g = gcd(a, b);
    if g.is_zero() {
        return Ok(I::zero());
    }
    (a / g).checked_mul(&b).ok_or(NumError::Overflow("lcm"))
}

/// Least common multiple of a non-empty list of positive integers.
pub fn lcm_all<I: Int>(values: &[I]) -> Result<I, NumError> {
    let (first, rest) = values.split_first().ok_or(NumError::EmptyList)?;
    values
        .iter()
        .find(|v| **v <= I::zero())
        .map_or(Ok(()), |v| Err(NumError::NonPositiveValue(v.to_string())))?;
    rest.iter().try_fold(*first, |acc, &v| lcm(acc, v))
}

/// `(a + b) mod m` for `0 <= a, b < m` without forming `a + b`.
fn add_mod<I: Int>(a: I, b: I, m: I) -> I {
    if a >= m - b {
        a - (m - b)
    } else {
        a + b
    }
}

/// `(a * b) mod m` for `0 <= a, b < m`. Falls back to double-and-add when the
/// direct product does not fit.
pub(crate) fn mul_mod<I: Int>(a: I, b: I, m: I) -> I {
    if let Some(p) = a.checked_mul(&b) {
        return p % m;
    }
    let two = I::one() + I::one();
    let (mut acc, mut base, mut k) = (I::zero(), a, b);
    while !k.is_zero() {
        if k % two == I::one() {
            acc = add_mod(acc, base, m);
        }
        base = add_mod(base, base, m);
        k = k / two;
    }
    acc
}

/// A rational number kept in lowest terms with a positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational<I> {
    num: I,
    den: I,
}

impl<I: Int> Rational<I> {
    pub fn new(num: I, den: I) -> Result<Self, NumError> {
        if den.is_zero() {
            return Err(NumError::ZeroDenominator);
        }
        let g = gcd(num, den);
        let (mut num, mut den) = (num / g, den / g);
        if den < I::zero() {
            num = num.checked_neg().ok_or(NumError::Overflow("rational sign"))?;
            den = den.checked_neg().ok_or(NumError::Overflow("rational sign"))?;
        }
        Ok(Self { num, den })
    }

    pub fn from_integer(value: I) -> Self {
        Self {
            num: value,
            den: I::one(),
        }
    }

    pub fn numer(&self) -> I {
        self.num
    }

    pub fn denom(&self) -> I {
        self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_positive(&self) -> bool {
        self.num > I::zero()
    }

    pub fn is_negative(&self) -> bool {
        self.num < I::zero()
    }

    /// `self * factor`, exact.
    pub fn checked_mul_int(&self, factor: I) -> Result<Self, NumError> {
        let g = gcd(factor, self.den);
        let num = self
            .num
            .checked_mul(&(factor / g))
            .ok_or(NumError::Overflow("rational product"))?;
        Self::new(num, self.den / g)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, NumError> {
        let g1 = gcd(self.num, other.den);
        let g2 = gcd(other.num, self.den);
        let (g1, g2) = (
            if g1.is_zero() { I::one() } else { g1 },
            if g2.is_zero() { I::one() } else { g2 },
        );
        let num = (self.num / g1)
            .checked_mul(&(other.num / g2))
            .ok_or(NumError::Overflow("rational product"))?;
        let den = (self.den / g2)
            .checked_mul(&(other.den / g1))
            .ok_or(NumError::Overflow("rational product"))?;
        Self::new(num, den)
    }

    /// The integer value, when the denominator is one.
    pub fn to_integer(&self) -> Option<I> {
        self.is_integer().then_some(self.num)
    }
}

impl<I: Int> PartialOrd for Rational<I> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<I: Int> Ord for Rational<I> {
    fn cmp(&self, other: &Self) -> Ordering {
        // a/b vs c/d with b, d > 0: compare a*d with c*b, using floor
        // division and remainders when the products would overflow.
        match (
            self.num.checked_mul(&other.den),
            other.num.checked_mul(&self.den),
        ) {
            (Some(l), Some(r)) => l.cmp(&r),
            _ => cmp_fractions(self.num, self.den, other.num, other.den),
        }
    }
}

/// Continued-fraction style comparison of `a/b` and `c/d` (b, d > 0).
fn cmp_fractions<I: Int>(a: I, b: I, c: I, d: I) -> Ordering {
    let floor_div = |x: I, y: I| {
        let q = x / y;
        if (x % y) < I::zero() {
            q - I::one()
        } else {
            q
        }
    };
    let (qa, qc) = (floor_div(a, b), floor_div(c, d));
    if qa != qc {
        return qa.cmp(&qc);
    }
    let (ra, rc) = (a - qa * b, c - qc * d);
    match (ra.is_zero(), rc.is_zero()) {
        (true, true) => Ordering::Equal,
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        // a/b - q = ra/b; compare ra/b with rc/d  <=>  d/rc with b/ra reversed
        (false, false) => cmp_fractions(d, rc, b, ra),
    }
}

impl<I: Int> fmt::Display for Rational<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Accepts `int` or `int/int`.
impl<I: Int> FromStr for Rational<I> {
    type Err = NumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let parse = |t: &str| t.trim().parse::<I>().map_err(|_| NumError::Parse(s.to_string()));
        match s.split_once('/') {
            Some((n, d)) => Self::new(parse(n)?, parse(d)?),
            None => Ok(Self::from_integer(parse(s)?)),
        }
    }
}

/// `x ≡ residue (mod modulus)` with `0 <= residue < modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Congruence<I> {
    residue: I,
    modulus: I,
}

impl<I: Int> Congruence<I> {
    /// Reduces `residue` into `[0, modulus)`; negative residues are allowed.
    pub fn new(residue: I, modulus: I) -> Result<Self, NumError> {
        if modulus <= I::zero() {
            return Err(NumError::NonPositiveModulus(modulus.to_string()));
        }
        let mut r = residue % modulus;
        if r < I::zero() {
            r = r + modulus;
        }
        Ok(Self {
            residue: r,
            modulus,
        })
    }

    pub fn residue(&self) -> I {
        self.residue
    }

    pub fn modulus(&self) -> I {
        self.modulus
    }

    pub fn contains(&self, x: I) -> bool {
        let mut r = x % self.modulus;
        if r < I::zero() {
            r = r + self.modulus;
        }
        r == self.residue
    }

    /// Intersection of two residue classes, `None` if it is empty.
    pub fn merge(&self, other: &Self) -> Result<Option<Self>, NumError> {
        let (r0, m0, r1, m1) = (self.residue, self.modulus, other.residue, other.modulus);
        let (g, p, _) = ext_gcd(m0, m1);
        // r1 - r0 lies in (-m1, m0) and cannot overflow
        let diff = r1 - r0;
        if !(diff % g).is_zero() {
            return Ok(None);
        }
        let q = m1 / g;
        let modulus = m0.checked_mul(&q).ok_or(NumError::Overflow("crt modulus"))?;
        // k ≡ (diff/g) * p (mod q), then x = r0 + k*m0
        let reduce = |v: I| {
            let r = v % q;
            if r < I::zero() {
                r + q
            } else {
                r
            }
        };
        let k = mul_mod(reduce(diff / g), reduce(p), q);
        // r0 + k*m0 < m0 + (q-1)*m0 = modulus, so this fits
        let residue = r0 + k * m0;
        Ok(Some(Self { residue, modulus }))
    }
}

impl<I: Int> fmt::Display for Congruence<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x ≡ {} (mod {})", self.residue, self.modulus)
    }
}

/// A non-empty list of congruences to be solved simultaneously.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceSystem<I> {
    items: Vec<Congruence<I>>,
}

impl<I: Int> CongruenceSystem<I> {
    pub fn new(items: Vec<Congruence<I>>) -> Result<Self, NumError> {
        if items.is_empty() {
            return Err(NumError::EmptySystem);
        }
        Ok(Self { items })
    }

    pub fn items(&self) -> &[Congruence<I>] {
        &self.items
    }
}

/// Solves the system by a left fold of pairwise merges.
///
/// Returns `Ok(None)` when some pair of congruences is incompatible modulo the
/// gcd of its moduli. Otherwise the result is the unique class modulo the lcm
/// of all moduli.
pub fn crt_merge<I: Int>(system: &CongruenceSystem<I>) -> Result<Option<Congruence<I>>, NumError> {
    let (first, rest) = system
        .items
        .split_first()
        .ok_or(NumError::EmptySystem)?;
    let mut acc = *first;
    for c in rest {
        match acc.merge(c)? {
            Some(merged) => acc = merged,
            None => return Ok(None),
        }
    }
    Ok(Some(acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cong(r: i64, m: i64) -> Congruence<i64> {
        Congruence::new(r, m).unwrap()
    }

    fn system(items: &[(i64, i64)]) -> CongruenceSystem<i64> {
        CongruenceSystem::new(items.iter().map(|&(r, m)| cong(r, m)).collect()).unwrap()
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(4i64, 12), 4);
        assert_eq!(gcd(0i64, 7), 7);
        assert_eq!(gcd(0i64, 0), 0);
        assert_eq!(gcd(9_699_690i64, 510_510), 510_510);
        assert_eq!(gcd(-6i32, 4), 2);
    }

    #[test]
    fn ext_gcd_bezout() {
        for a in 0i64..40 {
            for b in 0i64..40 {
                let (g, x, y) = ext_gcd(a, b);
                assert_eq!(g, gcd(a, b));
                assert_eq!(a * x + b * y, g);
            }
        }
    }

    #[test]
    fn lcm_examples() {
        assert_eq!(lcm_all(&[4i64, 3]), Ok(12));
        assert_eq!(lcm_all(&[2i64, 6]), Ok(6));
        assert_eq!(lcm_all(&[2i64, 3, 5, 7, 11, 13, 17, 19]), Ok(9_699_690));
        assert_eq!(lcm_all::<i64>(&[]), Err(NumError::EmptyList));
        assert!(matches!(lcm_all(&[3i64, 0]), Err(NumError::NonPositiveValue(_))));
    }

    #[test]
    fn lcm_overflow_is_reported() {
        assert_eq!(lcm_all(&[127i8, 2]), Err(NumError::Overflow("lcm")));
        let primes = [2i64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
        assert!(lcm_all(&primes).is_err());
        assert!(lcm_all(&primes.map(i128::from)).is_ok());
    }

    #[test]
    fn crt_examples() {
        assert_eq!(crt_merge(&system(&[(1, 4), (9, 12)])), Ok(Some(cong(9, 12))));
        assert_eq!(crt_merge(&system(&[(1, 4), (3, 12)])), Ok(None));
        assert_eq!(crt_merge(&system(&[(0, 1), (5, 7)])), Ok(Some(cong(5, 7))));
        assert_eq!(crt_merge(&system(&[(5, 6), (3, 8)])), Ok(Some(cong(11, 24))));
    }

    #[test]
    fn crt_large_moduli_do_not_overflow_intermediates() {
        // moduli near 2^31 force the mul_mod fallback for i64
        let (m0, m1) = (2_147_483_647i64, 2_147_483_629i64);
        let x = 3_000_000_000_000_000_123i64 % (m0 * m1);
        let merged = cong(x, m0).merge(&cong(x, m1)).unwrap().unwrap();
        assert_eq!(merged, cong(x, m0 * m1));
    }

    #[test]
    fn crt_overflow_is_reported() {
        let r = crt_merge(&CongruenceSystem::new(vec![
            Congruence::new(1i16, 251).unwrap(),
            Congruence::new(1i16, 241).unwrap(),
        ]).unwrap());
        assert_eq!(r, Err(NumError::Overflow("crt modulus")));
    }

    #[test]
    fn mul_mod_matches_wide_product() {
        let m = i64::MAX - 24;
        for (a, b) in [(m - 1, m - 1), (m / 2, 3), (123_456_789_012, 987_654_321_098)] {
            let expect = ((a as i128 * b as i128) % m as i128) as i64;
            assert_eq!(mul_mod(a, b, m), expect);
        }
    }

    #[test]
    fn rational_normalizes() {
        let r = Rational::new(6i64, -8).unwrap();
        assert_eq!((r.numer(), r.denom()), (-3, 4));
        assert_eq!("3/4".parse::<Rational<i64>>().unwrap(), Rational::new(6, 8).unwrap());
        assert_eq!("5".parse::<Rational<i64>>().unwrap(), Rational::from_integer(5));
        assert!("1/0".parse::<Rational<i64>>().is_err());
        assert!("x".parse::<Rational<i64>>().is_err());
        assert_eq!(Rational::new(3i64, 4).unwrap().to_string(), "3/4");
    }

    #[test]
    fn rational_ordering() {
        let q = |n, d| Rational::new(n, d).unwrap();
        assert!(q(1i64, 3) < q(1, 2));
        assert!(q(-1i64, 2) < q(0, 1));
        assert_eq!(q(2i64, 4).cmp(&q(1, 2)), Ordering::Equal);
        // products overflow i64 here
        let big = i64::MAX / 3;
        assert!(q(big, big - 1) < q(big - 1, big - 2));
        assert!(q(big - 1, big) < q(big, big + 1));
    }
}
