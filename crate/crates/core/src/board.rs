//! The box, its integer scaling, and classification of lattice points.

use std::fmt;

use crate::numthy::{gcd, lcm, lcm_all, NumError, Rational};
use crate::Int;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BoardError {
    #[error("a box needs at least one side")]
    Empty,
    #[error("side {index} must be positive, got {value}")]
    NonPositiveSide { index: usize, value: String },
    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coordinate {index} = {value} lies outside [0, {side}]")]
    OutsideBox {
        index: usize,
        value: String,
        side: String,
    },
    #[error(transparent)]
    Num(#[from] NumError),
}

/// A point of the integer lattice `T ∩ ℕⁿ` of a scaled box.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePoint<I> {
    coords: Vec<I>,
}

impl<I: Int> LatticePoint<I> {
    pub fn new(coords: Vec<I>) -> Self {
        Self { coords }
    }

    pub fn origin(n: usize) -> Self {
        Self {
            coords: vec![I::zero(); n],
        }
    }

    pub fn coords(&self) -> &[I] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_origin(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn scaled(&self, factor: I) -> Result<Self, NumError> {
        self.coords
            .iter()
            .map(|c| c.checked_mul(&factor).ok_or(NumError::Overflow("point scaling")))
            .collect::<Result<_, _>>()
            .map(Self::new)
    }
}

impl<I: Int> From<Vec<I>> for LatticePoint<I> {
    fn from(coords: Vec<I>) -> Self {
        Self::new(coords)
    }
}

impl<I: Int> fmt::Display for LatticePoint<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Which walls a point touches. Indices are zero-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryProfile {
    /// `{i : v_i = 0}`
    pub lower: Vec<usize>,
    /// `{i : v_i = a_i}`
    pub upper: Vec<usize>,
    /// `lower ∪ upper`, sorted.
    pub boundary: Vec<usize>,
    /// `{i : v_i ≡ -v_i (mod 2a_i)}`, computed from the congruence directly.
    pub self_opposite: Vec<usize>,
    pub dim: usize,
}

impl BoundaryProfile {
    pub fn is_corner(&self) -> bool {
        self.boundary.len() == self.dim
    }
}

/// A box `[0,a_1] x ... x [0,a_n]` given by rational sides, together with the
/// least integer scale `σ` that makes every side integral.
///
/// The integer sides are not reduced by their common gcd.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoxSpec<I> {
    sides_rational: Vec<Rational<I>>,
    sides: Vec<I>,
    scale: I,
    ell: I,
}

impl<I: Int> BoxSpec<I> {
    /// Builds the box from rational side lengths, scaling by the lcm of the
    /// denominators.
    pub fn new(sides_rational: Vec<Rational<I>>) -> Result<Self, BoardError> {
        if sides_rational.is_empty() {
            return Err(BoardError::Empty);
        }
        if let Some((index, s)) = sides_rational
            .iter()
            .enumerate()
            .find(|(_, s)| !s.is_positive())
        {
            return Err(BoardError::NonPositiveSide {
                index,
                value: s.to_string(),
            });
        }
        let dens: Vec<I> = sides_rational.iter().map(|s| s.denom()).collect();
        let scale = lcm_all(&dens)?;
        Self::with_scale(sides_rational, scale)
    }

    /// An already integral box (`σ = 1`).
    pub fn from_sides(sides: &[I]) -> Result<Self, BoardError> {
        Self::new(sides.iter().map(|&a| Rational::from_integer(a)).collect())
    }

    fn with_scale(sides_rational: Vec<Rational<I>>, scale: I) -> Result<Self, BoardError> {
        let sides = sides_rational
            .iter()
            .map(|s| {
                s.checked_mul_int(scale)?
                    .to_integer()
                    .ok_or(NumError::Overflow("side scaling"))
            })
            .collect::<Result<Vec<I>, NumError>>()?;
        let ell = lcm_all(&sides)?;
        Ok(Self {
            sides_rational,
            sides,
            scale,
            ell,
        })
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    /// Integer sides `a_i = σ * sides_rational[i]`.
    pub fn sides(&self) -> &[I] {
        &self.sides
    }

    pub fn sides_rational(&self) -> &[Rational<I>] {
        &self.sides_rational
    }

    pub fn scale(&self) -> I {
        self.scale
    }

    /// `ℓ = lcm(a_1, ..., a_n)`, the number of lattice steps of the trajectory.
    pub fn ell(&self) -> I {
        self.ell
    }

    /// The box with every rational side multiplied by `factor`, rescaled
    /// minimally.
    pub fn scaled_by(&self, factor: Rational<I>) -> Result<Self, BoardError> {
        let sides = self
            .sides_rational
            .iter()
            .map(|s| s.checked_mul(&factor))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(sides)
    }

    /// Maps a rational point of the box onto the lattice.
    ///
    /// When a coordinate's denominator does not divide `σ`, the box is
    /// rescaled by the least factor that makes the point integral as well, and
    /// the rescaled box is returned alongside the point.
    pub fn scale_point(
        &self,
        point: &[Rational<I>],
    ) -> Result<(Self, LatticePoint<I>), BoardError> {
        self.check_dim(point.len())?;
        for (index, (p, s)) in point.iter().zip(&self.sides_rational).enumerate() {
            if p.is_negative() || p > s {
                return Err(BoardError::OutsideBox {
                    index,
                    value: p.to_string(),
                    side: s.to_string(),
                });
            }
        }
        let joint = point
            .iter()
            .try_fold(self.scale, |acc, p| lcm(acc, p.denom()))?;
        let rescaled = if joint == self.scale {
            self.clone()
        } else {
            Self::with_scale(self.sides_rational.clone(), joint)?
        };
        let coords = point
            .iter()
            .map(|p| {
                p.checked_mul_int(joint)?
                    .to_integer()
                    .ok_or(NumError::Overflow("point scaling"))
            })
            .collect::<Result<Vec<I>, NumError>>()?;
        Ok((rescaled, LatticePoint::new(coords)))
    }

    fn check_dim(&self, got: usize) -> Result<(), BoardError> {
        if got != self.dim() {
            return Err(BoardError::DimensionMismatch {
                expected: self.dim(),
                got,
            });
        }
        Ok(())
    }

    /// Checks that `v` has the right dimension and lies in `[0, a_i]`.
    pub fn check_point(&self, v: &LatticePoint<I>) -> Result<(), BoardError> {
        self.check_dim(v.dim())?;
        for (index, (&c, &a)) in v.coords().iter().zip(&self.sides).enumerate() {
            if c < I::zero() || c > a {
                return Err(BoardError::OutsideBox {
                    index,
                    value: c.to_string(),
                    side: a.to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn contains(&self, v: &LatticePoint<I>) -> bool {
        self.check_point(v).is_ok()
    }

    pub fn classify(&self, v: &LatticePoint<I>) -> BoundaryProfile {
        let mut profile = BoundaryProfile {
            lower: Vec::new(),
            upper: Vec::new(),
            boundary: Vec::new(),
            self_opposite: Vec::new(),
            dim: self.dim(),
        };
        for (i, (&c, &a)) in v.coords().iter().zip(&self.sides).enumerate() {
            if c.is_zero() {
                profile.lower.push(i);
            }
            if c == a {
                profile.upper.push(i);
            }
            if c.is_zero() || c == a {
                profile.boundary.push(i);
            }
            // v ≡ -v (mod 2a)  <=>  a | v
            if (c % a).is_zero() {
                profile.self_opposite.push(i);
            }
        }
        profile
    }

    pub fn is_corner(&self, v: &LatticePoint<I>) -> bool {
        v.coords()
            .iter()
            .zip(&self.sides)
            .all(|(&c, &a)| c.is_zero() || c == a)
    }

    /// True iff all coordinates are even or all are odd.
    pub fn parity_consistent(&self, v: &LatticePoint<I>) -> bool {
        let two = I::one() + I::one();
        let mut parities = v.coords().iter().map(|&c| (c % two).is_zero());
        match parities.next() {
            Some(first) => parities.all(|p| p == first),
            None => true,
        }
    }

    /// The corner where the trajectory halts: `a_i` where `ℓ/a_i` is odd,
    /// `0` where it is even.
    pub fn end_corner(&self) -> LatticePoint<I> {
        let two = I::one() + I::one();
        LatticePoint::new(
            self.sides
                .iter()
                .map(|&a| {
                    if ((self.ell / a) % two).is_one() {
                        a
                    } else {
                        I::zero()
                    }
                })
                .collect(),
        )
    }

    pub fn is_pairwise_coprime(&self) -> bool {
        self.sides.iter().enumerate().all(|(i, &a)| {
            self.sides[i + 1..]
                .iter()
                .all(|&b| gcd(a, b).is_one())
        })
    }

    /// `Π (a_i + 1)`, or `None` if it does not fit in a `u64`.
    pub fn lattice_len(&self) -> Option<u64> {
        self.sides.iter().try_fold(1u64, |acc, a| {
            acc.checked_mul(a.to_u64()?.checked_add(1)?)
        })
    }

    /// Every lattice point of the box in lexicographic order.
    pub fn lattice_points(&self) -> LatticeIter<'_, I> {
        LatticeIter {
            sides: &self.sides,
            next: Some(vec![I::zero(); self.dim()]),
        }
    }
}

impl<I: Int> fmt::Display for BoxSpec<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.sides.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Odometer over `{0..=a_1} x ... x {0..=a_n}`.
pub struct LatticeIter<'a, I> {
    sides: &'a [I],
    next: Option<Vec<I>>,
}

impl<I: Int> Iterator for LatticeIter<'_, I> {
    type Item = LatticePoint<I>;

    fn next(&mut self) -> Option<Self::Item> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if succ[i] < self.sides[i] {
                succ[i] = succ[i] + I::one();
                self.next = Some(succ);
                break;
            }
            succ[i] = I::zero();
        }
        Some(LatticePoint::new(current))
    }
}
