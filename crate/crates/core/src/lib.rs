//! Crossing numbers of the diagonal billiard trajectory in an n-dimensional
//! box with commensurable sides.
//!
//! A ball leaves the origin of `[0,a_1] x ... x [0,a_n]` in direction
//! `(1,...,1)`, reflects elastically off the walls and stops at the first
//! corner it reaches. The crossing number `m(v)` of a point is how often the
//! trajectory passes through it.
//!
//! Two independent routes compute `m(v)`:
//!
//! * [`walker`] simulates the trajectory step by step on the integer lattice,
//!   either by reflection or by folding the straight line `t*(1,...,1)` back
//!   from the torus of side lengths `2a_i`.
//! * [`analytic`] reduces the query to a binary sign-choice constraint problem
//!   ([`csp`]) whose satisfying assignments correspond to simultaneous
//!   congruences solved with the Chinese remainder theorem ([`numthy`]).
//!
//! All arithmetic is exact and generic over the integer type through [`Int`];
//! the aliases below fix it to `i64` or `i128`.

pub mod analytic;
pub mod board;
pub mod csp;
pub mod numthy;
pub mod verify;
pub mod walker;

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_traits::{CheckedNeg, PrimInt, Signed};

pub use analytic::{AnalyticError, BounceTable, CrossingResult, Method};
pub use board::{BoardError, BoundaryProfile, BoxSpec, LatticePoint};
pub use csp::{AssignmentCount, ConstraintKind, CspInstance};
pub use numthy::{Congruence, CongruenceSystem, NumError, Rational};
pub use verify::{BoxFamily, VerifyReport};
pub use walker::{Polyline, VisitMap, WalkError};

/// Signed machine integer used for side lengths, coordinates and step counts.
pub trait Int:
    PrimInt + Signed + CheckedNeg + Hash + Debug + Display + FromStr + Send + Sync + 'static
{
}

impl<T> Int for T where
    T: PrimInt + Signed + CheckedNeg + Hash + Debug + Display + FromStr + Send + Sync + 'static
{
}

/// Label attached to every reported result: the start at `t = 0` is not a
/// visit, the halt at `t = ℓ` is, and the origin is still reported with
/// crossing number 1.
pub const CONVENTION: &str = "visits-exclude-start";

/// Resource limits for the exhaustive and simulated paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Maximum trajectory length ℓ a walker will simulate.
    pub simulation: u64,
    /// Maximum number of satisfying assignments to materialize.
    pub assignments: u64,
    /// Maximum number of lattice points for exhaustive scans.
    pub lattice: u64,
}

impl Caps {
    pub const DEFAULT_SIMULATION: u64 = 100_000_000;
    pub const DEFAULT_ASSIGNMENTS: u64 = 1 << 16;
    pub const DEFAULT_LATTICE: u64 = 10_000_000;
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            simulation: Self::DEFAULT_SIMULATION,
            assignments: Self::DEFAULT_ASSIGNMENTS,
            lattice: Self::DEFAULT_LATTICE,
        }
    }
}

pub type Rational64 = Rational<i64>;
pub type Rational128 = Rational<i128>;
pub type Box64 = BoxSpec<i64>;
pub type Box128 = BoxSpec<i128>;
pub type Point64 = LatticePoint<i64>;
pub type Point128 = LatticePoint<i128>;
pub type VisitMap64 = VisitMap<i64>;
pub type CrossingResult64 = CrossingResult<i64>;
