//! Crossing numbers without simulation.
//!
//! Unfolding the trajectory turns it into the line `x*(1,...,1)`, `x ∈ [0, ℓ]`,
//! and a lattice point `v` is crossed at step `x` exactly when
//! `x ≡ ±v_i (mod 2a_i)` for every `i`. Choosing a sign per coordinate gives a
//! congruence system that is solvable iff every pair is compatible modulo
//! `gcd(2a_i, 2a_j)`, which is what [`csp::build_csp`] encodes. Solutions in
//! `[0, 2ℓ)` come in pairs `x, 2ℓ - x`, and sign choices on coordinates with
//! `v_i ≡ -v_i` give the same system, so for a non-corner point
//!
//! ```text
//! m(v) = |A(G)| / 2^(|J(v)| + 1)
//! ```
//!
//! where `A(G)` is the set of satisfying assignments.

use std::fmt;

use crate::board::{BoardError, BoxSpec, LatticePoint};
use crate::csp::{build_csp, count_assignments, enumerate_pinned, CspError};
use crate::numthy::{crt_merge, Congruence, CongruenceSystem, NumError};
use crate::Int;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalyticError {
    #[error(transparent)]
    Board(#[from] BoardError),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Csp(#[from] CspError),
    #[error("sides {0} are not pairwise coprime")]
    NotCoprime(String),
    #[error("point {0} is a corner")]
    Corner(String),
    #[error("lattice has {size} points, above the enumeration cap {cap}")]
    LatticeCap { size: String, cap: u64 },
    #[error("crossing number 2^{0} does not fit in 128 bits")]
    TooLarge(usize),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

/// How a crossing number was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Csp,
    CornerConvention,
    Formula,
    Simulation,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Csp => "csp",
            Self::CornerConvention => "corner-convention",
            Self::Formula => "formula",
            Self::Simulation => "simulation",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingResult<I> {
    pub m: u128,
    pub method: Method,
    /// Sorted step indices of the crossings, when requested.
    pub times: Option<Vec<I>>,
}

/// Bouncing-point counts: `by_k[k]` is the number of crossed lattice points
/// touching exactly `k` walls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BounceTable {
    pub by_k: Vec<u128>,
}

/// Both sides of `Σ_v m(v) = ℓ`, with the start excluded from the sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SumIdentity {
    pub lhs: u128,
    pub rhs: u128,
    pub equal: bool,
}

fn pow2(exponent: usize) -> Result<u128, AnalyticError> {
    u32::try_from(exponent)
        .ok()
        .and_then(|e| 1u128.checked_shl(e))
        .ok_or(AnalyticError::TooLarge(exponent))
}

fn corner_crossing<I: Int>(bx: &BoxSpec<I>, v: &LatticePoint<I>) -> CrossingResult<I> {
    let m = u128::from(v.is_origin() || *v == bx.end_corner());
    CrossingResult {
        m,
        method: Method::CornerConvention,
        times: None,
    }
}

/// Crossing number of a lattice point.
///
/// Corners report 1 for the origin and the end corner and 0 otherwise.
pub fn crossing_number<I: Int>(
    bx: &BoxSpec<I>,
    v: &LatticePoint<I>,
) -> Result<CrossingResult<I>, AnalyticError> {
    bx.check_point(v)?;
    let profile = bx.classify(v);
    if profile.is_corner() {
        return Ok(corner_crossing(bx, v));
    }
    let count = count_assignments(&build_csp(bx, v));
    let m = if count.satisfiable {
        let fixed = profile.self_opposite.len() + 1;
        let exponent = count.component_count.checked_sub(fixed).ok_or_else(|| {
            AnalyticError::Invariant(format!(
                "{} components cannot absorb 2^{fixed} at {v} in box {bx}",
                count.component_count
            ))
        })?;
        pow2(exponent)?
    } else {
        0
    };
    Ok(CrossingResult {
        m,
        method: Method::Csp,
        times: None,
    })
}

/// Crossing number and the steps `t ∈ [1, ℓ)` at which a non-corner point is
/// crossed, each recovered by solving one congruence system.
///
/// Sign choices are enumerated with the variables in `J(v)` pinned to 0, so
/// each solution class is solved once. `assignment_cap` bounds the number of
/// systems.
pub fn crossing_times<I: Int>(
    bx: &BoxSpec<I>,
    v: &LatticePoint<I>,
    assignment_cap: u64,
) -> Result<CrossingResult<I>, AnalyticError> {
    bx.check_point(v)?;
    let profile = bx.classify(v);
    if profile.is_corner() {
        return Err(AnalyticError::Corner(v.to_string()));
    }
    let csp = build_csp(bx, v);
    let assignments = enumerate_pinned(&csp, &profile.self_opposite, assignment_cap)?;
    let ell = bx.ell();
    let two_ell = ell.checked_add(&ell).ok_or(NumError::Overflow("2ℓ"))?;
    let moduli = bx
        .sides()
        .iter()
        .map(|a| a.checked_add(a).ok_or(NumError::Overflow("2a")))
        .collect::<Result<Vec<I>, _>>()?;
    let mut times = Vec::with_capacity(assignments.len());
    for g in &assignments {
        let items = v
            .coords()
            .iter()
            .zip(&moduli)
            .zip(g)
            .map(|((&c, &m), &sign)| Congruence::new(if sign == 0 { c } else { -c }, m))
            .collect::<Result<Vec<_>, _>>()?;
        let solution = crt_merge(&CongruenceSystem::new(items)?)?.ok_or_else(|| {
            AnalyticError::Invariant(format!("satisfying assignment {g:?} has no CRT solution"))
        })?;
        debug_assert!(solution.modulus() == two_ell);
        let x = solution.residue();
        times.push(if x <= ell { x } else { two_ell - x });
    }
    times.sort_unstable();
    times.dedup();

    let expected = crossing_number(bx, v)?.m;
    if times.len() as u128 != expected {
        return Err(AnalyticError::Invariant(format!(
            "{} crossing times but crossing number {expected} at {v}",
            times.len()
        )));
    }
    Ok(CrossingResult {
        m: expected,
        method: Method::Csp,
        times: Some(times),
    })
}

fn require_coprime<I: Int>(bx: &BoxSpec<I>) -> Result<(), AnalyticError> {
    if bx.is_pairwise_coprime() {
        Ok(())
    } else {
        Err(AnalyticError::NotCoprime(bx.to_string()))
    }
}

/// Closed form for pairwise coprime sides: `2^(n-1-|I(v)|)` on points whose
/// coordinates share a parity, 0 elsewhere.
pub fn coprime_crossing_formula<I: Int>(
    bx: &BoxSpec<I>,
    v: &LatticePoint<I>,
) -> Result<u128, AnalyticError> {
    require_coprime(bx)?;
    let bound = crossing_upper_bound(bx, v)?;
    Ok(if bx.parity_consistent(v) { bound } else { 0 })
}

/// `2^(n-1-|I(v)|)`: half the number of diagonal directions that point into
/// the box from `v`.
pub fn crossing_upper_bound<I: Int>(
    bx: &BoxSpec<I>,
    v: &LatticePoint<I>,
) -> Result<u128, AnalyticError> {
    bx.check_point(v)?;
    let profile = bx.classify(v);
    if profile.is_corner() {
        return Err(AnalyticError::Corner(v.to_string()));
    }
    pow2(bx.dim() - 1 - profile.boundary.len())
}

/// `b_k = 2^(1-n+k) Σ_{|J|=k} Π_{j∉J} (a_j - 1)` for pairwise coprime sides,
/// summing over every subset of size `k`.
pub fn bounce_table_formula<I: Int>(bx: &BoxSpec<I>) -> Result<BounceTable, AnalyticError> {
    require_coprime(bx)?;
    let n = bx.dim();
    if n >= 64 {
        return Err(AnalyticError::TooLarge(n));
    }
    let reduced = bx
        .sides()
        .iter()
        .map(|a| {
            a.to_u128()
                .map(|a| a - 1)
                .ok_or(NumError::Overflow("side conversion"))
        })
        .collect::<Result<Vec<u128>, _>>()?;
    let mut sums = vec![0u128; n + 1];
    for mask in 0u64..1 << n {
        let k = mask.count_ones() as usize;
        let product = (0..n)
            .filter(|j| mask >> j & 1 == 0)
            .try_fold(1u128, |acc, j| acc.checked_mul(reduced[j]))
            .ok_or(NumError::Overflow("bounce product"))?;
        sums[k] = sums[k]
            .checked_add(product)
            .ok_or(NumError::Overflow("bounce sum"))?;
    }
    let by_k = sums
        .into_iter()
        .enumerate()
        .map(|(k, s)| {
            if k == n {
                return Ok(2 * s);
            }
            let divisor = pow2(n - 1 - k)?;
            if s % divisor != 0 {
                return Err(AnalyticError::Invariant(format!(
                    "b_{k} = {s} / {divisor} is not an integer"
                )));
            }
            Ok(s / divisor)
        })
        .collect::<Result<_, _>>()?;
    Ok(BounceTable { by_k })
}

fn check_lattice_cap<I: Int>(bx: &BoxSpec<I>, cap: u64) -> Result<(), AnalyticError> {
    match bx.lattice_len() {
        Some(size) if size <= cap => Ok(()),
        size => Err(AnalyticError::LatticeCap {
            size: size.map_or_else(|| "more than 2^64".to_string(), |s| s.to_string()),
            cap,
        }),
    }
}

/// Bouncing-point counts by scanning every lattice point. Works for any sides.
pub fn bounce_table_enumerated<I: Int>(
    bx: &BoxSpec<I>,
    lattice_cap: u64,
) -> Result<BounceTable, AnalyticError> {
    check_lattice_cap(bx, lattice_cap)?;
    let mut by_k = vec![0u128; bx.dim() + 1];
    for v in bx.lattice_points() {
        if crossing_number(bx, &v)?.m > 0 {
            by_k[bx.classify(&v).boundary.len()] += 1;
        }
    }
    Ok(BounceTable { by_k })
}

/// Sums the analytic crossing numbers over the whole lattice, counting the
/// origin as 0, and compares with ℓ.
pub fn sum_identity_check<I: Int>(
    bx: &BoxSpec<I>,
    lattice_cap: u64,
) -> Result<SumIdentity, AnalyticError> {
    check_lattice_cap(bx, lattice_cap)?;
    let mut lhs = 0u128;
    for v in bx.lattice_points() {
        if !v.is_origin() {
            lhs += crossing_number(bx, &v)?.m;
        }
    }
    let rhs = bx
        .ell()
        .to_u128()
        .ok_or(NumError::Overflow("ℓ conversion"))?;
    Ok(SumIdentity {
        lhs,
        rhs,
        equal: lhs == rhs,
    })
}
