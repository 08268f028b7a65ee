//! Brute-force trajectory simulation on the lattice of the box.
//!
//! Since the direction is always in `{-1,+1}ⁿ` and the start is the origin,
//! every bounce happens at a lattice point, so stepping one lattice diagonal at
//! a time is exact. Two walkers are provided:
//!
//! * the reflection walker flips `d_i` to `+1` at `v_i = 0` and to `-1` at
//!   `v_i = a_i` before each step;
//! * the unfolded walker moves along `t*(1,...,1)` on the torus with sides
//!   `2a_i` and folds each coordinate back into `[0, a_i]`.
//!
//! Step `t` runs from 1 to ℓ; the start at `t = 0` is not recorded.

use std::collections::BTreeMap;

use crate::board::{BoxSpec, LatticePoint};
use crate::Int;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WalkError {
    #[error("simulation too large (ℓ = {ell} exceeds cap {cap}), use analytic method")]
    CapExceeded { ell: String, cap: u64 },
}

fn check_cap<I: Int>(bx: &BoxSpec<I>, cap: u64) -> Result<(), WalkError> {
    match bx.ell().to_u64() {
        Some(ell) if ell <= cap => Ok(()),
        _ => Err(WalkError::CapExceeded {
            ell: bx.ell().to_string(),
            cap,
        }),
    }
}

/// Vertices of the trajectory: the start, every point where the direction
/// changes, and the final corner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polyline<I> {
    pub vertices: Vec<LatticePoint<I>>,
}

/// Visits per lattice point, with the step indices at which they happen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VisitMap<I> {
    times: BTreeMap<LatticePoint<I>, Vec<I>>,
}

impl<I: Int> Default for VisitMap<I> {
    fn default() -> Self {
        Self {
            times: BTreeMap::new(),
        }
    }
}

impl<I: Int> VisitMap<I> {
    fn record(&mut self, t: I, position: &[I]) {
        self.times
            .entry(LatticePoint::new(position.to_vec()))
            .or_default()
            .push(t);
    }

    /// Number of recorded visits; 0 for the origin unless the walk returned.
    pub fn count(&self, v: &LatticePoint<I>) -> usize {
        self.times.get(v).map_or(0, Vec::len)
    }

    /// Sorted step indices at which `v` was visited.
    pub fn times(&self, v: &LatticePoint<I>) -> &[I] {
        self.times.get(v).map_or(&[], Vec::as_slice)
    }

    /// Crossing number as reported to users: the recorded count, except that
    /// the origin reports 1.
    pub fn visits(&self, v: &LatticePoint<I>) -> u128 {
        if v.is_origin() {
            1
        } else {
            self.count(v) as u128
        }
    }

    /// Sum of all recorded counts; equals ℓ for a complete walk.
    pub fn total(&self) -> u128 {
        self.times.values().map(|t| t.len() as u128).sum()
    }

    /// Number of distinct visited points.
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LatticePoint<I>, &[I])> {
        self.times.iter().map(|(v, t)| (v, t.as_slice()))
    }
}

fn is_corner<I: Int>(position: &[I], sides: &[I]) -> bool {
    position
        .iter()
        .zip(sides)
        .all(|(&c, &a)| c.is_zero() || c == a)
}

/// Core reflection loop. Calls `visit(t, position)` after every step and
/// `turn(position)` wherever the direction changes. Returns the final step.
fn reflect_loop<I, V, T>(bx: &BoxSpec<I>, cap: u64, mut visit: V, mut turn: T) -> Result<I, WalkError>
where
    I: Int,
    V: FnMut(I, &[I]),
    T: FnMut(&[I]),
{
    check_cap(bx, cap)?;
    let sides = bx.sides();
    let mut position = vec![I::zero(); sides.len()];
    let mut direction = vec![true; sides.len()]; // true = +1
    let mut t = I::zero();
    loop {
        let mut turned = false;
        for i in 0..sides.len() {
            if position[i].is_zero() && !direction[i] {
                direction[i] = true;
                turned = true;
            } else if position[i] == sides[i] && direction[i] {
                direction[i] = false;
                turned = true;
            }
        }
        if turned {
            turn(&position);
        }
        for (p, &up) in position.iter_mut().zip(&direction) {
            *p = if up { *p + I::one() } else { *p - I::one() };
        }
        t = t + I::one();
        visit(t, &position);
        if is_corner(&position, sides) {
            return Ok(t);
        }
        debug_assert!(t < bx.ell(), "walk overran ℓ without reaching a corner");
    }
}

/// Runs the reflection walk, calling `visit(t, position)` for each step.
/// Returns the number of steps taken, which is ℓ.
pub fn reflect_steps<I: Int>(
    bx: &BoxSpec<I>,
    cap: u64,
    visit: impl FnMut(I, &[I]),
) -> Result<I, WalkError> {
    reflect_loop(bx, cap, visit, |_| {})
}

/// Full reflection walk: visit map plus trajectory polyline.
pub fn walk_reflect<I: Int>(
    bx: &BoxSpec<I>,
    cap: u64,
) -> Result<(VisitMap<I>, Polyline<I>), WalkError> {
    let mut map = VisitMap::default();
    let mut vertices = vec![LatticePoint::origin(bx.dim())];
    let mut last = Vec::new();
    reflect_loop(
        bx,
        cap,
        |t, p| {
            map.record(t, p);
            last.clear();
            last.extend_from_slice(p);
        },
        |p| vertices.push(LatticePoint::new(p.to_vec())),
    )?;
    vertices.push(LatticePoint::new(last));
    Ok((map, Polyline { vertices }))
}

/// Position of the unfolded trajectory at step `t`: `t mod 2a_i`, folded back
/// into `[0, a_i]`.
pub fn unfolded_position<I: Int>(bx: &BoxSpec<I>, t: I) -> LatticePoint<I> {
    LatticePoint::new(
        bx.sides()
            .iter()
            .map(|&a| {
                let period = a + a;
                let r = t % period;
                if r <= a {
                    r
                } else {
                    period - r
                }
            })
            .collect(),
    )
}

/// Runs the unfolded walk for `t = 1..=ℓ`.
pub fn unfolded_steps<I: Int>(
    bx: &BoxSpec<I>,
    cap: u64,
    mut visit: impl FnMut(I, &[I]),
) -> Result<(), WalkError> {
    check_cap(bx, cap)?;
    let sides = bx.sides();
    // residues t mod 2a_i, advanced incrementally
    let mut residues = vec![I::zero(); sides.len()];
    let mut position = vec![I::zero(); sides.len()];
    let mut t = I::zero();
    while t < bx.ell() {
        t = t + I::one();
        for ((r, p), &a) in residues.iter_mut().zip(position.iter_mut()).zip(sides) {
            *r = *r + I::one();
            if *r == a + a {
                *r = I::zero();
            }
            *p = if *r <= a { *r } else { a + a - *r };
        }
        visit(t, &position);
    }
    Ok(())
}

pub fn walk_unfolded<I: Int>(bx: &BoxSpec<I>, cap: u64) -> Result<VisitMap<I>, WalkError> {
    let mut map = VisitMap::default();
    unfolded_steps(bx, cap, |t, p| map.record(t, p))?;
    Ok(map)
}

/// Crossing number of a single point by streaming the reflection walk,
/// without building a visit map. Returns the count (origin convention
/// applied) and the recorded step indices.
pub fn simulate_crossing<I: Int>(
    bx: &BoxSpec<I>,
    v: &LatticePoint<I>,
    cap: u64,
) -> Result<(u128, Vec<I>), WalkError> {
    let target = v.coords();
    let mut times = Vec::new();
    reflect_steps(bx, cap, |t, p| {
        if p == target {
            times.push(t);
        }
    })?;
    let m = if v.is_origin() { 1 } else { times.len() as u128 };
    Ok((m, times))
}
