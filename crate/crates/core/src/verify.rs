//! Exhaustive cross-check of the analytic counts against simulation over a
//! family of boxes.

use rayon::prelude::*;

use crate::analytic::{
    bounce_table_formula, coprime_crossing_formula, crossing_number, crossing_times,
    crossing_upper_bound,
};
use crate::board::{BoxSpec, LatticePoint};
use crate::numthy::lcm;
use crate::walker::{walk_reflect, walk_unfolded};
use crate::{Caps, Int};

/// Which boxes to check.
#[derive(Debug, Clone)]
pub enum BoxFamily<I> {
    Explicit(Vec<BoxSpec<I>>),
    /// Every integer side tuple with `1 <= n <= max_dim`, `1 <= a_i <= max_side`
    /// and `ℓ <= max_lcm`. Permutations are distinct boxes.
    Enumerated {
        max_dim: usize,
        max_side: u64,
        max_lcm: u64,
    },
}

impl<I: Int> BoxFamily<I> {
    pub fn boxes(&self) -> Vec<BoxSpec<I>> {
        match self {
            Self::Explicit(boxes) => boxes.clone(),
            Self::Enumerated {
                max_dim,
                max_side,
                max_lcm,
            } => {
                let mut out = Vec::new();
                let mut sides = Vec::new();
                for n in 1..=*max_dim {
                    push_tuples(n, *max_side, *max_lcm, 1, &mut sides, &mut out);
                }
                out
            }
        }
    }
}

fn push_tuples<I: Int>(
    n: usize,
    max_side: u64,
    max_lcm: u64,
    ell: i128,
    sides: &mut Vec<I>,
    out: &mut Vec<BoxSpec<I>>,
) {
    if sides.len() == n {
        if let Ok(b) = BoxSpec::from_sides(sides) {
            out.push(b);
        }
        return;
    }
    for a in 1..=max_side {
        let Ok(next) = lcm(ell, i128::from(a)) else { continue };
        let Some(side) = I::from(a) else { continue };
        if next > i128::from(max_lcm) {
            continue;
        }
        sides.push(side);
        push_tuples(n, max_side, max_lcm, next, sides, out);
        sides.pop();
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch<I> {
    pub sides: Vec<I>,
    pub point: Vec<I>,
    pub analytic_m: u128,
    pub simulated_m: u128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointIssue<I> {
    pub sides: Vec<I>,
    pub point: Vec<I>,
    pub m: u128,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxIssue<I> {
    pub sides: Vec<I>,
    pub kind: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport<I> {
    pub boxes_checked: usize,
    pub points_checked: u64,
    /// Analytic crossing number differs from the simulated visit count.
    pub mismatches: Vec<Mismatch<I>>,
    /// Crossing number is neither 0 nor a power of two.
    pub theorem1_violations: Vec<PointIssue<I>>,
    /// Coprime box where the closed form disagrees with the count.
    pub theorem2_violations: Vec<PointIssue<I>>,
    /// Crossing number above `2^(n-1-|I(v)|)`.
    pub bound_violations: Vec<PointIssue<I>>,
    /// Crossing times from CRT differ from the simulated step indices.
    pub times_mismatches: Vec<PointIssue<I>>,
    /// Per-box identities: trajectory length, walker agreement, sum
    /// identity, parity, end corner, bounce table.
    pub identity_failures: Vec<BoxIssue<I>>,
    /// Boxes refused by a cap or an arithmetic error.
    pub skipped: Vec<BoxIssue<I>>,
}

impl<I> Default for VerifyReport<I> {
    fn default() -> Self {
        Self {
            boxes_checked: 0,
            points_checked: 0,
            mismatches: Vec::new(),
            theorem1_violations: Vec::new(),
            theorem2_violations: Vec::new(),
            bound_violations: Vec::new(),
            times_mismatches: Vec::new(),
            identity_failures: Vec::new(),
            skipped: Vec::new(),
        }
    }
}

impl<I> VerifyReport<I> {
    /// No check failed. Skipped boxes do not count as failures.
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
            && self.theorem1_violations.is_empty()
            && self.theorem2_violations.is_empty()
            && self.bound_violations.is_empty()
            && self.times_mismatches.is_empty()
            && self.identity_failures.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.skipped.is_empty()
    }

    pub fn merge(mut self, other: Self) -> Self {
        self.boxes_checked += other.boxes_checked;
        self.points_checked += other.points_checked;
        self.mismatches.extend(other.mismatches);
        self.theorem1_violations.extend(other.theorem1_violations);
        self.theorem2_violations.extend(other.theorem2_violations);
        self.bound_violations.extend(other.bound_violations);
        self.times_mismatches.extend(other.times_mismatches);
        self.identity_failures.extend(other.identity_failures);
        self.skipped.extend(other.skipped);
        self
    }
}

/// Runs every check over every box, in parallel across boxes.
pub fn verify_family<I: Int>(family: &BoxFamily<I>, caps: &Caps) -> VerifyReport<I> {
    family
        .boxes()
        .par_iter()
        .map(|b| verify_box(b, caps))
        .reduce(VerifyReport::default, VerifyReport::merge)
}

pub fn verify_box<I: Int>(bx: &BoxSpec<I>, caps: &Caps) -> VerifyReport<I> {
    let mut report = VerifyReport::default();
    let sides = bx.sides().to_vec();
    let box_issue = |kind, detail: String| BoxIssue {
        sides: sides.clone(),
        kind,
        detail,
    };
    if bx.lattice_len().is_none_or(|n| n > caps.lattice) {
        report.skipped.push(box_issue("lattice-cap", format!("lattice exceeds {}", caps.lattice)));
        return report;
    }
    let (reflected, polyline) = match walk_reflect(bx, caps.simulation) {
        Ok(r) => r,
        Err(e) => {
            report.skipped.push(box_issue("simulation-cap", e.to_string()));
            return report;
        }
    };
    report.boxes_checked = 1;
    let ell = bx.ell().to_u128().unwrap_or(u128::MAX);
    let end = bx.end_corner();

    match walk_unfolded(bx, caps.simulation) {
        Ok(unfolded) if unfolded == reflected => {}
        Ok(_) => report
            .identity_failures
            .push(box_issue("walkers-disagree", "reflected and unfolded visit maps differ".into())),
        Err(e) => report.identity_failures.push(box_issue("walkers-disagree", e.to_string())),
    }
    if reflected.total() != ell {
        report.identity_failures.push(box_issue(
            "trajectory-length",
            format!("{} steps, ℓ = {ell}", reflected.total()),
        ));
    }
    if polyline.vertices.last() != Some(&end) || reflected.times(&end).last() != Some(&bx.ell()) {
        report
            .identity_failures
            .push(box_issue("end-corner", format!("walk does not halt at {end} at t = ℓ")));
    }
    for (v, times) in reflected.iter() {
        if bx.is_corner(v) && (*v != end || times.len() != 1) {
            report
                .identity_failures
                .push(box_issue("early-corner", format!("corner {v} visited at {times:?}")));
        }
        if !bx.parity_consistent(v) {
            report
                .identity_failures
                .push(box_issue("parity", format!("visited {v} has mixed parity")));
        }
    }

    let coprime = bx.is_pairwise_coprime();
    let mut analytic_sum = 0u128;
    let mut bounce = vec![0u128; bx.dim() + 1];
    for v in bx.lattice_points() {
        report.points_checked += 1;
        let point_issue = |m, detail: String| PointIssue {
            sides: sides.clone(),
            point: v.coords().to_vec(),
            m,
            detail,
        };
        let m = match crossing_number(bx, &v) {
            Ok(r) => r.m,
            Err(e) => {
                report.identity_failures.push(box_issue("analytic-error", format!("{v}: {e}")));
                continue;
            }
        };
        let simulated = reflected.visits(&v);
        if m != simulated {
            report.mismatches.push(Mismatch {
                sides: sides.clone(),
                point: v.coords().to_vec(),
                analytic_m: m,
                simulated_m: simulated,
            });
        }
        if m != 0 && !m.is_power_of_two() {
            report
                .theorem1_violations
                .push(point_issue(m, "not 0 or a power of two".into()));
        }
        if !v.is_origin() {
            analytic_sum += m;
        }
        if m > 0 {
            bounce[bx.classify(&v).boundary.len()] += 1;
        }
        if bx.is_corner(&v) {
            continue;
        }
        check_non_corner(bx, &v, m, coprime, caps, &reflected, &mut report, &point_issue);
    }

    if analytic_sum != ell {
        report.identity_failures.push(box_issue(
            "sum-identity",
            format!("Σ m(v) = {analytic_sum}, ℓ = {ell}"),
        ));
    }
    if coprime {
        match bounce_table_formula(bx) {
            Ok(t) if t.by_k == bounce => {}
            Ok(t) => report.identity_failures.push(box_issue(
                "bounce-table",
                format!("formula {:?}, enumeration {bounce:?}", t.by_k),
            )),
            Err(e) => report.identity_failures.push(box_issue("bounce-table", e.to_string())),
        }
    }
    report
}

#[allow(clippy::too_many_arguments)]
fn check_non_corner<I: Int>(
    bx: &BoxSpec<I>,
    v: &LatticePoint<I>,
    m: u128,
    coprime: bool,
    caps: &Caps,
    reflected: &crate::walker::VisitMap<I>,
    report: &mut VerifyReport<I>,
    point_issue: &dyn Fn(u128, String) -> PointIssue<I>,
) {
    match crossing_upper_bound(bx, v) {
        Ok(bound) if m <= bound => {}
        Ok(bound) => report
            .bound_violations
            .push(point_issue(m, format!("bound {bound}"))),
        Err(e) => report.bound_violations.push(point_issue(m, e.to_string())),
    }
    if coprime {
        match coprime_crossing_formula(bx, v) {
            Ok(f) if f == m => {}
            Ok(f) => report
                .theorem2_violations
                .push(point_issue(m, format!("formula gives {f}"))),
            Err(e) => report.theorem2_violations.push(point_issue(m, e.to_string())),
        }
    }
    if m > 0 {
        match crossing_times(bx, v, caps.assignments) {
            Ok(r) if r.times.as_deref() == Some(reflected.times(v)) => {}
            Ok(r) => report.times_mismatches.push(point_issue(
                m,
                format!("analytic {:?}, simulated {:?}", r.times, reflected.times(v)),
            )),
            Err(e) => report.times_mismatches.push(point_issue(m, e.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerated_family_respects_bounds() {
        let family = BoxFamily::<i64>::Enumerated {
            max_dim: 2,
            max_side: 4,
            max_lcm: 6,
        };
        let boxes = family.boxes();
        assert!(boxes.iter().all(|b| b.dim() <= 2 && b.ell() <= 6));
        assert!(boxes.iter().any(|b| b.sides() == [2, 3]));
        assert!(boxes.iter().any(|b| b.sides() == [3, 2]));
        assert!(!boxes.iter().any(|b| b.sides() == [4, 3]));
        // n = 1: 4 boxes; n = 2: 16 pairs minus (3,4), (4,3)
        assert_eq!(boxes.len(), 4 + 14);
    }

    #[test]
    fn small_family_is_clean() {
        let family = BoxFamily::<i64>::Enumerated {
            max_dim: 3,
            max_side: 4,
            max_lcm: 1000,
        };
        let report = verify_family(&family, &Caps::default());
        assert!(report.is_clean(), "{report:?}");
        assert!(report.is_complete());
        assert_eq!(report.boxes_checked, 4 + 16 + 64);
    }

    #[test]
    fn explicit_box_counts_points() {
        let family = BoxFamily::Explicit(vec![BoxSpec::from_sides(&[4i64, 3]).unwrap()]);
        let report = verify_family(&family, &Caps::default());
        assert_eq!((report.boxes_checked, report.points_checked), (1, 20));
        assert!(report.is_clean());
    }

    #[test]
    fn caps_mark_report_incomplete() {
        let family = BoxFamily::Explicit(vec![BoxSpec::from_sides(&[4i64, 3]).unwrap()]);
        let caps = Caps {
            simulation: 5,
            ..Caps::default()
        };
        let report = verify_family(&family, &caps);
        assert!(!report.is_complete());
        assert_eq!(report.boxes_checked, 0);
    }
}
