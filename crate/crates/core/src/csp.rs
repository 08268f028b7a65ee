//! Binary sign-choice constraint problems and their exact solution counts.
//!
//! Variable `i` carries a sign `g(i) ∈ {0,1}` selecting the congruence
//! `x ≡ (-1)^{g(i)} v_i (mod 2a_i)`. Each pair of variables is constrained by
//! which sign combinations are CRT-compatible. Constraints are stored by the
//! set of *forbidden* value pairs, so an empty set means the pair is free.
//!
//! Every constraint is either free, an equality, an inequality, or
//! unsatisfiable, so counting reduces to a union-find that tracks the parity
//! between each variable and its root.

use std::collections::BTreeMap;

use crate::board::{BoxSpec, LatticePoint};
use crate::numthy::gcd;
use crate::Int;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CspError {
    #[error("{total} satisfying assignments exceed the enumeration cap {cap}")]
    CapExceeded { total: String, cap: u64 },
    #[error("variable index {index} out of range for {n} variables")]
    IndexOutOfRange { index: usize, n: usize },
}

/// One binary constraint, named by what it requires of `(g(i), g(j))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstraintKind {
    /// Nothing forbidden.
    Free,
    /// `(0,1)` and `(1,0)` forbidden.
    RequireEqual,
    /// `(0,0)` and `(1,1)` forbidden.
    RequireUnequal,
    /// All four pairs forbidden.
    Impossible,
}

impl ConstraintKind {
    pub fn forbidden_pairs(self) -> &'static [(u8, u8)] {
        match self {
            Self::Free => &[],
            Self::RequireEqual => &[(0, 1), (1, 0)],
            Self::RequireUnequal => &[(0, 0), (1, 1)],
            Self::Impossible => &[(0, 0), (0, 1), (1, 0), (1, 1)],
        }
    }

    pub fn allows(self, a: u8, b: u8) -> bool {
        !self.forbidden_pairs().contains(&(a, b))
    }

    /// Classifies a pair from whether `v_i ≡ v_j` and `v_i ≡ -v_j` hold.
    pub fn from_congruences(same: bool, opposite: bool) -> Self {
        match (same, opposite) {
            (true, true) => Self::Free,
            (true, false) => Self::RequireEqual,
            (false, true) => Self::RequireUnequal,
            (false, false) => Self::Impossible,
        }
    }
}

/// A constraint problem over variables `0..n`. Pairs not present are free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CspInstance {
    n: usize,
    constraints: BTreeMap<(usize, usize), ConstraintKind>,
}

impl CspInstance {
    /// An instance with every pair free.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            constraints: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn set(&mut self, i: usize, j: usize, kind: ConstraintKind) -> Result<(), CspError> {
        for index in [i, j] {
            if index >= self.n {
                return Err(CspError::IndexOutOfRange { index, n: self.n });
            }
        }
        let key = (i.min(j), i.max(j));
        if kind == ConstraintKind::Free {
            self.constraints.remove(&key);
        } else {
            self.constraints.insert(key, kind);
        }
        Ok(())
    }

    pub fn get(&self, i: usize, j: usize) -> ConstraintKind {
        self.constraints
            .get(&(i.min(j), i.max(j)))
            .copied()
            .unwrap_or(ConstraintKind::Free)
    }

    /// Non-free constraints, i.e. the edges of the auxiliary graph.
    pub fn edges(&self) -> impl Iterator<Item = ((usize, usize), ConstraintKind)> + '_ {
        self.constraints.iter().map(|(&k, &c)| (k, c))
    }

    /// Checks every pair against a full assignment.
    pub fn is_satisfied_by(&self, assignment: &[u8]) -> bool {
        self.edges()
            .all(|((i, j), c)| c.allows(assignment[i], assignment[j]))
    }
}

/// The constraint problem of a lattice point: for each pair `i < j`, with
/// `g = gcd(2a_i, 2a_j)`, compare `v_i ≡ v_j` and `v_i ≡ -v_j (mod g)`.
pub fn build_csp<I: Int>(bx: &BoxSpec<I>, v: &LatticePoint<I>) -> CspInstance {
    let sides = bx.sides();
    let coords = v.coords();
    let mut csp = CspInstance::new(sides.len());
    for i in 0..sides.len() {
        for j in i + 1..sides.len() {
            // gcd(2a_i, 2a_j) = 2 gcd(a_i, a_j); it divides 2a_i, so it fits
            let g = gcd(sides[i], sides[j]);
            let g = g + g;
            let (vi, vj) = (coords[i] % g, coords[j] % g);
            let same = vi == vj;
            let opposite = ((vi + vj) % g).is_zero();
            let kind = ConstraintKind::from_congruences(same, opposite);
            if kind != ConstraintKind::Free {
                csp.constraints.insert((i, j), kind);
            }
        }
    }
    csp
}

/// Number of satisfying assignments, `2^components` or zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AssignmentCount {
    pub satisfiable: bool,
    /// Connected components of the auxiliary graph, isolated variables
    /// included.
    pub component_count: usize,
}

impl AssignmentCount {
    /// `|A(G)|`, or `None` if `2^components` does not fit in a `u128`.
    pub fn total(&self) -> Option<u128> {
        if !self.satisfiable {
            return Some(0);
        }
        u32::try_from(self.component_count)
            .ok()
            .and_then(|k| 1u128.checked_shl(k))
    }
}

/// Union-find where each node stores its parity relative to its parent.
#[derive(Debug, Clone)]
struct ParityUnionFind {
    parent: Vec<usize>,
    parity: Vec<u8>,
    rank: Vec<u8>,
    components: usize,
}

impl ParityUnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            parity: vec![0; n],
            rank: vec![0; n],
            components: n,
        }
    }

    /// Root of `x` and the parity `g(x) xor g(root)`.
    fn find(&mut self, x: usize) -> (usize, u8) {
        let p = self.parent[x];
        if p == x {
            return (x, 0);
        }
        let (root, parent_parity) = self.find(p);
        self.parent[x] = root;
        self.parity[x] ^= parent_parity;
        (root, self.parity[x])
    }

    /// Imposes `g(x) xor g(y) = relation`. Returns false on contradiction.
    fn union(&mut self, x: usize, y: usize, relation: u8) -> bool {
        let (rx, px) = self.find(x);
        let (ry, py) = self.find(y);
        if rx == ry {
            return px ^ py == relation;
        }
        let (hi, lo) = if self.rank[rx] >= self.rank[ry] { (rx, ry) } else { (ry, rx) };
        self.parent[lo] = hi;
        self.parity[lo] = px ^ py ^ relation;
        if self.rank[hi] == self.rank[lo] {
            self.rank[hi] += 1;
        }
        self.components -= 1;
        true
    }
}

fn solve(csp: &CspInstance) -> Option<ParityUnionFind> {
    let mut uf = ParityUnionFind::new(csp.n);
    for ((i, j), kind) in csp.edges() {
        let relation = match kind {
            ConstraintKind::Free => continue,
            ConstraintKind::RequireEqual => 0,
            ConstraintKind::RequireUnequal => 1,
            ConstraintKind::Impossible => return None,
        };
        if !uf.union(i, j, relation) {
            return None;
        }
    }
    Some(uf)
}

pub fn count_assignments(csp: &CspInstance) -> AssignmentCount {
    match solve(csp) {
        Some(uf) => AssignmentCount {
            satisfiable: true,
            component_count: uf.components,
        },
        None => AssignmentCount {
            satisfiable: false,
            component_count: components_of(csp),
        },
    }
}

/// Component count of the auxiliary graph, ignoring constraint kinds.
fn components_of(csp: &CspInstance) -> usize {
    let mut uf = ParityUnionFind::new(csp.n);
    for ((i, j), _) in csp.edges() {
        let (ri, _) = uf.find(i);
        let (rj, _) = uf.find(j);
        if ri != rj {
            uf.union(i, j, 0);
        }
    }
    uf.components
}

/// All satisfying assignments in lexicographic order.
///
/// Each component root takes both values; every other variable follows its
/// stored parity.
pub fn enumerate_assignments(csp: &CspInstance, cap: u64) -> Result<Vec<Vec<u8>>, CspError> {
    enumerate_pinned(csp, &[], cap)
}

/// Satisfying assignments with every variable in `pinned` set to 0.
pub fn enumerate_pinned(
    csp: &CspInstance,
    pinned: &[usize],
    cap: u64,
) -> Result<Vec<Vec<u8>>, CspError> {
    if let Some(&index) = pinned.iter().find(|&&p| p >= csp.n) {
        return Err(CspError::IndexOutOfRange { index, n: csp.n });
    }
    let Some(mut uf) = solve(csp) else {
        return Ok(Vec::new());
    };
    let resolved: Vec<(usize, u8)> = (0..csp.n).map(|x| uf.find(x)).collect();
    // g(x) = g(root) ^ parity, so pinning g(x) = 0 forces g(root) = parity
    let mut forced: BTreeMap<usize, u8> = BTreeMap::new();
    for &p in pinned {
        let (root, parity) = resolved[p];
        if *forced.entry(root).or_insert(parity) != parity {
            return Ok(Vec::new());
        }
    }
    let mut roots: Vec<usize> = resolved.iter().map(|&(r, _)| r).collect();
    roots.sort_unstable();
    roots.dedup();
    let free: Vec<usize> = roots.into_iter().filter(|r| !forced.contains_key(r)).collect();
    let k = free.len();
    if k >= 64 || (1u64 << k) > cap {
        return Err(CspError::CapExceeded {
            total: format!("2^{k}"),
            cap,
        });
    }
    let mut out: Vec<Vec<u8>> = (0u64..1 << k)
        .map(|bits| {
            let mut root_value = forced.clone();
            for (slot, &r) in free.iter().enumerate() {
                root_value.insert(r, ((bits >> slot) & 1) as u8);
            }
            resolved
                .iter()
                .map(|&(root, parity)| root_value[&root] ^ parity)
                .collect()
        })
        .collect();
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ConstraintKind::*;

    fn pair(kind: ConstraintKind) -> CspInstance {
        let mut csp = CspInstance::new(2);
        csp.set(0, 1, kind).unwrap();
        csp
    }

    fn bx(sides: &[i64]) -> BoxSpec<i64> {
        BoxSpec::from_sides(sides).unwrap()
    }

    fn pt(c: &[i64]) -> LatticePoint<i64> {
        LatticePoint::new(c.to_vec())
    }

    #[test]
    fn build_examples() {
        assert_eq!(build_csp(&bx(&[2, 6]), &pt(&[1, 3])).get(0, 1), RequireUnequal);
        assert_eq!(build_csp(&bx(&[2, 6]), &pt(&[2, 2])).get(0, 1), Free);
        assert_eq!(build_csp(&bx(&[4, 3]), &pt(&[1, 2])).get(0, 1), Impossible);
        assert_eq!(build_csp(&bx(&[4, 6]), &pt(&[1, 1])).get(0, 1), RequireEqual);
    }

    #[test]
    fn count_examples() {
        let c = count_assignments(&pair(RequireUnequal));
        assert_eq!((c.satisfiable, c.component_count, c.total()), (true, 1, Some(2)));
        assert_eq!(count_assignments(&pair(Impossible)).total(), Some(0));
        let c = count_assignments(&CspInstance::new(3));
        assert_eq!((c.component_count, c.total()), (3, Some(8)));
    }

    #[test]
    fn odd_cycle_of_inequalities_is_unsatisfiable() {
        let mut csp = CspInstance::new(3);
        csp.set(0, 1, RequireUnequal).unwrap();
        csp.set(1, 2, RequireUnequal).unwrap();
        csp.set(0, 2, RequireUnequal).unwrap();
        assert_eq!(count_assignments(&csp).total(), Some(0));
        csp.set(0, 2, RequireEqual).unwrap();
        assert_eq!(count_assignments(&csp).total(), Some(2));
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(
            enumerate_assignments(&pair(RequireUnequal), 16).unwrap(),
            vec![vec![0, 1], vec![1, 0]]
        );
        assert_eq!(
            enumerate_assignments(&CspInstance::new(1), 16).unwrap(),
            vec![vec![0], vec![1]]
        );
        assert_eq!(
            enumerate_assignments(&pair(RequireEqual), 16).unwrap(),
            vec![vec![0, 0], vec![1, 1]]
        );
        assert!(enumerate_assignments(&pair(Impossible), 16).unwrap().is_empty());
    }

    #[test]
    fn enumerate_respects_cap() {
        let csp = CspInstance::new(5);
        assert_eq!(enumerate_assignments(&csp, 32).unwrap().len(), 32);
        assert!(matches!(
            enumerate_assignments(&csp, 31),
            Err(CspError::CapExceeded { .. })
        ));
    }

    #[test]
    fn pinned_enumeration() {
        let mut csp = CspInstance::new(3);
        csp.set(0, 1, RequireUnequal).unwrap();
        assert_eq!(
            enumerate_pinned(&csp, &[1], 16).unwrap(),
            vec![vec![1, 0, 0], vec![1, 0, 1]]
        );
        assert_eq!(enumerate_pinned(&csp, &[0, 1], 16).unwrap(), Vec::<Vec<u8>>::new());
        assert_eq!(enumerate_pinned(&csp, &[0, 2], 16).unwrap(), vec![vec![0, 1, 0]]);
    }

    #[test]
    fn set_rejects_bad_index() {
        let mut csp = CspInstance::new(2);
        assert_eq!(
            csp.set(0, 2, RequireEqual),
            Err(CspError::IndexOutOfRange { index: 2, n: 2 })
        );
    }

    #[test]
    fn forbidden_pair_semantics() {
        assert!(Free.allows(0, 1) && Free.allows(1, 1));
        assert!(RequireEqual.allows(1, 1) && !RequireEqual.allows(0, 1));
        assert!(RequireUnequal.allows(1, 0) && !RequireUnequal.allows(0, 0));
        assert!((0..2).all(|a| (0..2).all(|b| !Impossible.allows(a, b))));
    }

    #[test]
    fn unsatisfiable_count_still_reports_components() {
        let mut csp = CspInstance::new(4);
        csp.set(0, 1, Impossible).unwrap();
        let c = count_assignments(&csp);
        assert!(!c.satisfiable);
        assert_eq!(c.component_count, 3);
    }
}
