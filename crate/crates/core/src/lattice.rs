//! Finite poset and lattice toolkit: closures, meets and joins, distributivity
//! testing, join irreducibles, order ideals, Birkhoff reconstruction,
//! transitive reduction and order-isomorphism checking.
//!
//! Witnesses are always the lexicographically first failure, so diagnostics
//! are reproducible.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// A finite poset as a reflexive-transitive boolean order table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset {
    size: usize,
    leq: Vec<bool>,
}

impl FinitePoset {
    /// Reflexive-transitive closure of an acyclic cover relation.
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<Self> {
        let mut leq = vec![false; n * n];
        for k in 0..n {
            leq[k * n + k] = true;
        }
        for &(a, b) in covers {
            assert!(a < n && b < n, "cover edge out of range");
            leq[a * n + b] = true;
        }
        // Floyd-Warshall style closure
        for m in 0..n {
            for a in 0..n {
                if leq[a * n + m] {
                    for b in 0..n {
                        if leq[m * n + b] {
                            leq[a * n + b] = true;
                        }
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if a != b && leq[a * n + b] && leq[b * n + a] {
                    return Err(Error::CycleDetected);
                }
            }
        }
        Ok(FinitePoset { size: n, leq })
    }

    /// Wraps an existing order table; must be reflexive, antisymmetric and
    /// transitive.
    pub fn from_leq(size: usize, leq: Vec<bool>) -> Result<Self> {
        assert_eq!(leq.len(), size * size);
        let p = FinitePoset { size, leq };
        for a in 0..size {
            if !p.leq(a, a) {
                return Err(Error::TheoremViolation(format!("order not reflexive at {a}")));
            }
            for b in 0..size {
                if a != b && p.leq(a, b) && p.leq(b, a) {
                    return Err(Error::CycleDetected);
                }
                for c in 0..size {
                    if p.leq(a, b) && p.leq(b, c) && !p.leq(a, c) {
                        return Err(Error::TheoremViolation(format!(
                            "order not transitive at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(p)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.size + b]
    }

    /// Cover relation: leq minus reflexivity and transitivity.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.size;
        let mut out = Vec::new();
        for a in 0..n {
            'next: for b in 0..n {
                if a == b || !self.leq(a, b) {
                    continue;
                }
                for c in 0..n {
                    if c != a && c != b && self.leq(a, c) && self.leq(c, b) {
                        continue 'next;
                    }
                }
                out.push((a, b));
            }
        }
        out
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.size)
            .filter(|&a| (0..self.size).all(|b| b == a || !self.leq(b, a)))
            .collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.size)
            .filter(|&a| (0..self.size).all(|b| b == a || !self.leq(a, b)))
            .collect()
    }

    /// The induced subposet on `elements` (in the given order).
    pub fn restrict(&self, elements: &[usize]) -> FinitePoset {
        let m = elements.len();
        let mut leq = vec![false; m * m];
        for (a, &ea) in elements.iter().enumerate() {
            for (b, &eb) in elements.iter().enumerate() {
                leq[a * m + b] = self.leq(ea, eb);
            }
        }
        FinitePoset { size: m, leq }
    }
}

/// A join irreducible element together with its descent (unique lower cover).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JoinIrreducible {
    pub element: usize,
    pub descent: usize,
}

/// A finite lattice: a poset with total meet and join tables.
#[derive(Debug, Clone)]
pub struct FiniteLattice {
    pub poset: FinitePoset,
    meet: Vec<usize>,
    join: Vec<usize>,
}

impl FiniteLattice {
    /// Fills the meet/join tables, failing on the first pair without a glb or
    /// lub.
    pub fn from_poset(poset: FinitePoset) -> Result<Self> {
        let n = poset.size();
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let lower: Vec<usize> = (0..n)
                    .filter(|&c| poset.leq(c, a) && poset.leq(c, b))
                    .collect();
                let glb = lower
                    .iter()
                    .copied()
                    .find(|&c| lower.iter().all(|&x| poset.leq(x, c)));
                let upper: Vec<usize> = (0..n)
                    .filter(|&c| poset.leq(a, c) && poset.leq(b, c))
                    .collect();
                let lub = upper
                    .iter()
                    .copied()
                    .find(|&c| upper.iter().all(|&x| poset.leq(c, x)));
                match (glb, lub) {
                    (Some(m), Some(j)) => {
                        meet[a * n + b] = m;
                        join[a * n + b] = j;
                    }
                    (None, _) => return Err(Error::NotALattice { a, b, kind: "meet" }),
                    (_, None) => return Err(Error::NotALattice { a, b, kind: "join" }),
                }
            }
        }
        Ok(FiniteLattice { poset, meet, join })
    }

    pub fn size(&self) -> usize {
        self.poset.size()
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size() + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size() + b]
    }

    pub fn minimum(&self) -> usize {
        self.poset.minimal_elements()[0]
    }

    pub fn maximum(&self) -> usize {
        self.poset.maximal_elements()[0]
    }

    /// First triple violating a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c), if any.
    pub fn distributivity_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.size();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.meet(a, self.join(b, c)) != self.join(self.meet(a, b), self.meet(a, c))
                    {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// First triple violating the dual law a ∨ (b ∧ c) = (a ∨ b) ∧ (a ∨ c).
    pub fn dual_distributivity_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.size();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.join(a, self.meet(b, c)) != self.meet(self.join(a, b), self.join(a, c))
                    {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn is_distributive(&self) -> bool {
        self.distributivity_witness().is_none()
    }

    /// Elements with exactly one lower cover, paired with that cover.
    pub fn join_irreducibles(&self) -> Vec<JoinIrreducible> {
        let covers = self.poset.covers();
        let mut below: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (lo, hi) in covers {
            below.entry(hi).or_default().push(lo);
        }
        (0..self.size())
            .filter_map(|e| match below.get(&e) {
                Some(los) if los.len() == 1 => Some(JoinIrreducible {
                    element: e,
                    descent: los[0],
                }),
                _ => None,
            })
            .collect()
    }

    /// DOT export of the Hasse diagram.
    pub fn to_dot(&self, labels: Option<&[String]>) -> String {
        let mut s = String::from("digraph hasse {\n  rankdir=BT;\n");
        for k in 0..self.size() {
            match labels {
                Some(ls) => s.push_str(&format!("  {k} [label=\"{}\"];\n", ls[k])),
                None => s.push_str(&format!("  {k};\n")),
            }
        }
        for (lo, hi) in self.poset.covers() {
            s.push_str(&format!("  {lo} -> {hi};\n"));
        }
        s.push_str("}\n");
        s
    }
}

/// The family of order ideals (downward-closed subsets) of a poset.
#[derive(Debug, Clone)]
pub struct IdealFamily {
    pub base_size: usize,
    /// Sorted element lists, in canonical (lexicographic) order.
    pub ideals: Vec<Vec<usize>>,
}

/// Enumerates all order ideals, growing ideals one minimal-available element
/// at a time from the empty set.
pub fn order_ideals(p: &FinitePoset, limit: usize) -> Result<IdealFamily> {
    let n = p.size();
    let mut seen: Vec<Vec<usize>> = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    while let Some(ideal) = frontier.pop() {
        let member = |s: &[usize], x: usize| s.binary_search(&x).is_ok();
        for x in 0..n {
            if member(&ideal, x) {
                continue;
            }
            // x addable iff every strict predecessor is in the ideal
            if (0..n).all(|y| y == x || !p.leq(y, x) || member(&ideal, y)) {
                let mut next = ideal.clone();
                let pos = next.binary_search(&x).unwrap_err();
                next.insert(pos, x);
                if seen.binary_search(&next).is_err() {
                    if seen.len() == limit {
                        return Err(Error::LimitExceeded {
                            what: "order ideal",
                            limit,
                            lower_bound: limit + 1,
                        });
                    }
                    let pos = seen.binary_search(&next).unwrap_err();
                    seen.insert(pos, next.clone());
                    frontier.push(next);
                }
            }
        }
    }
    Ok(IdealFamily {
        base_size: n,
        ideals: seen,
    })
}

/// The lattice of order ideals under inclusion; meet is intersection and join
/// is union, and distributivity always holds (asserted).
pub fn ideal_lattice(f: &IdealFamily) -> Result<FiniteLattice> {
    let n = f.ideals.len();
    let mut leq = vec![false; n * n];
    for (a, ia) in f.ideals.iter().enumerate() {
        for (b, ib) in f.ideals.iter().enumerate() {
            leq[a * n + b] = ia.iter().all(|x| ib.binary_search(x).is_ok());
        }
    }
    let lat = FiniteLattice::from_poset(FinitePoset { size: n, leq })?;
    // meet/join really are intersection/union
    let index: BTreeMap<&Vec<usize>, usize> =
        f.ideals.iter().enumerate().map(|(k, i)| (i, k)).collect();
    for a in 0..n {
        for b in 0..n {
            let inter: Vec<usize> = f.ideals[a]
                .iter()
                .copied()
                .filter(|x| f.ideals[b].binary_search(x).is_ok())
                .collect();
            let mut uni = f.ideals[a].clone();
            for &x in &f.ideals[b] {
                if let Err(pos) = uni.binary_search(&x) {
                    uni.insert(pos, x);
                }
            }
            let (Some(&im), Some(&ij)) = (index.get(&inter), index.get(&uni)) else {
                return Err(Error::TheoremViolation(
                    "ideal family is not closed under union/intersection".into(),
                ));
            };
            if lat.meet(a, b) != im || lat.join(a, b) != ij {
                return Err(Error::TheoremViolation(
                    "ideal lattice meet/join differ from intersection/union".into(),
                ));
            }
        }
    }
    debug_assert!(lat.is_distributive());
    Ok(lat)
}

/// A directed multigraph on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Digraph {
    fn reachable(&self, skip: Option<usize>) -> Vec<bool> {
        // closure over all edges except the skipped instance
        let n = self.n;
        let mut reach = vec![false; n * n];
        for (k, &(u, v)) in self.edges.iter().enumerate() {
            if Some(k) != skip {
                reach[u * n + v] = true;
            }
        }
        for m in 0..n {
            for a in 0..n {
                if reach[a * n + m] {
                    for b in 0..n {
                        if reach[m * n + b] {
                            reach[a * n + b] = true;
                        }
                    }
                }
            }
        }
        reach
    }

    pub fn is_acyclic(&self) -> bool {
        let reach = self.reachable(None);
        (0..self.n).all(|v| !reach[v * self.n + v])
    }
}

/// Removes every arrow that has a distinct parallel walk (same source and
/// target); the result is the unique minimal DAG with the same reachability.
pub fn transitive_reduction(g: &Digraph) -> Result<Digraph> {
    if !g.is_acyclic() {
        return Err(Error::CycleDetected);
    }
    let n = g.n;
    let keep: Vec<(usize, usize)> = g
        .edges
        .iter()
        .enumerate()
        .filter(|&(k, &(u, v))| !g.reachable(Some(k))[u * n + v])
        .map(|(_, &e)| e)
        .collect();
    Ok(Digraph { n, edges: keep })
}

/// Checks that `f` (a bijection given as `p`-index -> `q`-index) is an order
/// isomorphism; returns the first violating pair otherwise.
pub fn check_order_iso(
    p: &FinitePoset,
    q: &FinitePoset,
    f: &[usize],
) -> Result<Option<(usize, usize)>> {
    if p.size() != q.size() || f.len() != p.size() {
        return Err(Error::NotABijection);
    }
    let mut hit = vec![false; q.size()];
    for &y in f {
        if y >= q.size() || hit[y] {
            return Err(Error::NotABijection);
        }
        hit[y] = true;
    }
    for a in 0..p.size() {
        for b in 0..p.size() {
            if p.leq(a, b) != q.leq(f[a], f[b]) {
                return Ok(Some((a, b)));
            }
        }
    }
    Ok(None)
}
