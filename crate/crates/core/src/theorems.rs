//! Executable checks for every structural theorem, reporting pass/fail with a
//! witness. All checks use the canonical bijections (the dimension-vector map,
//! the basis labeling of irreducibles, the Birkhoff map) rather than generic
//! isomorphism search, so witnesses stay meaningful.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use crate::diagram::{LinkDiagram, Segment};
use crate::error::Result;
use crate::irrstates::{construct_irreducible_state, level_partition, verify_level_patterns};
use crate::lattice::{
    check_order_iso, ideal_lattice, order_ideals, transitive_reduction, FiniteLattice,
};
use crate::pipeline::Analysis;
use crate::rep::BasisVertex;
use crate::states::DimVector;

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct SegmentChecks {
    pub segment: Segment,
    pub results: Vec<CheckResult>,
}

/// Results of the whole suite over one or more segments.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub segments: Vec<SegmentChecks>,
    pub overall: bool,
}

fn run_check(name: &'static str, body: impl FnOnce() -> Option<String>) -> CheckResult {
    let start = Instant::now();
    let witness = body();
    CheckResult {
        name,
        passed: witness.is_none(),
        witness,
        elapsed: start.elapsed(),
    }
}

/// The state lattice is isomorphic to the submodule lattice via the
/// dimension-vector map, cover labels matching coordinate increments.
pub fn check_state_module_iso(a: &Analysis) -> CheckResult {
    run_check("state_module_iso", || {
        let subs = match a.rep.submodule_lattice(usize::MAX) {
            Ok(s) => s,
            Err(e) => return Some(e.to_string()),
        };
        if subs.vectors.len() != a.lattice.len() {
            return Some(format!(
                "{} states but {} submodules",
                a.lattice.len(),
                subs.vectors.len()
            ));
        }
        // e(.) must be a bijection onto the feasible vectors
        let mut map = Vec::with_capacity(a.lattice.len());
        let mut hit = vec![false; subs.vectors.len()];
        for (k, e) in a.state_dims.iter().enumerate() {
            match subs.vectors.binary_search(e) {
                Ok(ix) if !hit[ix] => {
                    hit[ix] = true;
                    map.push(ix);
                }
                Ok(_) => return Some(format!("two states share the dimension vector of state {k}")),
                Err(_) => return Some(format!("state {k} maps outside the feasible set")),
            }
        }
        match check_order_iso(&a.lattice.order, &subs.lattice.poset, &map) {
            Ok(None) => {}
            Ok(Some((x, y))) => return Some(format!("order mismatch at states ({x},{y})")),
            Err(e) => return Some(e.to_string()),
        }
        // cover labels are +1 steps in the labeled coordinate
        for c in &a.lattice.covers {
            let lo = &a.state_dims[c.lower];
            let hi = &a.state_dims[c.upper];
            let mut expect = lo.clone();
            expect.bump(c.label);
            if *hi != expect {
                return Some(format!(
                    "cover {}->{} labeled {} is not a unit step",
                    c.lower, c.upper, c.label
                ));
            }
        }
        None
    })
}

/// The state poset is a distributive lattice (meets/joins exist; the
/// distributive law and its dual hold over all triples).
pub fn check_distributivity(a: &Analysis) -> CheckResult {
    run_check("distributivity", || {
        let lat = match FiniteLattice::from_poset(a.lattice.order.clone()) {
            Ok(l) => l,
            Err(e) => return Some(e.to_string()),
        };
        if let Some((x, y, z)) = lat.distributivity_witness() {
            return Some(format!("distributive law fails at ({x},{y},{z})"));
        }
        if let Some((x, y, z)) = lat.dual_distributivity_witness() {
            return Some(format!("dual distributive law fails at ({x},{y},{z})"));
        }
        None
    })
}

/// The join irreducibles of the lattice are exactly the submodules M(j,k),
/// with descents labeled j and the M(j,.) chains nested.
pub fn check_irreducible_correspondence(a: &Analysis) -> CheckResult {
    run_check("irreducible_correspondence", || {
        let lat = match FiniteLattice::from_poset(a.lattice.order.clone()) {
            Ok(l) => l,
            Err(e) => return Some(e.to_string()),
        };
        let irr = lat.join_irreducibles();
        let mut expected: BTreeMap<DimVector, BasisVertex> = BTreeMap::new();
        for (j, dj) in a.rep.dims.iter() {
            let mut prev: Option<DimVector> = None;
            for k in 1..=dj {
                let m = match a.rep.generate_mjk(j, k) {
                    Ok(m) => m,
                    Err(e) => return Some(e.to_string()),
                };
                if m.get(j) != k {
                    return Some(format!("M({j},{k}) has coordinate {} at {j}", m.get(j)));
                }
                if let Some(p) = &prev {
                    if !p.leq(&m) {
                        return Some(format!("M({j},{k}) does not contain M({j},{})", k - 1));
                    }
                }
                prev = Some(m.clone());
                expected.insert(m, BasisVertex { segment: j, index: k });
            }
        }
        if irr.len() != expected.len() {
            return Some(format!(
                "{} join irreducibles but {} modules M(j,k)",
                irr.len(),
                expected.len()
            ));
        }
        for ji in &irr {
            let e = &a.state_dims[ji.element];
            let Some(b) = expected.get(e) else {
                return Some(format!(
                    "irreducible state {} is not of the form M(j,k)",
                    ji.element
                ));
            };
            // the descent must be labeled j and drop coordinate j by one
            let lo = &a.state_dims[ji.descent];
            let mut expect = lo.clone();
            expect.bump(b.segment);
            if *e != expect {
                return Some(format!(
                    "descent of M({},{}) is not a unit drop in {}",
                    b.segment, b.index, b.segment
                ));
            }
            let label = a
                .lattice
                .covers
                .iter()
                .find(|c| c.lower == ji.descent && c.upper == ji.element)
                .map(|c| c.label);
            if label != Some(b.segment) {
                return Some(format!(
                    "descent label of M({},{}) is {:?}",
                    b.segment, b.index, label
                ));
            }
        }
        None
    })
}

/// The constructed states S(j,k) realize the modules M(j,k): the level map
/// passes the local pattern checks and equals dim M(j,k), and the state's
/// dimension vector is M(j,k).
pub fn check_sjk_equals_mjk(a: &Analysis) -> CheckResult {
    run_check("sjk_equals_mjk", || {
        let min = a.lattice.min_state().clone();
        let index: BTreeMap<_, usize> = a
            .lattice
            .states
            .iter()
            .enumerate()
            .map(|(k, s)| (s.clone(), k))
            .collect();
        for (j, dj) in a.rep.dims.iter() {
            for k in 1..=dj {
                let lv = match level_partition(&a.diagram, &min, dj, j, k) {
                    Ok(lv) => lv,
                    Err(e) => return Some(e.to_string()),
                };
                let (ok, wit) = verify_level_patterns(&a.diagram, &min, &lv);
                if !ok {
                    return Some(format!(
                        "level patterns fail for ({j},{k}) at crossings {wit:?}"
                    ));
                }
                let m = match a.rep.generate_mjk(j, k) {
                    Ok(m) => m,
                    Err(e) => return Some(e.to_string()),
                };
                // the level map is the dimension vector of M(j,k)
                for (s, lvl) in lv.iter() {
                    if lvl != m.get(s) {
                        return Some(format!(
                            "level of {s} for ({j},{k}) is {lvl}, dim M = {}",
                            m.get(s)
                        ));
                    }
                }
                let state = match construct_irreducible_state(
                    &a.diagram, &a.regions, a.segment, &min, &lv,
                ) {
                    Ok(s) => s,
                    Err(e) => return Some(e.to_string()),
                };
                let Some(&ix) = index.get(&state) else {
                    return Some(format!("S({j},{k}) is not an enumerated state"));
                };
                if a.state_dims[ix] != m {
                    return Some(format!("e(S({j},{k})) differs from dim M({j},{k})"));
                }
            }
        }
        None
    })
}

/// The transitive reduction of the coefficient quiver is arrow-isomorphic to
/// the Hasse quiver of the join-irreducible subposet under M(j,k) -> b_{j,k},
/// and the reachability order of the coefficient quiver is the Irr(i) order.
pub fn check_coefficient_quiver_theorem(a: &Analysis) -> CheckResult {
    run_check("coefficient_quiver", || {
        let cq = match a.rep.coefficient_quiver() {
            Ok(c) => c,
            Err(e) => return Some(e.to_string()),
        };
        let lat = match FiniteLattice::from_poset(a.lattice.order.clone()) {
            Ok(l) => l,
            Err(e) => return Some(e.to_string()),
        };
        let irr = lat.join_irreducibles();
        // identify each irreducible with its (j,k)
        let mut verts = Vec::new();
        for ji in &irr {
            let e = &a.state_dims[ji.element];
            // unique descent labeled j; k = e_j
            let Some(c) = a
                .lattice
                .covers
                .iter()
                .find(|c| c.lower == ji.descent && c.upper == ji.element)
            else {
                return Some(format!("irreducible {} has no labeled descent", ji.element));
            };
            verts.push(BasisVertex {
                segment: c.label,
                index: e.get(c.label),
            });
        }
        if cq.vertices.len() != verts.len() {
            return Some(format!(
                "coefficient quiver has {} vertices, Irr has {}",
                cq.vertices.len(),
                verts.len()
            ));
        }
        let elements: Vec<usize> = irr.iter().map(|ji| ji.element).collect();
        let sub = a.lattice.order.restrict(&elements);
        // Hasse arrows of Irr, oriented toward the smaller element, as basis pairs
        let mut hasse: BTreeSet<(BasisVertex, BasisVertex)> = BTreeSet::new();
        for (lo, hi) in sub.covers() {
            hasse.insert((verts[hi], verts[lo]));
        }
        let reduced = match transitive_reduction(&cq.to_digraph()) {
            Ok(r) => r,
            Err(e) => return Some(e.to_string()),
        };
        let reduced_arrows: BTreeSet<(BasisVertex, BasisVertex)> = reduced
            .edges
            .iter()
            .map(|&(u, v)| (cq.vertices[u], cq.vertices[v]))
            .collect();
        if reduced_arrows != hasse {
            let missing: Vec<_> = hasse.difference(&reduced_arrows).collect();
            let extra: Vec<_> = reduced_arrows.difference(&hasse).collect();
            return Some(format!(
                "reduced coefficient quiver differs from the Hasse quiver: missing {missing:?}, extra {extra:?}"
            ));
        }
        // reachability order of the coefficient quiver equals the Irr order:
        // (j,k) reaches (j',t) iff dim M(j,k) at j' is >= t
        let dg = cq.to_digraph();
        let n = dg.n;
        let mut reach = vec![false; n * n];
        for &(u, v) in &dg.edges {
            reach[u * n + v] = true;
        }
        for m in 0..n {
            for x in 0..n {
                if reach[x * n + m] {
                    for y in 0..n {
                        if reach[m * n + y] {
                            reach[x * n + y] = true;
                        }
                    }
                }
            }
        }
        for (x, &bx) in cq.vertices.iter().enumerate() {
            let m = match a.rep.generate_mjk(bx.segment, bx.index) {
                Ok(m) => m,
                Err(e) => return Some(e.to_string()),
            };
            for (y, &by) in cq.vertices.iter().enumerate() {
                let reaches = x == y || reach[x * n + y];
                let below = m.get(by.segment) >= by.index;
                if reaches != below {
                    return Some(format!(
                        "reachability {bx}->{by} is {reaches}, order says {below}"
                    ));
                }
            }
        }
        None
    })
}

/// Birkhoff: the canonical map a -> {irreducible c : c <= a} is an order
/// isomorphism onto the lattice of order ideals of the irreducible subposet.
pub fn check_birkhoff(a: &Analysis) -> CheckResult {
    run_check("birkhoff", || {
        let lat = match FiniteLattice::from_poset(a.lattice.order.clone()) {
            Ok(l) => l,
            Err(e) => return Some(e.to_string()),
        };
        let irr: Vec<usize> = lat.join_irreducibles().iter().map(|j| j.element).collect();
        let sub = lat.poset.restrict(&irr);
        let fam = match order_ideals(&sub, usize::MAX) {
            Ok(f) => f,
            Err(e) => return Some(e.to_string()),
        };
        if fam.ideals.len() != lat.size() {
            return Some(format!(
                "{} ideals of Irr but {} lattice elements",
                fam.ideals.len(),
                lat.size()
            ));
        }
        let il = match ideal_lattice(&fam) {
            Ok(l) => l,
            Err(e) => return Some(e.to_string()),
        };
        let map: Option<Vec<usize>> = (0..lat.size())
            .map(|x| {
                let set: Vec<usize> = irr
                    .iter()
                    .enumerate()
                    .filter(|&(_, &c)| lat.poset.leq(c, x))
                    .map(|(k, _)| k)
                    .collect();
                fam.ideals.binary_search(&set).ok()
            })
            .collect();
        let Some(map) = map else {
            return Some("some principal filter of irreducibles is not an ideal".into());
        };
        match check_order_iso(&lat.poset, &il.poset, &map) {
            Ok(None) => None,
            Ok(Some((x, y))) => Some(format!("Birkhoff map breaks order at ({x},{y})")),
            Err(e) => Some(e.to_string()),
        }
    })
}

/// Runs the six checks for one already-built analysis.
pub fn run_segment_checks(a: &Analysis) -> Vec<CheckResult> {
    vec![
        check_state_module_iso(a),
        check_distributivity(a),
        check_irreducible_correspondence(a),
        check_sjk_equals_mjk(a),
        check_coefficient_quiver_theorem(a),
        check_birkhoff(a),
    ]
}

/// Which segments of the diagram to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentSelector {
    One(Segment),
    All,
}

/// Runs every check for each requested segment; deterministic report order.
pub fn run_all(d: &LinkDiagram, selector: SegmentSelector, limit: usize) -> Result<CheckReport> {
    let segments: Vec<Segment> = match selector {
        SegmentSelector::One(j) => vec![j],
        SegmentSelector::All => d.segments().to_vec(),
    };
    let mut out = Vec::with_capacity(segments.len());
    for i in segments {
        let a = Analysis::build(d, i, limit)?;
        out.push(SegmentChecks {
            segment: i,
            results: run_segment_checks(&a),
        });
    }
    let overall = out
        .iter()
        .all(|s| s.results.iter().all(|c| c.passed));
    Ok(CheckReport {
        segments: out,
        overall,
    })
}
