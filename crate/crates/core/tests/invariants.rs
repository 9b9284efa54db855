//! Cross-fixture invariants and randomized properties: Euler counts, oracle
//! equivalence of the two submodule enumerations, maximal-chain label
//! multisets, closure monotonicity, and the generic lattice laws on random
//! posets and rotation systems.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::PathBuf;

use proptest::prelude::*;

use kstates::diagram::{
    clockwise_between, parse_diagram, trace_regions, validate, Corner, CrossingRecord,
    LinkDiagram, Segment,
};
use kstates::lattice::{
    check_order_iso, ideal_lattice, order_ideals, transitive_reduction, Digraph, FiniteLattice,
    FinitePoset,
};
use kstates::pipeline::Analysis;
use kstates::states::state_is_valid;

const FIXTURES: [&str; 5] = [
    "hopf.json",
    "trefoil.json",
    "figure8.json",
    "paperlink7.json",
    "paperlink5.json",
];

fn fixture(name: &str) -> LinkDiagram {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../fixtures/{name}"));
    parse_diagram(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn euler_oracle_on_every_fixture() {
    for name in FIXTURES {
        let d = fixture(name);
        let n = d.crossing_count();
        assert_eq!(d.segments().len(), 2 * n, "{name}");
        let r = trace_regions(&d).unwrap();
        assert_eq!(r.region_count(), n + 2, "{name}");
        let covered: usize = (0..r.region_count() as u32)
            .map(|rid| r.region_corners(rid).len())
            .sum();
        assert_eq!(covered, 4 * n, "{name}: corners exactly covered");
        assert!(validate(&d).ok, "{name}");
    }
}

#[test]
fn submodule_oracles_agree_everywhere() {
    for name in FIXTURES {
        let d = fixture(name);
        for &i in d.segments() {
            let a = Analysis::build(&d, i, 1 << 20).unwrap();
            let ineq = a.rep.enumerate_submodules(1 << 20).unwrap();
            let mat = a.rep.matrix_oracle_submodules(1 << 20).unwrap();
            assert_eq!(ineq, mat, "{name} segment {i}");
            assert_eq!(ineq.len(), a.lattice.len(), "{name} segment {i}");
        }
    }
}

#[test]
fn every_enumerated_state_is_valid() {
    for name in FIXTURES {
        let d = fixture(name);
        for &i in d.segments() {
            let a = Analysis::build(&d, i, 1 << 20).unwrap();
            for s in &a.lattice.states {
                assert!(state_is_valid(&d, &a.regions, i, s).unwrap());
            }
        }
    }
}

/// All maximal chains of each fixture lattice have the same length and label
/// multiset (checked exhaustively; the largest fixture has 24 states).
#[test]
fn maximal_chains_have_equal_label_multisets() {
    for name in FIXTURES {
        let d = fixture(name);
        for &i in d.segments() {
            let a = Analysis::build(&d, i, 1 << 20).unwrap();
            let mut adj: BTreeMap<usize, Vec<(usize, Segment)>> = BTreeMap::new();
            for c in &a.lattice.covers {
                adj.entry(c.lower).or_default().push((c.upper, c.label));
            }
            let mut chains: Vec<BTreeMap<Segment, usize>> = Vec::new();
            let mut stack = vec![(a.lattice.min_index, BTreeMap::new())];
            while let Some((v, labels)) = stack.pop() {
                match adj.get(&v) {
                    None => {
                        assert_eq!(v, a.lattice.max_index);
                        chains.push(labels);
                    }
                    Some(next) => {
                        for &(w, j) in next {
                            let mut l2 = labels.clone();
                            *l2.entry(j).or_insert(0) += 1;
                            stack.push((w, l2));
                        }
                    }
                }
            }
            assert!(!chains.is_empty());
            for c in &chains {
                assert_eq!(c, &chains[0], "{name} segment {i}");
            }
        }
    }
}

#[test]
fn sjk_family_matches_join_irreducibles_everywhere() {
    use kstates::irrstates::{construct_irreducible_state, level_partition};
    for name in FIXTURES {
        let d = fixture(name);
        for &i in d.segments() {
            let a = Analysis::build(&d, i, 1 << 20).unwrap();
            let lat = FiniteLattice::from_poset(a.lattice.order.clone()).unwrap();
            let irr: BTreeSet<usize> = lat.join_irreducibles().iter().map(|j| j.element).collect();
            let min = a.lattice.min_state().clone();
            let mut constructed = BTreeSet::new();
            for (j, dj) in a.rep.dims.iter() {
                let mut prev: Option<usize> = None;
                for k in 1..=dj {
                    let lv = level_partition(&d, &min, dj, j, k).unwrap();
                    let s =
                        construct_irreducible_state(&d, &a.regions, i, &min, &lv).unwrap();
                    let ix = a.lattice.states.iter().position(|x| *x == s).unwrap();
                    // S(j,1) < S(j,2) < ... in the state order
                    if let Some(p) = prev {
                        assert!(a.lattice.order.leq(p, ix) && p != ix, "{name} i={i} j={j}");
                    }
                    prev = Some(ix);
                    constructed.insert(ix);
                }
            }
            assert_eq!(constructed, irr, "{name} segment {i}");
        }
    }
}

/// For every cover M(j,k) <. M(j',k') of the irreducible subposet there is a
/// quiver arrow j' -> j, and k' = k + 1 exactly when that arrow carries the
/// minimal-state marker flag.
#[test]
fn covering_relation_matches_arrow_flags() {
    for name in FIXTURES {
        let d = fixture(name);
        for &i in d.segments() {
            let a = Analysis::build(&d, i, 1 << 20).unwrap();
            let lat = FiniteLattice::from_poset(a.lattice.order.clone()).unwrap();
            let irr = lat.join_irreducibles();
            // identify each irreducible element with its (j,k)
            let labels: Vec<(Segment, u32)> = irr
                .iter()
                .map(|ji| {
                    let c = a
                        .lattice
                        .covers
                        .iter()
                        .find(|c| c.lower == ji.descent && c.upper == ji.element)
                        .unwrap();
                    (c.label, a.state_dims[ji.element].get(c.label))
                })
                .collect();
            let elements: Vec<usize> = irr.iter().map(|ji| ji.element).collect();
            let sub = a.lattice.order.restrict(&elements);
            for (lo, hi) in sub.covers() {
                let (j, k) = labels[lo];
                let (j2, k2) = labels[hi];
                let arrows: Vec<_> = a
                    .rep
                    .quiver
                    .arrows
                    .iter()
                    .filter(|ar| ar.source == j2 && ar.target == j)
                    .collect();
                assert!(
                    !arrows.is_empty(),
                    "{name} i={i}: cover M({j},{k}) < M({j2},{k2}) without arrow {j2}->{j}"
                );
                assert!(k2 == k || k2 == k + 1, "{name} i={i}");
                assert!(
                    arrows.iter().any(|ar| ar.marker_flag as u32 == k2 - k),
                    "{name} i={i}: M({j},{k}) < M({j2},{k2}) with flags {:?}",
                    arrows.iter().map(|ar| ar.marker_flag).collect::<Vec<_>>()
                );
            }
        }
    }
}

/// A deterministic curl-free rotation system from a seed: 2n segments, each
/// placed at two darts of distinct crossings. Not necessarily planar, which is
/// fine for the properties below.
fn random_rotation_system(n: usize, seed: u64) -> LinkDiagram {
    let mut slots: Vec<(usize, u8)> = (0..n)
        .flat_map(|c| (0..4u8).map(move |p| (c, p)))
        .collect();
    let mut state = seed | 1;
    let mut rng = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    loop {
        for k in (1..slots.len()).rev() {
            let j = (rng() % (k as u64 + 1)) as usize;
            slots.swap(k, j);
        }
        let ok = slots
            .chunks(2)
            .all(|pair| pair[0].0 != pair[1].0);
        if !ok {
            continue;
        }
        let mut cw = vec![[Segment(0); 4]; n];
        for (seg, pair) in slots.chunks(2).enumerate() {
            for &(c, p) in pair {
                cw[c][p as usize] = Segment(seg as u32 + 1);
            }
        }
        let records = cw
            .into_iter()
            .enumerate()
            .map(|(c, cw)| CrossingRecord {
                id: format!("c{c}"),
                cw,
                over: None,
            })
            .collect();
        return LinkDiagram::new("random".into(), records).unwrap();
    }
}

proptest! {
    #[test]
    fn clockwise_between_bounds(n in 2usize..6, seed in any::<u64>(),
                                from in 0u8..4, stop in 0u8..4, cross in 0usize..6) {
        let d = random_rotation_system(n, seed);
        let x = cross % n;
        let got = clockwise_between(&d, x, from, Corner { crossing: x, index: stop });
        prop_assert!(got.len() <= 3);
        if stop == from {
            prop_assert!(got.is_empty());
        }
        let start = d.crossings()[x].segment_at(from);
        prop_assert!(!got.contains(&start));
    }

    #[test]
    fn validation_is_order_independent(n in 2usize..6, seed in any::<u64>(), rot in 0usize..6) {
        let d = random_rotation_system(n, seed);
        let mut crossings = d.crossings().to_vec();
        crossings.rotate_left(rot % n);
        let d2 = LinkDiagram::new("random".into(), crossings).unwrap();
        let (a, b) = (validate(&d), validate(&d2));
        prop_assert_eq!(a.ok, b.ok);
        prop_assert_eq!(a.primality, b.primality);
        let codes = |r: &kstates::diagram::ValidationReport| {
            let mut v: Vec<&str> = r.findings.iter().map(|f| f.code).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        prop_assert_eq!(codes(&a), codes(&b));
    }

    /// Random DAG: reduction preserves reachability and is idempotent.
    #[test]
    fn reduction_preserves_reachability(n in 1usize..8, mask in any::<u64>()) {
        let mut edges = Vec::new();
        let mut bit = 0;
        for u in 0..n {
            for v in (u + 1)..n {
                if mask >> (bit % 64) & 1 == 1 {
                    edges.push((u, v));
                }
                bit += 1;
            }
        }
        let g = Digraph { n, edges };
        let r = transitive_reduction(&g).unwrap();
        let reach = |g: &Digraph| -> Vec<bool> {
            let mut m = vec![false; n * n];
            for &(u, v) in &g.edges { m[u * n + v] = true; }
            for k in 0..n { for a in 0..n { if m[a * n + k] {
                for b in 0..n { if m[k * n + b] { m[a * n + b] = true; } } } } }
            m
        };
        prop_assert_eq!(reach(&g), reach(&r));
        let r2 = transitive_reduction(&r).unwrap();
        prop_assert_eq!(r2.edges, r.edges);
    }

    /// Random poset: the ideal family is closed under union and intersection,
    /// and the ideal lattice satisfies Birkhoff against its own irreducibles.
    #[test]
    fn ideals_closed_and_birkhoff(n in 1usize..7, mask in any::<u64>()) {
        let mut covers = Vec::new();
        let mut bit = 0;
        for u in 0..n {
            for v in (u + 1)..n {
                if mask >> (bit % 64) & 1 == 1 {
                    covers.push((u, v));
                }
                bit += 1;
            }
        }
        let p = FinitePoset::from_covers(n, &covers).unwrap();
        let fam = order_ideals(&p, 1 << 16).unwrap();
        let as_set = |v: &Vec<usize>| -> BTreeSet<usize> { v.iter().copied().collect() };
        let all: BTreeSet<Vec<usize>> = fam.ideals.iter().cloned().collect();
        for a in &fam.ideals {
            for b in &fam.ideals {
                let union: Vec<usize> = as_set(a).union(&as_set(b)).copied().collect();
                let inter: Vec<usize> = as_set(a).intersection(&as_set(b)).copied().collect();
                prop_assert!(all.contains(&union));
                prop_assert!(all.contains(&inter));
            }
        }
        let lat = ideal_lattice(&fam).unwrap();
        prop_assert!(lat.is_distributive());
        // Birkhoff round trip
        let irr: Vec<usize> = lat.join_irreducibles().iter().map(|j| j.element).collect();
        let sub = lat.poset.restrict(&irr);
        let fam2 = order_ideals(&sub, 1 << 16).unwrap();
        let il = ideal_lattice(&fam2).unwrap();
        let map: Vec<usize> = (0..lat.size())
            .map(|x| {
                let set: Vec<usize> = irr
                    .iter()
                    .enumerate()
                    .filter(|&(_, &c)| lat.poset.leq(c, x))
                    .map(|(k, _)| k)
                    .collect();
                fam2.ideals.binary_search(&set).unwrap()
            })
            .collect();
        prop_assert_eq!(check_order_iso(&lat.poset, &il.poset, &map).unwrap(), None);
    }
}
