//! The combinatorial construction of the join irreducible Kauffman states:
//! closure under successors, the level partition K(d), and the marker state
//! S(j,k), with the local level-pattern checks that guarantee validity.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::diagram::{clockwise_between, LinkDiagram, RegionMap, Segment};
use crate::error::{Error, Result};
use crate::states::{state_is_valid, KauffmanState};

/// A total level map segment -> 0..=k for one pair (j,k).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelAssignment {
    pub j: Segment,
    pub k: u32,
    level: BTreeMap<Segment, u32>,
}

impl LevelAssignment {
    pub fn level(&self, s: Segment) -> u32 {
        self.level.get(&s).copied().unwrap_or(0)
    }

    /// Segments at a given level, sorted.
    pub fn level_set(&self, d: u32) -> Vec<Segment> {
        self.level
            .iter()
            .filter(|(_, &lv)| lv == d)
            .map(|(&s, _)| s)
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Segment, u32)> + '_ {
        self.level.iter().map(|(&s, &lv)| (s, lv))
    }
}

/// The least superset of `s` inside `t` closed under successors: whenever a
/// member has an endpoint at a crossing, every segment of `t` lying clockwise
/// between it and the minimal-state marker there is also a member.
pub fn successor_closure(
    d: &LinkDiagram,
    min_state: &KauffmanState,
    s: &BTreeSet<Segment>,
    t: &BTreeSet<Segment>,
) -> BTreeSet<Segment> {
    debug_assert!(s.is_subset(t));
    let mut closed = s.clone();
    let mut work: Vec<Segment> = s.iter().copied().collect();
    while let Some(seg) = work.pop() {
        let (a, b) = d
            .segment_endpoints(seg)
            .expect("closure input segments belong to the diagram");
        for dart in [a, b] {
            let stop = min_state.marker(dart.crossing);
            for succ in clockwise_between(d, dart.crossing, dart.pos, stop) {
                if t.contains(&succ) && closed.insert(succ) {
                    work.push(succ);
                }
            }
        }
    }
    closed
}

/// The level partition for (j,k): K(k) is the closure of {j} in all segments;
/// going down, K(d) is the closure, among unassigned segments, of those
/// incident to K(d+1); K(0) is the remainder.
pub fn level_partition(
    d: &LinkDiagram,
    min_state: &KauffmanState,
    dims_j: u32,
    j: Segment,
    k: u32,
) -> Result<LevelAssignment> {
    if k < 1 || k > dims_j {
        return Err(Error::IndexOutOfRange {
            segment: j,
            k,
            max: dims_j,
        });
    }
    let all: BTreeSet<Segment> = d.segments().iter().copied().collect();
    if !all.contains(&j) {
        return Err(Error::UnknownSegment(j));
    }
    let mut level: BTreeMap<Segment, u32> = BTreeMap::new();
    let top = successor_closure(d, min_state, &BTreeSet::from([j]), &all);
    for &s in &top {
        level.insert(s, k);
    }
    for dd in (1..k).rev() {
        let rest: BTreeSet<Segment> = all
            .iter()
            .copied()
            .filter(|s| !level.contains_key(s))
            .collect();
        let upper: BTreeSet<Segment> = level
            .iter()
            .filter(|(_, &lv)| lv == dd + 1)
            .map(|(&s, _)| s)
            .collect();
        let seed: BTreeSet<Segment> = rest
            .iter()
            .copied()
            .filter(|&s| {
                let (a, b) = d.segment_endpoints(s).expect("segment of the diagram");
                [a, b].iter().any(|dart| {
                    (0..4u8).any(|p| upper.contains(&d.crossings()[dart.crossing].segment_at(p)))
                })
            })
            .collect();
        let closed = successor_closure(d, min_state, &seed, &rest);
        for s in closed {
            level.insert(s, dd);
        }
    }
    for &s in &all {
        level.entry(s).or_insert(0);
    }
    Ok(LevelAssignment { j, k, level })
}

/// Checks the admissible level patterns at every crossing: reading clockwise
/// from the corner after the minimal-state marker, the level vector is
/// constant or one of the three step patterns (d-1 repeated then d), and in
/// the non-uniform case the minimal marker sits at the unique corner where the
/// level decreases. Returns the offending crossings otherwise.
pub fn verify_level_patterns(
    d: &LinkDiagram,
    min_state: &KauffmanState,
    lv: &LevelAssignment,
) -> (bool, Vec<usize>) {
    let mut witnesses = Vec::new();
    for (ci, c) in d.crossings().iter().enumerate() {
        let m = min_state.marker(ci).index;
        let seq: Vec<u32> = (1..=4u8).map(|off| lv.level(c.segment_at(m + off))).collect();
        let uniform = seq.iter().all(|&x| x == seq[0]);
        let ok = if uniform {
            true
        } else {
            let top = *seq.iter().max().expect("nonempty");
            top >= 1
                && (1..4).any(|split| {
                    seq[..split].iter().all(|&x| x == top - 1)
                        && seq[split..].iter().all(|&x| x == top)
                })
        };
        if !ok {
            witnesses.push(ci);
            continue;
        }
        if !uniform {
            // the decrease corner (level drops clockwise) must be the marker
            let decreases: Vec<u8> = (0..4u8)
                .filter(|&t| lv.level(c.segment_at(t)) > lv.level(c.segment_at(t + 1)))
                .collect();
            if decreases != vec![m] {
                witnesses.push(ci);
            }
        }
    }
    (witnesses.is_empty(), witnesses)
}

/// Builds S(j,k) from a level assignment: at each crossing the marker goes in
/// the unique corner where the level increases clockwise, or at the
/// minimal-state corner when the level is uniform there. The result is
/// verified to be a Kauffman state.
pub fn construct_irreducible_state(
    d: &LinkDiagram,
    r: &RegionMap,
    i: Segment,
    min_state: &KauffmanState,
    lv: &LevelAssignment,
) -> Result<KauffmanState> {
    if lv.level(i) > 0 {
        return Err(Error::TheoremViolation(format!(
            "level partition for S({},{}) assigns level {} to the reference segment {i}",
            lv.j,
            lv.k,
            lv.level(i)
        )));
    }
    let mut markers = Vec::with_capacity(d.crossing_count());
    for (ci, c) in d.crossings().iter().enumerate() {
        let increases: Vec<u8> = (0..4u8)
            .filter(|&t| lv.level(c.segment_at(t)) < lv.level(c.segment_at(t + 1)))
            .collect();
        match increases.as_slice() {
            [] => markers.push(min_state.marker(ci).index),
            [t] => markers.push(*t),
            _ => {
                return Err(Error::TheoremViolation(format!(
                    "two increase corners at crossing {:?} for S({},{})",
                    c.id, lv.j, lv.k
                )))
            }
        }
    }
    let state = KauffmanState::from_markers(markers);
    if !state_is_valid(d, r, i, &state)? {
        return Err(Error::TheoremViolation(format!(
            "S({},{}) is not a Kauffman state: some region has zero or two markers",
            lv.j, lv.k
        )));
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{parse_diagram, trace_regions};
    use crate::states::{build_state_lattice, enumerate_states, DEFAULT_STATE_LIMIT};

    fn trefoil() -> LinkDiagram {
        parse_diagram(
            r#"{"crossings":[{"id":"A","cw":[1,5,2,4]},{"id":"B","cw":[3,1,4,6]},{"id":"C","cw":[5,3,6,2]}]}"#,
        )
        .unwrap()
    }

    #[test]
    fn closure_is_monotone_and_idempotent() {
        let d = trefoil();
        let r = trace_regions(&d).unwrap();
        let states = enumerate_states(&d, &r, Segment(1), DEFAULT_STATE_LIMIT).unwrap();
        let lat = build_state_lattice(&d, Segment(1), states).unwrap();
        let min = lat.min_state().clone();
        let all: BTreeSet<Segment> = d.segments().iter().copied().collect();
        let mut singletons: Vec<BTreeSet<Segment>> = Vec::new();
        for &s in d.segments() {
            singletons.push(BTreeSet::from([s]));
        }
        for a in &singletons {
            let ca = successor_closure(&d, &min, a, &all);
            // idempotent
            assert_eq!(successor_closure(&d, &min, &ca, &all), ca);
            for b in &singletons {
                if a.is_subset(b) {
                    let cb = successor_closure(&d, &min, b, &all);
                    assert!(ca.is_subset(&cb));
                }
            }
            // S = T fixpoint
            assert_eq!(successor_closure(&d, &min, &all, &all), all);
        }
    }

    #[test]
    fn trefoil_levels_match_patterns() {
        let d = trefoil();
        let r = trace_regions(&d).unwrap();
        let states = enumerate_states(&d, &r, Segment(1), DEFAULT_STATE_LIMIT).unwrap();
        let lat = build_state_lattice(&d, Segment(1), states).unwrap();
        let dims = lat.rep_dim_vector(&d).unwrap();
        let min = lat.min_state().clone();
        for (j, dj) in dims.iter() {
            for k in 1..=dj {
                let lv = level_partition(&d, &min, dj, j, k).unwrap();
                assert_eq!(lv.level(j), k);
                let (ok, wit) = verify_level_patterns(&d, &min, &lv);
                assert!(ok, "witnesses {wit:?}");
                let s = construct_irreducible_state(&d, &r, Segment(1), &min, &lv).unwrap();
                assert!(state_is_valid(&d, &r, Segment(1), &s).unwrap());
            }
        }
    }

    #[test]
    fn corrupted_levels_fail_patterns() {
        let d = trefoil();
        let r = trace_regions(&d).unwrap();
        let states = enumerate_states(&d, &r, Segment(1), DEFAULT_STATE_LIMIT).unwrap();
        let lat = build_state_lattice(&d, Segment(1), states).unwrap();
        let dims = lat.rep_dim_vector(&d).unwrap();
        let min = lat.min_state().clone();
        let (j, dj) = dims.iter().find(|&(_, v)| v > 0).unwrap();
        let mut lv = level_partition(&d, &min, dj, j, 1).unwrap();
        // bump one level-0 segment
        let bumped = *lv
            .level
            .iter()
            .find(|(_, &v)| v == 0)
            .map(|(s, _)| s)
            .unwrap();
        lv.level.insert(bumped, 5);
        let (ok, wit) = verify_level_patterns(&d, &min, &lv);
        assert!(!ok);
        assert!(!wit.is_empty());
    }

    #[test]
    fn uniform_levels_reproduce_minimal_state() {
        let d = trefoil();
        let r = trace_regions(&d).unwrap();
        let states = enumerate_states(&d, &r, Segment(1), DEFAULT_STATE_LIMIT).unwrap();
        let lat = build_state_lattice(&d, Segment(1), states).unwrap();
        let min = lat.min_state().clone();
        let lv = LevelAssignment {
            j: Segment(1),
            k: 0,
            level: d.segments().iter().map(|&s| (s, 0)).collect(),
        };
        let s = construct_irreducible_state(&d, &r, Segment(1), &min, &lv).unwrap();
        assert_eq!(&s, lat.min_state());
    }
}
