//! The quiver of a diagram: one clockwise 4-cycle per crossing, 2-cycles
//! removed, each surviving arrow keyed by its crossing and corner and carrying
//! the minimal-state marker flag.

use crate::diagram::{Corner, LinkDiagram, Segment};
use crate::error::{Error, Result};
use crate::states::KauffmanState;

/// An arrow between segments, recording the crossing corner it spans.
///
/// The corner lies clockwise between source and target; `marker_flag` is set
/// when the minimal state's marker occupies that corner, which selects the
/// shifted (Jordan) matrix shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arrow {
    pub source: Segment,
    pub target: Segment,
    pub crossing: usize,
    pub corner: u8,
    pub marker_flag: bool,
}

impl Arrow {
    pub fn corner_ref(&self) -> Corner {
        Corner {
            crossing: self.crossing,
            index: self.corner,
        }
    }

    /// The shift applied to basis indices along this arrow.
    pub fn shift(&self) -> u32 {
        self.marker_flag as u32
    }
}

/// A directed multigraph on the segments of a diagram.
#[derive(Debug, Clone)]
pub struct Quiver {
    pub vertices: Vec<Segment>,
    pub arrows: Vec<Arrow>,
}

/// Builds the quiver: per crossing with darts (a1,a2,a3,a4) the clockwise
/// 4-cycle a1->a2->a3->a4->a1, then removal of all 2-cycles (both arrows of
/// each mutually-inverse pair). Marker flags are left unset.
pub fn build_quiver(d: &LinkDiagram) -> Quiver {
    let mut raw = Vec::with_capacity(4 * d.crossing_count());
    for (ci, c) in d.crossings().iter().enumerate() {
        for t in 0..4u8 {
            raw.push(Arrow {
                source: c.segment_at(t),
                target: c.segment_at(t + 1),
                crossing: ci,
                corner: t,
                marker_flag: false,
            });
        }
    }
    // two segments share at most two crossings, so each ordered pair occurs at
    // most twice and a 2-cycle pair is unambiguous
    let arrows: Vec<Arrow> = raw
        .iter()
        .filter(|a| {
            !raw.iter()
                .any(|b| b.source == a.target && b.target == a.source)
        })
        .copied()
        .collect();
    Quiver {
        vertices: d.segments().to_vec(),
        arrows,
    }
}

/// Sets the marker flag on every arrow from the minimal state.
///
/// For a crossing whose four arrows all survive, the marker corners and arrow
/// corners coincide bijectively, so the flag sum must be exactly 1.
pub fn assign_marker_flags(mut q: Quiver, min_state: &KauffmanState) -> Result<Quiver> {
    for a in &mut q.arrows {
        a.marker_flag = min_state.marker(a.crossing).index == a.corner;
    }
    let mut per_crossing: Vec<(usize, usize)> = Vec::new(); // (surviving, flagged)
    for a in &q.arrows {
        if per_crossing.len() <= a.crossing {
            per_crossing.resize(a.crossing + 1, (0, 0));
        }
        let e = &mut per_crossing[a.crossing];
        e.0 += 1;
        e.1 += a.marker_flag as usize;
    }
    for (ci, &(count, flagged)) in per_crossing.iter().enumerate() {
        if count == 4 && flagged != 1 {
            return Err(Error::TheoremViolation(format!(
                "crossing {ci} has 4 surviving arrows but flag sum {flagged}"
            )));
        }
    }
    Ok(q)
}

impl Quiver {
    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    /// DOT export with arrows labeled crossing/corner/flag.
    pub fn to_dot(&self, d: &LinkDiagram) -> String {
        let mut s = String::from("digraph quiver {\n");
        for v in &self.vertices {
            s.push_str(&format!("  s{v} [label=\"{v}\"];\n"));
        }
        for a in &self.arrows {
            s.push_str(&format!(
                "  s{} -> s{} [label=\"{}/{}/{}\"];\n",
                a.source,
                a.target,
                d.crossings()[a.crossing].id,
                a.corner,
                a.marker_flag as u8
            ));
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{parse_diagram, trace_regions};
    use crate::states::{build_state_lattice, enumerate_states, DEFAULT_STATE_LIMIT};

    fn hopf() -> LinkDiagram {
        parse_diagram(
            r#"{"crossings":[{"id":"A","cw":[1,2,3,4]},{"id":"B","cw":[1,4,3,2]}]}"#,
        )
        .unwrap()
    }

    fn trefoil() -> LinkDiagram {
        parse_diagram(
            r#"{"crossings":[{"id":"A","cw":[1,5,2,4]},{"id":"B","cw":[3,1,4,6]},{"id":"C","cw":[5,3,6,2]}]}"#,
        )
        .unwrap()
    }

    #[test]
    fn hopf_quiver_is_empty() {
        let q = build_quiver(&hopf());
        assert_eq!(q.arrow_count(), 0);
        assert_eq!(q.vertices.len(), 4);
    }

    #[test]
    fn trefoil_quiver_has_six_arrows() {
        let q = build_quiver(&trefoil());
        assert_eq!(q.arrow_count(), 6);
        // 3 bigons cancel 6 of the 12 raw arrows
        for a in &q.arrows {
            assert_ne!(a.source, a.target);
        }
    }

    #[test]
    fn cancelled_pairs_match_bigon_faces() {
        for d in [hopf(), trefoil()] {
            let q = build_quiver(&d);
            let cancelled_pairs = (4 * d.crossing_count() - q.arrow_count()) / 2;
            let r = trace_regions(&d).unwrap();
            let bigons = (0..r.region_count() as u32)
                .filter(|&rid| r.region_corners(rid).len() == 2)
                .count();
            assert_eq!(cancelled_pairs, bigons);
        }
    }

    #[test]
    fn rebuild_from_permuted_input_matches_up_to_order() {
        let d = trefoil();
        let q = build_quiver(&d);
        let mut crossings = d.crossings().to_vec();
        crossings.reverse();
        let d2 = LinkDiagram::new("t".into(), crossings).unwrap();
        let q2 = build_quiver(&d2);
        let key = |q: &Quiver| {
            let mut v: Vec<(Segment, Segment)> =
                q.arrows.iter().map(|a| (a.source, a.target)).collect();
            v.sort();
            v
        };
        assert_eq!(key(&q), key(&q2));
    }

    #[test]
    fn trefoil_flag_sums_in_range() {
        let d = trefoil();
        let r = trace_regions(&d).unwrap();
        let states = enumerate_states(&d, &r, Segment(1), DEFAULT_STATE_LIMIT).unwrap();
        let lat = build_state_lattice(&d, Segment(1), states).unwrap();
        let q = assign_marker_flags(build_quiver(&d), lat.min_state()).unwrap();
        for ci in 0..d.crossing_count() {
            let flags: usize = q
                .arrows
                .iter()
                .filter(|a| a.crossing == ci)
                .map(|a| a.marker_flag as usize)
                .sum();
            assert!(flags <= 1, "crossing {ci}");
        }
    }

    #[test]
    fn empty_quiver_unchanged_by_flags() {
        let d = hopf();
        let r = trace_regions(&d).unwrap();
        let states = enumerate_states(&d, &r, Segment(1), DEFAULT_STATE_LIMIT).unwrap();
        let lat = build_state_lattice(&d, Segment(1), states).unwrap();
        let q = assign_marker_flags(build_quiver(&d), lat.min_state()).unwrap();
        assert_eq!(q.arrow_count(), 0);
    }
}
