//! Kauffman states relative to a segment and their lattice.
//!
//! A state places one marker (a corner) per crossing so that the induced map
//! crossing -> region is a bijection onto the regions other than the two
//! flanking the chosen segment. Raising moves are counterclockwise
//! transpositions along a segment; the resulting poset has a unique bottom
//! and top.

use std::collections::BTreeMap;

use crate::diagram::{Corner, LinkDiagram, RegionMap, Segment};
use crate::error::{Error, Result};
use crate::lattice::FinitePoset;

pub const DEFAULT_STATE_LIMIT: usize = 1_000_000;

/// One marker per crossing, stored as the corner index at each crossing in
/// input order. Ordering is lexicographic on that list, which is the canonical
/// state order everywhere in this crate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KauffmanState {
    markers: Vec<u8>,
}

impl KauffmanState {
    pub fn from_markers(markers: Vec<u8>) -> Self {
        KauffmanState { markers }
    }

    pub fn marker(&self, crossing: usize) -> Corner {
        Corner {
            crossing,
            index: self.markers[crossing],
        }
    }

    pub fn markers(&self) -> &[u8] {
        &self.markers
    }

    /// Serialization form: (crossing id, corner index) pairs sorted by crossing id.
    pub fn to_pairs(&self, d: &LinkDiagram) -> Vec<(String, u8)> {
        let mut v: Vec<(String, u8)> = d
            .crossings()
            .iter()
            .zip(&self.markers)
            .map(|(c, &m)| (c.id.clone(), m))
            .collect();
        v.sort();
        v
    }
}

/// A dimension vector: a total map from the diagram's segments to counts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DimVector {
    entries: BTreeMap<Segment, u32>,
}

impl DimVector {
    /// The zero vector over the diagram's segments.
    pub fn zero(d: &LinkDiagram) -> Self {
        DimVector {
            entries: d.segments().iter().map(|&s| (s, 0)).collect(),
        }
    }

    pub fn get(&self, j: Segment) -> u32 {
        self.entries.get(&j).copied().unwrap_or(0)
    }

    pub fn set(&mut self, j: Segment, v: u32) {
        if let Some(e) = self.entries.get_mut(&j) {
            *e = v;
        }
    }

    pub fn bump(&mut self, j: Segment) {
        if let Some(e) = self.entries.get_mut(&j) {
            *e += 1;
        }
    }

    pub fn total(&self) -> u32 {
        self.entries.values().sum()
    }

    /// Componentwise order.
    pub fn leq(&self, other: &DimVector) -> bool {
        self.entries.iter().all(|(j, &v)| v <= other.get(*j))
    }

    pub fn min_with(&self, other: &DimVector) -> DimVector {
        DimVector {
            entries: self
                .entries
                .iter()
                .map(|(&j, &v)| (j, v.min(other.get(j))))
                .collect(),
        }
    }

    pub fn max_with(&self, other: &DimVector) -> DimVector {
        DimVector {
            entries: self
                .entries
                .iter()
                .map(|(&j, &v)| (j, v.max(other.get(j))))
                .collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Segment, u32)> + '_ {
        self.entries.iter().map(|(&j, &v)| (j, v))
    }

    /// Zero vector over the same segment set as `like`.
    pub fn zero_like(like: &DimVector) -> DimVector {
        DimVector {
            entries: like.entries.keys().map(|&j| (j, 0)).collect(),
        }
    }

    /// Segments with a nonzero entry.
    pub fn support(&self) -> Vec<Segment> {
        self.entries
            .iter()
            .filter(|(_, &v)| v > 0)
            .map(|(&j, _)| j)
            .collect()
    }
}

/// All Kauffman states relative to `i`, in canonical (lexicographic) order.
///
/// Backtracks over crossings in input order, trying corner indices in
/// ascending order, matching crossings bijectively onto the admissible regions.
pub fn enumerate_states(
    d: &LinkDiagram,
    r: &RegionMap,
    i: Segment,
    limit: usize,
) -> Result<Vec<KauffmanState>> {
    struct Search<'a> {
        r: &'a RegionMap,
        n: usize,
        excluded: (u32, u32),
        limit: usize,
        used: Vec<bool>,
        markers: Vec<u8>,
        out: Vec<KauffmanState>,
    }

    impl Search<'_> {
        fn go(&mut self, ci: usize) -> Result<()> {
            if ci == self.n {
                if self.out.len() == self.limit {
                    return Err(Error::LimitExceeded {
                        what: "state",
                        limit: self.limit,
                        lower_bound: self.limit + 1,
                    });
                }
                self.out.push(KauffmanState::from_markers(self.markers.clone()));
                return Ok(());
            }
            for t in 0..4u8 {
                let reg = self.r.region_of(Corner {
                    crossing: ci,
                    index: t,
                });
                if reg == self.excluded.0 || reg == self.excluded.1 || self.used[reg as usize] {
                    continue;
                }
                self.used[reg as usize] = true;
                self.markers.push(t);
                self.go(ci + 1)?;
                self.markers.pop();
                self.used[reg as usize] = false;
            }
            Ok(())
        }
    }

    let excluded = r.adjacent_regions(d, i)?;
    let n = d.crossing_count();
    let mut search = Search {
        r,
        n,
        excluded,
        limit,
        used: vec![false; r.region_count()],
        markers: Vec::with_capacity(n),
        out: Vec::new(),
    };
    search.go(0)?;
    Ok(search.out)
}

/// Applies the raising (counterclockwise) transposition at segment `j`, if
/// the marker configuration of `s` admits it.
///
/// With `j` at dart positions `p` (crossing `x`) and `q` (crossing `y`), the
/// move applies iff the markers at `x` and `y` sit at corner indices `p` and
/// `q`; both move one corner counterclockwise, to `p-1` and `q-1` (mod 4).
/// For `j = i` the precondition can never hold because the flanking regions
/// of `i` carry no markers.
pub fn transpose(d: &LinkDiagram, s: &KauffmanState, j: Segment) -> Option<KauffmanState> {
    let (a, b) = d.segment_endpoints(j).ok()?;
    if s.markers[a.crossing] != a.pos || s.markers[b.crossing] != b.pos {
        return None;
    }
    let mut m = s.markers.clone();
    m[a.crossing] = (a.pos + 3) % 4;
    m[b.crossing] = (b.pos + 3) % 4;
    Some(KauffmanState::from_markers(m))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoverEdge {
    pub lower: usize,
    pub upper: usize,
    pub label: Segment,
}

/// The poset of Kauffman states relative to a segment, with labeled covers.
#[derive(Debug, Clone)]
pub struct StateLattice {
    pub segment: Segment,
    pub states: Vec<KauffmanState>,
    pub covers: Vec<CoverEdge>,
    pub order: FinitePoset,
    pub min_index: usize,
    pub max_index: usize,
}

/// Builds the state lattice: covers are all applicable transpositions, the
/// order is their reflexive-transitive closure, and the unique minimum and
/// maximum are verified.
pub fn build_state_lattice(
    d: &LinkDiagram,
    i: Segment,
    states: Vec<KauffmanState>,
) -> Result<StateLattice> {
    let index: BTreeMap<&KauffmanState, usize> =
        states.iter().enumerate().map(|(k, s)| (s, k)).collect();
    let mut covers = Vec::new();
    for (k, s) in states.iter().enumerate() {
        for &j in d.segments() {
            if j == i {
                continue;
            }
            if let Some(s2) = transpose(d, s, j) {
                let up = *index.get(&s2).ok_or_else(|| {
                    Error::TheoremViolation(format!(
                        "transposition at {j} leaves the enumerated state set"
                    ))
                })?;
                covers.push(CoverEdge {
                    lower: k,
                    upper: up,
                    label: j,
                });
            }
        }
    }
    let edge_list: Vec<(usize, usize)> = covers.iter().map(|c| (c.lower, c.upper)).collect();
    let order = FinitePoset::from_covers(states.len(), &edge_list)?;
    let minima = order.minimal_elements();
    let maxima = order.maximal_elements();
    if minima.len() != 1 || maxima.len() != 1 {
        return Err(Error::NonUniqueExtremum {
            minima: minima.len(),
            maxima: maxima.len(),
        });
    }
    Ok(StateLattice {
        segment: i,
        states,
        covers,
        order,
        min_index: minima[0],
        max_index: maxima[0],
    })
}

impl StateLattice {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn min_state(&self) -> &KauffmanState {
        &self.states[self.min_index]
    }

    /// Dimension vectors of every state: label counts along cover paths from
    /// the minimum. Path independence is verified on every cover edge, which
    /// covers all paths at once; a violation would contradict the lattice
    /// isomorphism and is reported as such.
    pub fn dim_vectors(&self, d: &LinkDiagram) -> Result<Vec<DimVector>> {
        let n = self.states.len();
        let mut out: Vec<Option<DimVector>> = vec![None; n];
        out[self.min_index] = Some(DimVector::zero(d));
        let mut adj: Vec<Vec<(usize, Segment)>> = vec![Vec::new(); n];
        for c in &self.covers {
            adj[c.lower].push((c.upper, c.label));
        }
        let mut frontier = vec![self.min_index];
        while let Some(v) = frontier.pop() {
            for &(w, j) in &adj[v] {
                let mut cand = out[v].clone().expect("frontier entries are assigned");
                cand.bump(j);
                match &out[w] {
                    None => {
                        out[w] = Some(cand);
                        frontier.push(w);
                    }
                    Some(prev) => {
                        if *prev != cand {
                            return Err(Error::TheoremViolation(format!(
                                "path-dependent dimension vector at state {w}"
                            )));
                        }
                    }
                }
            }
        }
        // second pass: every cover edge must be consistent, including edges
        // between states first reached along other paths
        let vecs: Vec<DimVector> = out
            .into_iter()
            .enumerate()
            .map(|(k, v)| {
                v.ok_or_else(|| {
                    Error::TheoremViolation(format!("state {k} unreachable from the minimum"))
                })
            })
            .collect::<Result<_>>()?;
        for c in &self.covers {
            let mut expect = vecs[c.lower].clone();
            expect.bump(c.label);
            if vecs[c.upper] != expect {
                return Err(Error::TheoremViolation(format!(
                    "cover {} -> {} labeled {} does not increment its coordinate",
                    c.lower, c.upper, c.label
                )));
            }
        }
        if vecs.iter().any(|e| e.get(self.segment) != 0) {
            return Err(Error::TheoremViolation(format!(
                "nonzero dimension at the reference segment {}",
                self.segment
            )));
        }
        Ok(vecs)
    }

    /// Dimension vector of one state.
    pub fn state_dim_vector(&self, d: &LinkDiagram, state: usize) -> Result<DimVector> {
        Ok(self.dim_vectors(d)?.swap_remove(state))
    }

    /// The dimension vector of the representation: label counts of any maximal
    /// chain, i.e. the dimension vector of the maximum state.
    pub fn rep_dim_vector(&self, d: &LinkDiagram) -> Result<DimVector> {
        self.state_dim_vector(d, self.max_index)
    }

    /// DOT export: nodes are state indices, edges are covers labeled by segment.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph lattice {\n  rankdir=BT;\n");
        for k in 0..self.states.len() {
            s.push_str(&format!("  {k};\n"));
        }
        for c in &self.covers {
            s.push_str(&format!(
                "  {} -> {} [label=\"{}\"];\n",
                c.lower, c.upper, c.label
            ));
        }
        s.push_str("}\n");
        s
    }
}

/// Checks the defining invariants of a state against the region map: one
/// marker per crossing (structural) and the marker regions biject onto the
/// regions other than the two flanking `i`.
pub fn state_is_valid(
    d: &LinkDiagram,
    r: &RegionMap,
    i: Segment,
    s: &KauffmanState,
) -> Result<bool> {
    let (r1, r2) = r.adjacent_regions(d, i)?;
    if s.markers().len() != d.crossing_count() {
        return Ok(false);
    }
    let mut used = vec![false; r.region_count()];
    for ci in 0..d.crossing_count() {
        let reg = r.region_of(s.marker(ci));
        if reg == r1 || reg == r2 || used[reg as usize] {
            return Ok(false);
        }
        used[reg as usize] = true;
    }
    Ok(true)
}
