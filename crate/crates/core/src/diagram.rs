//! Combinatorial topology of a link diagram given as a clockwise rotation system.
//!
//! A diagram is a list of crossings, each carrying the four incident segments in
//! clockwise order as drawn. Everything downstream (regions, states, quivers) is
//! derived from this data alone; over/under information is parsed and ignored.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A segment (edge) of the diagram, identified by a positive integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Segment(pub u32);

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// One of the two ends of a segment: a position 0..4 at a crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dart {
    pub crossing: usize,
    pub pos: u8,
}

/// The quadrant of a crossing between dart `index` and dart `(index + 1) % 4`
/// in clockwise order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Corner {
    pub crossing: usize,
    pub index: u8,
}

/// A crossing with its four segments in clockwise order as drawn.
///
/// The optional over-strand annotation is preserved from the input but plays
/// no role in any computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingRecord {
    pub id: String,
    pub cw: [Segment; 4],
    pub over: Option<Vec<u8>>,
}

impl CrossingRecord {
    /// Segment at dart position `pos` (mod 4).
    pub fn segment_at(&self, pos: u8) -> Segment {
        self.cw[(pos % 4) as usize]
    }
}

/// A link diagram: crossings in input order plus the derived segment-to-dart index.
#[derive(Debug, Clone)]
pub struct LinkDiagram {
    name: String,
    crossings: Vec<CrossingRecord>,
    /// Sorted segment identifiers.
    segments: Vec<Segment>,
    /// Both darts of each segment, in canonical order (lower crossing first,
    /// then lower position).
    endpoints: BTreeMap<Segment, (Dart, Dart)>,
}

impl LinkDiagram {
    /// Builds a diagram from crossing records, checking the two-endpoint rule.
    pub fn new(name: String, crossings: Vec<CrossingRecord>) -> Result<Self> {
        let mut seen_ids = BTreeMap::new();
        for c in &crossings {
            if seen_ids.insert(c.id.clone(), ()).is_some() {
                return Err(Error::DuplicateCrossingId(c.id.clone()));
            }
        }
        let mut darts: BTreeMap<Segment, Vec<Dart>> = BTreeMap::new();
        for (ci, c) in crossings.iter().enumerate() {
            for (p, &s) in c.cw.iter().enumerate() {
                darts.entry(s).or_default().push(Dart {
                    crossing: ci,
                    pos: p as u8,
                });
            }
        }
        let mut endpoints = BTreeMap::new();
        for (s, ds) in &darts {
            if ds.len() != 2 {
                return Err(Error::SegmentMultiplicity {
                    segment: *s,
                    count: ds.len(),
                });
            }
            endpoints.insert(*s, (ds[0], ds[1]));
        }
        let segments = darts.keys().copied().collect();
        Ok(LinkDiagram {
            name,
            crossings,
            segments,
            endpoints,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn crossings(&self) -> &[CrossingRecord] {
        &self.crossings
    }

    /// Sorted segment identifiers; always of length `2 * crossing_count()`
    /// for diagrams that passed parsing.
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn contains_segment(&self, j: Segment) -> bool {
        self.endpoints.contains_key(&j)
    }

    pub fn segment_at(&self, d: Dart) -> Segment {
        self.crossings[d.crossing].segment_at(d.pos)
    }

    /// The two darts of segment `j` in canonical order.
    pub fn segment_endpoints(&self, j: Segment) -> Result<(Dart, Dart)> {
        self.endpoints
            .get(&j)
            .copied()
            .ok_or(Error::UnknownSegment(j))
    }

    /// The far end of the segment entered at `d`.
    pub fn other_end(&self, d: Dart) -> Dart {
        let (a, b) = self.endpoints[&self.segment_at(d)];
        if a == d {
            b
        } else {
            a
        }
    }
}

/// Parses a diagram interchange document.
///
/// Unknown top-level keys and per-crossing `over` annotations are accepted and
/// ignored; all computations depend only on the rotation system.
pub fn parse_diagram(text: &str) -> Result<LinkDiagram> {
    #[derive(Deserialize)]
    struct RawCrossing {
        id: String,
        cw: Vec<i64>,
        #[serde(default)]
        over: Option<Vec<u8>>,
    }
    #[derive(Deserialize)]
    struct RawDiagram {
        #[serde(default)]
        name: String,
        crossings: Vec<RawCrossing>,
    }

    let raw: RawDiagram = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut crossings = Vec::with_capacity(raw.crossings.len());
    for rc in raw.crossings {
        if rc.cw.len() != 4 {
            return Err(Error::DartListLength {
                id: rc.id,
                len: rc.cw.len(),
            });
        }
        let mut cw = [Segment(0); 4];
        for (k, &v) in rc.cw.iter().enumerate() {
            if v <= 0 || v > u32::MAX as i64 {
                return Err(Error::BadSegmentId { id: rc.id });
            }
            cw[k] = Segment(v as u32);
        }
        crossings.push(CrossingRecord {
            id: rc.id,
            cw,
            over: rc.over,
        });
    }
    LinkDiagram::new(raw.name, crossings)
}

/// The partition of the `4n` corners into regions (faces of the sphere embedding).
#[derive(Debug, Clone)]
pub struct RegionMap {
    /// Region id of corner `(crossing, index)`.
    region_of: Vec<[u32; 4]>,
    /// Corner orbits in canonical order (first-seen while scanning corners).
    regions: Vec<Vec<Corner>>,
}

impl RegionMap {
    /// Traces all face orbits of the rotation system.
    ///
    /// Rule: from corner `(x,t)`, follow the segment at dart `(t+1) % 4` to its
    /// far end `(y,q)`; the next corner of the same region is `(y,q)`. The rule
    /// is validated externally by the Euler count `n + 2`.
    pub fn trace(d: &LinkDiagram) -> RegionMap {
        let n = d.crossing_count();
        let mut region_of = vec![[u32::MAX; 4]; n];
        let mut regions = Vec::new();
        for ci in 0..n {
            for t in 0..4u8 {
                if region_of[ci][t as usize] != u32::MAX {
                    continue;
                }
                let rid = regions.len() as u32;
                let mut orbit = Vec::new();
                let mut cur = Corner {
                    crossing: ci,
                    index: t,
                };
                while region_of[cur.crossing][cur.index as usize] == u32::MAX {
                    region_of[cur.crossing][cur.index as usize] = rid;
                    orbit.push(cur);
                    let exit = Dart {
                        crossing: cur.crossing,
                        pos: (cur.index + 1) % 4,
                    };
                    let far = d.other_end(exit);
                    cur = Corner {
                        crossing: far.crossing,
                        index: far.pos,
                    };
                }
                regions.push(orbit);
            }
        }
        RegionMap { region_of, regions }
    }

    pub fn region_count(&self) -> usize {
        self.regions.len()
    }

    pub fn region_of(&self, c: Corner) -> u32 {
        self.region_of[c.crossing][c.index as usize]
    }

    pub fn region_corners(&self, r: u32) -> &[Corner] {
        &self.regions[r as usize]
    }

    /// The two regions flanking segment `j`, as seen from its first dart.
    ///
    /// Sanity: the far end sees the same pair.
    pub fn adjacent_regions(&self, d: &LinkDiagram, j: Segment) -> Result<(u32, u32)> {
        let (a, b) = d.segment_endpoints(j)?;
        let r1 = self.region_of(Corner {
            crossing: a.crossing,
            index: a.pos,
        });
        let r2 = self.region_of(Corner {
            crossing: a.crossing,
            index: (a.pos + 3) % 4,
        });
        let s1 = self.region_of(Corner {
            crossing: b.crossing,
            index: b.pos,
        });
        let s2 = self.region_of(Corner {
            crossing: b.crossing,
            index: (b.pos + 3) % 4,
        });
        if (r1, r2) != (s2, s1) {
            return Err(Error::TheoremViolation(format!(
                "segment {j}: flanking regions disagree between endpoints"
            )));
        }
        Ok((r1.min(r2), r1.max(r2)))
    }
}

/// Traces regions and enforces the Euler count `n + 2`.
pub fn trace_regions(d: &LinkDiagram) -> Result<RegionMap> {
    let r = RegionMap::trace(d);
    let expected = d.crossing_count() + 2;
    if r.region_count() != expected {
        return Err(Error::EulerMismatch {
            expected,
            found: r.region_count(),
        });
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, Serialize)]
pub struct Finding {
    pub severity: Severity,
    pub code: &'static str,
    pub message: String,
}

/// Outcome of the structural checks; findings are data, not errors.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub primality: bool,
    pub findings: Vec<Finding>,
}

/// Checks connectivity, absence of curls, the Euler region count, primality
/// (no 2-edge-cut of segments separating crossings) and that each region meets
/// each crossing at most once.
pub fn validate(d: &LinkDiagram) -> ValidationReport {
    let mut findings = Vec::new();
    let n = d.crossing_count();

    if n == 0 {
        findings.push(Finding {
            severity: Severity::Error,
            code: "empty",
            message: "diagram has no crossings".into(),
        });
        return ValidationReport {
            ok: false,
            primality: false,
            findings,
        };
    }

    // curls: both darts of a segment at one crossing
    for (&j, &(a, b)) in &d.endpoints {
        if a.crossing == b.crossing {
            findings.push(Finding {
                severity: Severity::Error,
                code: "curl",
                message: format!(
                    "segment {j} has both endpoints at crossing {:?}",
                    d.crossings()[a.crossing].id
                ),
            });
        }
    }

    // connectivity of the crossing graph
    if !crossings_connected(d, None) {
        findings.push(Finding {
            severity: Severity::Error,
            code: "connectivity",
            message: "the dart incidence graph is not connected".into(),
        });
    }

    // Euler count
    let regions = RegionMap::trace(d);
    if regions.region_count() != n + 2 {
        findings.push(Finding {
            severity: Severity::Error,
            code: "euler",
            message: format!(
                "{} regions traced, expected {}",
                regions.region_count(),
                n + 2
            ),
        });
    }

    // each region meets each crossing at most once
    for rid in 0..regions.region_count() as u32 {
        let orbit = regions.region_corners(rid);
        let mut seen = vec![false; n];
        for c in orbit {
            if seen[c.crossing] {
                findings.push(Finding {
                    severity: Severity::Error,
                    code: "region-corner",
                    message: format!(
                        "region {rid} meets crossing {:?} in more than one corner",
                        d.crossings()[c.crossing].id
                    ),
                });
                break;
            }
            seen[c.crossing] = true;
        }
    }

    // primality: exhaustive 2-edge-cut scan over segment pairs
    let mut primality = true;
    let segs = d.segments();
    'outer: for i in 0..segs.len() {
        for k in (i + 1)..segs.len() {
            if !crossings_connected(d, Some((segs[i], segs[k]))) {
                primality = false;
                findings.push(Finding {
                    severity: Severity::Error,
                    code: "primality",
                    message: format!(
                        "segments {} and {} form a 2-edge-cut separating crossings",
                        segs[i], segs[k]
                    ),
                });
                break 'outer;
            }
        }
    }

    let ok = findings.iter().all(|f| f.severity != Severity::Error);
    ValidationReport {
        ok,
        primality,
        findings,
    }
}

/// Connectivity of the crossing graph, optionally with two segments removed.
fn crossings_connected(d: &LinkDiagram, cut: Option<(Segment, Segment)>) -> bool {
    let n = d.crossing_count();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for (&j, &(a, b)) in &d.endpoints {
            if let Some((x, y)) = cut {
                if j == x || j == y {
                    continue;
                }
            }
            for (p, q) in [(a, b), (b, a)] {
                if p.crossing == v && !seen[q.crossing] {
                    seen[q.crossing] = true;
                    stack.push(q.crossing);
                }
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Segments encountered strictly clockwise after `from_dart` up to `stop_corner`.
///
/// Walking clockwise around `x` from dart `from_dart`, the darts at positions
/// `from_dart + 1, ..., stop_corner.index` (mod 4) come before the stop corner;
/// when `stop_corner.index == from_dart` the corner is directly clockwise of the
/// dart and the list is empty.
pub fn clockwise_between(
    d: &LinkDiagram,
    x: usize,
    from_dart: u8,
    stop_corner: Corner,
) -> Vec<Segment> {
    debug_assert_eq!(stop_corner.crossing, x);
    let delta = (stop_corner.index + 4 - from_dart % 4) % 4;
    (1..=delta)
        .map(|step| d.crossings()[x].segment_at(from_dart + step))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn hopf() -> LinkDiagram {
        parse_diagram(
            r#"{"name":"hopf","crossings":[
                {"id":"A","cw":[1,2,3,4]},
                {"id":"B","cw":[1,4,3,2]}]}"#,
        )
        .unwrap()
    }

    pub(crate) fn trefoil() -> LinkDiagram {
        parse_diagram(
            r#"{"name":"trefoil","crossings":[
                {"id":"A","cw":[1,5,2,4]},
                {"id":"B","cw":[3,1,4,6]},
                {"id":"C","cw":[5,3,6,2]}]}"#,
        )
        .unwrap()
    }

    #[test]
    fn parse_hopf() {
        let d = hopf();
        assert_eq!(d.crossing_count(), 2);
        assert_eq!(d.segments().len(), 4);
        assert_eq!(d.name(), "hopf");
    }

    #[test]
    fn parse_trefoil_euler() {
        let d = trefoil();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.segments().len(), 6);
        assert_eq!(trace_regions(&d).unwrap().region_count(), 5);
    }

    #[test]
    fn parse_rejects_segment_multiplicity() {
        let err = parse_diagram(
            r#"{"crossings":[{"id":"A","cw":[1,2,3,7]},{"id":"B","cw":[1,4,3,2]}]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::SegmentMultiplicity { .. }));
    }

    #[test]
    fn parse_rejects_short_dart_list() {
        let err = parse_diagram(r#"{"crossings":[{"id":"A","cw":[1,2,3]}]}"#).unwrap_err();
        assert!(matches!(err, Error::DartListLength { len: 3, .. }));
    }

    #[test]
    fn parse_rejects_duplicate_crossing_id() {
        let err = parse_diagram(
            r#"{"crossings":[{"id":"A","cw":[1,2,3,4]},{"id":"A","cw":[1,4,3,2]}]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::DuplicateCrossingId(_)));
    }

    #[test]
    fn parse_reports_syntax_position() {
        let err = parse_diagram("{\"crossings\": [\n  {]").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn parse_ignores_over_and_unknown_keys() {
        let d = parse_diagram(
            r#"{"name":"hopf","note":"x","crossings":[
                {"id":"A","cw":[1,2,3,4],"over":[0,2]},
                {"id":"B","cw":[1,4,3,2]}]}"#,
        )
        .unwrap();
        assert_eq!(d.crossing_count(), 2);
    }

    #[test]
    fn hopf_has_four_bigon_regions() {
        let d = hopf();
        let r = trace_regions(&d).unwrap();
        assert_eq!(r.region_count(), 4);
        for rid in 0..4 {
            assert_eq!(r.region_corners(rid).len(), 2);
        }
    }

    #[test]
    fn corners_exactly_covered() {
        let d = trefoil();
        let r = trace_regions(&d).unwrap();
        let total: usize = (0..r.region_count() as u32)
            .map(|rid| r.region_corners(rid).len())
            .sum();
        assert_eq!(total, 4 * d.crossing_count());
    }

    #[test]
    fn segment_endpoints_canonical() {
        let d = hopf();
        let (a, b) = d.segment_endpoints(Segment(1)).unwrap();
        assert_eq!((a.crossing, a.pos), (0, 0));
        assert_eq!((b.crossing, b.pos), (1, 0));

        let d = trefoil();
        let (a, b) = d.segment_endpoints(Segment(4)).unwrap();
        assert_eq!((a.crossing, a.pos), (0, 3));
        assert_eq!((b.crossing, b.pos), (1, 2));

        assert!(matches!(
            d.segment_endpoints(Segment(99)),
            Err(Error::UnknownSegment(Segment(99)))
        ));
    }

    #[test]
    fn validate_trefoil_prime() {
        let rep = validate(&trefoil());
        assert!(rep.ok);
        assert!(rep.primality);
        assert!(rep.findings.is_empty());
    }

    #[test]
    fn validate_finds_curl() {
        // segment 2 loops at crossing A
        let d = LinkDiagram::new(
            "curl".into(),
            vec![
                CrossingRecord {
                    id: "A".into(),
                    cw: [Segment(1), Segment(2), Segment(2), Segment(3)],
                    over: None,
                },
                CrossingRecord {
                    id: "B".into(),
                    cw: [Segment(1), Segment(3), Segment(4), Segment(4)],
                    over: None,
                },
            ],
        )
        .unwrap();
        let rep = validate(&d);
        assert!(!rep.ok);
        assert!(rep.findings.iter().any(|f| f.code == "curl"));
    }

    #[test]
    fn validate_order_independent() {
        let d = trefoil();
        let mut crossings = d.crossings().to_vec();
        crossings.rotate_left(1);
        let permuted = LinkDiagram::new("trefoil".into(), crossings).unwrap();
        let a = validate(&d);
        let b = validate(&permuted);
        assert_eq!(a.ok, b.ok);
        assert_eq!(a.primality, b.primality);
        let codes = |r: &ValidationReport| {
            let mut v: Vec<_> = r.findings.iter().map(|f| f.code).collect();
            v.sort_unstable();
            v
        };
        assert_eq!(codes(&a), codes(&b));
    }

    #[test]
    fn clockwise_between_cases() {
        // crossing A of the trefoil has darts (1,5,2,4)
        let d = trefoil();
        let got = clockwise_between(
            &d,
            0,
            0,
            Corner {
                crossing: 0,
                index: 2,
            },
        );
        assert_eq!(got, vec![Segment(5), Segment(2)]);
        // stop corner directly clockwise of the dart: empty
        assert!(clockwise_between(
            &d,
            0,
            1,
            Corner {
                crossing: 0,
                index: 1,
            }
        )
        .is_empty());
        // wrap-around
        let got = clockwise_between(
            &d,
            0,
            1,
            Corner {
                crossing: 0,
                index: 0,
            },
        );
        assert_eq!(got, vec![Segment(2), Segment(4), Segment(1)]);
    }

    #[test]
    fn adjacent_regions_agree_between_endpoints() {
        let d = trefoil();
        let r = trace_regions(&d).unwrap();
        for &j in d.segments() {
            let (r1, r2) = r.adjacent_regions(&d, j).unwrap();
            assert_ne!(r1, r2);
        }
    }
}
