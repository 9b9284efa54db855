use thiserror::Error;

use crate::diagram::Segment;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate crossing id {0:?}")]
    DuplicateCrossingId(String),
    #[error("dart list of crossing {id:?} has length {len}, expected 4")]
    DartListLength { id: String, len: usize },
    #[error("segment {segment} appears {count} times, expected 2")]
    SegmentMultiplicity { segment: Segment, count: usize },
    #[error("segment identifiers must be positive integers (crossing {id:?})")]
    BadSegmentId { id: String },
    #[error("unknown segment {0}")]
    UnknownSegment(Segment),
    #[error("region tracing found {found} regions, expected {expected}; the rotation system is not planar or mis-transcribed")]
    EulerMismatch { expected: usize, found: usize },
    #[error("cover digraph contains a cycle")]
    CycleDetected,
    #[error("not a lattice: elements {a} and {b} have no {kind}")]
    NotALattice { a: usize, b: usize, kind: &'static str },
    #[error("{what} count exceeds limit {limit} (at least {lower_bound} exist)")]
    LimitExceeded {
        what: &'static str,
        limit: usize,
        lower_bound: usize,
    },
    #[error("state poset has {minima} minimal and {maxima} maximal elements; expected one of each (non-prime or mis-transcribed input)")]
    NonUniqueExtremum { minima: usize, maxima: usize },
    #[error("index {k} out of range 1..={max} at segment {segment}")]
    IndexOutOfRange { segment: Segment, k: u32, max: u32 },
    #[error("map is not a bijection")]
    NotABijection,
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error("diagram fails validation: {0}")]
    InvalidDiagram(String),
    #[error("invalid segment selector {0:?}: expected a segment id or \"all\"")]
    BadSelector(String),
    #[error("format {format} is not supported by `{command}`")]
    UnsupportedFormat {
        command: &'static str,
        format: &'static str,
    },
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
