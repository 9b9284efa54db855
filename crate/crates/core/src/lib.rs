//! Kauffman state lattices of prime curl-free link diagrams.
//!
//! Given a diagram as a clockwise rotation system and a chosen segment `i`,
//! this crate computes the lattice of Kauffman states relative to `i`, the
//! quiver of the diagram and the representation T(i), the submodule lattice of
//! T(i) (as dimension vectors), its join irreducibles by two independent
//! routes — the submodules M(j,k) and the closure/level construction of the
//! states S(j,k) — and the coefficient quiver of T(i). The `theorems` module
//! re-verifies each structural statement at runtime and reports witnesses on
//! failure.
//!
//! All computations are exact, deterministic and pure; diagrams and derived
//! objects are immutable after construction.

pub mod diagram;
pub mod error;
pub mod irrstates;
pub mod lattice;
pub mod pipeline;
pub mod quiver;
pub mod rep;
pub mod states;
pub mod theorems;

pub use diagram::{
    clockwise_between, parse_diagram, trace_regions, validate, Corner, CrossingRecord, Dart,
    LinkDiagram, RegionMap, Segment, ValidationReport,
};
pub use error::{Error, Result};
pub use pipeline::Analysis;
pub use states::{
    build_state_lattice, enumerate_states, transpose, DimVector, KauffmanState, StateLattice,
    DEFAULT_STATE_LIMIT,
};
