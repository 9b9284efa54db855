//! One-stop construction of everything derived from a (diagram, segment) pair:
//! regions, state lattice, dimension vectors, flagged quiver, representation.

use crate::diagram::{trace_regions, LinkDiagram, RegionMap, Segment};
use crate::error::{Error, Result};
use crate::quiver::{assign_marker_flags, build_quiver};
use crate::rep::{build_representation, Representation};
use crate::states::{build_state_lattice, enumerate_states, DimVector, StateLattice};

/// Everything the theorem checks and the CLI need for one segment.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub diagram: LinkDiagram,
    pub segment: Segment,
    pub regions: RegionMap,
    pub lattice: StateLattice,
    /// Dimension vector of each state, aligned with `lattice.states`.
    pub state_dims: Vec<DimVector>,
    pub rep: Representation,
}

impl Analysis {
    pub fn build(diagram: &LinkDiagram, segment: Segment, limit: usize) -> Result<Self> {
        if !diagram.contains_segment(segment) {
            return Err(Error::UnknownSegment(segment));
        }
        let regions = trace_regions(diagram)?;
        let states = enumerate_states(diagram, &regions, segment, limit)?;
        let lattice = build_state_lattice(diagram, segment, states)?;
        let state_dims = lattice.dim_vectors(diagram)?;
        let dims = state_dims[lattice.max_index].clone();
        let quiver = assign_marker_flags(build_quiver(diagram), lattice.min_state())?;
        let rep = build_representation(quiver, dims)?;
        Ok(Analysis {
            diagram: diagram.clone(),
            segment,
            regions,
            lattice,
            state_dims,
            rep,
        })
    }
}
