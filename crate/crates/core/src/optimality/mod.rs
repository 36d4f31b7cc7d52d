//! Optimality through the spanning property: kernel product vectors of the
//! saturated conditions and the rank of their span.

mod report;
mod vectors;

pub use report::{classify_case, span_rank, spanning_report, CaseLabel, SkippedEdge, SpanningReport};
pub use vectors::{
    default_interior_phases, edge_spanning_vectors, interior_spanning_vectors, random_phase_basis,
    vertex_spanning_vector, zero_value_check, ProductVector, EDGE_PHASES,
};
