//! Rotation systems, faces, structural validators and the across relation.

pub mod anchor;
pub mod embedding;
pub mod validate;

pub use anchor::{across_pairs, find_anchor, AcrossPair, Anchor};
pub use embedding::{trace_faces, Embedding, FaceList};
pub use validate::{
    non_adjacency_counterexample, subgraph_free, validate_pp_quadrangulation, validate_reflexive_triangulation,
    validate_sphere_quadrangulation, ForbiddenSubgraph, ValidationKind, ValidationReport,
};
