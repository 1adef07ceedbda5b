//! Graph embeddings in surfaces via signed rotation systems, exact genus
//! search, and checkable certificates that a graph is an excluded minor
//! for a surface.

pub mod graph;
pub mod embedding;
pub mod genus;
pub mod topology;
pub mod structure;
pub mod treedecomp;
pub mod certify;
