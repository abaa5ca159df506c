//! Spectral module analysis for bipartite software designs.
//!
//! A design is modelled as a bipartite graph between *structors* (the things
//! that provide behaviour: classes, services, circuit stages) and
//! *functionals* (the behaviours themselves). From that graph we build the
//! Laplacian `L = D - A` and, after normalising by the degree sum, a design
//! density matrix `rho = L / d(G)`. The kernel of either matrix encodes the
//! module structure of the design, and three independent routes to that
//! structure (connected components, kernel eigenvectors, projector
//! partitioning) are required to agree before a result is trusted.

pub mod disjoint;
pub mod export;
pub mod generate;
pub mod ingest;
pub mod model;
pub mod modularity;
pub mod projectors;
pub mod report;
pub mod spectral;

#[cfg(test)]
pub(crate) mod testutil;

pub use model::{
    Edge, Entity, InheritanceFinding, ModelError, PartitionMethod, SystemDesign, VertexOrder,
    VertexPartition,
};
pub use report::{analyze, AnalysisReport, AnalyzeOptions};
pub use spectral::{build_matrices, eigendecompose, DesignMatrices, EigenSystem};
