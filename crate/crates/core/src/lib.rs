//! Spectral decomposition of the edge-based Laplacian on metric graphs with
//! unit edge lengths.
//!
//! The operator acts on functions defined along the edges of a graph, each
//! edge carrying a coordinate `x` in `[0, 1]`. Its eigenfunctions are
//! edgewise sinusoids `C(e) cos(B(e) + omega x)` subject to continuity and a
//! flux balance at every vertex, and they split into two families:
//!
//! * **vertex-supported** modes, whose vertex values are eigenvectors of the
//!   row-normalized adjacency matrix, with `omega = arccos(lambda)`;
//! * **edge-interior** modes, which vanish at every vertex and are weighted
//!   by null vectors of the unsigned (`omega = pi`) or signed (`omega = 2 pi`)
//!   incidence matrix.
//!
//! Each principal mode generates the ladder of frequencies `omega + 2 pi n`
//! with unchanged edge profiles. [`eigensystem`] assembles everything below a
//! cutoff, orthonormalizes degenerate groups, and cross-checks the result
//! against an independent finite-difference discretization, the
//! non-backtracking spectrum, and the line-graph lift. [`kernels`] builds the
//! zeta-function determinant, heat flow, and finite-speed wave propagation on
//! top.

pub mod edge_eigen;
pub mod eigensystem;
pub mod graph;
pub mod kernels;
pub mod numerics;
pub mod vertex_eigen;

// Matrices appear in public signatures, so callers need the same version.
pub use ndarray;

pub use edge_eigen::{EdgeClassBases, EdgeEigenfunction, OLGVector, OmegaClass, WMatrix};
pub use eigensystem::{EigenEntry, Eigensystem, FieldSample, Provenance};
pub use graph::{Graph, GraphError, InteriorGraph, OrientedLineGraph, ValidationReport};
pub use kernels::SpectralField;
pub use numerics::{EigenDecomposition, NumericsError, RwEigenpair, DEFAULT_TOL};
pub use vertex_eigen::{EigenpairSequence, Rung, VertexEigenfunction};

use thiserror::Error;

/// Unified error type for the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] graph::GraphError),
    #[error(transparent)]
    Numerics(#[from] numerics::NumericsError),
    #[error("eigenvalue {lambda} lies outside (-1, 1); no principal frequency")]
    FrequencyOutOfRange { lambda: f64 },
    #[error("amplitude and phase are undefined at omega = {omega} (multiple of pi)")]
    DegeneratePhase { omega: f64 },
    #[error("amplitude and phase need a nonzero endpoint pair")]
    ZeroEndpoints,
    #[error("edge-weight matrix is identically zero")]
    ZeroWeightMatrix,
    #[error("frequency cutoff must be positive, got {cutoff}")]
    CutoffNotPositive { cutoff: f64 },
    #[error("finite-difference oracle needs at least 8 segments per edge, got {m}")]
    SegmentsTooFew { m: usize },
    #[error(
        "zeta cross-check failed at u = {u}: determinant route {direct}, \
         adjacency route {bass}"
    )]
    ZetaCrossCheck { u: String, direct: String, bass: String },
    #[error("points lie in different components; no finite distance")]
    DisconnectedPoints,
    #[error("time must be nonnegative, got {t}")]
    NegativeTime { t: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
