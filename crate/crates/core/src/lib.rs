//! Exact combinatorics of log terminal surface contractions onto a curve germ.
//!
//! The central object is the dual graph of the minimal resolution of such a
//! contraction: a weighted tree of rational curves with one distinguished
//! vertex (the proper transform of the central fiber). On top of it the crate
//! computes Hirzebruch-Jung chains, discrepancies, fiber multiplicities,
//! complements and the five-way classification of these contractions, all in
//! exact rational arithmetic.
//!
//! Coefficient convention: every routine that reports coefficients of
//! exceptional curves uses *boundary-style* coefficients `c = -a`, where `a` is
//! the discrepancy. So `K + Σ cᵢEᵢ + B̃` is the log pull-back, `c < 1` means
//! log terminal and `c ≤ 1` means log canonical.

pub mod classify;
pub mod complement;
pub mod cyclic;
pub mod document;
mod error;
pub mod fiber;
pub mod graphcore;
pub mod logdisc;

pub use classify::{classify, expected_complement_index, verify_shape, ClassTag, ContractionClass, ShapeCheck, ShapeParams};
pub use complement::{
    min_complement_index, search_complement, verify_complement, BoundaryConfig,
    ComplementCertificate, ComplementFailure, IncompleteCurve,
};
pub use cyclic::{Chain, ClassTWitness, CyclicQuot};
pub use document::GraphDocument;
pub use error::{Error, Result};
pub use fiber::{enumerate_fibers, EnumeratedFiber, FiberGraph, Multiplicities};
pub use graphcore::{
    canonical_form, decode_canonical, definiteness, intersection_matrix, solve_crepant,
    Definiteness, DualGraph, GraphBuilder, IntersectionMatrix, Rational, Role, Vertex, VertexId,
};
pub use logdisc::{PairStatus, PullbackAssignment};
