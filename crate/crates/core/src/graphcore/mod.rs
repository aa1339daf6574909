//! Weighted dual graphs, their intersection matrices and canonical forms.

mod canonical;
mod graph;
mod matrix;

pub use canonical::{canonical_form, decode_canonical};
pub use graph::{DualGraph, GraphBuilder, Role, Vertex, VertexId};
pub use matrix::{
    definiteness, determinant, intersection_matrix, kernel_basis, solve_crepant, solve_many,
    Definiteness, IntersectionMatrix,
};

use num_bigint::BigInt;

/// Exact rational number with unbounded numerator and denominator.
pub type Rational = num_rational::BigRational;

/// `p/q` as a [`Rational`]. Panics when `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}
