//! Exact dense linear algebra and polynomial arithmetic over prime fields.

mod charpoly;
mod echelon;
mod field;
mod matrix;
mod poly;

pub use charpoly::{char_poly, char_poly_hessenberg};
pub use echelon::{inverse, left_nullspace, nullspace, rank, row_space, rref, Rref, SemiEchelon};
pub use field::{is_prime, PrimeField};
pub use matrix::GFMatrix;
pub(crate) use matrix::LazyRow;
pub use poly::{
    distinct_degree, equal_degree, is_irreducible, low_degree_factors, poly_factor, squarefree_decomposition, GFPoly,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not a prime in [2, 2^31)")]
    NotPrime(u64),
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch { op: &'static str, left: (usize, usize), right: (usize, usize) },
    #[error("field mismatch: GF({0}) vs GF({1})")]
    FieldMismatch(u32, u32),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("the zero polynomial has no factorisation")]
    ZeroPolynomial,
}
