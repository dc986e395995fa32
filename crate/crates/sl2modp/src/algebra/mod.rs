//! Exact scalar arithmetic: p-localized rationals and finite fields, plus
//! sparse linear algebra over the finite field.

mod fq;
mod pexact;
mod sparse;

pub use fq::{modulus_poly, Fq, FqCtx};
pub use pexact::PExact;
pub use sparse::{
    intersect, read_matrix_text, write_matrix_text, AffineSolver, SparseMat, SparseVec, Subspace,
};
