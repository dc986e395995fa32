//! Compactly induced representations on the tree.
//!
//! The objects here are finitely supported sections of the bundle attached to
//! a weight: formal sums of translates `[g, w]` with `g` in the group and `w`
//! in the weight space, modulo the defining relation `[g k, w] = [g, k . w]`
//! for `k` in the maximal compact times the center.  Everything is exact: no
//! floating point, no truncation except where a method says so explicitly.

mod appc;
mod elt;
mod hecke;
mod invariants;
mod isom;
mod quotient;

pub use appc::{decompose, Monomial, SectorDecomp};
pub use elt::CIndElt;
pub use hecke::HeckeOp;
pub use invariants::{
    fixed_dim_in_quotient, invariance_report, iwahori_exponent, quotient_action_matrix, InvStatus,
    VertexParity,
};
pub use isom::{
    canonical_generator, canonical_key, decide_isomorphism, packet, ss_model, ClassKey,
    IsoDecision, IsoEvidence, Sector, SsModel,
};
pub use quotient::{generated_span, image_solve, QuotientCtx, SpanReport};
