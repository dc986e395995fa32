//! Exact-arithmetic models of smooth mod-p representations of SL2(Qp) and
//! GL2(Qp) at finite truncation.
//!
//! The crate builds, with no floating point and no precision cutoffs:
//!
//! * scalars: F_{p^k} with a deterministic modulus, and rationals carrying
//!   their p-adic valuation ([`algebra`]);
//! * the Bruhat-Tits tree of GL2(Qp) with exact vertex normal forms and
//!   KZ-factorisation ([`group`]);
//! * Serre weights Sym^r and tame smooth characters ([`weights`]);
//! * compact induction from a maximal compact mod center, the spherical Hecke
//!   operator, truncated cokernel models of the supersingular representations,
//!   and the decision procedures for their isomorphism classes ([`cind`]);
//! * windowed function models of principal series on Qp and of the smooth
//!   functions on the projective line ([`pseries`]);
//! * a verification harness exposing every identity as a named, reportable
//!   check ([`cli`]).
//!
//! Truncation never silently weakens a claim: identities that hold in the
//! finite model are asserted exactly, and searches that are only
//! semi-decisions at a finite bound are reported as bounded evidence together
//! with the bound that was used.

pub mod algebra;
pub mod cind;
pub mod cli;
pub mod group;
pub mod pseries;
pub mod weights;

mod error;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book;
