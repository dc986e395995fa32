//! Function models of tamely induced representations.
//!
//! A tame character of the diagonal torus induces a representation on
//! locally constant functions. This module realizes that space two ways:
//!
//! * [`JFunc`]: functions on Qp in a finite valuation window with a
//!   certified tail law, carrying the exact group action transported
//!   through the coset coordinate (the generic model, any tame
//!   character);
//! * [`P1Func`]: plain functions on the projective line at finite
//!   resolution (the trivial-character model, where the representation
//!   is function inflation and constants split off).
//!
//! On top of the models sit the machine-checked identity batteries
//! ([`identity_suite`]) and the span-growth experiments
//! ([`generation_check`]).
mod generate;
mod identities;
mod jfunc;
mod p1model;

pub use generate::{generation_check, restrict_gl2, GenReport};
pub use identities::{
    identity_suite, ramified_identity_checks, unramified_identity_checks, IdentityCheck,
};
pub use jfunc::{ball_shape, make_basis, tail_shape, JFunc};
pub use p1model::{seulquo_haar_check, sp_invariants, P1Func, SpInvariants};
