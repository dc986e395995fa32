//! Doctest glue: every chapter of the book is attached here as documentation
//! so that its code blocks run under `cargo test`. The book and the library
//! cannot drift apart without a test failure.

#[doc = include_str!("../book/src/introduction.md")]
mod introduction {}

#[doc = include_str!("../book/src/exact-scalars.md")]
mod exact_scalars {}

#[doc = include_str!("../book/src/tree-and-group.md")]
mod tree_and_group {}

#[doc = include_str!("../book/src/weights-and-characters.md")]
mod weights_and_characters {}

#[doc = include_str!("../book/src/compact-induction.md")]
mod compact_induction {}

#[doc = include_str!("../book/src/supersingular.md")]
mod supersingular {}

#[doc = include_str!("../book/src/function-models.md")]
mod function_models {}

#[doc = include_str!("../book/src/harness.md")]
mod harness {}
