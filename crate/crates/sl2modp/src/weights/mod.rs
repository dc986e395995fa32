//! Serre weights and tame smooth characters.

mod character;
mod weight;

pub use character::{discrete_log_mod_p, primitive_root, TameChar};
pub use weight::Weight;
