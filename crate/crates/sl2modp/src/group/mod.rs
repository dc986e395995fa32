//! Matrix group elements, tree vertices, and word enumeration.

mod gmat;
mod vertex;
mod words;

pub use gmat::GMat;
pub use vertex::{kz_factor, vertex_of, Ball, Vertex};
pub use words::{
    gl2_alphabet, gl2_alphabet_extended, max_compact_sl2_gens, named_element,
    pro_p_iwahori_gl2_gens, pro_p_iwahori_sl2_gens, sl2_alphabet, smallest_non_residue,
    torus_unit_gens, unit_digit_reps, words_up_to, Alphabet,
};
