//! Named group elements, generator lists, and word enumeration.
//!
//! Checks that quantify over "all words up to length L" share this single
//! enumeration, so suites and tests agree on which group elements were
//! actually visited.

use crate::algebra::PExact;
use crate::group::GMat;
use crate::{Error, Result};

/// A finite list of labelled generators.
#[derive(Clone, Debug)]
pub struct Alphabet {
    letters: Vec<(String, GMat)>,
}

impl Alphabet {
    pub fn new(letters: Vec<(String, GMat)>) -> Self {
        Alphabet { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[(String, GMat)] {
        &self.letters
    }
}

/// Elements addressable by name in configuration and reports.
///
/// * `id`: identity
/// * `s`: Weyl element (0, -1; 1, 0)
/// * `alpha0`: diag(p, 1/p)
/// * `alpha0_inv`: diag(1/p, p)
/// * `beta0`: (0, 1/p; -p, 0)
/// * `alpha`: diag(1, p)
/// * `u1`: upper unipotent with entry 1
/// * `u_pinv`: upper unipotent with entry 1/p
/// * `l_p`: lower unipotent with entry p
/// * `t_1p`: diag(1+p, 1/(1+p))
pub fn named_element(p: u32, name: &str) -> Result<GMat> {
    let el = match name {
        "id" => GMat::identity(p),
        "s" => GMat::weyl(p),
        "alpha0" => GMat::torus(PExact::p_power(p, 1))?,
        "alpha0_inv" => GMat::torus(PExact::p_power(p, -1))?,
        "beta0" => GMat::new(
            p,
            [
                [PExact::zero(p), PExact::p_power(p, -1)],
                [-PExact::p_power(p, 1), PExact::zero(p)],
            ],
        ),
        "alpha" => GMat::diag(PExact::one(p), PExact::p_power(p, 1)),
        "u1" => GMat::upper(PExact::one(p)),
        "u_pinv" => GMat::upper(PExact::p_power(p, -1)),
        "l1" => GMat::lower(PExact::one(p)),
        "l_p" => GMat::lower(PExact::p_power(p, 1)),
        "t_1p" => GMat::torus(PExact::from_int(p, 1 + i64::from(p)))?,
        other => return Err(Error::UnknownName(format!("group element {other:?}"))),
    };
    Ok(el)
}

/// Default SL2 exploration alphabet: Weyl element, both diagonal p-moves,
/// and two unipotents (one shifting depth).
pub fn sl2_alphabet(p: u32) -> Alphabet {
    let names = ["s", "alpha0", "alpha0_inv", "u1", "u_pinv"];
    Alphabet::new(
        names
            .iter()
            .map(|n| ((*n).to_string(), named_element(p, n).expect("known name")))
            .collect(),
    )
}

/// Default GL2 exploration alphabet: the SL2 letters plus diag(1, p).
pub fn gl2_alphabet(p: u32) -> Alphabet {
    let mut letters = sl2_alphabet(p).letters.clone();
    letters.push(("alpha".to_string(), named_element(p, "alpha").expect("known name")));
    Alphabet::new(letters)
}

/// GL2 alphabet extended by diag(u, 1) for the smallest quadratic
/// non-residue u mod p, so determinants reach all four square classes.
pub fn gl2_alphabet_extended(p: u32) -> Alphabet {
    let u = smallest_non_residue(p);
    let mut letters = gl2_alphabet(p).letters.clone();
    letters.push((
        format!("d{u}"),
        GMat::diag(PExact::from_int(p, i64::from(u)), PExact::one(p)),
    ));
    Alphabet::new(letters)
}

/// Topological generators of the integral special linear group: the two
/// elementary shears.  They generate the integral points of the special
/// linear group over the rationals densely, which suffices whenever the
/// action under test is locally constant.
pub fn max_compact_sl2_gens(p: u32) -> Vec<(String, GMat)> {
    ["u1", "l1"]
        .iter()
        .map(|n| (n.to_string(), named_element(p, n).expect("known name")))
        .collect()
}

/// Topological generators of the pro-p Iwahori subgroup of SL2(Zp):
/// upper 1, lower p, and the torus unit 1 + p.
pub fn pro_p_iwahori_sl2_gens(p: u32) -> Vec<(String, GMat)> {
    ["u1", "l_p", "t_1p"]
        .iter()
        .map(|n| ((*n).to_string(), named_element(p, n).expect("known name")))
        .collect()
}

/// Topological generators of the pro-p Iwahori subgroup of GL2(Zp): the
/// special-linear set together with the diagonal unit diag(1 + p, 1).
pub fn pro_p_iwahori_gl2_gens(p: u32) -> Vec<(String, GMat)> {
    let mut gens = pro_p_iwahori_sl2_gens(p);
    gens.push((
        "d_1p".to_string(),
        GMat::diag(PExact::from_int(p, 1 + i64::from(p)), PExact::one(p)),
    ));
    gens
}

/// The finite torus diag(λ, 1/λ) for λ in 1..p, labelled by λ.
pub fn torus_unit_gens(p: u32) -> Vec<(String, GMat)> {
    (1..i64::from(p))
        .map(|l| {
            (
                format!("t{l}"),
                GMat::torus(PExact::from_int(p, l)).expect("unit is invertible"),
            )
        })
        .collect()
}

/// Integer representatives of the units modulo p^m, in increasing order.
pub fn unit_digit_reps(p: u32, m: u32) -> Vec<i64> {
    let bound = i64::from(p).pow(m);
    (1..bound).filter(|x| x % i64::from(p) != 0).collect()
}

/// The smallest quadratic non-residue modulo p.
pub fn smallest_non_residue(p: u32) -> u32 {
    let exp = (p - 1) / 2;
    let pow_mod = |mut b: u64, mut e: u32, m: u64| -> u64 {
        let mut acc = 1u64;
        b %= m;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % m;
            }
            b = b * b % m;
            e >>= 1;
        }
        acc
    };
    (2..p)
        .find(|&u| pow_mod(u64::from(u), exp, u64::from(p)) != 1)
        .expect("a non-residue exists for every odd prime")
}

/// All products of at most `max_len` letters, labelled `e` (empty) or
/// `l1.l2...`; ordered by length, then by letter indices.
pub fn words_up_to(alphabet: &Alphabet, max_len: usize) -> Vec<(String, GMat)> {
    let letters = alphabet.letters();
    assert!(!letters.is_empty(), "empty alphabet");
    let p = letters[0].1.p();
    let mut out: Vec<(String, GMat)> = vec![("e".to_string(), GMat::identity(p))];
    let mut prev: Vec<(String, GMat)> = out.clone();
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(prev.len() * letters.len());
        for (label, g) in &prev {
            for (lname, l) in letters {
                let nlabel = if label == "e" {
                    lname.clone()
                } else {
                    format!("{label}.{lname}")
                };
                next.push((nlabel, g * l));
            }
        }
        out.extend(next.iter().cloned());
        prev = next;
    }
    out
}
