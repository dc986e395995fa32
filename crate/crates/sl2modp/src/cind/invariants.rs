//! Fixed vectors and diagonal characters in quotient models.

use std::collections::BTreeSet;

use crate::algebra::{SparseMat, SparseVec};
use crate::cind::{CIndElt, QuotientCtx};
use crate::group::GMat;
use crate::weights::{discrete_log_mod_p, primitive_root};
use crate::{Error, Result};

/// How a vector relates to a group element in a finite-radius model.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum InvStatus {
    /// `g v = v` as elements, before any quotient.
    ExactFixed,
    /// `g v - v` is a recorded relation: fixed in the quotient.
    FixedModImage,
    /// Not fixed within this model; says nothing about larger radii.
    NotFixedAtBound,
}

impl InvStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            InvStatus::ExactFixed => "exact_fixed",
            InvStatus::FixedModImage => "fixed_mod_image",
            InvStatus::NotFixedAtBound => "not_fixed_at_bound",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum VertexParity {
    Even,
    Odd,
}

impl VertexParity {
    fn matches(self, parity: u8) -> bool {
        match self {
            VertexParity::Even => parity == 0,
            VertexParity::Odd => parity == 1,
        }
    }
}

/// Status of `v` against each named generator.
pub fn invariance_report(
    quotient: &QuotientCtx,
    v: &CIndElt,
    gens: &[(String, GMat)],
) -> Result<Vec<(String, InvStatus)>> {
    let mut out = Vec::with_capacity(gens.len());
    for (name, g) in gens {
        let diff = v.act(g)?.sub(v);
        let status = if diff.is_zero() {
            InvStatus::ExactFixed
        } else if diff.max_dist() <= quotient.depth() && quotient.reduce(&diff)?.is_zero() {
            InvStatus::FixedModImage
        } else {
            InvStatus::NotFixedAtBound
        };
        out.push((name.clone(), status));
    }
    Ok(out)
}

/// The exponent `a` with `diag(l, 1/l) . v = l^a v` in the quotient for
/// every unit `l`, as a residue mod p - 1.
///
/// Fails with `NotEigen` when some diagonal element does not act by a scalar
/// on the class of `v`, or the scalars are not the powers of a single
/// exponent.
pub fn iwahori_exponent(quotient: &QuotientCtx, v: &CIndElt) -> Result<u32> {
    let p = quotient.weight().ctx().p();
    let base = quotient.reduce(v)?;
    if base.is_zero() {
        return Err(Error::NotEigen(
            "vector reduces to zero in the quotient".into(),
        ));
    }
    let (lead_idx, lead) = base.leading().expect("nonzero");
    let mut scalars = Vec::with_capacity(p as usize - 1);
    for (name, t) in crate::group::torus_unit_gens(p) {
        let moved = quotient.reduce(&v.act(&t)?)?;
        let c = match moved.get(lead_idx) {
            Some(c) => c * lead.inv()?,
            None => {
                return Err(Error::NotEigen(format!(
                    "{name} kills the leading coordinate of the class"
                )))
            }
        };
        if moved != base.scale(c) {
            return Err(Error::NotEigen(format!(
                "{name} does not act by a scalar on the class"
            )));
        }
        scalars.push((name, c));
    }
    // The scalar at a primitive root determines the exponent; the rest of
    // the units must agree with it.
    let g = primitive_root(p);
    let to_int = |c: crate::algebra::Fq| -> Result<u32> {
        let coeffs = c.coeffs();
        if coeffs.iter().skip(1).any(|&x| x != 0) {
            return Err(Error::NotEigen(
                "diagonal scalar lies outside the prime field".into(),
            ));
        }
        Ok(coeffs[0])
    };
    let mut exp = None;
    for (name, c) in &scalars {
        let lam: u32 = name
            .strip_prefix('t')
            .and_then(|s| s.parse().ok())
            .expect("torus generator names are t<l>");
        let c = to_int(*c)?;
        if lam == g {
            exp = Some(discrete_log_mod_p(p, g, c).ok_or_else(|| {
                Error::NotEigen(format!("scalar {c} is not a power of {g} mod {p}"))
            })?);
        }
    }
    let exp = exp.expect("primitive root appears among the units");
    for (name, c) in &scalars {
        let lam: u64 = name
            .strip_prefix('t')
            .and_then(|s| s.parse().ok())
            .expect("torus generator names are t<l>");
        let c = to_int(*c)?;
        let mut want = 1u64;
        for _ in 0..exp {
            want = want * lam % u64::from(p);
        }
        if u64::from(c) != want {
            return Err(Error::NotEigen(format!(
                "unit {lam} acts by {c}, exponent {exp} predicts {want}"
            )));
        }
    }
    Ok(exp % (p - 1))
}

/// Matrix of the action of `g` on the truncated quotient, over the free
/// coordinates.  The element must map the depth ball into itself, which
/// holds for anything fixing the origin.
pub fn quotient_action_matrix(quotient: &QuotientCtx, g: &GMat) -> Result<SparseMat> {
    let free = quotient.free_coords();
    let pos: std::collections::BTreeMap<usize, usize> =
        free.iter().enumerate().map(|(n, &i)| (i, n)).collect();
    let ctx = *quotient.weight().ctx();
    let mut cols = Vec::with_capacity(free.len());
    for &i in &free {
        let basis_elt = quotient.lift(&SparseVec::unit(quotient.inner_dim(), i, ctx.one()))?;
        let moved = basis_elt.act(g)?;
        if moved.max_dist() > quotient.depth() {
            return Err(Error::SupportOverflow(format!(
                "action moves a basis vector to distance {}, model depth is {}",
                moved.max_dist(),
                quotient.depth()
            )));
        }
        let red = quotient.reduce(&moved)?;
        let entries: Result<Vec<(usize, crate::algebra::Fq)>> = red
            .iter()
            .map(|(j, c)| {
                pos.get(&j).map(|&n| (n, c)).ok_or_else(|| {
                    Error::Shape("canonical representative touches a pivot coordinate".into())
                })
            })
            .collect();
        cols.push(SparseVec::from_entries(free.len(), entries?));
    }
    Ok(SparseMat::from_cols(ctx, free.len(), cols))
}

/// Dimension of the joint fixed space of the given elements on the quotient,
/// optionally restricted to the classes supported on one vertex parity.
///
/// The elements must preserve parity for the restriction to be meaningful;
/// this is checked.
pub fn fixed_dim_in_quotient(
    quotient: &QuotientCtx,
    gens: &[GMat],
    parity: Option<VertexParity>,
) -> Result<usize> {
    let free = quotient.free_coords();
    let dim = quotient.weight().dim();
    let selected: Vec<usize> = match parity {
        None => (0..free.len()).collect(),
        Some(par) => free
            .iter()
            .enumerate()
            .filter(|(_, &i)| par.matches(quotient.ball().vertex(i / dim).parity()))
            .map(|(n, _)| n)
            .collect(),
    };
    let sel_set: BTreeSet<usize> = selected.iter().copied().collect();
    let sel_pos: std::collections::BTreeMap<usize, usize> =
        selected.iter().enumerate().map(|(n, &i)| (i, n)).collect();
    let mut blocks = Vec::with_capacity(gens.len());
    for g in gens {
        let full = quotient_action_matrix(quotient, g)?;
        let mut cols = Vec::with_capacity(selected.len());
        for &j in &selected {
            let mut entries = Vec::new();
            for (i, c) in full.col(j).iter() {
                if let Some(&n) = sel_pos.get(&i) {
                    entries.push((n, c));
                } else if sel_set.contains(&j) {
                    return Err(Error::Shape(
                        "action does not preserve the parity block".into(),
                    ));
                }
            }
            cols.push(SparseVec::from_entries(selected.len(), entries));
        }
        blocks.push(SparseMat::from_cols(
            *quotient.weight().ctx(),
            selected.len(),
            cols,
        ));
    }
    let refs: Vec<&SparseMat> = blocks.iter().collect();
    Ok(SparseMat::fixed_space(&refs)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FqCtx;
    use crate::cind::QuotientCtx;
    use crate::group::{named_element, pro_p_iwahori_sl2_gens, Vertex};
    use crate::weights::Weight;

    fn weight(p: u32, r: u32) -> Weight {
        Weight::new(FqCtx::new(p, 1).unwrap(), r).unwrap()
    }

    fn spike(w: Weight, v: &Vertex, i: usize) -> CIndElt {
        let mut coeff = vec![w.ctx().zero(); w.dim()];
        coeff[i] = w.ctx().one();
        CIndElt::from_vertex(w, v, &coeff).unwrap()
    }

    #[test]
    fn origin_spike_is_exactly_pro_p_fixed() {
        // The highest-weight spike at the origin is fixed by the pro-p
        // Iwahori generators before any quotient is taken.
        let w = weight(3, 1);
        let q = QuotientCtx::build(w, w.ctx().zero(), 2, 1).unwrap();
        let v = spike(w, &Vertex::origin(), 0);
        let report = invariance_report(&q, &v, &pro_p_iwahori_sl2_gens(3)).unwrap();
        for (name, status) in &report {
            assert_eq!(*status, InvStatus::ExactFixed, "generator {name}");
        }
        // The Weyl reflection does not fix it exactly for r >= 1.
        let s = [("s".to_string(), named_element(3, "s").unwrap())];
        let rep = invariance_report(&q, &v, &s).unwrap();
        assert_ne!(rep[0].1, InvStatus::ExactFixed);
    }

    #[test]
    fn diagonal_exponent_of_the_highest_weight_line() {
        // diag(l, 1/l) scales x^r by l^r at the origin.
        for r in [0u32, 1, 2, 3] {
            let w = weight(5, r);
            let q = QuotientCtx::build(w, w.ctx().zero(), 2, 1).unwrap();
            let v = spike(w, &Vertex::origin(), 0);
            assert_eq!(iwahori_exponent(&q, &v).unwrap(), r % 4);
        }
        // The lowest-weight line scales by l^{-r}.
        let w = weight(5, 3);
        let q = QuotientCtx::build(w, w.ctx().zero(), 2, 1).unwrap();
        let v = spike(w, &Vertex::origin(), 3);
        assert_eq!(iwahori_exponent(&q, &v).unwrap(), (4 - 3) % 4);
    }

    #[test]
    fn sum_of_weight_lines_is_not_an_eigenvector() {
        // x + y mixes the exponents 1 and -1, distinct mod p - 1 for p = 5.
        let w = weight(5, 1);
        let q = QuotientCtx::build(w, w.ctx().zero(), 2, 1).unwrap();
        let v = spike(w, &Vertex::origin(), 0).add(&spike(w, &Vertex::origin(), 1));
        assert!(matches!(
            iwahori_exponent(&q, &v),
            Err(Error::NotEigen(_))
        ));
    }

    #[test]
    fn action_matrix_respects_composition() {
        let w = weight(3, 1);
        let q = QuotientCtx::build(w, w.ctx().zero(), 2, 1).unwrap();
        let u = named_element(3, "u1").unwrap();
        let s = named_element(3, "s").unwrap();
        let mu = quotient_action_matrix(&q, &u).unwrap();
        let ms = quotient_action_matrix(&q, &s).unwrap();
        let mus = quotient_action_matrix(&q, &(&u * &s)).unwrap();
        let prod = mu.mul_mat(&ms);
        for j in 0..prod.cols() {
            assert_eq!(prod.col(j), mus.col(j));
        }
    }

    #[test]
    fn trivial_weight_fixed_lines_split_by_parity() {
        // Degree zero, lambda = 0: compact-fixed classes concentrate on the
        // even block and vanish on the odd block.
        let w = weight(3, 0);
        let q = QuotientCtx::build(w, w.ctx().zero(), 3, 1).unwrap();
        let gens = [
            named_element(3, "u1").unwrap(),
            named_element(3, "l1").unwrap(),
        ];
        let even = fixed_dim_in_quotient(&q, &gens, Some(VertexParity::Even)).unwrap();
        let odd = fixed_dim_in_quotient(&q, &gens, Some(VertexParity::Odd)).unwrap();
        let total = fixed_dim_in_quotient(&q, &gens, None).unwrap();
        assert_eq!(even + odd, total);
        assert_eq!(even, 1);
        assert_eq!(odd, 0);
    }
}
