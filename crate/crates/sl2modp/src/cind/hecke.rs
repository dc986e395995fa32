//! The spherical Hecke operator on the induced space.

use crate::algebra::{PExact, SparseMat, SparseVec};
use crate::cind::CIndElt;
use crate::group::{Ball, GMat};
use crate::weights::Weight;
use crate::{Error, Result};

/// The convolution operator attached to the double class of `diag(1, p)`.
///
/// On an elementary term it spreads mass to the p + 1 neighboring vertices:
///
/// ```text
/// T [c, x^(r-i) y^i] = sum_{l in F_p} l^i [c g(l), x^r]  +  d_{i,r} [c h, y^r]
/// ```
///
/// with `g(l) = (1, l; 0, p)^(-1)`, `h = diag(1/p, 1)` and the convention
/// `0^0 = 1`.  The closed form is pinned by two facts checked in the tests:
/// the operator commutes with every left translation, and its value on the
/// degree-zero weight is the unweighted neighbor sum.
#[derive(Clone, Debug)]
pub struct HeckeOp {
    weight: Weight,
    /// `(1, l; 0, p)^(-1)` for l = 0 .. p-1, then `diag(1/p, 1)`.
    shifts: Vec<GMat>,
}

impl HeckeOp {
    pub fn new(weight: Weight) -> Self {
        let p = weight.ctx().p();
        let mut shifts = Vec::with_capacity(p as usize + 1);
        for l in 0..p {
            let g = GMat::new(
                p,
                [
                    [
                        PExact::one(p),
                        PExact::new(p, (-(l as i64)).into(), 1.into(), -1).expect("unit or zero"),
                    ],
                    [PExact::zero(p), PExact::p_power(p, -1)],
                ],
            );
            shifts.push(g);
        }
        shifts.push(GMat::diag(PExact::p_power(p, -1), PExact::one(p)));
        HeckeOp { weight, shifts }
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }

    /// Applies the operator exactly; the support grows by at most one ring.
    pub fn apply(&self, f: &CIndElt) -> Result<CIndElt> {
        assert_eq!(self.weight, f.weight(), "weight mismatch");
        let ctx = self.weight.ctx();
        let p = ctx.p();
        let r = self.weight.r() as usize;
        let dim = self.weight.dim();
        let mut out = CIndElt::zero(self.weight);
        for (v, w) in f.support() {
            let c = v.matrix(p);
            for l in 0..p as usize {
                // sum_i w_i l^i, with l^0 = 1 even at l = 0
                let lam = ctx.from_int(l as i64);
                let mut s = ctx.zero();
                let mut pw = ctx.one();
                for &wi in w {
                    s = s + wi * pw;
                    pw = pw * lam;
                }
                if s.is_zero() {
                    continue;
                }
                let mut coeff = vec![ctx.zero(); dim];
                coeff[0] = s;
                let term = CIndElt::elementary(self.weight, &(&c * &self.shifts[l]), &coeff)?;
                out = out.add(&term);
            }
            if !w[r].is_zero() {
                let mut coeff = vec![ctx.zero(); dim];
                coeff[r] = w[r];
                let term =
                    CIndElt::elementary(self.weight, &(&c * &self.shifts[p as usize]), &coeff)?;
                out = out.add(&term);
            }
        }
        Ok(out)
    }

    /// `T^n`, exact; the support grows by at most `n` rings.
    pub fn apply_power(&self, f: &CIndElt, n: u32) -> Result<CIndElt> {
        let mut out = f.clone();
        for _ in 0..n {
            out = self.apply(&out)?;
        }
        Ok(out)
    }

    /// Matrix of the operator from the coordinates of the sub-ball of the
    /// given radius into the coordinates of the full ball.  The full ball
    /// must be at least one ring larger.
    pub fn matrix(&self, ball: &Ball, inner_radius: u32) -> Result<SparseMat> {
        if inner_radius + 1 > ball.radius() {
            return Err(Error::Shape(format!(
                "ball radius {} cannot hold images from radius {}",
                ball.radius(),
                inner_radius
            )));
        }
        let dim = self.weight.dim();
        let inner = ball.sphere(inner_radius).end;
        let mut cols = Vec::with_capacity(inner * dim);
        for idx in 0..inner {
            for i in 0..dim {
                let mut w = vec![self.weight.ctx().zero(); dim];
                w[i] = self.weight.ctx().one();
                let e = CIndElt::from_vertex(self.weight, ball.vertex(idx), &w)?;
                cols.push(self.apply(&e)?.to_coords(ball)?);
            }
        }
        Ok(SparseMat::from_cols(
            *self.weight.ctx(),
            ball.len() * dim,
            cols,
        ))
    }

    /// Matrix of `T - lambda` with the same index conventions as `matrix`.
    pub fn shifted_matrix(
        &self,
        ball: &Ball,
        inner_radius: u32,
        lambda: crate::algebra::Fq,
    ) -> Result<SparseMat> {
        let t = self.matrix(ball, inner_radius)?;
        let dim = self.weight.dim();
        let inner = ball.sphere(inner_radius).end * dim;
        let mut cols = Vec::with_capacity(inner);
        for j in 0..inner {
            let id_col = SparseVec::unit(ball.len() * dim, j, lambda);
            cols.push(t.col(j).add_scaled(&id_col, -self.weight.ctx().one()));
        }
        Ok(SparseMat::from_cols(
            *self.weight.ctx(),
            ball.len() * dim,
            cols,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FqCtx;
    use crate::group::{named_element, Vertex};

    fn weight(p: u32, r: u32) -> Weight {
        Weight::new(FqCtx::new(p, 1).unwrap(), r).unwrap()
    }

    fn basis_elt(w: Weight, v: &Vertex, i: usize) -> CIndElt {
        let mut coeff = vec![w.ctx().zero(); w.dim()];
        coeff[i] = w.ctx().one();
        CIndElt::from_vertex(w, v, &coeff).unwrap()
    }

    #[test]
    fn degree_zero_is_the_neighbor_sum() {
        // For the trivial weight the operator sends the origin spike to the
        // sum over its p + 1 neighbors with coefficient one.
        let w = weight(3, 0);
        let t = HeckeOp::new(w);
        let out = t.apply(&basis_elt(w, &Vertex::origin(), 0)).unwrap();
        let nbrs = Vertex::origin().neighbors(3);
        assert_eq!(out.support_size(), 4);
        for n in &nbrs {
            assert_eq!(out.coeff(n).unwrap(), &[w.ctx().one()]);
        }
    }

    #[test]
    fn commutes_with_left_translation() {
        let w = weight(5, 2);
        let t = HeckeOp::new(w);
        let f = basis_elt(w, &Vertex::origin(), 1).add(&CIndElt::elementary(
            w,
            &named_element(5, "beta0").unwrap(),
            &[w.ctx().from_int(2), w.ctx().zero(), w.ctx().one()],
        )
        .unwrap());
        for name in ["s", "alpha0", "u1", "u_pinv", "alpha", "beta0"] {
            let g = named_element(5, name).unwrap();
            let lhs = t.apply(&f.act(&g).unwrap()).unwrap();
            let rhs = t.apply(&f).unwrap().act(&g).unwrap();
            assert_eq!(lhs, rhs, "translation by {name} does not commute");
        }
        // A random-ish product far from the compact subgroup.
        let g = &(&named_element(5, "alpha0").unwrap() * &named_element(5, "u1").unwrap())
            * &named_element(5, "s").unwrap();
        assert_eq!(
            t.apply(&f.act(&g).unwrap()).unwrap(),
            t.apply(&f).unwrap().act(&g).unwrap()
        );
    }

    #[test]
    fn linear_and_parity_exchanging() {
        let w = weight(3, 2);
        let t = HeckeOp::new(w);
        let a = basis_elt(w, &Vertex::origin(), 0);
        let b = CIndElt::elementary(w, &named_element(3, "alpha0").unwrap(), &[
            w.ctx().one(),
            w.ctx().from_int(2),
            w.ctx().zero(),
        ])
        .unwrap();
        let c = w.ctx().from_int(2);
        assert_eq!(
            t.apply(&a.add(&b.scale(c))).unwrap(),
            t.apply(&a).unwrap().add(&t.apply(&b).unwrap().scale(c))
        );
        // Even support maps to odd support and back.
        let ta = t.apply(&a).unwrap();
        assert!(ta.support().all(|(v, _)| v.parity() == 1));
        let tta = t.apply(&ta).unwrap();
        assert!(tta.support().all(|(v, _)| v.parity() == 0));
        assert!(tta.max_dist() <= 2);
    }

    #[test]
    fn matrix_agrees_with_direct_application() {
        let w = weight(3, 1);
        let t = HeckeOp::new(w);
        let ball = Ball::build(3, 2);
        let m = t.matrix(&ball, 1).unwrap();
        assert_eq!(m.rows(), ball.len() * 2);
        assert_eq!(m.cols(), ball.sphere(1).end * 2);
        for idx in 0..ball.sphere(1).end {
            for i in 0..2 {
                let e = basis_elt(w, ball.vertex(idx), i);
                let direct = t.apply(&e).unwrap().to_coords(&ball).unwrap();
                let via = m.col(idx * 2 + i);
                assert_eq!(&direct, via);
            }
        }
        // T - 2 differs from T exactly on the diagonal.
        let lam = w.ctx().from_int(2);
        let shifted = t.shifted_matrix(&ball, 1, lam).unwrap();
        for j in 0..shifted.cols() {
            assert_eq!(shifted.get(j, j), m.get(j, j) - lam);
        }
    }

    #[test]
    fn images_stay_on_neighboring_vertices() {
        let w = weight(5, 4);
        let t = HeckeOp::new(w);
        let v = Vertex::origin().neighbors(5)[3].clone();
        for i in 0..w.dim() {
            let out = t.apply(&basis_elt(w, &v, i)).unwrap();
            let nbrs = v.neighbors(5);
            for (sv, _) in out.support() {
                assert!(nbrs.contains(sv), "image vertex {sv} is not a neighbor");
            }
        }
    }
}
