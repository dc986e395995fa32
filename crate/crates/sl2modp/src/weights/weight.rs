//! The weight Sym^r of the standard two-dimensional space, as explicit
//! matrices over F_q.
//!
//! Basis: monomials x^(r-i) y^i for i = 0..=r. A matrix (a, b; c, d) acts by
//! substitution x -> a x + c y, y -> b x + d y. The action extends to KZ by
//! letting the central element p act trivially, which is exactly what
//! [`Weight::sigma_kz`] implements through the KZ splitting.

use crate::algebra::{Fq, FqCtx, SparseMat, SparseVec};
use crate::group::GMat;
use crate::{Error, Result};

/// The symmetric power weight of degree r, 0 <= r <= p - 1.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Weight {
    ctx: FqCtx,
    r: u32,
}

impl Weight {
    pub fn new(ctx: FqCtx, r: u32) -> Result<Self> {
        if r >= ctx.p() {
            return Err(Error::Range(format!(
                "weight degree r = {r} must satisfy 0 <= r <= p - 1 = {}",
                ctx.p() - 1
            )));
        }
        Ok(Weight { ctx, r })
    }

    pub fn ctx(&self) -> &FqCtx {
        &self.ctx
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.r as usize + 1
    }

    /// Matrix of the action of a reduced invertible matrix on the monomial
    /// basis: column i is the image of x^(r-i) y^i.
    pub fn sigma_bar(&self, m: &[[Fq; 2]; 2]) -> Result<SparseMat> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det.is_zero() {
            return Err(Error::Domain(
                "weight action of a singular reduced matrix".into(),
            ));
        }
        let r = self.r as usize;
        let dim = self.dim();
        let (a, b, c, d) = (m[0][0], m[0][1], m[1][0], m[1][1]);
        let mut cols = Vec::with_capacity(dim);
        for i in 0..=r {
            // (a x + c y)^(r-i) * (b x + d y)^i, coefficients by y-degree.
            let first = binomial_expand(&self.ctx, a, c, r - i);
            let second = binomial_expand(&self.ctx, b, d, i);
            let mut coeffs = vec![self.ctx.zero(); dim];
            for (s, &cs) in first.iter().enumerate() {
                for (t, &ct) in second.iter().enumerate() {
                    coeffs[s + t] = coeffs[s + t] + cs * ct;
                }
            }
            let entries = coeffs
                .into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .collect();
            cols.push(SparseVec::from_entries(dim, entries));
        }
        Ok(SparseMat::from_cols(self.ctx, dim, cols))
    }

    /// Matrix of the action of an element of KZ: the central p-power acts
    /// trivially, the GL2(Zp) part acts through its mod-p reduction.
    pub fn sigma_kz(&self, g: &GMat) -> Result<SparseMat> {
        let (_, _, k) = g.kz_split().ok_or_else(|| {
            Error::OutOfSubgroup(format!("{g} is not in KZ"))
        })?;
        let reduced = k.reduce_mod_p(&self.ctx)?;
        self.sigma_bar(&reduced)
    }
}

/// Coefficients of (u x + v y)^n by y-degree: entry s is C(n, s) u^(n-s) v^s.
fn binomial_expand(ctx: &FqCtx, u: Fq, v: Fq, n: usize) -> Vec<Fq> {
    let mut out = Vec::with_capacity(n + 1);
    for s in 0..=n {
        let coeff = ctx.from_int(binomial_mod(ctx.p(), n, s));
        let term = coeff * pow_or_one(ctx, u, n - s) * pow_or_one(ctx, v, s);
        out.push(term);
    }
    out
}

/// x^n with the convention x^0 = 1 including x = 0.
fn pow_or_one(ctx: &FqCtx, x: Fq, n: usize) -> Fq {
    if n == 0 {
        ctx.one()
    } else {
        x.pow(n as u64)
    }
}

/// C(n, k) mod p for n < p (no carries, so the plain integer binomial
/// reduces faithfully).
fn binomial_mod(p: u32, n: usize, k: usize) -> i64 {
    debug_assert!(n < p as usize);
    let mut row = vec![1u64; 1];
    for _ in 0..n {
        let mut next = vec![1u64];
        for w in row.windows(2) {
            next.push((w[0] + w[1]) % u64::from(p));
        }
        next.push(1);
        row = next;
    }
    row[k] as i64 % i64::from(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PExact;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn weight(p: u32, k: usize, r: u32) -> Weight {
        Weight::new(FqCtx::new(p, k).unwrap(), r).unwrap()
    }

    /// Oracle: act on a polynomial by repeated multiplication of linear
    /// forms, no binomial formula involved.
    fn act_oracle(w: &Weight, m: &[[Fq; 2]; 2], coeffs: &[Fq]) -> Vec<Fq> {
        let ctx = *w.ctx();
        let r = w.r() as usize;
        let mul_linear = |poly: &[Fq], u: Fq, v: Fq| -> Vec<Fq> {
            // poly * (u x + v y) in y-degree coordinates of one higher
            // homogeneous degree.
            let mut out = vec![ctx.zero(); poly.len() + 1];
            for (s, &c) in poly.iter().enumerate() {
                out[s] = out[s] + c * u;
                out[s + 1] = out[s + 1] + c * v;
            }
            out
        };
        let mut acc = vec![ctx.zero(); r + 1];
        for (i, &ci) in coeffs.iter().enumerate() {
            // Image of x^(r-i) y^i: product of (r-i) copies of (a x + c y)
            // and i copies of (b x + d y).
            let mut term = vec![ctx.one()];
            for _ in 0..r - i {
                term = mul_linear(&term, m[0][0], m[1][0]);
            }
            for _ in 0..i {
                term = mul_linear(&term, m[0][1], m[1][1]);
            }
            for (s, &t) in term.iter().enumerate() {
                acc[s] = acc[s] + ci * t;
            }
        }
        acc
    }

    fn random_invertible(ctx: &FqCtx, rng: &mut ChaCha8Rng) -> [[Fq; 2]; 2] {
        let all: Vec<Fq> = ctx.enumerate().collect();
        loop {
            let pick = |rng: &mut ChaCha8Rng| all[rng.gen_range(0..all.len())];
            let m = [[pick(rng), pick(rng)], [pick(rng), pick(rng)]];
            if !(m[0][0] * m[1][1] - m[0][1] * m[1][0]).is_zero() {
                return m;
            }
        }
    }

    #[test]
    fn action_matches_polynomial_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for (p, k) in [(3u32, 1usize), (5, 2)] {
            let ctx = FqCtx::new(p, k).unwrap();
            for r in 0..p {
                let w = Weight::new(ctx, r).unwrap();
                for _ in 0..10 {
                    let m = random_invertible(&ctx, &mut rng);
                    let mat = w.sigma_bar(&m).unwrap();
                    // Check column images against the oracle.
                    for i in 0..w.dim() {
                        let mut basis = vec![ctx.zero(); w.dim()];
                        basis[i] = ctx.one();
                        let expect = act_oracle(&w, &m, &basis);
                        for (s, &e) in expect.iter().enumerate() {
                            assert_eq!(mat.get(s, i), e);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn action_is_a_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let w = weight(5, 2, 3);
        for _ in 0..15 {
            let m1 = random_invertible(w.ctx(), &mut rng);
            let m2 = random_invertible(w.ctx(), &mut rng);
            let prod = {
                let mul = |x: &[[Fq; 2]; 2], y: &[[Fq; 2]; 2]| -> [[Fq; 2]; 2] {
                    let e = |i: usize, j: usize| x[i][0] * y[0][j] + x[i][1] * y[1][j];
                    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
                };
                mul(&m1, &m2)
            };
            let lhs = w.sigma_bar(&prod).unwrap();
            let rhs = w.sigma_bar(&m1).unwrap().mul_mat(&w.sigma_bar(&m2).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn central_elements_act_by_power_of_the_scalar() {
        let w = weight(5, 1, 4);
        let ctx = *w.ctx();
        for lam in 1..5i64 {
            let l = ctx.from_int(lam);
            let m = [[l, ctx.zero()], [ctx.zero(), l]];
            let mat = w.sigma_bar(&m).unwrap();
            let expect = l.pow(4);
            for i in 0..w.dim() {
                assert_eq!(mat.get(i, i), expect);
            }
        }
    }

    #[test]
    fn kz_action_kills_the_center() {
        let p = 5;
        let w = weight(p, 2, 2);
        // p * Id and p^-2 * Id act as the identity.
        for e in [1i64, -2] {
            let g = GMat::scalar(PExact::p_power(p, e));
            let mat = w.sigma_kz(&g).unwrap();
            assert_eq!(mat, SparseMat::identity(*w.ctx(), w.dim()));
        }
        // Non-KZ elements are rejected.
        let a = GMat::diag(PExact::one(p), PExact::p_power(p, 1));
        assert!(matches!(w.sigma_kz(&a), Err(Error::OutOfSubgroup(_))));
    }

    #[test]
    fn weyl_acts_antidiagonally() {
        let p = 5;
        let w = weight(p, 1, 3);
        let mat = w.sigma_kz(&GMat::weyl(p)).unwrap();
        let ctx = w.ctx();
        // x^(r-i) y^i -> y^(r-i) (-x)^i = (-1)^i x^i y^(r-i).
        for i in 0..=3usize {
            for s in 0..=3usize {
                let expect = if s == 3 - i {
                    ctx.from_int(if i % 2 == 0 { 1 } else { -1 })
                } else {
                    ctx.zero()
                };
                assert_eq!(mat.get(s, i), expect);
            }
        }
    }

    #[test]
    fn degree_bounds_are_enforced() {
        let ctx = FqCtx::new(5, 1).unwrap();
        assert!(Weight::new(ctx, 4).is_ok());
        assert!(Weight::new(ctx, 5).is_err());
    }
}
