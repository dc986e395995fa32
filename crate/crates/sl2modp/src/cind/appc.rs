//! Routing arbitrary terms into the two canonical sectors.
//!
//! Any elementary term `[g, x^r]` or `[g, y^r]` of the induced space equals
//! a scalar multiple of a special-linear translate of one of the two sector
//! generators.  Which sector is determined by the parity of the valuation of
//! `det g`; the unit part of the determinant only contributes the scalar.
//! The decomposition below is verified exactly before it is returned.

use crate::algebra::{Fq, PExact};
use crate::cind::{canonical_generator, CIndElt, Sector};
use crate::group::{named_element, GMat};
use crate::weights::Weight;
use crate::{Error, Result};

/// Which extreme-weight vector the input term carries.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Monomial {
    /// `x^r`
    XR,
    /// `y^r`
    YR,
}

/// The verified routing of one term: `[g, w] = scalar . (h . generator)`.
#[derive(Clone, Debug)]
pub struct SectorDecomp {
    pub sector: Sector,
    /// Special-linear element moving the sector generator onto the term.
    pub h: GMat,
    pub scalar: Fq,
    /// `even`/`odd` valuation of the determinant, `square`/`nonsquare`
    /// residue of its unit part.
    pub case_label: String,
}

/// Decomposes `[g, w]` into the sector family and proves the answer by
/// exact comparison of both sides.
pub fn decompose(weight: Weight, g: &GMat, monomial: Monomial) -> Result<SectorDecomp> {
    let ctx = *weight.ctx();
    let p = ctx.p();
    // A term in `y^r` is the same term in `x^r` behind the Weyl reflection.
    let g = match monomial {
        Monomial::XR => g.clone(),
        Monomial::YR => g * &named_element(p, "s")?,
    };
    let det = g.det();
    if det.is_zero() {
        return Err(Error::Domain("decompose needs an invertible element".into()));
    }
    let a = det.valuation().expect("nonzero");
    let m = det * PExact::p_power(p, -a);
    let gs = {
        let scale_back = m.inv()? * PExact::p_power(p, -a);
        &g * &GMat::diag(scale_back, PExact::one(p))
    };
    debug_assert!(gs.in_sl2(), "unit-determinant factor must be special");

    let mbar = ctx.from_int(i64::from(m.residue_mod_p()?));
    let r = weight.r();
    let scalar_base = mbar.pow(u64::from(r));
    let (sector, h, scalar) = if a % 2 == 0 {
        let t = a / 2;
        let h = &gs * &GMat::torus(PExact::p_power(p, t))?;
        (Sector::Inf, h, scalar_base)
    } else {
        let t = (a - 1).div_euclid(2);
        let h = &(&gs * &GMat::torus(PExact::p_power(p, t))?) * &named_element(p, "s")?;
        let sign = if r % 2 == 0 {
            ctx.one()
        } else {
            -ctx.one()
        };
        (Sector::Zero, h, scalar_base * sign)
    };
    debug_assert!(h.in_sl2());

    // Prove it: both sides as exact elements.
    let mut w = vec![ctx.zero(); weight.dim()];
    w[0] = ctx.one();
    let lhs = CIndElt::elementary(weight, &g, &w)?;
    let rhs = canonical_generator(weight, sector)?
        .act(&h)?
        .scale(scalar);
    if lhs != rhs {
        return Err(Error::Domain(format!(
            "sector routing failed verification for det valuation {a}"
        )));
    }

    let square = legendre_is_square(p, m.residue_mod_p()?);
    let case_label = format!(
        "{}-{}",
        if a % 2 == 0 { "even" } else { "odd" },
        if square { "square" } else { "nonsquare" }
    );
    Ok(SectorDecomp {
        sector,
        h,
        scalar,
        case_label,
    })
}

fn legendre_is_square(p: u32, u: u32) -> bool {
    let mut acc = 1u64;
    let mut base = u64::from(u % p);
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % u64::from(p);
        }
        base = base * base % u64::from(p);
        e >>= 1;
    }
    acc == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FqCtx;
    use crate::group::smallest_non_residue;

    fn weight(p: u32, r: u32) -> Weight {
        Weight::new(FqCtx::new(p, 1).unwrap(), r).unwrap()
    }

    /// Re-verifies the claimed equality from scratch.
    fn check(weight: Weight, g: &GMat, monomial: Monomial, d: &SectorDecomp) {
        let ctx = weight.ctx();
        let mut w = vec![ctx.zero(); weight.dim()];
        let slot = match monomial {
            Monomial::XR => 0,
            Monomial::YR => weight.r() as usize,
        };
        w[slot] = ctx.one();
        let lhs = CIndElt::elementary(weight, g, &w).unwrap();
        let rhs = canonical_generator(weight, d.sector)
            .unwrap()
            .act(&d.h)
            .unwrap()
            .scale(d.scalar);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn all_four_determinant_cases_are_covered() {
        let p = 5;
        let w = weight(p, 3);
        let u = smallest_non_residue(p);
        // det valuations 0 and 1, unit parts 1 and a non-residue.
        let samples = [
            GMat::identity(p),
            GMat::diag(PExact::one(p), PExact::p_power(p, 1)),
            GMat::diag(PExact::from_int(p, i64::from(u)), PExact::one(p)),
            &GMat::diag(PExact::from_int(p, i64::from(u)), PExact::one(p))
                * &GMat::diag(PExact::one(p), PExact::p_power(p, 1)),
        ];
        let mut seen = std::collections::BTreeSet::new();
        for g in &samples {
            let d = decompose(w, g, Monomial::XR).unwrap();
            check(w, g, Monomial::XR, &d);
            seen.insert(d.case_label.clone());
        }
        assert_eq!(seen.len(), 4, "labels seen: {seen:?}");
    }

    #[test]
    fn sector_follows_determinant_parity() {
        let p = 3;
        let w = weight(p, 2);
        for (g, want) in [
            (named_element(p, "alpha").unwrap(), Sector::Zero),
            (named_element(p, "alpha0").unwrap(), Sector::Inf),
            (named_element(p, "s").unwrap(), Sector::Inf),
            (
                GMat::diag(PExact::p_power(p, -3), PExact::one(p)),
                Sector::Zero,
            ),
        ] {
            let d = decompose(w, &g, Monomial::XR).unwrap();
            assert_eq!(d.sector, want);
            assert!(d.h.in_sl2());
            check(w, &g, Monomial::XR, &d);
        }
    }

    #[test]
    fn lowest_weight_terms_route_through_the_reflection() {
        let p = 5;
        let w = weight(p, 2);
        for name in ["id", "alpha", "beta0", "u_pinv"] {
            let g = named_element(p, name).unwrap();
            let d = decompose(w, &g, Monomial::YR).unwrap();
            check(w, &g, Monomial::YR, &d);
        }
    }

    #[test]
    fn big_product_elements_route_exactly() {
        let p = 3;
        let w = weight(p, 1);
        let g = &(&named_element(p, "alpha").unwrap() * &named_element(p, "u1").unwrap())
            * &(&named_element(p, "alpha0").unwrap() * &named_element(p, "l_p").unwrap());
        for m in [Monomial::XR, Monomial::YR] {
            let d = decompose(w, &g, m).unwrap();
            check(w, &g, m, &d);
        }
        // Degenerate input is rejected.
        let z = GMat::new(
            p,
            [
                [PExact::one(p), PExact::one(p)],
                [PExact::one(p), PExact::one(p)],
            ],
        );
        assert!(decompose(w, &z, Monomial::XR).is_err());
    }
}
