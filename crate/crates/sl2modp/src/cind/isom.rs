//! The supersingular family for the special linear group: canonical models,
//! complete invariants, and the isomorphism decision.
//!
//! For each degree `r` the zero-eigenvalue quotient splits under the special
//! linear group into the parts supported on even and odd vertices.  The even
//! part is generated by the class of `[1, x^r]`, the odd part by the class
//! of `[diag(1, p), y^r]`.  Two members of the family are classified by the
//! pair
//!
//! * the exponent of the diagonal torus on the canonical generator, and
//! * whether the part contains a nonzero class fixed by the integral
//!   subgroup.
//!
//! The decision procedure computes both invariants from the finite models
//! and cross-checks the outcome against the closed-form rule it implies.

use std::fmt;

use crate::algebra::FqCtx;
use crate::cind::{
    fixed_dim_in_quotient, invariance_report, iwahori_exponent, CIndElt, InvStatus, QuotientCtx,
    VertexParity,
};
use crate::group::{max_compact_sl2_gens, named_element, pro_p_iwahori_sl2_gens, Vertex};
use crate::weights::Weight;
use crate::{Error, Result};

/// Which vertex class carries the canonical generator.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sector {
    /// Even vertices; generator at the origin.
    Inf,
    /// Odd vertices; generator one step out along the standard edge.
    Zero,
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sector::Inf => write!(f, "inf"),
            Sector::Zero => write!(f, "zero"),
        }
    }
}

impl Sector {
    pub fn parse(s: &str) -> Result<Sector> {
        match s.trim() {
            "inf" | "infty" | "oo" => Ok(Sector::Inf),
            "zero" | "0" => Ok(Sector::Zero),
            other => Err(Error::Parse(format!(
                "unknown sector {other:?}, expected inf or zero"
            ))),
        }
    }

    pub fn parity(self) -> VertexParity {
        match self {
            Sector::Inf => VertexParity::Even,
            Sector::Zero => VertexParity::Odd,
        }
    }
}

/// One member of the family in a finite model.
pub struct SsModel {
    pub quotient: QuotientCtx,
    pub generator: CIndElt,
    pub sector: Sector,
}

/// Builds the model of the sector of the zero-eigenvalue quotient.
pub fn ss_model(weight: Weight, sector: Sector, depth: u32, slack: u32) -> Result<SsModel> {
    let ctx = *weight.ctx();
    let quotient = QuotientCtx::build(weight, ctx.zero(), depth, slack)?;
    let generator = canonical_generator(weight, sector)?;
    Ok(SsModel {
        quotient,
        generator,
        sector,
    })
}

/// The canonical generator of a sector: `[1, x^r]` or `[diag(1, p), y^r]`.
pub fn canonical_generator(weight: Weight, sector: Sector) -> Result<CIndElt> {
    let ctx = weight.ctx();
    let mut w = vec![ctx.zero(); weight.dim()];
    match sector {
        Sector::Inf => {
            w[0] = ctx.one();
            CIndElt::from_vertex(weight, &Vertex::origin(), &w)
        }
        Sector::Zero => {
            w[weight.r() as usize] = ctx.one();
            CIndElt::elementary(weight, &named_element(ctx.p(), "alpha")?, &w)
        }
    }
}

/// Canonical parameters of one member after collapsing the odd sector onto
/// its even-sector partner.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ClassKey {
    pub r: u32,
    pub sector: Sector,
}

impl fmt::Display for ClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pi({}, {})", self.r, self.sector)
    }
}

/// Normal form of `(r, sector)`: the odd sector of degree `r` matches the
/// even sector of degree `p - 1 - r`.
pub fn canonical_key(p: u32, r: u32, sector: Sector) -> Result<ClassKey> {
    if r > p - 1 {
        return Err(Error::Range(format!("degree {r} exceeds p - 1 = {}", p - 1)));
    }
    Ok(match sector {
        Sector::Inf => ClassKey {
            r,
            sector: Sector::Inf,
        },
        Sector::Zero => ClassKey {
            r: p - 1 - r,
            sector: Sector::Inf,
        },
    })
}

/// The distinct members among the two sectors of degree `r`, in canonical
/// form.  A single class appears exactly when `r = (p - 1) / 2`.
pub fn packet(p: u32, r: u32) -> Result<Vec<ClassKey>> {
    let mut keys = vec![
        canonical_key(p, r, Sector::Inf)?,
        canonical_key(p, r, Sector::Zero)?,
    ];
    keys.sort();
    keys.dedup();
    Ok(keys)
}

#[derive(Clone, Debug)]
pub struct IsoEvidence {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct IsoDecision {
    pub isomorphic: bool,
    /// (diagonal exponent mod p - 1, has a compact-fixed class)
    pub left_invariant: (u32, bool),
    pub right_invariant: (u32, bool),
    pub evidence: Vec<IsoEvidence>,
}

fn class_invariant(
    ctx: FqCtx,
    r: u32,
    sector: Sector,
    depth: u32,
    slack: u32,
    tag: &str,
    evidence: &mut Vec<IsoEvidence>,
) -> Result<(u32, bool)> {
    let p = ctx.p();
    let weight = Weight::new(ctx, r)?;
    let model = ss_model(weight, sector, depth, slack)?;

    let report = invariance_report(&model.quotient, &model.generator, &pro_p_iwahori_sl2_gens(p))?;
    let all_exact = report.iter().all(|(_, s)| *s == InvStatus::ExactFixed);
    evidence.push(IsoEvidence {
        name: format!("{tag}-generator-pro-p-fixed"),
        ok: all_exact,
        detail: report
            .iter()
            .map(|(n, s)| format!("{n}: {}", s.as_str()))
            .collect::<Vec<_>>()
            .join(", "),
    });

    let exp = iwahori_exponent(&model.quotient, &model.generator)?;
    let predicted = match sector {
        Sector::Inf => r % (p - 1),
        Sector::Zero => (p - 1 - r % (p - 1)) % (p - 1),
    };
    evidence.push(IsoEvidence {
        name: format!("{tag}-diagonal-exponent"),
        ok: exp == predicted,
        detail: format!("computed {exp}, weight formula predicts {predicted}"),
    });

    let gens: Vec<_> = max_compact_sl2_gens(p).into_iter().map(|(_, g)| g).collect();
    let dim = fixed_dim_in_quotient(&model.quotient, &gens, Some(model.sector.parity()))?;
    evidence.push(IsoEvidence {
        name: format!("{tag}-compact-fixed-dimension"),
        ok: dim <= 1,
        detail: format!("dimension {dim} on the {} block", model.sector),
    });

    Ok((exp, dim > 0))
}

/// Decides whether two members of the family are isomorphic by computing
/// the invariant pairs in finite models, then cross-checks the outcome
/// against the closed-form rule.
pub fn decide_isomorphism(
    ctx: FqCtx,
    left: (u32, Sector),
    right: (u32, Sector),
    depth: u32,
    slack: u32,
) -> Result<IsoDecision> {
    let p = ctx.p();
    for (r, _) in [left, right] {
        if r > p - 1 {
            return Err(Error::Range(format!(
                "degree {r} exceeds p - 1 = {}",
                p - 1
            )));
        }
    }
    let mut evidence = Vec::new();
    let li = class_invariant(ctx, left.0, left.1, depth, slack, "left", &mut evidence)?;
    let ri = class_invariant(ctx, right.0, right.1, depth, slack, "right", &mut evidence)?;
    let isomorphic = li == ri;

    let rule = (left.0 == right.0 && left.1 == right.1)
        || (left.1 != right.1 && left.0 + right.0 == p - 1);
    evidence.push(IsoEvidence {
        name: "closed-form-agreement".to_string(),
        ok: isomorphic == rule,
        detail: format!(
            "invariants say {}, parameter rule says {}",
            isomorphic, rule
        ),
    });
    let keys_match = canonical_key(p, left.0, left.1)? == canonical_key(p, right.0, right.1)?;
    evidence.push(IsoEvidence {
        name: "canonical-key-agreement".to_string(),
        ok: isomorphic == keys_match,
        detail: format!(
            "canonical keys {} and {}",
            canonical_key(p, left.0, left.1)?,
            canonical_key(p, right.0, right.1)?
        ),
    });

    Ok(IsoDecision {
        isomorphic,
        left_invariant: li,
        right_invariant: ri,
        evidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packets_pair_complementary_degrees() {
        let ks = |v: &[u32]| -> Vec<ClassKey> {
            v.iter()
                .map(|&r| ClassKey {
                    r,
                    sector: Sector::Inf,
                })
                .collect()
        };
        assert_eq!(packet(5, 0).unwrap(), ks(&[0, 4]));
        assert_eq!(packet(5, 1).unwrap(), ks(&[1, 3]));
        assert_eq!(packet(5, 2).unwrap(), ks(&[2]));
        assert_eq!(packet(5, 3).unwrap(), ks(&[1, 3]));
        assert_eq!(packet(3, 1).unwrap(), ks(&[1]));
        assert!(packet(5, 5).is_err());
    }

    #[test]
    fn decision_table_matches_the_rule_for_p_three() {
        // All 36 ordered pairs at p = 3: the computed invariants must
        // reproduce the parameter rule, and every evidence entry must hold.
        let ctx = FqCtx::new(3, 1).unwrap();
        let members: Vec<(u32, Sector)> = (0..3)
            .flat_map(|r| [(r, Sector::Inf), (r, Sector::Zero)])
            .collect();
        for &a in &members {
            for &b in &members {
                let d = decide_isomorphism(ctx, a, b, 3, 1).unwrap();
                for e in &d.evidence {
                    assert!(e.ok, "pair {a:?} {b:?}: {} failed: {}", e.name, e.detail);
                }
                let rule = (a.0 == b.0 && a.1 == b.1) || (a.1 != b.1 && a.0 + b.0 == 2);
                assert_eq!(d.isomorphic, rule, "pair {a:?} {b:?}");
            }
        }
    }

    #[test]
    fn sector_literals_parse() {
        assert_eq!(Sector::parse("inf").unwrap(), Sector::Inf);
        assert_eq!(Sector::parse("0").unwrap(), Sector::Zero);
        assert!(Sector::parse("both").is_err());
    }

    #[test]
    fn mixed_sector_pairs_at_p_five() {
        let ctx = FqCtx::new(5, 1).unwrap();
        // Degrees 1 and 3 pair up across sectors.
        let d = decide_isomorphism(ctx, (1, Sector::Inf), (3, Sector::Zero), 2, 1).unwrap();
        assert!(d.isomorphic);
        assert_eq!(d.left_invariant, d.right_invariant);
        // Degree 0 across sectors does not pair with itself.
        let d = decide_isomorphism(ctx, (0, Sector::Inf), (0, Sector::Zero), 2, 1).unwrap();
        assert!(!d.isomorphic);
        assert_eq!(d.left_invariant.0, d.right_invariant.0);
        assert_ne!(d.left_invariant.1, d.right_invariant.1);
    }
}
