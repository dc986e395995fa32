//! Finite-resolution functions on the projective line over Qp.
//!
//! This is the trivial-character companion of the windowed model: the
//! group acts on points by right multiplication of homogeneous rows, and
//! on functions by composition, with no character cocycle. A [`P1Func`]
//! stores values on two charts: the integer points xi mod p^n, and the
//! inverted points 1/zeta for zeta in p Zp mod p^n (index 0 is the point
//! at infinity). Actions refine the resolution by twice the largest entry
//! valuation and certify each output cell by sub-sampling, so results are
//! exact or fail loudly.

use crate::algebra::{Fq, FqCtx, PExact, SparseMat, SparseVec, Subspace};
use crate::group::GMat;
use crate::pseries::IdentityCheck;
use crate::{Error, Result};

/// Cap on total stored cells across both charts.
const MAX_P1_CELLS: u64 = 500_000;

/// Locally constant function on P1(Qp) at resolution p^n.
#[derive(Clone, Debug)]
pub struct P1Func {
    ctx: FqCtx,
    n: i64,
    chart0: Vec<Fq>,
    chart_inf: Vec<Fq>,
}

fn chart_sizes(p: u32, n: i64) -> Result<(usize, usize)> {
    let n = u32::try_from(n)
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::Shape("resolution must be at least 1".into()))?;
    let big = u64::from(p)
        .checked_pow(n)
        .filter(|&c| c + c / u64::from(p) <= MAX_P1_CELLS)
        .ok_or_else(|| {
            Error::WindowOverflow(format!("projective resolution p^{n} too large"))
        })?;
    Ok((
        usize::try_from(big).expect("bounded"),
        usize::try_from(big / u64::from(p)).expect("bounded"),
    ))
}

impl P1Func {
    pub fn from_parts(ctx: FqCtx, n: i64, chart0: Vec<Fq>, chart_inf: Vec<Fq>) -> Result<P1Func> {
        let (c0, ci) = chart_sizes(ctx.p(), n)?;
        if chart0.len() != c0 || chart_inf.len() != ci {
            return Err(Error::Shape(format!(
                "charts have {} and {} cells, resolution p^{n} wants {c0} and {ci}",
                chart0.len(),
                chart_inf.len()
            )));
        }
        Ok(P1Func {
            ctx,
            n,
            chart0,
            chart_inf,
        })
    }

    pub fn constant(ctx: FqCtx, n: i64, value: Fq) -> Result<P1Func> {
        let (c0, ci) = chart_sizes(ctx.p(), n)?;
        Ok(P1Func {
            ctx,
            n,
            chart0: vec![value; c0],
            chart_inf: vec![value; ci],
        })
    }

    /// Indicator of the ball p^a Zp inside the finite chart, a >= 0.
    pub fn ball_indicator(ctx: FqCtx, a: i64) -> Result<P1Func> {
        if a < 0 {
            return Err(Error::Range("ball exponent must be nonnegative".into()));
        }
        let n = a.max(1);
        let (c0, ci) = chart_sizes(ctx.p(), n)?;
        let p = i64::from(ctx.p());
        let step = p.pow(u32::try_from(a).expect("small"));
        let mut chart0 = vec![ctx.zero(); c0];
        for (i, slot) in chart0.iter_mut().enumerate() {
            if (i as i64) % step == 0 {
                *slot = ctx.one();
            }
        }
        P1Func::from_parts(ctx, n, chart0, vec![ctx.zero(); ci])
    }

    /// Indicator of the inverted chart: points of negative valuation
    /// together with the point at infinity.
    pub fn infinity_indicator(ctx: FqCtx) -> Result<P1Func> {
        let (c0, ci) = chart_sizes(ctx.p(), 1)?;
        P1Func::from_parts(ctx, 1, vec![ctx.zero(); c0], vec![ctx.one(); ci])
    }

    pub fn resolution(&self) -> i64 {
        self.n
    }

    pub fn ctx(&self) -> &FqCtx {
        &self.ctx
    }

    /// Value on the projective point with homogeneous row (c : d).
    fn eval_row(&self, c: &PExact, d: &PExact) -> Result<Fq> {
        let p = u64::from(self.ctx.p());
        match (c.valuation(), d.valuation()) {
            (None, None) => Err(Error::Shape("zero row is not a projective point".into())),
            (Some(vc), vd) if vd.is_none() || vc <= vd.unwrap() => {
                // Finite chart: xi = d / c has nonnegative valuation.
                let xi = d.clone() * c.inv()?;
                let mut idx = 0u64;
                for (j, dig) in xi.digits_below(self.n) {
                    idx += u64::from(dig) * p.pow(u32::try_from(j).expect("nonnegative digit"));
                }
                Ok(self.chart0[usize::try_from(idx).expect("capped")])
            }
            _ => {
                // Inverted chart: zeta = c / d lands in p Zp (0 at infinity).
                let zeta = c.clone() * d.inv()?;
                let mut idx = 0u64;
                for (j, dig) in zeta.digits_below(self.n) {
                    debug_assert!(j >= 1, "inverted chart has positive valuation");
                    idx += u64::from(dig) * p.pow(u32::try_from(j - 1).expect("shifted digit"));
                }
                Ok(self.chart_inf[usize::try_from(idx).expect("capped")])
            }
        }
    }

    /// Value at a finite point of any valuation.
    pub fn eval_finite(&self, xi: &PExact) -> Result<Fq> {
        self.eval_row(&PExact::one(self.ctx.p()), xi)
    }

    /// Value at the point at infinity.
    pub fn eval_infinity(&self) -> Fq {
        self.chart_inf[0]
    }

    /// Exact action: (g.F)(P) = F(P g) for invertible g, computed per
    /// cell with p-point sub-sampling at the refined resolution.
    pub fn act(&self, g: &GMat) -> Result<P1Func> {
        if g.det().is_zero() {
            return Err(Error::OutOfSubgroup("projective action needs det != 0".into()));
        }
        let depth = (0..2)
            .flat_map(|r| (0..2).map(move |c| (r, c)))
            .filter_map(|(r, c)| g.entry(r, c).valuation())
            .map(i64::abs)
            .max()
            .expect("invertible matrix has a nonzero entry");
        let n2 = self.n + 2 * depth;
        let p = self.ctx.p();
        let (c0, ci) = chart_sizes(p, n2)?;
        let one = PExact::one(p);
        let step = PExact::p_power(p, n2);
        let mut chart0 = vec![self.ctx.zero(); c0];
        for (i, slot) in chart0.iter_mut().enumerate() {
            *slot = self.acted_cell_value(g, &one, i as i64, 0, &step)?;
        }
        let mut chart_inf = vec![self.ctx.zero(); ci];
        for (j, slot) in chart_inf.iter_mut().enumerate() {
            // Row (zeta : 1) with zeta = p * j covers infinity at j = 0.
            *slot = self.acted_cell_value(g, &one, j as i64, 1, &step)?;
        }
        let out = P1Func {
            ctx: self.ctx,
            n: n2,
            chart0,
            chart_inf,
        };
        Ok(out.trim())
    }

    /// Value of g.F on one output cell, certified on p sample points.
    /// `side` 0 reads finite-chart cell i, side 1 the inverted chart.
    fn acted_cell_value(
        &self,
        g: &GMat,
        one: &PExact,
        base: i64,
        side: u8,
        step: &PExact,
    ) -> Result<Fq> {
        let p = self.ctx.p();
        let mut value = None;
        for d in 0..p {
            let coord = PExact::from_int(p, base) * if side == 0 { PExact::one(p) } else { PExact::p_power(p, 1) }
                + PExact::from_int(p, i64::from(d)) * step.clone();
            let (rc, rd) = if side == 0 {
                (one.clone(), coord)
            } else {
                (coord, one.clone())
            };
            let c = rc.clone() * g.entry(0, 0).clone() + rd.clone() * g.entry(1, 0).clone();
            let dd = rc * g.entry(0, 1).clone() + rd * g.entry(1, 1).clone();
            let v = self.eval_row(&c, &dd)?;
            match &value {
                None => value = Some(v),
                Some(prev) if *prev == v => {}
                Some(_) => {
                    return Err(Error::WindowOverflow(format!(
                        "projective cell {base} on chart {side} not constant at resolution {}",
                        self.n
                    )))
                }
            }
        }
        Ok(value.expect("p >= 3 samples"))
    }

    /// Drops redundant resolution while both charts are p-periodic.
    pub fn trim(&self) -> P1Func {
        let p = self.ctx.p() as usize;
        let mut f = self.clone();
        while f.n > 1 {
            let b0 = f.chart0.len() / p;
            let bi = f.chart_inf.len() / p;
            let fine0 = f.chart0.chunks(b0).all(|ch| ch == &f.chart0[..b0]);
            let finei = f.chart_inf.chunks(bi).all(|ch| ch == &f.chart_inf[..bi]);
            if !(fine0 && finei) {
                break;
            }
            f.chart0.truncate(b0);
            f.chart_inf.truncate(bi);
            f.n -= 1;
        }
        f
    }

    /// Exact re-sampling at a finer resolution.
    pub fn refine(&self, n2: i64) -> Result<P1Func> {
        if n2 < self.n {
            return Err(Error::Shape("refinement must not lower resolution".into()));
        }
        let (c0, ci) = chart_sizes(self.ctx.p(), n2)?;
        // Cell indices reduce mod the old chart sizes.
        let chart0 = (0..c0).map(|i| self.chart0[i % self.chart0.len()]).collect();
        let chart_inf = (0..ci)
            .map(|j| self.chart_inf[j % self.chart_inf.len()])
            .collect();
        P1Func::from_parts(self.ctx, n2, chart0, chart_inf)
    }

    pub fn equal(&self, other: &P1Func) -> Result<bool> {
        let n = self.n.max(other.n);
        let a = self.refine(n)?;
        let b = other.refine(n)?;
        Ok(a.chart0 == b.chart0 && a.chart_inf == b.chart_inf)
    }

    pub fn add(&self, other: &P1Func) -> Result<P1Func> {
        let n = self.n.max(other.n);
        let a = self.refine(n)?;
        let b = other.refine(n)?;
        let chart0 = a.chart0.iter().zip(&b.chart0).map(|(x, y)| *x + *y).collect();
        let chart_inf = a
            .chart_inf
            .iter()
            .zip(&b.chart_inf)
            .map(|(x, y)| *x + *y)
            .collect();
        let f = P1Func::from_parts(self.ctx, n, chart0, chart_inf)?;
        Ok(f.trim())
    }

    pub fn scale(&self, a: Fq) -> P1Func {
        P1Func {
            ctx: self.ctx,
            n: self.n,
            chart0: self.chart0.iter().map(|x| *x * a).collect(),
            chart_inf: self.chart_inf.iter().map(|x| *x * a).collect(),
        }
    }

    /// Where two functions differ, grouped by chart and valuation shell.
    pub fn diff_summary(&self, other: &P1Func) -> Result<String> {
        let n = self.n.max(other.n);
        let a = self.refine(n)?;
        let b = other.refine(n)?;
        let p = i64::from(self.ctx.p());
        let shell = |idx: i64, offset: i64| -> String {
            if idx == 0 {
                return "deep".to_string();
            }
            let mut v = offset;
            let mut r = idx;
            while r % p == 0 {
                r /= p;
                v += 1;
            }
            format!("v={v}")
        };
        let mut parts = Vec::new();
        let mut count = |cells: &[Fq], cells2: &[Fq], chart: &str, offset: i64| {
            let mut shells: std::collections::BTreeMap<String, usize> = Default::default();
            for (i, (x, y)) in cells.iter().zip(cells2).enumerate() {
                if x != y {
                    *shells.entry(shell(i as i64, offset)).or_default() += 1;
                }
            }
            for (s, c) in shells {
                parts.push(format!("{chart} {s}: {c} cells"));
            }
        };
        count(&a.chart0, &b.chart0, "finite chart", 0);
        // Inverted-chart index j stands for zeta = p j: shells report the
        // valuation of the point xi = 1/zeta.
        let mut shells: std::collections::BTreeMap<String, usize> = Default::default();
        for (j, (x, y)) in a.chart_inf.iter().zip(&b.chart_inf).enumerate() {
            if x != y {
                let label = if j == 0 {
                    "infinity".to_string()
                } else {
                    let mut v = 1i64;
                    let mut r = j as i64;
                    while r % p == 0 {
                        r /= p;
                        v += 1;
                    }
                    format!("v={}", -v)
                };
                *shells.entry(label).or_default() += 1;
            }
        }
        for (s, c) in shells {
            parts.push(format!("inverted chart {s}: {c} cells"));
        }
        if parts.is_empty() {
            Ok("identical".to_string())
        } else {
            Ok(format!("differs at {}", parts.join("; ")))
        }
    }
}

/// Dimensions of the pro-p-fixed space of the projective function model.
#[derive(Clone, Copy, Debug)]
pub struct SpInvariants {
    pub resolution: i64,
    pub dim: usize,
    pub quotient_dim: usize,
}

/// Fixed space of the three pro-p generators on functions at resolution
/// p^n, and its dimension after quotienting out global constants.
pub fn sp_invariants(ctx: FqCtx, n: i64) -> Result<SpInvariants> {
    let p = ctx.p();
    let (c0, ci) = chart_sizes(p, n)?;
    let dim = c0 + ci;
    let probe = P1Func::from_parts(ctx, n, vec![ctx.zero(); c0], vec![ctx.zero(); ci])?;
    let one = PExact::one(p);
    let step = PExact::p_power(p, n);
    let mut mats = Vec::new();
    for (_, g) in crate::group::pro_p_iwahori_sl2_gens(p) {
        // Permutation matrix: each cell representative maps to the cell
        // holding its image; sub-sampling guards cell wellformedness.
        let mut triplets = Vec::with_capacity(dim);
        for i in 0..dim {
            let (side, base) = if i < c0 { (0u8, i as i64) } else { (1, (i - c0) as i64) };
            let mut target = None;
            for d in 0..p {
                let coord = PExact::from_int(p, base)
                    * if side == 0 {
                        PExact::one(p)
                    } else {
                        PExact::p_power(p, 1)
                    }
                    + PExact::from_int(p, i64::from(d)) * step.clone();
                let (rc, rd) = if side == 0 {
                    (one.clone(), coord)
                } else {
                    (coord, one.clone())
                };
                let c = rc.clone() * g.entry(0, 0).clone() + rd.clone() * g.entry(1, 0).clone();
                let dd = rc * g.entry(0, 1).clone() + rd * g.entry(1, 1).clone();
                let j = probe.cell_index(&c, &dd)?;
                match target {
                    None => target = Some(j),
                    Some(t) if t == j => {}
                    Some(_) => {
                        return Err(Error::WindowOverflow(format!(
                            "generator does not permute cells at resolution {n}"
                        )))
                    }
                }
            }
            triplets.push((i, target.expect("sampled"), ctx.one()));
        }
        mats.push(SparseMat::from_triplets(ctx, dim, dim, triplets)?);
    }
    let refs: Vec<&SparseMat> = mats.iter().collect();
    let fixed = SparseMat::fixed_space(&refs)?;
    // Constants are always fixed; the quotient counts what exceeds them.
    let mut span = Subspace::new(ctx, dim);
    let ones = SparseVec::from_entries(dim, (0..dim).map(|i| (i, ctx.one())).collect());
    span.insert(&ones);
    let quotient_dim = fixed.iter().filter(|v| span.insert(v)).count();
    Ok(SpInvariants {
        resolution: n,
        dim: fixed.len(),
        quotient_dim,
    })
}

impl P1Func {
    /// Flat cell index (finite chart first) of the point with row (c : d).
    fn cell_index(&self, c: &PExact, d: &PExact) -> Result<usize> {
        let p = u64::from(self.ctx.p());
        match (c.valuation(), d.valuation()) {
            (None, None) => Err(Error::Shape("zero row is not a projective point".into())),
            (Some(vc), vd) if vd.is_none() || vc <= vd.unwrap() => {
                let xi = d.clone() * c.inv()?;
                let mut idx = 0u64;
                for (j, dig) in xi.digits_below(self.n) {
                    idx += u64::from(dig) * p.pow(u32::try_from(j).expect("nonnegative digit"));
                }
                Ok(usize::try_from(idx).expect("capped"))
            }
            _ => {
                let zeta = c.clone() * d.inv()?;
                let mut idx = 0u64;
                for (j, dig) in zeta.digits_below(self.n) {
                    idx += u64::from(dig) * p.pow(u32::try_from(j - 1).expect("shifted digit"));
                }
                Ok(self.chart0.len() + usize::try_from(idx).expect("capped"))
            }
        }
    }
}

/// The measure-collapse battery: the averaging ladder at each level, the
/// printed one-term chart swap (which misses the boundary shell), its
/// corrected cover, and the characteristic-p collapse of the total mass.
pub fn seulquo_haar_check(ctx: FqCtx, levels: u32) -> Result<Vec<IdentityCheck>> {
    let p = ctx.p();
    let mut out = Vec::new();
    for m in 1..=i64::from(levels) {
        let inner = P1Func::ball_indicator(ctx, m)?;
        let mut sum: Option<P1Func> = None;
        for j in 0..i64::from(p) {
            let shift = PExact::from_int(p, j) * PExact::p_power(p, m - 1);
            let term = inner.act(&GMat::upper(shift))?;
            sum = Some(match sum {
                None => term,
                Some(s) => s.add(&term)?,
            });
        }
        let got = sum.expect("nonempty digit set");
        let want = P1Func::ball_indicator(ctx, m - 1)?;
        let pass = got.equal(&want)?;
        out.push(IdentityCheck {
            name: format!("haar-ladder-{m}"),
            pass,
            detail: if pass {
                format!("ball of level {m} averages to the ball of level {}", m - 1)
            } else {
                got.diff_summary(&want)?
            },
        });
    }

    let ball = P1Func::ball_indicator(ctx, 0)?;
    let beta = crate::group::named_element(p, "beta0")?;
    let swapped = ball.act(&beta)?;
    let inf = P1Func::infinity_indicator(ctx)?;
    let pass = swapped.equal(&inf)?;
    out.push(IdentityCheck {
        name: "haar-swap".to_string(),
        pass,
        detail: if pass {
            "beta0 carries the finite ball onto the inverted chart".to_string()
        } else {
            format!(
                "beta0 image of the finite ball misses a shell: {}",
                swapped.diff_summary(&inf)?
            )
        },
    });

    // Corrected cover: the missing valuation -1 shell comes from the
    // unipotent translates u(c/p) of the finite ball.
    let mut cover = swapped;
    for c in 1..i64::from(p) {
        let shift = PExact::from_int(p, c) * PExact::p_power(p, -1);
        cover = cover.add(&ball.act(&GMat::upper(shift))?)?;
    }
    let pass = cover.equal(&inf)?;
    out.push(IdentityCheck {
        name: "haar-swap-computed".to_string(),
        pass,
        detail: if pass {
            "inverted chart = beta0 image plus the p - 1 depth-one translates".to_string()
        } else {
            cover.diff_summary(&inf)?
        },
    });

    // Summing the full ladder pushes the total mass to p copies, which
    // vanish in characteristic p: the collapse behind the quotient.
    let collapse = {
        let mut acc = ctx.zero();
        for _ in 0..p {
            acc = acc + ctx.one();
        }
        acc.is_zero()
    };
    out.push(IdentityCheck {
        name: "haar-char-p".to_string(),
        pass: collapse,
        detail: format!("p * 1 = 0 in the coefficient field of order {}^{}", p, ctx.k()),
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named_element;

    fn ctx(p: u32) -> FqCtx {
        FqCtx::new(p, 1).unwrap()
    }

    #[test]
    fn charts_and_evaluation() {
        let c = ctx(5);
        let ball = P1Func::ball_indicator(c, 1).unwrap();
        assert_eq!(ball.eval_finite(&PExact::from_int(5, 10)).unwrap(), c.one());
        assert_eq!(ball.eval_finite(&PExact::zero(5)).unwrap(), c.one());
        assert_eq!(ball.eval_finite(&PExact::from_int(5, 3)).unwrap(), c.zero());
        assert_eq!(
            ball.eval_finite(&PExact::p_power(5, -1)).unwrap(),
            c.zero()
        );
        assert_eq!(ball.eval_infinity(), c.zero());

        let inf = P1Func::infinity_indicator(c).unwrap();
        assert_eq!(inf.eval_infinity(), c.one());
        assert_eq!(inf.eval_finite(&PExact::p_power(5, -3)).unwrap(), c.one());
        assert_eq!(inf.eval_finite(&PExact::from_int(5, 2)).unwrap(), c.zero());
    }

    #[test]
    fn shift_and_inversion_actions() {
        let c = ctx(3);
        let ball = P1Func::ball_indicator(c, 1).unwrap();
        // Shift by 1: the ball moves to residue -1.
        let moved = ball.act(&named_element(3, "u1").unwrap()).unwrap();
        assert_eq!(moved.eval_finite(&PExact::from_int(3, 2)).unwrap(), c.one());
        assert_eq!(moved.eval_finite(&PExact::zero(3)).unwrap(), c.zero());

        // The Weyl reflection sends xi to -1/xi: zero and infinity swap,
        // and the image of the full ball covers valuations <= 0.
        let s = named_element(3, "s").unwrap();
        let flipped = P1Func::ball_indicator(c, 0).unwrap().act(&s).unwrap();
        assert_eq!(flipped.eval_infinity(), c.one());
        assert_eq!(flipped.eval_finite(&PExact::zero(3)).unwrap(), c.zero());
        assert_eq!(flipped.eval_finite(&PExact::one(3)).unwrap(), c.one());
        assert_eq!(
            flipped.eval_finite(&PExact::p_power(3, -1)).unwrap(),
            c.one()
        );
        assert_eq!(
            flipped.eval_finite(&PExact::from_int(3, 3)).unwrap(),
            c.zero()
        );
    }

    #[test]
    fn scalars_act_trivially() {
        let c = ctx(5);
        let f = P1Func::ball_indicator(c, 2).unwrap();
        let z = GMat::scalar(PExact::from_int(5, 10));
        assert!(f.act(&z).unwrap().equal(&f).unwrap());
    }

    #[test]
    fn action_composes() {
        let c = ctx(3);
        let f = P1Func::ball_indicator(c, 1).unwrap();
        let a = named_element(3, "alpha0").unwrap();
        let u = named_element(3, "u1").unwrap();
        let one_go = f.act(&(&a * &u)).unwrap();
        let two_go = f.act(&u).unwrap().act(&a).unwrap();
        assert!(one_go.equal(&two_go).unwrap());
    }

    #[test]
    fn refinement_round_trip() {
        let c = ctx(3);
        let f = P1Func::ball_indicator(c, 1).unwrap();
        let big = f.refine(4).unwrap();
        assert!(big.equal(&f).unwrap());
        assert_eq!(big.trim().resolution(), 1);
    }

    #[test]
    fn fixed_space_is_two_dimensional_with_line_quotient() {
        for p in [3u32, 5] {
            for n in [1i64, 2, 3] {
                let inv = sp_invariants(ctx(p), n).unwrap();
                assert_eq!(inv.dim, 2, "p={p} n={n}");
                assert_eq!(inv.quotient_dim, 1, "p={p} n={n}");
            }
        }
    }

    #[test]
    fn haar_battery_outcomes() {
        for p in [3u32, 5] {
            let checks = seulquo_haar_check(ctx(p), 3).unwrap();
            let find = |name: &str| {
                checks
                    .iter()
                    .find(|c| c.name == name)
                    .unwrap_or_else(|| panic!("missing {name}"))
            };
            for m in 1..=3 {
                assert!(find(&format!("haar-ladder-{m}")).pass, "ladder {m} at p={p}");
            }
            let swap = find("haar-swap");
            assert!(!swap.pass, "one-term swap misses a shell at p={p}");
            assert!(swap.detail.contains("v=-1"), "detail: {}", swap.detail);
            assert!(find("haar-swap-computed").pass);
            assert!(find("haar-char-p").pass);
        }
    }
}
