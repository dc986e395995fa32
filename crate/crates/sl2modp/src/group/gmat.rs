//! Exact 2x2 matrices over the p-localized rationals.
//!
//! These are the group elements of GL2(Qp) the toolkit ever touches:
//! arithmetic is exact, and the subgroup predicates (integral, determinant
//! valuation, Iwahori congruences) read valuations directly off the scalar
//! representation.

use std::fmt;
use std::ops::{Mul, Neg};

use crate::algebra::{Fq, FqCtx, PExact};
use crate::{Error, Result};

/// 2x2 matrix with exact entries; `e[i][j]` is row i, column j.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GMat {
    p: u32,
    e: [[PExact; 2]; 2],
}

impl GMat {
    pub fn new(p: u32, e: [[PExact; 2]; 2]) -> Self {
        for row in &e {
            for x in row {
                assert_eq!(x.p(), p, "entry localized at a different prime");
            }
        }
        GMat { p, e }
    }

    /// Builds from integer entries `[[a, b], [c, d]]`.
    pub fn from_ints(p: u32, a: i64, b: i64, c: i64, d: i64) -> Self {
        let f = |n| PExact::from_int(p, n);
        GMat {
            p,
            e: [[f(a), f(b)], [f(c), f(d)]],
        }
    }

    pub fn identity(p: u32) -> Self {
        GMat::from_ints(p, 1, 0, 0, 1)
    }

    /// Central scalar c * Id.
    pub fn scalar(c: PExact) -> Self {
        let p = c.p();
        let z = PExact::zero(p);
        GMat {
            p,
            e: [[c.clone(), z.clone()], [z, c]],
        }
    }

    pub fn diag(a: PExact, d: PExact) -> Self {
        let p = a.p();
        let z = PExact::zero(p);
        GMat {
            p,
            e: [[a, z.clone()], [z, d]],
        }
    }

    /// Upper unipotent (1, x; 0, 1).
    pub fn upper(x: PExact) -> Self {
        let p = x.p();
        GMat {
            p,
            e: [
                [PExact::one(p), x],
                [PExact::zero(p), PExact::one(p)],
            ],
        }
    }

    /// Lower unipotent (1, 0; x, 1).
    pub fn lower(x: PExact) -> Self {
        let p = x.p();
        GMat {
            p,
            e: [
                [PExact::one(p), PExact::zero(p)],
                [x, PExact::one(p)],
            ],
        }
    }

    /// SL2 torus element diag(a, 1/a).
    pub fn torus(a: PExact) -> Result<Self> {
        let inv = a.inv()?;
        Ok(GMat::diag(a, inv))
    }

    /// The finite Weyl element (0, -1; 1, 0).
    pub fn weyl(p: u32) -> Self {
        GMat::from_ints(p, 0, -1, 1, 0)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn entry(&self, i: usize, j: usize) -> &PExact {
        &self.e[i][j]
    }

    pub fn det(&self) -> PExact {
        self.e[0][0].clone() * self.e[1][1].clone()
            - self.e[0][1].clone() * self.e[1][0].clone()
    }

    pub fn trace(&self) -> PExact {
        self.e[0][0].clone() + self.e[1][1].clone()
    }

    pub fn inv(&self) -> Result<GMat> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = det.inv()?;
        let e = [
            [
                self.e[1][1].clone() * d.clone(),
                -(self.e[0][1].clone() * d.clone()),
            ],
            [
                -(self.e[1][0].clone() * d.clone()),
                self.e[0][0].clone() * d,
            ],
        ];
        Ok(GMat { p: self.p, e })
    }

    /// Left-multiplies rows by the scalar.
    pub fn scale(&self, c: &PExact) -> GMat {
        let e = [
            [self.e[0][0].clone() * c.clone(), self.e[0][1].clone() * c.clone()],
            [self.e[1][0].clone() * c.clone(), self.e[1][1].clone() * c.clone()],
        ];
        GMat { p: self.p, e }
    }

    /// All entries p-integral.
    pub fn is_integral(&self) -> bool {
        self.e.iter().flatten().all(PExact::is_p_integral)
    }

    /// Member of GL2(Zp): integral with unit determinant.
    pub fn in_gl2_zp(&self) -> bool {
        self.is_integral() && self.det().valuation() == Some(0)
    }

    /// Member of SL2(Qp).
    pub fn in_sl2(&self) -> bool {
        self.det().is_one()
    }

    /// If the matrix lies in KZ = Qp^x * GL2(Zp), returns (m, u, k) with
    /// matrix = p^m * u * k, u a unit scalar, k in GL2(Zp); the scalar is
    /// split off so weights can act through k and the center separately.
    pub fn kz_split(&self) -> Option<(i64, PExact, GMat)> {
        let dv = self.det().valuation()?;
        if dv % 2 != 0 {
            return None;
        }
        let m = dv / 2;
        // Candidate k0 = p^-m * matrix must be integral with unit det.
        let k0 = self.scale(&PExact::p_power(self.p, -m));
        if !k0.in_gl2_zp() {
            return None;
        }
        // Pull out a unit scalar to make the top-left (or first nonzero)
        // residue 1 when possible; the split (1, k0) is already valid, so
        // return the simple form.
        Some((m, PExact::one(self.p), k0))
    }

    /// Member of KZ.
    pub fn in_kz(&self) -> bool {
        self.kz_split().is_some()
    }

    /// Member of the (GL2) Iwahori: GL2(Zp) with lower-left entry in pZp.
    pub fn in_iwahori(&self) -> bool {
        self.in_gl2_zp()
            && self.e[1][0]
                .valuation()
                .map(|v| v >= 1)
                .unwrap_or(true)
    }

    /// Member of the pro-p Iwahori: Iwahori with both diagonal residues 1.
    pub fn in_pro_p_iwahori(&self) -> bool {
        if !self.in_iwahori() {
            return false;
        }
        let res = |x: &PExact| x.residue_mod_p().expect("integral entry");
        res(&self.e[0][0]) == 1 && res(&self.e[1][1]) == 1
    }

    /// Entrywise reduction mod p into F_q; requires an integral matrix.
    pub fn reduce_mod_p(&self, ctx: &FqCtx) -> Result<[[Fq; 2]; 2]> {
        if ctx.p() != self.p {
            return Err(Error::ContextMismatch(format!(
                "matrix at p = {} reduced into F_{}^{}",
                self.p,
                ctx.p(),
                ctx.k()
            )));
        }
        if !self.is_integral() {
            return Err(Error::Domain(
                "mod-p reduction of a non-integral matrix".into(),
            ));
        }
        let r = |x: &PExact| -> Result<Fq> {
            Ok(ctx.from_int(i64::from(x.residue_mod_p()?)))
        };
        Ok([
            [r(&self.e[0][0])?, r(&self.e[0][1])?],
            [r(&self.e[1][0])?, r(&self.e[1][1])?],
        ])
    }

    /// Entrywise value mod p^m for an integral matrix, as residues in
    /// [0, p^m).
    pub fn entries_mod(&self, m: u32) -> Result<[[u64; 2]; 2]> {
        let reduce = |x: &PExact| -> Result<u64> {
            if !x.is_p_integral() {
                return Err(Error::Domain(
                    "residue of a non-integral entry".into(),
                ));
            }
            let mut acc = 0u64;
            for (j, d) in x.digits_below(i64::from(m)) {
                debug_assert!(j >= 0);
                acc += u64::from(d) * u64::from(self.p).pow(j as u32);
            }
            Ok(acc)
        };
        Ok([
            [reduce(&self.e[0][0])?, reduce(&self.e[0][1])?],
            [reduce(&self.e[1][0])?, reduce(&self.e[1][1])?],
        ])
    }

    /// Parses the literal form `[[a, b], [c, d]]` with entries in the
    /// scalar syntax `num@e` or `num/den@e`.
    pub fn parse(p: u32, s: &str) -> Result<GMat> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = t
            .strip_prefix("[[")
            .and_then(|x| x.strip_suffix("]]"))
            .ok_or_else(|| Error::Parse(format!("matrix literal must look like [[..],[..]]: {s:?}")))?;
        let rows: Vec<&str> = inner.split("],[").collect();
        if rows.len() != 2 {
            return Err(Error::Parse(format!("expected 2 rows in {s:?}")));
        }
        let mut e: Vec<Vec<PExact>> = Vec::new();
        for row in rows {
            let cells: Vec<&str> = row.split(',').collect();
            if cells.len() != 2 {
                return Err(Error::Parse(format!("expected 2 entries per row in {s:?}")));
            }
            e.push(vec![PExact::parse(p, cells[0])?, PExact::parse(p, cells[1])?]);
        }
        let [r0, r1]: [Vec<PExact>; 2] = e.try_into().expect("two rows");
        let [a, b]: [PExact; 2] = r0.try_into().expect("two cells");
        let [c, d]: [PExact; 2] = r1.try_into().expect("two cells");
        Ok(GMat::new(p, [[a, b], [c, d]]))
    }
}

impl Mul for &GMat {
    type Output = GMat;
    fn mul(self, rhs: &GMat) -> GMat {
        assert_eq!(self.p, rhs.p, "matrix product across primes");
        let m = |i: usize, j: usize| -> PExact {
            self.e[i][0].clone() * rhs.e[0][j].clone()
                + self.e[i][1].clone() * rhs.e[1][j].clone()
        };
        GMat {
            p: self.p,
            e: [[m(0, 0), m(0, 1)], [m(1, 0), m(1, 1)]],
        }
    }
}

impl Neg for GMat {
    type Output = GMat;
    fn neg(self) -> GMat {
        let neg = |x: PExact| -x;
        let [[a, b], [c, d]] = self.e;
        GMat {
            p: self.p,
            e: [[neg(a), neg(b)], [neg(c), neg(d)]],
        }
    }
}

impl fmt::Display for GMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.e[0][0], self.e[0][1], self.e[1][0], self.e[1][1]
        )
    }
}

impl fmt::Debug for GMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GMat[p={}]{}", self.p, self)
    }
}
