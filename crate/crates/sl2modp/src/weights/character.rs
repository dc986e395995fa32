//! Tame smooth characters of Qp^x with values in F_q^x.
//!
//! A tame character is trivial on 1 + pZp, so it is determined by its value
//! at p and by its restriction to the units, which factors through F_p^x and
//! is a power of the mod-p cyclotomic character. The pair (unit exponent,
//! value at p) is the canonical data.

use std::fmt;

use crate::algebra::{Fq, FqCtx, PExact};
use crate::{Error, Result};

/// Tame character: omega^exp * mu_lambda, where omega is the mod-p
/// cyclotomic character on units (trivial at p) and mu_lambda is unramified
/// with value lambda at p.
#[derive(Copy, Clone, PartialEq, Eq)]
pub struct TameChar {
    ctx: FqCtx,
    /// Unit exponent, reduced mod p - 1.
    exp: u32,
    /// Value at p; nonzero.
    lambda: Fq,
}

impl TameChar {
    pub fn new(ctx: FqCtx, exp: u32, lambda: Fq) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::DegenerateCharacter(
                "character value at p must be nonzero".into(),
            ));
        }
        if (lambda.p(), lambda.k()) != (ctx.p(), ctx.k()) {
            return Err(Error::ContextMismatch(
                "character value outside its coefficient field".into(),
            ));
        }
        Ok(TameChar {
            ctx,
            exp: exp % (ctx.p() - 1),
            lambda,
        })
    }

    /// The unramified character sending p to lambda.
    pub fn unramified(ctx: FqCtx, lambda: Fq) -> Result<Self> {
        TameChar::new(ctx, 0, lambda)
    }

    /// The mod-p cyclotomic character to the given power.
    pub fn omega_pow(ctx: FqCtx, exp: u32) -> Self {
        TameChar::new(ctx, exp, ctx.one()).expect("1 is nonzero")
    }

    pub fn trivial(ctx: FqCtx) -> Self {
        TameChar::omega_pow(ctx, 0)
    }

    pub fn ctx(&self) -> &FqCtx {
        &self.ctx
    }

    /// Unit exponent in 0..p-1.
    pub fn exponent(&self) -> u32 {
        self.exp
    }

    /// Value at p.
    pub fn value_at_p(&self) -> Fq {
        self.lambda
    }

    pub fn is_unramified(&self) -> bool {
        self.exp == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.exp == 0 && self.lambda == self.ctx.one()
    }

    /// Evaluation at a nonzero exact scalar.
    pub fn eval(&self, x: &PExact) -> Result<Fq> {
        let v = x
            .valuation()
            .ok_or_else(|| Error::Domain("character evaluated at zero".into()))?;
        let unit = x.unit_mod(1).expect("nonzero scalar has a unit part");
        let unit: u32 = unit.try_into().expect("residue < p");
        let unit_part = self.ctx.from_int(i64::from(unit)).pow(u64::from(self.exp));
        let p_part = if v >= 0 {
            self.lambda.pow(v as u64)
        } else {
            self.lambda
                .inv()
                .expect("lambda nonzero")
                .pow(v.unsigned_abs())
        };
        Ok(unit_part * p_part)
    }

    pub fn eval_int(&self, n: i64) -> Result<Fq> {
        self.eval(&PExact::from_int(self.ctx.p(), n))
    }

    /// Pointwise product of characters.
    pub fn product(&self, other: &TameChar) -> Result<TameChar> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch(
                "characters over different fields".into(),
            ));
        }
        TameChar::new(self.ctx, self.exp + other.exp, self.lambda * other.lambda)
    }

    /// Pointwise inverse.
    pub fn inverse(&self) -> TameChar {
        let exp = (self.ctx.p() - 1 - self.exp) % (self.ctx.p() - 1);
        TameChar::new(self.ctx, exp, self.lambda.inv().expect("nonzero"))
            .expect("inverse value is nonzero")
    }

    /// Canonical literal: `omega^a * mu(c0,...,c{k-1})` with the
    /// coefficients of the value at p.
    pub fn parse(ctx: FqCtx, s: &str) -> Result<TameChar> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (om, mu) = t
            .split_once('*')
            .ok_or_else(|| Error::Parse(format!("character literal needs two factors: {s:?}")))?;
        let exp: u32 = om
            .strip_prefix("omega^")
            .and_then(|e| e.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad omega factor in {s:?}")))?;
        let inner = mu
            .strip_prefix("mu(")
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("bad mu factor in {s:?}")))?;
        let coeffs: Vec<u32> = inner
            .split(',')
            .map(|c| {
                c.parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad coefficient in {s:?}")))
            })
            .collect::<Result<_>>()?;
        let lambda = ctx.from_coeffs(&coeffs)?;
        TameChar::new(ctx, exp, lambda)
    }
}

impl fmt::Display for TameChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs: Vec<String> = self
            .lambda
            .coeffs()
            .iter()
            .map(|c| c.to_string())
            .collect();
        write!(f, "omega^{} * mu({})", self.exp, coeffs.join(","))
    }
}

impl fmt::Debug for TameChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TameChar({self})")
    }
}

/// The smallest primitive root modulo p.
pub fn primitive_root(p: u32) -> u32 {
    let order = p - 1;
    let mut divisors = Vec::new();
    let mut d = 1;
    while d * d <= order {
        if order % d == 0 {
            divisors.push(d);
            divisors.push(order / d);
        }
        d += 1;
    }
    let pow_mod = |mut b: u64, mut e: u32| -> u64 {
        let m = u64::from(p);
        let mut acc = 1;
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
    'outer: for g in 2..p {
        for &q in &divisors {
            if q != order && pow_mod(u64::from(g), q) == 1 {
                continue 'outer;
            }
        }
        return g;
    }
    unreachable!("every prime has a primitive root")
}

/// Discrete logarithm of `target` base `base` in F_p^x, by brute force.
pub fn discrete_log_mod_p(p: u32, base: u32, target: u32) -> Option<u32> {
    let m = u64::from(p);
    let mut acc = 1u64;
    for k in 0..p - 1 {
        if acc == u64::from(target) % m {
            return Some(k);
        }
        acc = acc * u64::from(base) % m;
    }
    None
}
