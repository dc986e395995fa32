//! Exact scalars for p-adic work.
//!
//! A [`PExact`] stores a rational number in the form `(num/den) * p^e` with
//! `p` coprime to both `num` and `den`. This is the localization of the
//! integers away from everything except p together with p inverted — closed
//! under the matrix inverses, column normalisations and digit expansions that
//! vertex normal forms need, while keeping the p-adic valuation `e` readable
//! in O(1).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Exact rational with tracked p-valuation: value is `(num/den) * p^e`.
///
/// Invariants (after construction): `den > 0`, `gcd(num, den) = 1`, and p
/// divides neither `num` nor `den`. Zero is stored as `num = 0, den = 1,
/// e = 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PExact {
    p: u32,
    num: BigInt,
    den: BigInt,
    e: i64,
}

impl PExact {
    /// Builds `(num/den) * p^e` and normalizes.
    pub fn new(p: u32, num: BigInt, den: BigInt, e: i64) -> Result<Self> {
        if p < 2 {
            return Err(Error::Range(format!("p = {p} is not a prime")));
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut x = PExact { p, num, den, e };
        x.normalize();
        Ok(x)
    }

    /// The integer `n`, as an element of the ring at `p`.
    pub fn from_int(p: u32, n: i64) -> Self {
        PExact::new(p, BigInt::from(n), BigInt::one(), 0).expect("p >= 2 and den = 1")
    }

    pub fn zero(p: u32) -> Self {
        PExact::from_int(p, 0)
    }

    pub fn one(p: u32) -> Self {
        PExact::from_int(p, 1)
    }

    /// `p^e` as a ring element.
    pub fn p_power(p: u32, e: i64) -> Self {
        PExact::new(p, BigInt::one(), BigInt::one(), e).expect("unit input")
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.e == 0 && self.den.is_one() && self.num.is_one()
    }

    /// p-adic valuation; `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.e)
        }
    }

    /// True for zero and for values with nonnegative valuation.
    pub fn is_p_integral(&self) -> bool {
        self.is_zero() || self.e >= 0
    }

    /// The unit part `num/den` reduced modulo `p^m`, for nonzero values.
    ///
    /// This ignores the `p^e` factor; combine with [`Self::valuation`] to
    /// reduce the value itself.
    pub fn unit_mod(&self, m: u32) -> Result<BigUint> {
        if self.is_zero() {
            return Err(Error::Domain("unit part of zero".into()));
        }
        let modulus = BigInt::from(self.p).pow(m);
        let den_inv = mod_inverse(&self.den, &modulus)
            .expect("den is coprime to p, hence invertible mod p^m");
        let r = (&self.num * den_inv).mod_floor(&modulus);
        Ok(r.to_biguint().expect("mod_floor of positive modulus"))
    }

    /// The value reduced modulo p, in `0..p`. Errors if the valuation is
    /// negative (the value is not p-integral).
    pub fn residue_mod_p(&self) -> Result<u32> {
        if self.is_zero() {
            return Ok(0);
        }
        match self.e.cmp(&0) {
            Ordering::Less => Err(Error::Domain(format!(
                "residue mod p of a value with valuation {}",
                self.e
            ))),
            Ordering::Greater => Ok(0),
            Ordering::Equal => {
                let r = self.unit_mod(1)?;
                Ok(r.to_u32().expect("residue < p"))
            }
        }
    }

    /// Canonical p-adic digits of the value below exponent `a`: pairs
    /// `(j, d_j)` with `e <= j < a`, `0 <= d_j < p`, zeros omitted.
    ///
    /// The digits represent the class of the value modulo `p^a * Z_p`
    /// exactly; values with `e >= a` (and zero) yield no digits.
    pub fn digits_below(&self, a: i64) -> Vec<(i64, u32)> {
        if self.is_zero() || self.e >= a {
            return Vec::new();
        }
        let m = u32::try_from(a - self.e).expect("digit window fits in u32");
        let mut u = self
            .unit_mod(m)
            .expect("nonzero value has a unit part");
        let p = BigUint::from(self.p);
        let mut out = Vec::new();
        let mut j = self.e;
        while !u.is_zero() && j < a {
            let (q, r) = u.div_rem(&p);
            let d = r.to_u32().expect("digit < p");
            if d != 0 {
                out.push((j, d));
            }
            u = q;
            j += 1;
        }
        out
    }

    /// The canonical representative of the value modulo `p^a * Z_p`:
    /// the finite digit sum below exponent `a`.
    pub fn truncate_below(&self, a: i64) -> Self {
        let mut acc = PExact::zero(self.p);
        for (j, d) in self.digits_below(a) {
            acc = acc + PExact::from_int(self.p, i64::from(d)) * PExact::p_power(self.p, j);
        }
        acc
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        PExact::new(self.p, self.den.clone(), self.num.clone(), -self.e)
    }

    /// Integer power (negative exponents invert; errors on `0^-n`).
    pub fn pow(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut acc = PExact::one(self.p);
        for _ in 0..n.unsigned_abs() {
            acc = acc * base.clone();
        }
        Ok(acc)
    }

    /// Parses `num`, `num@e`, or `num/den@e` (integers in decimal).
    pub fn parse(p: u32, s: &str) -> Result<Self> {
        let s = s.trim();
        let (frac, e) = match s.split_once('@') {
            Some((f, e)) => (
                f,
                e.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?,
            ),
            None => (s, 0),
        };
        let frac = frac.trim();
        let (num, den) = match frac.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (frac, "1"),
        };
        let num: BigInt = num
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let den: BigInt = den
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        PExact::new(p, num, den, e)
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = BigInt::one();
            self.e = 0;
            return;
        }
        if self.den.is_negative() {
            self.num = -std::mem::take(&mut self.num);
            self.den = -std::mem::take(&mut self.den);
        }
        let p = BigInt::from(self.p);
        loop {
            let (q, r) = self.num.div_rem(&p);
            if r.is_zero() {
                self.num = q;
                self.e += 1;
            } else {
                break;
            }
        }
        loop {
            let (q, r) = self.den.div_rem(&p);
            if r.is_zero() {
                self.den = q;
                self.e -= 1;
            } else {
                break;
            }
        }
        let g = self.num.gcd(&self.den);
        if !g.is_one() {
            self.num /= &g;
            self.den /= &g;
        }
    }

    fn check_same_ring(&self, other: &Self) {
        assert_eq!(
            self.p, other.p,
            "arithmetic between scalars localized at different primes"
        );
    }
}

/// Inverse of `a` modulo `m` (`m > 0`), if `gcd(a, m) = 1`.
fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let ext = a.mod_floor(m).extended_gcd(m);
    if ext.gcd.is_one() {
        Some(ext.x.mod_floor(m))
    } else {
        None
    }
}

impl Add for PExact {
    type Output = PExact;
    fn add(self, rhs: PExact) -> PExact {
        self.check_same_ring(&rhs);
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        // Align to the smaller exponent: p^e0 * (n1/d1 * p^(e1-e0) + n2/d2).
        let e0 = self.e.min(rhs.e);
        let p = BigInt::from(self.p);
        let scale = |x: &PExact| -> BigInt {
            &x.num * p.pow(u32::try_from(x.e - e0).expect("exponent gap fits u32"))
        };
        let num = scale(&self) * &rhs.den + scale(&rhs) * &self.den;
        let den = &self.den * &rhs.den;
        PExact::new(self.p, num, den, e0).expect("den != 0")
    }
}

impl Sub for PExact {
    type Output = PExact;
    fn sub(self, rhs: PExact) -> PExact {
        self + (-rhs)
    }
}

impl Mul for PExact {
    type Output = PExact;
    fn mul(self, rhs: PExact) -> PExact {
        self.check_same_ring(&rhs);
        PExact::new(
            self.p,
            &self.num * &rhs.num,
            &self.den * &rhs.den,
            self.e + rhs.e,
        )
        .expect("den != 0")
    }
}

impl Div for PExact {
    type Output = PExact;
    fn div(self, rhs: PExact) -> PExact {
        let inv = rhs.inv().expect("division by zero");
        self * inv
    }
}

impl Neg for PExact {
    type Output = PExact;
    fn neg(mut self) -> PExact {
        self.num = -self.num;
        self
    }
}

impl fmt::Display for PExact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}@{}", self.num, self.e)
        } else {
            write!(f, "{}/{}@{}", self.num, self.den, self.e)
        }
    }
}

impl fmt::Debug for PExact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PExact[p={}]({})", self.p, self)
    }
}
