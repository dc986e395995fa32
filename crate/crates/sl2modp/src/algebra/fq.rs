//! The finite field F_{p^k} with a deterministic choice of modulus.
//!
//! Elements are polynomials in a generator `t` modulo the lexicographically
//! least monic irreducible polynomial of degree k (coefficients compared from
//! the constant term upward). The choice is a pure function of (p, k), so
//! every run and every serialization agrees on the meaning of a coefficient
//! vector.
//!
//! Elements are small fixed-size values (`Copy`); coefficient length is
//! capped at [`K_MAX`].

use std::cell::Cell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Mutex;

use once_cell::sync::Lazy;

use crate::{Error, Result};

/// Maximum supported extension degree.
pub const K_MAX: usize = 6;

/// Field parameters: the prime, the degree, and the interned modulus.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct FqCtx {
    p: u32,
    k: u8,
    /// Low coefficients m_0..m_{k-1} of the monic modulus x^k + Σ m_i x^i.
    modulus: &'static [u32],
}

impl FqCtx {
    /// Validates parameters and fixes the modulus for F_{p^k}.
    pub fn new(p: u32, k: usize) -> Result<Self> {
        if p < 3 || p % 2 == 0 || !is_prime(p) {
            return Err(Error::Range(format!("p = {p} must be an odd prime >= 3")));
        }
        if p > 1000 {
            return Err(Error::Range(format!("p = {p} exceeds the supported bound 1000")));
        }
        if k == 0 || k > K_MAX {
            return Err(Error::Range(format!("k = {k} must lie in 1..={K_MAX}")));
        }
        Ok(FqCtx {
            p,
            k: k as u8,
            modulus: modulus_poly(p, k),
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k as usize
    }

    /// Field size p^k.
    pub fn q(&self) -> u64 {
        u64::from(self.p).pow(u32::from(self.k))
    }

    pub fn zero(&self) -> Fq {
        Fq {
            p: self.p,
            k: self.k,
            c: [0; K_MAX],
        }
    }

    pub fn one(&self) -> Fq {
        self.from_int(1)
    }

    /// The generator `t` (zero when k = 1, where the modulus is `x`).
    pub fn gen(&self) -> Fq {
        let mut x = self.zero();
        if self.k >= 2 {
            x.c[1] = 1;
        }
        x
    }

    /// The image of the integer `n` under Z -> F_p -> F_{p^k}.
    pub fn from_int(&self, n: i64) -> Fq {
        let p = i64::from(self.p);
        let mut x = self.zero();
        x.c[0] = u32::try_from(n.rem_euclid(p)).expect("residue < p");
        x
    }

    /// Builds an element from its coefficient vector c_0..c_{k-1}.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Fq> {
        if coeffs.len() != self.k() {
            return Err(Error::Shape(format!(
                "expected {} coefficients, got {}",
                self.k(),
                coeffs.len()
            )));
        }
        let mut x = self.zero();
        for (i, &c) in coeffs.iter().enumerate() {
            if c >= self.p {
                return Err(Error::Range(format!("coefficient {c} >= p = {}", self.p)));
            }
            x.c[i] = c;
        }
        Ok(x)
    }

    /// All field elements, in ascending order of Σ c_i p^i.
    pub fn enumerate(&self) -> impl Iterator<Item = Fq> + '_ {
        let q = self.q();
        (0..q).map(move |code| {
            let mut x = self.zero();
            let mut c = code;
            for i in 0..self.k() {
                x.c[i] = (c % u64::from(self.p)) as u32;
                c /= u64::from(self.p);
            }
            x
        })
    }

    /// The element's dense code Σ c_i p^i (inverse of the enumeration order).
    pub fn code(&self, x: Fq) -> u64 {
        debug_assert_eq!((x.p, x.k), (self.p, self.k));
        let mut acc = 0u64;
        for i in (0..self.k()).rev() {
            acc = acc * u64::from(self.p) + u64::from(x.c[i]);
        }
        acc
    }
}

/// An element of F_{p^k}. Arithmetic panics if operands belong to different
/// fields; fallible operations are `inv`, `sqrt` and parsing.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq {
    p: u32,
    k: u8,
    /// Coefficients c_0..c_{k-1}, each < p; slots at index >= k stay zero.
    c: [u32; K_MAX],
}

impl Fq {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k as usize
    }

    pub fn ctx(&self) -> FqCtx {
        FqCtx {
            p: self.p,
            k: self.k,
            modulus: modulus_poly(self.p, self.k as usize),
        }
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.c[..self.k as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&c| c == 0)
    }

    pub fn inv(&self) -> Result<Fq> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let q = self.ctx().q();
        Ok(self.pow(q - 2))
    }

    pub fn pow(&self, mut n: u64) -> Fq {
        let mut base = *self;
        let mut acc = self.ctx().one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }

    /// A square root, if one exists; deterministic (first in enumeration
    /// order). Errors with `Range` for non-squares.
    pub fn sqrt(&self) -> Result<Fq> {
        let ctx = self.ctx();
        for x in ctx.enumerate() {
            if x * x == *self {
                return Ok(x);
            }
        }
        Err(Error::Range(format!("{self} is not a square in F_{}^{}", self.p, self.k)))
    }

    fn check_same_field(&self, other: &Fq) {
        assert_eq!(
            (self.p, self.k),
            (other.p, other.k),
            "arithmetic between elements of different fields"
        );
    }
}

impl Add for Fq {
    type Output = Fq;
    fn add(self, rhs: Fq) -> Fq {
        self.check_same_field(&rhs);
        let mut out = self;
        for i in 0..self.k as usize {
            out.c[i] = (self.c[i] + rhs.c[i]) % self.p;
        }
        out
    }
}

impl Sub for Fq {
    type Output = Fq;
    fn sub(self, rhs: Fq) -> Fq {
        self + (-rhs)
    }
}

impl Neg for Fq {
    type Output = Fq;
    fn neg(self) -> Fq {
        let mut out = self;
        for i in 0..self.k as usize {
            out.c[i] = (self.p - self.c[i]) % self.p;
        }
        out
    }
}

impl Mul for Fq {
    type Output = Fq;
    fn mul(self, rhs: Fq) -> Fq {
        self.check_same_field(&rhs);
        let k = self.k as usize;
        let p = u64::from(self.p);
        if k == 1 {
            let mut out = self;
            out.c[0] = ((u64::from(self.c[0]) * u64::from(rhs.c[0])) % p) as u32;
            return out;
        }
        let modulus = modulus_poly(self.p, k);
        // Schoolbook product, then reduction by x^k = -Σ m_i x^i.
        let mut prod = [0u64; 2 * K_MAX];
        for i in 0..k {
            if self.c[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] += u64::from(self.c[i]) * u64::from(rhs.c[j]);
            }
        }
        for d in (k..2 * k - 1).rev() {
            let coeff = prod[d] % p;
            if coeff != 0 {
                let neg = p - coeff;
                for (i, &m) in modulus.iter().enumerate() {
                    prod[d - k + i] += neg * u64::from(m) % p;
                }
            }
            prod[d] = 0;
        }
        let mut out = self;
        for i in 0..k {
            out.c[i] = (prod[i] % p) as u32;
        }
        out
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "{}", self.c[0])
        } else {
            write!(f, "[")?;
            for i in 0..self.k as usize {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.c[i])?;
            }
            write!(f, "]")
        }
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fq[{}^{}]({})", self.p, self.k, self)
    }
}

/// The low coefficients m_0..m_{k-1} of the modulus x^k + Σ m_i x^i for
/// F_{p^k}: the lexicographically least monic irreducible, comparing
/// (m_0, m_1, ..., m_{k-1}) in ascending order.
pub fn modulus_poly(p: u32, k: usize) -> &'static [u32] {
    thread_local! {
        static LAST: Cell<(u32, usize, Option<&'static [u32]>)> = const { Cell::new((0, 0, None)) };
    }
    if let (lp, lk, Some(m)) = LAST.with(Cell::get) {
        if (lp, lk) == (p, k) {
            return m;
        }
    }
    static TABLE: Lazy<Mutex<HashMap<(u32, usize), &'static [u32]>>> =
        Lazy::new(|| Mutex::new(HashMap::new()));
    let mut table = TABLE.lock().expect("modulus table lock");
    let m = *table
        .entry((p, k))
        .or_insert_with(|| Box::leak(find_modulus(p, k).into_boxed_slice()));
    drop(table);
    LAST.with(|c| c.set((p, k, Some(m))));
    m
}

fn find_modulus(p: u32, k: usize) -> Vec<u32> {
    assert!(k >= 1 && k <= K_MAX, "degree out of range");
    // Candidates in lex order on (m_0, ..., m_{k-1}): increment m_{k-1}
    // fastest? No: m_0 is the most significant position, so step the tail
    // first. Equivalent: count in base p with m_{k-1} as the least
    // significant digit.
    let total = u64::from(p).pow(k as u32);
    for code in 0..total {
        let mut coeffs = vec![0u32; k];
        let mut c = code;
        for i in (0..k).rev() {
            coeffs[i] = (c % u64::from(p)) as u32;
            c /= u64::from(p);
        }
        if is_irreducible(p, &coeffs) {
            return coeffs;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over F_p");
}

/// Irreducibility of the monic polynomial x^k + Σ coeffs[i] x^i over F_p,
/// by trial division by all monic polynomials of degree 1..=k/2.
fn is_irreducible(p: u32, coeffs: &[u32]) -> bool {
    let k = coeffs.len();
    if k == 1 {
        return true;
    }
    let mut f: Vec<u32> = coeffs.to_vec();
    f.push(1);
    for d in 1..=k / 2 {
        let count = u64::from(p).pow(d as u32);
        for code in 0..count {
            let mut g = vec![0u32; d + 1];
            g[d] = 1;
            let mut c = code;
            for gi in g.iter_mut().take(d) {
                *gi = (c % u64::from(p)) as u32;
                c /= u64::from(p);
            }
            if poly_rem_is_zero(p, &f, &g) {
                return false;
            }
        }
    }
    true
}

/// Whether the monic polynomial g divides f over F_p.
fn poly_rem_is_zero(p: u32, f: &[u32], g: &[u32]) -> bool {
    let mut r: Vec<u64> = f.iter().map(|&c| u64::from(c)).collect();
    let dg = g.len() - 1;
    let p64 = u64::from(p);
    while r.len() > dg {
        let lead = *r.last().expect("nonempty") % p64;
        let shift = r.len() - 1 - dg;
        if lead != 0 {
            let neg = p64 - lead;
            for (i, &gc) in g.iter().enumerate() {
                r[shift + i] = (r[shift + i] + neg * u64::from(gc)) % p64;
            }
        }
        debug_assert_eq!(*r.last().unwrap() % p64, 0);
        r.pop();
    }
    r.iter().all(|&c| c % p64 == 0)
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_moduli() {
        // Degree 1: x itself.
        assert_eq!(modulus_poly(5, 1), &[0]);
        // p = 3: x^2 + 1 is the first irreducible in lex order from the
        // constant term ((0,*) all reducible since x^2 and x^2+x and x^2+2x
        // have roots).
        assert_eq!(modulus_poly(3, 2), &[1, 0]);
        // p = 5: x^2+1 = (x+2)(x+3), x^2+x+1 has no root (1,4,2 never 0):
        // first with constant term 1 and linear term 1.
        assert_eq!(modulus_poly(5, 2), &[1, 1]);
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        // Full axiom check for every pair/triple is cubic; keep q modest.
        for (p, k) in [(3u32, 1usize), (3, 2), (5, 1), (7, 1)] {
            let ctx = FqCtx::new(p, k).unwrap();
            let all: Vec<Fq> = ctx.enumerate().collect();
            assert_eq!(all.len() as u64, ctx.q());
            for &a in &all {
                assert_eq!(a + ctx.zero(), a);
                assert_eq!(a * ctx.one(), a);
                assert_eq!(a + (-a), ctx.zero());
                if !a.is_zero() {
                    assert_eq!(a * a.inv().unwrap(), ctx.one());
                }
                for &b in &all {
                    assert_eq!(a + b, b + a);
                    assert_eq!(a * b, b * a);
                    for &c in &all {
                        assert_eq!((a + b) + c, a + (b + c));
                        assert_eq!((a * b) * c, a * (b * c));
                        assert_eq!(a * (b + c), a * b + a * c);
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_and_multiplicative_order() {
        for (p, k) in [(3u32, 2usize), (5, 2), (3, 3)] {
            let ctx = FqCtx::new(p, k).unwrap();
            let q = ctx.q();
            for x in ctx.enumerate() {
                // x^q = x (Frobenius iterated k times is the identity).
                assert_eq!(x.pow(q), x);
                if !x.is_zero() {
                    assert_eq!(x.pow(q - 1), ctx.one());
                }
            }
        }
    }

    #[test]
    fn gen_satisfies_modulus() {
        // p = 3, k = 2, modulus x^2 + 1: t * t = -1 = 2.
        let ctx = FqCtx::new(3, 2).unwrap();
        let t = ctx.gen();
        assert_eq!(t * t, ctx.from_int(-1));
        assert_eq!(ctx.from_int(-1), ctx.from_int(2));
        // p = 5, k = 2, modulus x^2 + x + 1: t^2 = -t - 1.
        let ctx = FqCtx::new(5, 2).unwrap();
        let t = ctx.gen();
        assert_eq!(t * t, -t - ctx.one());
    }

    #[test]
    fn sqrt_matches_square_table() {
        for (p, k) in [(3u32, 1usize), (3, 2), (5, 1), (5, 2), (7, 1)] {
            let ctx = FqCtx::new(p, k).unwrap();
            let squares: std::collections::HashSet<Fq> =
                ctx.enumerate().map(|x| x * x).collect();
            for x in ctx.enumerate() {
                match x.sqrt() {
                    Ok(r) => {
                        assert_eq!(r * r, x);
                        assert!(squares.contains(&x));
                    }
                    Err(Error::Range(_)) => assert!(!squares.contains(&x)),
                    Err(e) => panic!("unexpected error {e}"),
                }
            }
        }
    }

    #[test]
    fn sqrt_of_nonresidue_errors() {
        let ctx = FqCtx::new(5, 1).unwrap();
        assert!(matches!(ctx.from_int(2).sqrt(), Err(Error::Range(_))));
        // In F_9 = F_3(t), t^2 = 2, so 2 becomes a square upstairs.
        let ctx9 = FqCtx::new(3, 2).unwrap();
        let r = ctx9.from_int(2).sqrt().unwrap();
        assert_eq!(r * r, ctx9.from_int(2));
    }

    #[test]
    fn context_rejects_bad_parameters() {
        assert!(FqCtx::new(4, 1).is_err());
        assert!(FqCtx::new(2, 1).is_err());
        assert!(FqCtx::new(9, 1).is_err());
        assert!(FqCtx::new(5, 0).is_err());
        assert!(FqCtx::new(5, K_MAX + 1).is_err());
    }

    #[test]
    fn code_inverts_enumeration() {
        let ctx = FqCtx::new(3, 2).unwrap();
        for (i, x) in ctx.enumerate().enumerate() {
            assert_eq!(ctx.code(x), i as u64);
        }
    }
}
