//! Vertices of the Bruhat-Tits tree of GL2(Qp), in exact normal form.
//!
//! Every vertex (homothety class of rank-2 lattices) has a unique
//! representative matrix `(p^a, b; 0, 1)` with `b` a finite digit expansion
//! truncated below exponent `a`. [`kz_factor`] computes that normal form for
//! an arbitrary invertible matrix exactly, together with the KZ cofactor, so
//! group actions on the tree never leave exact arithmetic.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::PExact;
use crate::group::GMat;
use crate::{Error, Result};

/// A tree vertex: the lattice class of `(p^a, b; 0, 1)` with
/// `b = Σ d * p^j` over the stored `(j, d)` digits, each `j < a`,
/// `1 <= d < p`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    a: i32,
    digits: Vec<(i32, u32)>,
}

impl Vertex {
    /// The class of the standard lattice.
    pub fn origin() -> Self {
        Vertex {
            a: 0,
            digits: Vec::new(),
        }
    }

    /// Builds from parts, validating the normal-form invariants.
    pub fn from_parts(p: u32, a: i32, digits: Vec<(i32, u32)>) -> Result<Self> {
        let mut last: Option<i32> = None;
        for &(j, d) in &digits {
            if j >= a {
                return Err(Error::Range(format!("digit exponent {j} >= level {a}")));
            }
            if d == 0 || d >= p {
                return Err(Error::Range(format!("digit {d} not in 1..{p}")));
            }
            if let Some(prev) = last {
                if j <= prev {
                    return Err(Error::Range("digit exponents must increase".into()));
                }
            }
            last = Some(j);
        }
        Ok(Vertex { a, digits })
    }

    /// Lattice level: the exponent of the diagonal p-power.
    pub fn level(&self) -> i32 {
        self.a
    }

    pub fn digits(&self) -> &[(i32, u32)] {
        &self.digits
    }

    /// Class of the distance to the origin mod 2; the two SL2 orbits.
    pub fn parity(&self) -> u8 {
        (self.a.rem_euclid(2)) as u8
    }

    /// The translation part `b` as an exact scalar.
    pub fn b_value(&self, p: u32) -> PExact {
        let mut acc = PExact::zero(p);
        for &(j, d) in &self.digits {
            acc = acc
                + PExact::from_int(p, i64::from(d)) * PExact::p_power(p, i64::from(j));
        }
        acc
    }

    /// The normal-form representative matrix `(p^a, b; 0, 1)`.
    pub fn matrix(&self, p: u32) -> GMat {
        GMat::new(
            p,
            [
                [PExact::p_power(p, i64::from(self.a)), self.b_value(p)],
                [PExact::zero(p), PExact::one(p)],
            ],
        )
    }

    /// Graph distance to the origin: `a - 2 * min(a, v(b), 0)`.
    pub fn dist_to_origin(&self) -> u32 {
        let a = i64::from(self.a);
        let vb = self.digits.first().map(|&(j, _)| i64::from(j));
        let m = [Some(a), vb, Some(0)]
            .into_iter()
            .flatten()
            .min()
            .expect("nonempty");
        u32::try_from(a - 2 * m).expect("distance is nonnegative")
    }

    /// Graph distance between two vertices.
    pub fn distance(&self, other: &Vertex, p: u32) -> u32 {
        if self == other {
            return 0;
        }
        let rel = &self.matrix(p).inv().expect("vertex matrices are invertible")
            * &other.matrix(p);
        vertex_of(&rel)
            .expect("product of invertible matrices")
            .dist_to_origin()
    }

    /// The p + 1 adjacent vertices.
    pub fn neighbors(&self, p: u32) -> Vec<Vertex> {
        let m = self.matrix(p);
        let mut out = Vec::with_capacity(p as usize + 1);
        for t in 0..p {
            let step = GMat::new(
                p,
                [
                    [PExact::p_power(p, 1), PExact::from_int(p, i64::from(t))],
                    [PExact::zero(p), PExact::one(p)],
                ],
            );
            out.push(vertex_of(&(&m * &step)).expect("invertible product"));
        }
        let step = GMat::diag(PExact::one(p), PExact::p_power(p, 1));
        out.push(vertex_of(&(&m * &step)).expect("invertible product"));
        out.sort();
        out.dedup();
        debug_assert_eq!(out.len(), p as usize + 1, "tree is (p+1)-regular");
        out
    }

    /// Image under a group element.
    pub fn act(&self, g: &GMat) -> Result<Vertex> {
        vertex_of(&(g * &self.matrix(g.p())))
    }

    /// Parses the display form `(a; j:d j:d ...)`.
    pub fn parse(p: u32, s: &str) -> Result<Vertex> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("vertex literal must be parenthesized: {s:?}")))?;
        let (a, rest) = inner
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("vertex literal needs a level: {s:?}")))?;
        let a: i32 = a
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad vertex level in {s:?}")))?;
        let mut digits = Vec::new();
        for tok in rest.split_whitespace() {
            let (j, d) = tok
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("bad digit token {tok:?} in {s:?}")))?;
            let j: i32 = j
                .parse()
                .map_err(|_| Error::Parse(format!("bad digit exponent in {s:?}")))?;
            let d: u32 = d
                .parse()
                .map_err(|_| Error::Parse(format!("bad digit in {s:?}")))?;
            digits.push((j, d));
        }
        Vertex::from_parts(p, a, digits)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", self.a)?;
        for &(j, d) in &self.digits {
            write!(f, " {j}:{d}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vertex({self})")
    }
}

/// The vertex determined by an invertible matrix: the class of its column
/// lattice.
pub fn vertex_of(g: &GMat) -> Result<Vertex> {
    kz_factor(g).map(|(v, _)| v)
}

/// Factors `g = c * k` exactly, where `c` is the normal-form representative
/// of the vertex of `g` and `k` lies in KZ.
pub fn kz_factor(g: &GMat) -> Result<(Vertex, GMat)> {
    let p = g.p();
    if g.det().is_zero() {
        return Err(Error::Domain("singular matrix has no vertex".into()));
    }
    // Accumulate right factors f with c = g * f; all factors lie in KZ.
    let mut cur = g.clone();
    let mut f = GMat::identity(p);
    let push = |cur: &mut GMat, f: &mut GMat, m: GMat| {
        *cur = &*cur * &m;
        *f = &*f * &m;
    };

    // Column swap so the bottom row has its minimal valuation on the right.
    let (c_val, d_val) = (g.entry(1, 0).valuation(), g.entry(1, 1).valuation());
    let need_swap = match (c_val, d_val) {
        (None, _) => false,
        (Some(_), None) => true,
        (Some(cv), Some(dv)) => cv < dv,
    };
    if need_swap {
        push(&mut cur, &mut f, GMat::from_ints(p, 0, 1, 1, 0));
    }

    // Clear the bottom-left entry with an integral column shear.
    if !cur.entry(1, 0).is_zero() {
        let m = -(cur.entry(1, 0).clone() / cur.entry(1, 1).clone());
        debug_assert!(m.is_p_integral());
        push(&mut cur, &mut f, GMat::lower(m));
    }

    // Normalize the bottom-right entry to 1 with a central scalar.
    let d = cur.entry(1, 1).clone();
    push(&mut cur, &mut f, GMat::scalar(d.inv()?));

    // Unit-normalize the top-left entry to a pure p-power.
    let top = cur.entry(0, 0).clone();
    let a = top.valuation().expect("nonzero diagonal");
    let unit = top / PExact::p_power(p, a);
    push(&mut cur, &mut f, GMat::diag(unit.inv()?, PExact::one(p)));

    // Reduce the translation entry to its canonical digits below a.
    let b = cur.entry(0, 1).clone();
    let b0 = b.truncate_below(a);
    let t = (b0.clone() - b) * PExact::p_power(p, -a);
    debug_assert!(t.is_p_integral());
    push(&mut cur, &mut f, GMat::upper(t));

    let digits = b0
        .digits_below(a)
        .into_iter()
        .map(|(j, d)| {
            (
                i32::try_from(j).expect("digit exponent fits i32"),
                u32::from(d),
            )
        })
        .collect();
    let v = Vertex::from_parts(p, i32::try_from(a).expect("level fits i32"), digits)?;

    let k = f.inv()?;
    debug_assert_eq!(&(&v.matrix(p) * &k), g, "factorization must be exact");
    debug_assert!(k.in_kz(), "cofactor must lie in KZ");
    Ok((v, k))
}

/// The ball of given radius around the origin, with a deterministic vertex
/// indexing: vertices sorted by (distance, normal form), distances
/// precomputed.
#[derive(Clone, Debug)]
pub struct Ball {
    p: u32,
    radius: u32,
    verts: Vec<Vertex>,
    dist: Vec<u32>,
    /// First index of each distance layer; layer d occupies
    /// `offsets[d]..offsets[d+1]`.
    offsets: Vec<usize>,
    index: BTreeMap<Vertex, usize>,
}

impl Ball {
    pub fn build(p: u32, radius: u32) -> Self {
        let mut verts: Vec<Vertex> = vec![Vertex::origin()];
        let mut dist: Vec<u32> = vec![0];
        let mut offsets: Vec<usize> = vec![0, 1];
        let mut index: BTreeMap<Vertex, usize> = BTreeMap::new();
        index.insert(Vertex::origin(), 0);
        let mut frontier: Vec<Vertex> = vec![Vertex::origin()];
        for d in 1..=radius {
            let mut layer: Vec<Vertex> = Vec::new();
            for v in &frontier {
                for w in v.neighbors(p) {
                    if !index.contains_key(&w) && !layer.contains(&w) {
                        layer.push(w);
                    }
                }
            }
            layer.sort();
            layer.dedup();
            for w in &layer {
                index.insert(w.clone(), verts.len());
                verts.push(w.clone());
                dist.push(d);
            }
            offsets.push(verts.len());
            frontier = layer;
        }
        Ball {
            p,
            radius,
            verts,
            dist,
            offsets,
            index,
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vertex(&self, i: usize) -> &Vertex {
        &self.verts[i]
    }

    pub fn index_of(&self, v: &Vertex) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        self.index.contains_key(v)
    }

    pub fn dist(&self, i: usize) -> u32 {
        self.dist[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vertex> {
        self.verts.iter()
    }

    /// Index range of the sphere at distance `d`.
    pub fn sphere(&self, d: u32) -> std::ops::Range<usize> {
        assert!(d <= self.radius, "sphere outside the ball");
        self.offsets[d as usize]..self.offsets[d as usize + 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forms_of_standard_elements() {
        let p = 5;
        assert_eq!(vertex_of(&GMat::identity(p)).unwrap(), Vertex::origin());
        // diag(1, p): level -1, no digits.
        let v = vertex_of(&GMat::diag(PExact::one(p), PExact::p_power(p, 1))).unwrap();
        assert_eq!((v.level(), v.digits().len()), (-1, 0));
        assert_eq!(v.dist_to_origin(), 1);
        // diag(p, 1): level 1.
        let w = vertex_of(&GMat::diag(PExact::p_power(p, 1), PExact::one(p))).unwrap();
        assert_eq!((w.level(), w.digits().len()), (1, 0));
        // (1, 1/p; 0, 1): level 0 with digit (-1, 1), distance 2.
        let u = vertex_of(&GMat::upper(PExact::p_power(p, -1))).unwrap();
        assert_eq!(u.level(), 0);
        assert_eq!(u.digits(), &[(-1, 1)]);
        assert_eq!(u.dist_to_origin(), 2);
        // (p^2, 1/p; 0, 1): distance 4.
        let x = Vertex::from_parts(p, 2, vec![(-1, 1)]).unwrap();
        assert_eq!(x.dist_to_origin(), 4);
    }

    #[test]
    fn kz_factorization_is_exact() {
        let p = 3;
        let px = |s: &str| PExact::parse(p, s).unwrap();
        let samples = [
            GMat::identity(p),
            GMat::weyl(p),
            GMat::upper(px("7@-2")),
            GMat::lower(px("2@1")),
            GMat::new(p, [[px("2@-1"), px("1@0")], [px("1@2"), px("1/2@0")]]),
            GMat::new(p, [[px("0@0"), px("2@3")], [px("1@-2"), px("5@0")]]),
        ];
        for g in &samples {
            let (v, k) = kz_factor(g).unwrap();
            assert_eq!(&(&v.matrix(p) * &k), g);
            assert!(k.in_kz());
        }
        assert!(kz_factor(&GMat::from_ints(p, 1, 1, 2, 2)).is_err());
    }

    #[test]
    fn vertex_is_invariant_under_right_kz_moves() {
        let p = 3;
        let px = |s: &str| PExact::parse(p, s).unwrap();
        let g = GMat::new(p, [[px("2@-1"), px("1@0")], [px("1@2"), px("1/2@0")]]);
        let kz_elements = [
            GMat::weyl(p),
            GMat::upper(px("2@0")),
            GMat::lower(px("1@0")),
            GMat::diag(px("2@0"), px("1@0")),
            GMat::scalar(px("1@1")),
            GMat::scalar(px("-1/4@-2")),
        ];
        let v = vertex_of(&g).unwrap();
        for k in &kz_elements {
            assert!(k.in_kz());
            assert_eq!(vertex_of(&(&g * k)).unwrap(), v);
        }
        // A non-KZ move changes the vertex.
        let a = GMat::diag(PExact::one(p), PExact::p_power(p, 1));
        assert_ne!(vertex_of(&(&g * &a)).unwrap(), v);
    }

    #[test]
    fn neighbors_of_origin() {
        let p = 5;
        let nb = Vertex::origin().neighbors(p);
        assert_eq!(nb.len(), 6);
        for v in &nb {
            assert_eq!(v.dist_to_origin(), 1);
            assert_eq!(v.parity(), 1);
        }
        // One neighbor at level -1, p at level 1 with digit t at exponent 0.
        assert_eq!(nb.iter().filter(|v| v.level() == -1).count(), 1);
        assert_eq!(nb.iter().filter(|v| v.level() == 1).count(), 5);
    }

    #[test]
    fn neighbor_relation_is_symmetric() {
        let p = 3;
        let ball = Ball::build(p, 3);
        for i in 0..ball.len() {
            let v = ball.vertex(i);
            for w in v.neighbors(p) {
                assert_eq!(v.distance(&w, p), 1);
                assert!(w.neighbors(p).contains(v));
            }
        }
    }

    #[test]
    fn ball_sizes_match_the_regular_tree_formula() {
        for (p, radius) in [(3u32, 4u32), (5, 3)] {
            let ball = Ball::build(p, radius);
            let expect = |n: u32| -> usize {
                if n == 0 {
                    1
                } else {
                    let p = p as u64;
                    let shell = (p.pow(n) - 1) / (p - 1);
                    (1 + (p + 1) * shell) as usize
                }
            };
            assert_eq!(ball.len(), expect(radius));
            for d in 0..=radius {
                let shell = if d == 0 { 1 } else { expect(d) - expect(d - 1) };
                assert_eq!(ball.sphere(d).len(), shell);
            }
        }
    }

    #[test]
    fn bfs_depth_equals_distance_formula() {
        let ball = Ball::build(3, 4);
        for i in 0..ball.len() {
            assert_eq!(ball.vertex(i).dist_to_origin(), ball.dist(i));
        }
    }

    #[test]
    fn group_action_preserves_distances_and_flips_parity() {
        let p = 3;
        let px = |s: &str| PExact::parse(p, s).unwrap();
        let ball = Ball::build(p, 2);
        let alpha = GMat::diag(PExact::one(p), PExact::p_power(p, 1));
        let sample = [
            GMat::weyl(p),
            GMat::upper(px("1@-1")),
            alpha.clone(),
            &GMat::lower(px("1@1")) * &alpha,
        ];
        for g in &sample {
            for i in 0..ball.len() {
                for j in (i + 1)..ball.len() {
                    let (v, w) = (ball.vertex(i), ball.vertex(j));
                    let (gv, gw) = (v.act(g).unwrap(), w.act(g).unwrap());
                    assert_eq!(v.distance(w, p), gv.distance(&gw, p));
                }
            }
        }
        // Odd-valuation determinant flips the parity class.
        for i in 0..ball.len() {
            let v = ball.vertex(i);
            assert_ne!(v.parity(), v.act(&alpha).unwrap().parity());
        }
    }

    #[test]
    fn display_round_trips_through_parts() {
        let v = Vertex::from_parts(5, 2, vec![(-1, 3), (1, 4)]).unwrap();
        assert_eq!(v.to_string(), "(2; -1:3 1:4)");
        assert_eq!(Vertex::parse(5, &v.to_string()).unwrap(), v);
        assert_eq!(Vertex::origin().to_string(), "(0;)");
        assert_eq!(Vertex::parse(5, "(0;)").unwrap(), Vertex::origin());
        assert!(Vertex::parse(5, "(2; 0:7)").is_err());
        assert!(Vertex::parse(5, "nonsense").is_err());
        assert!(Vertex::from_parts(5, 1, vec![(1, 1)]).is_err());
        assert!(Vertex::from_parts(5, 2, vec![(0, 5)]).is_err());
        assert!(Vertex::from_parts(5, 2, vec![(0, 1), (0, 2)]).is_err());
    }
}
