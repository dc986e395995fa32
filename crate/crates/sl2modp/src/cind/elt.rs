//! Finitely supported elements of a compactly induced representation.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{Fq, SparseVec};
use crate::group::{kz_factor, Ball, GMat, Vertex};
use crate::weights::Weight;
use crate::{Error, Result};

/// An element of the induced space: a finitely supported function on the
/// vertices of the tree with values in the weight space.
///
/// The term `[g, w]` denotes the section supported on the class of `g` with
/// value `w`; the stored key is the canonical vertex of `g` and the stored
/// coefficient absorbs the compact twist, so equality of stored maps is
/// equality in the representation.
///
/// Coefficient vectors are indexed by `i` for the monomial `x^(r-i) y^i` and
/// never kept when identically zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CIndElt {
    weight: Weight,
    coeffs: BTreeMap<Vertex, Vec<Fq>>,
}

impl CIndElt {
    pub fn zero(weight: Weight) -> Self {
        CIndElt {
            weight,
            coeffs: BTreeMap::new(),
        }
    }

    /// The term `[g, w]`, reduced to its canonical vertex.
    pub fn elementary(weight: Weight, g: &GMat, w: &[Fq]) -> Result<Self> {
        if w.len() != weight.dim() {
            return Err(Error::Shape(format!(
                "coefficient vector has length {}, weight dimension is {}",
                w.len(),
                weight.dim()
            )));
        }
        let (vertex, k) = kz_factor(g)?;
        let mat = weight.sigma_kz(&k)?;
        let image = mat.mul_vec(&dense_to_sparse(w));
        let mut out = CIndElt::zero(weight);
        out.add_at(&vertex, &sparse_to_dense(weight.ctx(), &image, weight.dim()));
        Ok(out)
    }

    /// The term supported at a canonical vertex with no compact twist.
    pub fn from_vertex(weight: Weight, v: &Vertex, w: &[Fq]) -> Result<Self> {
        if w.len() != weight.dim() {
            return Err(Error::Shape(format!(
                "coefficient vector has length {}, weight dimension is {}",
                w.len(),
                weight.dim()
            )));
        }
        let mut out = CIndElt::zero(weight);
        out.add_at(v, w);
        Ok(out)
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of vertices in the support.
    pub fn support_size(&self) -> usize {
        self.coeffs.len()
    }

    pub fn support(&self) -> impl Iterator<Item = (&Vertex, &[Fq])> {
        self.coeffs.iter().map(|(v, w)| (v, w.as_slice()))
    }

    pub fn coeff(&self, v: &Vertex) -> Option<&[Fq]> {
        self.coeffs.get(v).map(|w| w.as_slice())
    }

    /// Largest distance from the origin over the support, 0 for the zero
    /// element.
    pub fn max_dist(&self) -> u32 {
        self.coeffs
            .keys()
            .map(Vertex::dist_to_origin)
            .max()
            .unwrap_or(0)
    }

    fn add_at(&mut self, v: &Vertex, w: &[Fq]) {
        let dim = self.weight.dim();
        let entry = self
            .coeffs
            .entry(v.clone())
            .or_insert_with(|| vec![self.weight.ctx().zero(); dim]);
        for (slot, &c) in entry.iter_mut().zip(w) {
            *slot = *slot + c;
        }
        if entry.iter().all(Fq::is_zero) {
            self.coeffs.remove(v);
        }
    }

    pub fn add(&self, other: &CIndElt) -> CIndElt {
        assert_eq!(self.weight, other.weight, "weight mismatch");
        let mut out = self.clone();
        for (v, w) in &other.coeffs {
            out.add_at(v, w);
        }
        out
    }

    pub fn sub(&self, other: &CIndElt) -> CIndElt {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CIndElt {
        self.scale(-self.weight.ctx().one())
    }

    pub fn scale(&self, c: Fq) -> CIndElt {
        let mut out = CIndElt::zero(self.weight);
        if c.is_zero() {
            return out;
        }
        for (v, w) in &self.coeffs {
            out.coeffs
                .insert(v.clone(), w.iter().map(|&x| x * c).collect());
        }
        out
    }

    /// Left translation by `g`.
    pub fn act(&self, g: &GMat) -> Result<CIndElt> {
        let p = self.weight.ctx().p();
        let mut out = CIndElt::zero(self.weight);
        for (v, w) in &self.coeffs {
            let moved = g * &v.matrix(p);
            let term = CIndElt::elementary(self.weight, &moved, w)?;
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Splits into the parts supported on even and odd vertices.
    pub fn parity_split(&self) -> (CIndElt, CIndElt) {
        let mut even = CIndElt::zero(self.weight);
        let mut odd = CIndElt::zero(self.weight);
        for (v, w) in &self.coeffs {
            let target = if v.parity() == 0 { &mut even } else { &mut odd };
            target.coeffs.insert(v.clone(), w.clone());
        }
        (even, odd)
    }

    /// Coordinates in a ball: slot `index * dim + i` holds the coefficient of
    /// `x^(r-i) y^i` at the vertex with that ball index.
    pub fn to_coords(&self, ball: &Ball) -> Result<SparseVec> {
        let dim = self.weight.dim();
        let mut entries = Vec::new();
        for (v, w) in &self.coeffs {
            let idx = ball.index_of(v).ok_or_else(|| {
                Error::SupportOverflow(format!(
                    "support vertex {v} at distance {} exceeds ball radius {}",
                    v.dist_to_origin(),
                    ball.radius()
                ))
            })?;
            for (i, &c) in w.iter().enumerate() {
                if !c.is_zero() {
                    entries.push((idx * dim + i, c));
                }
            }
        }
        Ok(SparseVec::from_entries(ball.len() * dim, entries))
    }

    pub fn from_coords(weight: Weight, ball: &Ball, v: &SparseVec) -> Result<CIndElt> {
        let dim = weight.dim();
        if v.dim() != ball.len() * dim {
            return Err(Error::Shape(format!(
                "coordinate vector has dimension {}, ball needs {}",
                v.dim(),
                ball.len() * dim
            )));
        }
        let mut out = CIndElt::zero(weight);
        for (slot, c) in v.iter() {
            let mut w = vec![weight.ctx().zero(); dim];
            w[slot % dim] = c;
            out.add_at(ball.vertex(slot / dim), &w);
        }
        Ok(out)
    }

    /// One line per support vertex, sorted: `<vertex> : c0 c1 ...` with the
    /// coefficients in base-p digit form.
    pub fn write_text(&self) -> String {
        let ctx = self.weight.ctx();
        let mut out = format!("{} {} {}\n", ctx.p(), ctx.k(), self.weight.r());
        for (v, w) in &self.coeffs {
            let cs: Vec<String> = w.iter().map(|&c| ctx.code(c).to_string()).collect();
            out.push_str(&format!("{v} : {}\n", cs.join(" ")));
        }
        out
    }

    pub fn read_text(s: &str) -> Result<CIndElt> {
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty element text".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("bad element header {header:?}")));
        }
        let p: u32 = parts[0]
            .parse()
            .map_err(|_| Error::Parse(format!("bad p in {header:?}")))?;
        let k: usize = parts[1]
            .parse()
            .map_err(|_| Error::Parse(format!("bad k in {header:?}")))?;
        let r: u32 = parts[2]
            .parse()
            .map_err(|_| Error::Parse(format!("bad r in {header:?}")))?;
        let ctx = crate::algebra::FqCtx::new(p, k)?;
        let weight = Weight::new(ctx, r)?;
        let mut out = CIndElt::zero(weight);
        for line in lines {
            let (vtx, rest) = line
                .rsplit_once(':')
                .ok_or_else(|| Error::Parse(format!("bad element line {line:?}")))?;
            let v = Vertex::parse(p, vtx.trim())?;
            let mut w = Vec::with_capacity(weight.dim());
            for tok in rest.split_whitespace() {
                let code: u64 = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad coefficient {tok:?}")))?;
                w.push(fq_from_code(&ctx, code)?);
            }
            if w.len() != weight.dim() {
                return Err(Error::Parse(format!(
                    "line {line:?} has {} coefficients, expected {}",
                    w.len(),
                    weight.dim()
                )));
            }
            out.add_at(&v, &w);
        }
        Ok(out)
    }
}

impl fmt::Display for CIndElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let ctx = self.weight.ctx();
        for (n, (v, w)) in self.coeffs.iter().enumerate() {
            if n > 0 {
                writeln!(f)?;
            }
            let cs: Vec<String> = w.iter().map(|&c| ctx.code(c).to_string()).collect();
            write!(f, "{v} : {}", cs.join(" "))?;
        }
        Ok(())
    }
}

fn dense_to_sparse(w: &[Fq]) -> SparseVec {
    SparseVec::from_entries(
        w.len(),
        w.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| (i, c))
            .collect(),
    )
}

fn sparse_to_dense(ctx: &crate::algebra::FqCtx, v: &SparseVec, dim: usize) -> Vec<Fq> {
    let mut out = vec![ctx.zero(); dim];
    for (i, c) in v.iter() {
        out[i] = c;
    }
    out
}

fn fq_from_code(ctx: &crate::algebra::FqCtx, code: u64) -> Result<Fq> {
    let p = ctx.p() as u64;
    let mut coeffs = vec![0u32; ctx.k()];
    let mut rest = code;
    for slot in coeffs.iter_mut() {
        *slot = (rest % p) as u32;
        rest /= p;
    }
    if rest != 0 {
        return Err(Error::Range(format!(
            "coefficient code {code} out of range for q = {}",
            ctx.q()
        )));
    }
    ctx.from_coeffs(&coeffs)
}
