//! Windowed model of locally constant functions on Qp with a tame tail law.
//!
//! A [`JFunc`] holds the character eta, a finite table of values on the
//! cosets of p^N Zp inside p^{-M} Zp, a tail constant c, and a tail radius
//! M_t <= M beyond which the function is pinned to x -> c * eta(x^{-1}).
//! Together these determine a total function on Qp, and through
//! [`JFunc::eval_ind`] a vector of the induced representation attached to
//! eta: the value at a group element (a b; c d) is eta(a) * c_phi when the
//! lower-left entry vanishes and eta(c^{-1}) * phi(d/c) otherwise.
//!
//! Group actions are computed cell by cell from that evaluation rule. The
//! output window is predicted by a Bruhat factorization of the acting
//! matrix, every output cell is cross-checked by sub-sampling p points, and
//! the tail law is re-certified at construction, so an action either
//! returns an exact representation or fails with `WindowOverflow`.

use std::fmt::Write as _;

use crate::algebra::{Fq, FqCtx, PExact};
use crate::group::GMat;
use crate::weights::TameChar;
use crate::{Error, Result};

/// Hard ceiling on table cells, so runaway window growth fails cleanly.
const MAX_CELLS: u64 = 200_000;

/// Window bookkeeping: values are explicit on p^{-m} Zp at resolution
/// p^n, and the tail law applies strictly below valuation -mt.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Window {
    m: i64,
    n: i64,
    mt: i64,
}

impl Window {
    /// Window after acting by an upper unipotent with off-diagonal y.
    fn upper(self, y: &PExact) -> Window {
        match y.valuation() {
            None => self,
            Some(v) => Window {
                m: self.m.max(-v),
                n: self.n,
                mt: self.mt.max(-v),
            },
        }
    }

    /// Window after acting by a torus element of valuation w.
    fn torus(self, w: i64) -> Window {
        Window {
            m: self.m - 2 * w,
            n: self.n + 2 * w,
            mt: self.mt - 2 * w,
        }
    }

    /// Window after acting by the Weyl reflection.
    fn weyl(self) -> Window {
        Window {
            m: self.n - 1,
            n: self.n + 2 * self.m.max(0),
            mt: self.n - 1,
        }
    }
}

/// Locally constant function on Qp in a finite window with a tail law.
#[derive(Clone)]
pub struct JFunc {
    chr: TameChar,
    win: Window,
    table: Vec<Fq>,
    c: Fq,
}

impl JFunc {
    /// Builds a function from explicit window data, certifying the tail
    /// law on every represented cell below the tail radius.
    pub fn from_parts(
        chr: TameChar,
        m: i64,
        n: i64,
        mt: i64,
        table: Vec<Fq>,
        c: Fq,
    ) -> Result<JFunc> {
        if m + n < 1 {
            return Err(Error::Shape(format!(
                "window needs at least one digit, got M={m} N={n}"
            )));
        }
        if mt > m || mt < 1 - n {
            return Err(Error::Shape(format!(
                "tail radius {mt} outside [1-N, M] = [{}, {m}]",
                1 - n
            )));
        }
        let cells = cell_count(chr.ctx().p(), m + n)?;
        if table.len() != cells {
            return Err(Error::Shape(format!(
                "table has {} cells, window wants {cells}",
                table.len()
            )));
        }
        let ctx = *chr.ctx();
        for v in table.iter().chain(std::iter::once(&c)) {
            if (v.p(), v.k()) != (ctx.p(), ctx.k()) {
                return Err(Error::ContextMismatch(
                    "table value outside the character's field".into(),
                ));
            }
        }
        let f = JFunc {
            chr,
            win: Window { m, n, mt },
            table,
            c,
        };
        f.certify_tail()?;
        Ok(f)
    }

    /// Checks table cells strictly below the tail radius against the law.
    fn certify_tail(&self) -> Result<()> {
        let p = self.p();
        for (i, val) in self.table.iter().enumerate() {
            let Some(j) = self.cell_valuation(i) else {
                continue;
            };
            if j >= -self.win.mt {
                continue;
            }
            let expected = if self.c.is_zero() {
                self.ctx().zero()
            } else {
                let x = PExact::from_int(p, i as i64) * PExact::p_power(p, -self.win.m);
                self.c * self.chr.eval(&x.inv()?)?
            };
            if *val != expected {
                return Err(Error::Domain(format!(
                    "tail law fails at cell {i} (valuation {j}): table has {val}, law wants {expected}"
                )));
            }
        }
        Ok(())
    }

    pub fn chr(&self) -> &TameChar {
        &self.chr
    }

    fn ctx(&self) -> FqCtx {
        *self.chr.ctx()
    }

    fn p(&self) -> u32 {
        self.chr.ctx().p()
    }

    /// Outer exponent: values are explicit on p^{-M} Zp.
    pub fn outer(&self) -> i64 {
        self.win.m
    }

    /// Resolution exponent: the function is constant mod p^N.
    pub fn resolution(&self) -> i64 {
        self.win.n
    }

    /// Tail radius: the tail law holds strictly below valuation -M_t.
    pub fn tail_radius(&self) -> i64 {
        self.win.mt
    }

    /// Tail constant, equal to the value at the identity under `eval_ind`.
    pub fn tail_constant(&self) -> Fq {
        self.c
    }

    pub fn table(&self) -> &[Fq] {
        &self.table
    }

    /// Representative of cell `i`: the little-endian base-p digits of `i`
    /// placed from position -M upward, which is exactly i * p^{-M}.
    fn cell_rep(&self, i: usize) -> PExact {
        let p = self.p();
        PExact::from_int(p, i as i64) * PExact::p_power(p, -self.win.m)
    }

    /// Valuation of the representative of cell `i`; None for the zero cell.
    fn cell_valuation(&self, i: usize) -> Option<i64> {
        if i == 0 {
            return None;
        }
        let p = i64::from(self.p());
        let mut v = -self.win.m;
        let mut r = i as i64;
        while r % p == 0 {
            r /= p;
            v += 1;
        }
        Some(v)
    }

    /// Total evaluation: table inside the window, tail law outside.
    pub fn eval(&self, x: &PExact) -> Result<Fq> {
        if x.p() != self.p() {
            return Err(Error::ContextMismatch(
                "evaluation point over a different prime".into(),
            ));
        }
        match x.valuation() {
            None => Ok(self.table[0]),
            Some(v) if v >= -self.win.m => {
                let mut idx = 0u64;
                let p = u64::from(self.p());
                for (j, d) in x.digits_below(self.win.n) {
                    let pos = u32::try_from(j + self.win.m).expect("digit inside window");
                    idx += u64::from(d) * p.pow(pos);
                }
                Ok(self.table[usize::try_from(idx).expect("window capped")])
            }
            Some(_) => {
                if self.c.is_zero() {
                    Ok(self.ctx().zero())
                } else {
                    Ok(self.c * self.chr.eval(&x.inv()?)?)
                }
            }
        }
    }

    /// Value of the represented induced-space vector at a group element.
    ///
    /// For h = (a b; c d) in SL2: eta(a) * tail_constant when c = 0, and
    /// eta(c^{-1}) * eval(d/c) otherwise. Total on SL2(Qp).
    pub fn eval_ind(&self, h: &GMat) -> Result<Fq> {
        if !h.in_sl2() {
            return Err(Error::OutOfSubgroup(
                "induced-space evaluation needs determinant 1".into(),
            ));
        }
        let low = h.entry(1, 0);
        if low.is_zero() {
            if self.c.is_zero() {
                return Ok(self.ctx().zero());
            }
            return Ok(self.chr.eval(h.entry(0, 0))? * self.c);
        }
        let arg = h.entry(1, 1).clone() * low.inv()?;
        Ok(self.chr.eval(&low.inv()?)? * self.eval(&arg)?)
    }

    /// Predicts the output window of `act` through a Bruhat factorization.
    fn act_window(&self, g: &GMat) -> Window {
        let start = self.win;
        let low = g.entry(1, 0);
        if low.is_zero() {
            // g = t(a) u(b/a): unipotent first, then the torus part.
            let a = g.entry(0, 0);
            let y = g.entry(0, 1).clone() * a.inv().expect("diagonal of invertible");
            let w = a.valuation().expect("diagonal of invertible");
            start.upper(&y).torus(w)
        } else {
            // g = u(a/c) t(1/c) s u(d/c), applied right to left.
            let inv = low.inv().expect("nonzero entry");
            let a = g.entry(0, 0).clone() * inv.clone();
            let d = g.entry(1, 1).clone() * inv.clone();
            let w = inv.valuation().expect("nonzero entry");
            start.upper(&d).weyl().torus(w).upper(&a)
        }
    }

    /// Exact left action of g in SL2: (g.phi)(x) = eval_ind(phi, s u(x) g).
    ///
    /// The output window comes from `act_window`; each output cell is then
    /// verified by sub-sampling p points, and the tail law is re-certified,
    /// so failures surface as `WindowOverflow` instead of wrong tables.
    pub fn act(&self, g: &GMat) -> Result<JFunc> {
        if !g.in_sl2() {
            return Err(Error::OutOfSubgroup(
                "function model carries an SL2 action".into(),
            ));
        }
        let win = self.act_window(g);
        let p = self.p();
        let cells = cell_count(p, win.m + win.n)?;
        let ctx = self.ctx();
        let mut table = vec![ctx.zero(); cells];
        let outer = PExact::p_power(p, -win.m);
        let step = PExact::p_power(p, win.n);
        for (i, slot) in table.iter_mut().enumerate() {
            let x = PExact::from_int(p, i as i64) * outer.clone();
            let val = self.eval_ind(&(&su(&x) * g))?;
            for d in 1..p {
                let xd = x.clone() + PExact::from_int(p, i64::from(d)) * step.clone();
                if self.eval_ind(&(&su(&xd) * g))? != val {
                    return Err(Error::WindowOverflow(format!(
                        "cell {i} of window M={} N={} is not constant under the action",
                        win.m, win.n
                    )));
                }
            }
            *slot = val;
        }
        let c = self.eval_ind(g)?;
        match JFunc::from_parts(self.chr, win.m, win.n, win.mt, table, c) {
            Ok(f) => Ok(f.trim()),
            Err(Error::Domain(msg)) => Err(Error::WindowOverflow(format!(
                "action output violates its predicted tail: {msg}"
            ))),
            Err(e) => Err(e),
        }
    }

    /// Exact re-windowing to a larger window; values come from `eval`.
    pub fn refine(&self, m: i64, n: i64) -> Result<JFunc> {
        if m < self.win.m || n < self.win.n {
            return Err(Error::Shape(format!(
                "refinement must grow the window: have ({}, {}), asked ({m}, {n})",
                self.win.m, self.win.n
            )));
        }
        let p = self.p();
        let cells = cell_count(p, m + n)?;
        let outer = PExact::p_power(p, -m);
        let mut table = Vec::with_capacity(cells);
        for i in 0..cells {
            let x = PExact::from_int(p, i as i64) * outer.clone();
            table.push(self.eval(&x)?);
        }
        JFunc::from_parts(self.chr, m, n, self.win.mt, table, self.c)
    }

    /// Canonical size reduction: pushes the tail radius down, absorbs
    /// tail-law cells into the tail, and coarsens redundant resolution.
    pub fn trim(&self) -> JFunc {
        let mut f = self.clone();
        loop {
            let before = (f.win, f.table.len());
            f.trim_tail_radius();
            f.trim_outer();
            f.trim_resolution();
            if (f.win, f.table.len()) == before {
                return f;
            }
        }
    }

    fn trim_tail_radius(&mut self) {
        'outer: while self.win.mt > 1 - self.win.n {
            let trial = self.win.mt - 1;
            for (i, val) in self.table.iter().enumerate() {
                let Some(j) = self.cell_valuation(i) else {
                    continue;
                };
                if j != -self.win.mt {
                    continue;
                }
                let expected = if self.c.is_zero() {
                    self.ctx().zero()
                } else {
                    let x = self.cell_rep(i);
                    self.c * self.chr.eval(&x.inv().expect("nonzero cell")).expect("unit ok")
                };
                if *val != expected {
                    break 'outer;
                }
            }
            self.win.mt = trial;
        }
    }

    fn trim_outer(&mut self) {
        let p = self.p() as usize;
        while self.win.m > self.win.mt && self.win.m + self.win.n > 1 {
            // Dropped cells have a nonzero lowest digit, hence valuation
            // exactly -m < -mt: already certified to follow the tail law.
            self.table = self.table.iter().step_by(p).copied().collect();
            self.win.m -= 1;
        }
    }

    fn trim_resolution(&mut self) {
        let p = self.p() as usize;
        loop {
            if self.win.m + self.win.n <= 1
                || self.win.n - 1 < 1 - self.win.m
                || self.win.n - 1 < 1 - self.win.mt
            {
                return;
            }
            let block = self.table.len() / p;
            let head = &self.table[..block];
            if !self.table.chunks(block).all(|ch| ch == head) {
                return;
            }
            self.table.truncate(block);
            self.win.n -= 1;
        }
    }

    /// Semantic equality: same character, same function everywhere.
    pub fn equal(&self, other: &JFunc) -> Result<bool> {
        if self.chr != other.chr {
            return Err(Error::ContextMismatch(
                "comparing functions over different characters".into(),
            ));
        }
        let m = self.win.m.max(other.win.m);
        let n = self.win.n.max(other.win.n);
        let a = self.refine(m, n)?;
        let b = other.refine(m, n)?;
        Ok(a.table == b.table && a.c == b.c)
    }

    pub fn is_zero_func(&self) -> bool {
        self.c.is_zero() && self.table.iter().all(Fq::is_zero)
    }

    /// Where two functions differ, grouped by valuation shell.
    /// Returns "identical" when they agree everywhere.
    pub fn diff_summary(&self, other: &JFunc) -> Result<String> {
        if self.chr != other.chr {
            return Err(Error::ContextMismatch(
                "comparing functions over different characters".into(),
            ));
        }
        let m = self.win.m.max(other.win.m);
        let n = self.win.n.max(other.win.n);
        let a = self.refine(m, n)?;
        let b = other.refine(m, n)?;
        let mut shells: std::collections::BTreeMap<i64, (usize, usize)> =
            std::collections::BTreeMap::new();
        let mut zero_cell = false;
        for (i, (x, y)) in a.table.iter().zip(&b.table).enumerate() {
            match a.cell_valuation(i) {
                None => zero_cell = x != y,
                Some(v) => {
                    let e = shells.entry(v).or_insert((0, 0));
                    e.1 += 1;
                    if x != y {
                        e.0 += 1;
                    }
                }
            }
        }
        let mut parts = Vec::new();
        if a.c != b.c {
            parts.push(format!("tail constants {} vs {}", a.c, b.c));
        }
        if zero_cell {
            parts.push("zero cell".to_string());
        }
        for (v, (bad, total)) in shells {
            if bad > 0 {
                parts.push(format!("shell v={v}: {bad}/{total} cells"));
            }
        }
        if parts.is_empty() {
            Ok("identical".to_string())
        } else {
            Ok(format!("differs at {}", parts.join("; ")))
        }
    }

    pub fn add(&self, other: &JFunc) -> Result<JFunc> {
        if self.chr != other.chr {
            return Err(Error::ContextMismatch(
                "adding functions over different characters".into(),
            ));
        }
        let m = self.win.m.max(other.win.m);
        let n = self.win.n.max(other.win.n);
        let a = self.refine(m, n)?;
        let b = other.refine(m, n)?;
        let table = a
            .table
            .iter()
            .zip(&b.table)
            .map(|(x, y)| *x + *y)
            .collect();
        let f = JFunc::from_parts(
            self.chr,
            m,
            n,
            a.win.mt.max(b.win.mt),
            table,
            a.c + b.c,
        )?;
        Ok(f.trim())
    }

    pub fn scale(&self, a: Fq) -> JFunc {
        let table = self.table.iter().map(|x| *x * a).collect();
        JFunc {
            chr: self.chr,
            win: self.win,
            table,
            c: self.c * a,
        }
    }

    pub fn neg(&self) -> JFunc {
        self.scale(self.ctx().zero() - self.ctx().one())
    }

    pub fn sub(&self, other: &JFunc) -> Result<JFunc> {
        self.add(&other.neg())
    }

    /// Text form: a header `p k a vp M N Mt c`, then one line per cell
    /// `digits : value` with little-endian digits and coefficient lists.
    pub fn write_text(&self) -> String {
        let mut out = String::new();
        let lam: Vec<String> = self
            .chr
            .value_at_p()
            .coeffs()
            .iter()
            .map(u32::to_string)
            .collect();
        let _ = writeln!(
            out,
            "{} {} {} {} {} {} {} {}",
            self.p(),
            self.chr.ctx().k(),
            self.chr.exponent(),
            lam.join(","),
            self.win.m,
            self.win.n,
            self.win.mt,
            coeff_csv(&self.c),
        );
        let p = usize::try_from(self.p()).expect("small prime");
        let digits = usize::try_from(self.win.m + self.win.n).expect("window capped");
        for (i, val) in self.table.iter().enumerate() {
            let mut ds = Vec::with_capacity(digits);
            let mut r = i;
            for _ in 0..digits {
                ds.push((r % p).to_string());
                r /= p;
            }
            let _ = writeln!(out, "{} : {}", ds.join(" "), coeff_csv(val));
        }
        out
    }

    pub fn read_text(s: &str) -> Result<JFunc> {
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty function text".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 8 {
            return Err(Error::Parse(format!(
                "header wants 8 fields `p k a vp M N Mt c`, got {}",
                fields.len()
            )));
        }
        let p: u32 = parse_field(fields[0], "p")?;
        let k: usize = parse_field(fields[1], "k")?;
        let exp: u32 = parse_field(fields[2], "a")?;
        let ctx = FqCtx::new(p, k)?;
        let lambda = parse_fq(ctx, fields[3])?;
        let chr = TameChar::new(ctx, exp, lambda)?;
        let m: i64 = parse_field(fields[4], "M")?;
        let n: i64 = parse_field(fields[5], "N")?;
        let mt: i64 = parse_field(fields[6], "Mt")?;
        let c = parse_fq(ctx, fields[7])?;
        let cells = cell_count(p, m + n)?;
        let mut table = vec![ctx.zero(); cells];
        let mut seen = 0usize;
        for line in lines {
            let (digits, value) = line
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("cell line without `:`: {line:?}")))?;
            let mut idx = 0u64;
            let mut scale = 1u64;
            let mut count = 0;
            for d in digits.split_whitespace() {
                let d: u64 = parse_field(d, "digit")?;
                if d >= u64::from(p) {
                    return Err(Error::Parse(format!("digit {d} not below p = {p}")));
                }
                idx += d * scale;
                scale *= u64::from(p);
                count += 1;
            }
            if count != m + n {
                return Err(Error::Parse(format!(
                    "cell line has {count} digits, window wants {}",
                    m + n
                )));
            }
            let idx = usize::try_from(idx).expect("window capped");
            if idx >= cells {
                return Err(Error::Parse(format!("cell index {idx} out of range")));
            }
            table[idx] = parse_fq(ctx, value.trim())?;
            seen += 1;
        }
        if seen != cells {
            return Err(Error::Parse(format!(
                "function text lists {seen} cells, window wants {cells}"
            )));
        }
        JFunc::from_parts(chr, m, n, mt, table, c)
    }
}

impl std::fmt::Debug for JFunc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "JFunc(chr={:?}, M={}, N={}, Mt={}, c={}, {} cells)",
            self.chr,
            self.win.m,
            self.win.n,
            self.win.mt,
            self.c,
            self.table.len()
        )
    }
}

fn coeff_csv(v: &Fq) -> String {
    let cs: Vec<String> = v.coeffs().iter().map(u32::to_string).collect();
    cs.join(",")
}

fn parse_fq(ctx: FqCtx, s: &str) -> Result<Fq> {
    let coeffs: Vec<u32> = s
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad field coefficient {c:?}")))
        })
        .collect::<Result<_>>()?;
    ctx.from_coeffs(&coeffs)
}

fn parse_field<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Parse(format!("bad {what} field {s:?}")))
}

fn cell_count(p: u32, digits: i64) -> Result<usize> {
    let d = u32::try_from(digits)
        .map_err(|_| Error::WindowOverflow(format!("negative digit count {digits}")))?;
    let cells = u64::from(p)
        .checked_pow(d)
        .filter(|&c| c <= MAX_CELLS)
        .ok_or_else(|| {
            Error::WindowOverflow(format!("window of {digits} digits over p = {p} too large"))
        })?;
    Ok(usize::try_from(cells).expect("bounded above"))
}

/// The matrix s * u(x) = (0 -1; 1 x), the coset representative carrying
/// the coordinate x in the evaluation rule.
fn su(x: &PExact) -> GMat {
    let p = x.p();
    GMat::new(
        p,
        [
            [PExact::zero(p), -PExact::one(p)],
            [PExact::one(p), x.clone()],
        ],
    )
}

/// The function scale * eta(x^{-1}) on valuations below `cut`, zero at
/// `cut` and above. Pure tail for cut <= 0.
pub fn tail_shape(chr: &TameChar, cut: i64, scale: Fq) -> Result<JFunc> {
    let ctx = *chr.ctx();
    let p = ctx.p();
    let m = (-cut).max(0);
    let n = cut.max(1 - m);
    let cells = cell_count(p, m + n)?;
    let mut table = vec![ctx.zero(); cells];
    if !scale.is_zero() {
        for (i, slot) in table.iter_mut().enumerate().skip(1) {
            let x = PExact::from_int(p, i as i64) * PExact::p_power(p, -m);
            if x.valuation().expect("nonzero index") < cut {
                *slot = scale * chr.eval(&x.inv()?)?;
            }
        }
    }
    JFunc::from_parts(*chr, m, n, (-cut).max(0), table, scale)
}

/// The function scale * 1_{v(x) >= a}, an indicator of a p-adic ball.
pub fn ball_shape(chr: &TameChar, a: i64, scale: Fq) -> Result<JFunc> {
    let ctx = *chr.ctx();
    let p = ctx.p();
    let m = (-a).max(0);
    let n = a.max(1 - m);
    let cells = cell_count(p, m + n)?;
    let mut table = vec![ctx.zero(); cells];
    for (i, slot) in table.iter_mut().enumerate() {
        let ok = if i == 0 {
            true
        } else {
            let x = PExact::from_int(p, i as i64) * PExact::p_power(p, -m);
            x.valuation().expect("nonzero index") >= a
        };
        if ok {
            *slot = scale;
        }
    }
    JFunc::from_parts(*chr, m, n, m, table, ctx.zero())
}

/// Named basis functions of the induced model for a tame character.
///
/// `phi0`/`f0` (the spherical vector), `f1`, `f2` (the Iwahori-invariant
/// pair) require an unramified character; `ell1`, `ell2` (the
/// pro-p-Iwahori-invariant pair) accept any tame character; and
/// `indicator(a)` is the plain ball indicator 1_{p^a Zp}.
pub fn make_basis(name: &str, chr: &TameChar) -> Result<JFunc> {
    let ctx = *chr.ctx();
    let one = ctx.one();
    let unramified_only = |label: &str| -> Result<()> {
        if chr.is_unramified() {
            Ok(())
        } else {
            Err(Error::CharacterMismatch(format!(
                "basis function {label} needs an unramified character"
            )))
        }
    };
    match name {
        "phi0" | "f0" => {
            unramified_only(name)?;
            let p = ctx.p();
            let cells = usize::try_from(p).expect("small prime");
            JFunc::from_parts(*chr, 0, 1, 0, vec![one; cells], one)
        }
        "f1" => {
            unramified_only("f1")?;
            tail_shape(chr, 0, one)
        }
        "f2" => {
            unramified_only("f2")?;
            // Table value eta(p): the tail constant of phi0 - f1 rescaled.
            ball_shape(chr, 0, chr.value_at_p())
        }
        "ell1" => tail_shape(chr, 0, one),
        "ell2" => ball_shape(chr, 0, one),
        other => {
            if let Some(inner) = other
                .strip_prefix("indicator(")
                .and_then(|t| t.strip_suffix(')'))
            {
                let a: i64 = inner
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad ball exponent {inner:?}")))?;
                ball_shape(chr, a, one)
            } else {
                Err(Error::UnknownName(format!("basis function {other:?}")))
            }
        }
    }
}
