//! Span growth of word translates inside a truncation window.
//!
//! Generation statements about the induced representation are infinite-
//! dimensional; at finite truncation the checkable shadow is how much of
//! the window-truncated coordinate space the translates of a seed span.
//! A nontrivial tame character is expected to fill the window once the
//! word length is moderate, while the trivial character stalls on the
//! constants line. Both outcomes are evidence, not proof, and the report
//! says exactly what was tried.

use crate::algebra::{PExact, SparseVec, Subspace};
use crate::group::{words_up_to, Alphabet};
use crate::pseries::jfunc::{make_basis, JFunc};
use crate::weights::TameChar;
use crate::{Error, Result};

/// Outcome of a span-growth run.
#[derive(Clone, Debug)]
pub struct GenReport {
    pub window: (i64, i64),
    /// Coordinates of the truncated space: all window cells plus the
    /// tail constant.
    pub window_dim: usize,
    pub span_dim: usize,
    /// Word-seed pairs whose projected translate entered the span.
    pub words_used: usize,
    /// Word-seed pairs skipped because the exact action outgrew the
    /// representable window budget.
    pub words_skipped: usize,
    pub filled: bool,
}

/// Window-truncated coordinates of `f`: its values sampled on every cell
/// representative of the window, followed by the tail constant. Sampling
/// is a projection, so translates finer than the window still contribute.
fn embed(f: &JFunc, window: (i64, i64), dim: usize) -> Result<SparseVec> {
    let p = f.chr().ctx().p();
    let outer = PExact::p_power(p, -window.0);
    let mut entries: Vec<(usize, _)> = Vec::new();
    for i in 0..dim - 1 {
        let x = PExact::from_int(p, i as i64) * outer.clone();
        let v = f.eval(&x)?;
        if !v.is_zero() {
            entries.push((i, v));
        }
    }
    if !f.tail_constant().is_zero() {
        entries.push((dim - 1, f.tail_constant()));
    }
    Ok(SparseVec::from_entries(dim, entries))
}

/// Spans the translates of the named seed functions by all words up to
/// `max_len` over `alphabet`, inside the window-truncated space.
pub fn generation_check(
    chr: &TameChar,
    seed_names: &[&str],
    alphabet: &Alphabet,
    max_len: usize,
    window: (i64, i64),
) -> Result<GenReport> {
    let ctx = *chr.ctx();
    let cells = u64::from(ctx.p())
        .checked_pow(
            u32::try_from(window.0 + window.1)
                .map_err(|_| Error::Shape("window needs a nonnegative digit count".into()))?,
        )
        .and_then(|c| usize::try_from(c).ok())
        .ok_or_else(|| Error::WindowOverflow("generation window too large".into()))?;
    let dim = cells + 1;
    let seeds: Vec<JFunc> = seed_names
        .iter()
        .map(|name| make_basis(name, chr))
        .collect::<Result<_>>()?;
    let mut span = Subspace::new(ctx, dim);
    let mut used = 0;
    let mut skipped = 0;
    'words: for (_, g) in words_up_to(alphabet, max_len) {
        for seed in &seeds {
            let translate = match seed.act(&g) {
                Ok(f) => f,
                Err(Error::WindowOverflow(_)) => {
                    skipped += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
            let v = embed(&translate, window, dim)?;
            used += 1;
            span.insert(&v);
            if span.rank() == dim {
                break 'words;
            }
        }
    }
    Ok(GenReport {
        window,
        window_dim: dim,
        span_dim: span.rank(),
        words_used: used,
        words_skipped: skipped,
        filled: span.rank() == dim,
    })
}

/// Restriction of a pair of tame characters to the special linear group:
/// returns the quotient character and whether the two windowed models
/// agree (pointwise character factorization plus equal window
/// dimensions, the restriction map being the identity on tables).
pub fn restrict_gl2(
    chr1: &TameChar,
    chr2: &TameChar,
    window: (i64, i64),
) -> Result<(TameChar, bool)> {
    let eta = chr1.product(&chr2.inverse())?;
    let p = eta.ctx().p();
    let mut consistent = true;
    // The quotient character must factor the pair at every tame argument.
    for t in 1..i64::from(p) {
        if eta.eval_int(t)? != chr1.eval_int(t)? * chr2.eval_int(t)?.inv()? {
            consistent = false;
        }
    }
    let at_p = crate::algebra::PExact::p_power(p, 1);
    if eta.eval(&at_p)? != chr1.eval(&at_p)? * chr2.eval(&at_p)?.inv()? {
        consistent = false;
    }
    // Window dimension of the restricted model, versus the cell count of
    // the pair model on the same coset decomposition.
    let digits = u32::try_from(window.0 + window.1)
        .map_err(|_| Error::Shape("window needs a nonnegative digit count".into()))?;
    let zero_model = JFunc::from_parts(
        eta,
        window.0,
        window.1,
        window.0.min(0),
        vec![eta.ctx().zero(); usize::try_from(u64::from(p).pow(digits)).expect("small window")],
        eta.ctx().zero(),
    )?;
    let restricted_dim = zero_model.table().len() + 1;
    let pair_dim = usize::try_from(u64::from(p).pow(digits)).expect("small window") + 1;
    if restricted_dim != pair_dim {
        consistent = false;
    }
    Ok((eta, consistent))
}
