//! Suite configuration: defaults, validation, file loading, and the echo
//! that reports embed.
//!
//! The file format is flat `key = value` text mirroring the command-line
//! flags, one pair per line, `#` starting a comment.

use std::collections::BTreeMap;

use crate::algebra::{Fq, FqCtx};
use crate::{Error, Result};

/// Parameters of a verification run.  `r`, `lambda`, and `ramified_exp`
/// are optional restrictions; leaving them unset makes each suite walk its
/// default grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub p: u32,
    pub k: usize,
    pub r: Option<u32>,
    /// Value of the character at p, as a field literal (`2` or `2,1`).
    pub lambda: Option<String>,
    /// Tame exponent for the ramified suite.
    pub ramified_exp: Option<u32>,
    pub depth: u32,
    pub slack: u32,
    pub word_len: usize,
    pub alphabet: String,
    pub window: (i64, i64),
    pub seed: u64,
    pub suites: Vec<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            p: 5,
            k: 2,
            r: None,
            lambda: None,
            ramified_exp: None,
            depth: 4,
            slack: 1,
            word_len: 4,
            alphabet: "sl2".to_string(),
            window: (3, 3),
            seed: 17,
            suites: Vec::new(),
        }
    }
}

fn is_odd_prime(p: u32) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if !is_odd_prime(self.p) {
            return Err(Error::Range(format!("p = {} is not an odd prime", self.p)));
        }
        if let Some(r) = self.r {
            if r > self.p - 1 {
                return Err(Error::Range(format!(
                    "r = {r} exceeds p - 1 = {}",
                    self.p - 1
                )));
            }
        }
        if let Some(a) = self.ramified_exp {
            if a == 0 || a % (self.p - 1) == 0 {
                return Err(Error::Range(format!(
                    "ramified exponent {a} is trivial modulo p - 1"
                )));
            }
        }
        if self.depth < 2 {
            return Err(Error::Range(format!(
                "depth {} is below the minimum 2",
                self.depth
            )));
        }
        if self.window.0 < 0 || self.window.1 < 1 {
            return Err(Error::Range(format!(
                "window ({}, {}) needs M >= 0 and N >= 1",
                self.window.0, self.window.1
            )));
        }
        if self.word_len == 0 {
            return Err(Error::Range("word length must be positive".into()));
        }
        // The field context enforces its own parameter ranges.
        FqCtx::new(self.p, self.k)?;
        Ok(())
    }

    /// Field context for the configured (p, k).
    pub fn ctx(&self) -> Result<FqCtx> {
        FqCtx::new(self.p, self.k)
    }

    /// The configured lambda as a field element, if set.
    pub fn lambda_value(&self, ctx: FqCtx) -> Result<Option<Fq>> {
        match &self.lambda {
            None => Ok(None),
            Some(s) => parse_fq(ctx, s).map(Some),
        }
    }

    /// Degrees the weight-indexed suites walk: the configured `r` alone,
    /// or all of `0 ..= p-1`.
    pub fn r_grid(&self) -> Vec<u32> {
        match self.r {
            Some(r) => vec![r],
            None => (0..self.p).collect(),
        }
    }

    /// Applies `key = value` lines from a configuration file.
    pub fn apply_file_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!("line {}: expected key = value", lineno + 1))
            })?;
            self.set(key.trim(), value.trim())
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    /// Sets one field from its flag name.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::Parse(format!("bad {what} value {value:?}"));
        match key {
            "p" => self.p = value.parse().map_err(|_| bad("p"))?,
            "k" => self.k = value.parse().map_err(|_| bad("k"))?,
            "r" => self.r = Some(value.parse().map_err(|_| bad("r"))?),
            "lambda" => self.lambda = Some(value.to_string()),
            "a" => self.ramified_exp = Some(value.parse().map_err(|_| bad("a"))?),
            "depth" => self.depth = value.parse().map_err(|_| bad("depth"))?,
            "slack" => self.slack = value.parse().map_err(|_| bad("slack"))?,
            "word-len" => self.word_len = value.parse().map_err(|_| bad("word-len"))?,
            "alphabet" => self.alphabet = value.to_string(),
            "window" => self.window = parse_window(value)?,
            "seed" => self.seed = value.parse().map_err(|_| bad("seed"))?,
            other => return Err(Error::UnknownName(format!("configuration key {other:?}"))),
        }
        Ok(())
    }

    /// Every parameter, echoed verbatim for the report.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("p".to_string(), self.p.to_string());
        m.insert("k".to_string(), self.k.to_string());
        m.insert(
            "r".to_string(),
            self.r.map_or_else(|| "all".to_string(), |r| r.to_string()),
        );
        m.insert(
            "lambda".to_string(),
            self.lambda.clone().unwrap_or_else(|| "grid".to_string()),
        );
        m.insert(
            "a".to_string(),
            self.ramified_exp
                .map_or_else(|| "grid".to_string(), |a| a.to_string()),
        );
        m.insert("depth".to_string(), self.depth.to_string());
        m.insert("slack".to_string(), self.slack.to_string());
        m.insert("word-len".to_string(), self.word_len.to_string());
        m.insert("alphabet".to_string(), self.alphabet.clone());
        m.insert(
            "window".to_string(),
            format!("{},{}", self.window.0, self.window.1),
        );
        m.insert("seed".to_string(), self.seed.to_string());
        m
    }
}

/// Parses `M,N` into a window pair.
pub fn parse_window(s: &str) -> Result<(i64, i64)> {
    let (m, n) = s
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("window needs the form M,N, got {s:?}")))?;
    let m = m
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad window M in {s:?}")))?;
    let n = n
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad window N in {s:?}")))?;
    Ok((m, n))
}

/// Parses a field literal: a single integer (negatives taken modulo p) or
/// comma-separated coefficients of the extension basis, constant first.
pub fn parse_fq(ctx: FqCtx, s: &str) -> Result<Fq> {
    let p = i64::from(ctx.p());
    let mut coeffs: Vec<u32> = s
        .split(',')
        .map(|tok| {
            let n: i64 = tok
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad field literal {s:?}")))?;
            Ok(u32::try_from(n.rem_euclid(p)).expect("reduced residue fits"))
        })
        .collect::<Result<_>>()?;
    // A short literal names a prime-field scalar; missing high
    // coefficients are zero.
    if coeffs.len() < ctx.k() {
        coeffs.resize(ctx.k(), 0);
    }
    ctx.from_coeffs(&coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        assert!(SuiteConfig::default().validate().is_ok());
    }

    #[test]
    fn validation_rejects_bad_parameters() {
        let mut c = SuiteConfig::default();
        c.p = 4;
        assert!(matches!(c.validate(), Err(Error::Range(_))));
        c.p = 9;
        assert!(matches!(c.validate(), Err(Error::Range(_))));
        let mut c = SuiteConfig::default();
        c.r = Some(5);
        assert!(matches!(c.validate(), Err(Error::Range(_))));
        let mut c = SuiteConfig::default();
        c.depth = 1;
        assert!(matches!(c.validate(), Err(Error::Range(_))));
        let mut c = SuiteConfig::default();
        c.ramified_exp = Some(4);
        assert!(matches!(c.validate(), Err(Error::Range(_))));
    }

    #[test]
    fn file_text_mirrors_flags() {
        let mut c = SuiteConfig::default();
        c.apply_file_text(
            "# sample configuration\n\
             p = 3\n\
             k = 1\n\
             r = 2\n\
             depth = 3\n\
             window = 1,2   # small window\n\
             seed = 99\n",
        )
        .unwrap();
        assert_eq!(c.p, 3);
        assert_eq!(c.k, 1);
        assert_eq!(c.r, Some(2));
        assert_eq!(c.depth, 3);
        assert_eq!(c.window, (1, 2));
        assert_eq!(c.seed, 99);
    }

    #[test]
    fn file_errors_carry_line_numbers() {
        let mut c = SuiteConfig::default();
        let err = c.apply_file_text("p = 5\nnot a pair\n").unwrap_err();
        assert!(err.to_string().contains("line 2"));
        let err = c.apply_file_text("mystery = 1\n").unwrap_err();
        assert!(err.to_string().contains("mystery"));
    }

    #[test]
    fn field_literals_parse() {
        let ctx = FqCtx::new(5, 2).unwrap();
        assert_eq!(parse_fq(ctx, "2").unwrap(), ctx.from_int(2));
        assert_eq!(parse_fq(ctx, "-1").unwrap(), -ctx.one());
        assert_eq!(
            parse_fq(ctx, "2,1").unwrap(),
            ctx.from_coeffs(&[2, 1]).unwrap()
        );
        assert!(parse_fq(ctx, "x").is_err());
    }

    #[test]
    fn echo_lists_every_parameter() {
        let echo = SuiteConfig::default().echo();
        for key in [
            "p", "k", "r", "lambda", "a", "depth", "slack", "word-len", "alphabet", "window",
            "seed",
        ] {
            assert!(echo.contains_key(key), "missing {key}");
        }
        assert_eq!(echo["r"], "all");
        assert_eq!(echo["window"], "3,3");
    }
}
