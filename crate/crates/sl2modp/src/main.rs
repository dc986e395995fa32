//! Command-line front end: `verify` runs suites, `decide` answers one
//! isomorphism question, `report` re-renders a stored report.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sl2modp::cind::{decide_isomorphism, Sector};
use sl2modp::cli::{parse_window, Report, SuiteConfig};
use sl2modp::{Error, Result};

#[derive(Parser)]
#[command(name = "sl2modp", version, about = "Exact verification of a mod-p representation toolkit", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and emit a report.
    Verify {
        /// Suite names, or `all`.
        #[arg(required = true)]
        suites: Vec<String>,
        /// Flat `key = value` config file; explicit flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Residue characteristic (odd prime).
        #[arg(long)]
        p: Option<u32>,
        /// Coefficient field degree over the prime field.
        #[arg(long)]
        k: Option<usize>,
        /// Single weight degree; omitted means the whole range 0..=p-1.
        #[arg(long)]
        r: Option<u32>,
        /// Eigenvalue or character value as a field literal (`-1`, `2,1`).
        #[arg(long)]
        lambda: Option<String>,
        /// Ramified twist exponent; omitted means the full grid.
        #[arg(long)]
        a: Option<u32>,
        /// Truncation depth of the quotient models.
        #[arg(long)]
        depth: Option<u32>,
        /// Extra radius kept beyond the depth.
        #[arg(long)]
        slack: Option<u32>,
        /// Maximum word length for spans and routers.
        #[arg(long = "word-len")]
        word_len: Option<usize>,
        /// Alphabet for word enumeration: sl2, gl2, or gl2-extended.
        #[arg(long)]
        alphabet: Option<String>,
        /// Function-model window as `M,N`.
        #[arg(long)]
        window: Option<String>,
        /// Seed for the randomized property checks.
        #[arg(long)]
        seed: Option<u64>,
        /// Emit the report as JSON instead of a table.
        #[arg(long)]
        json: bool,
        /// Also write the JSON report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether two members of the supersingular family are isomorphic.
    Decide {
        /// The question; only `isomorphism` is understood.
        question: String,
        /// Residue characteristic (odd prime).
        #[arg(long)]
        p: u32,
        /// Coefficient field degree over the prime field.
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Left member as `r,sector` (sector `inf`/`infty`/`oo` or `zero`/`0`).
        #[arg(long)]
        left: String,
        /// Right member in the same form.
        #[arg(long)]
        right: String,
        /// Truncation depth for the invariant computations.
        #[arg(long, default_value_t = 2)]
        depth: u32,
        /// Extra radius kept beyond the depth.
        #[arg(long, default_value_t = 1)]
        slack: u32,
        /// Emit the decision as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Re-render a stored JSON report.
    Report {
        /// Report file written by `verify --json --out`.
        #[arg(long = "in")]
        input: PathBuf,
        /// Output format: text or json.
        #[arg(long, default_value = "text")]
        format: String,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Verify {
            suites,
            config,
            p,
            k,
            r,
            lambda,
            a,
            depth,
            slack,
            word_len,
            alphabet,
            window,
            seed,
            json,
            out,
        } => {
            let mut cfg = SuiteConfig::default();
            if let Some(path) = config {
                let text = std::fs::read_to_string(&path)?;
                cfg.apply_file_text(&text)?;
            }
            if let Some(v) = p {
                cfg.p = v;
            }
            if let Some(v) = k {
                cfg.k = v;
            }
            if r.is_some() {
                cfg.r = r;
            }
            if lambda.is_some() {
                cfg.lambda = lambda;
            }
            if a.is_some() {
                cfg.ramified_exp = a;
            }
            if let Some(v) = depth {
                cfg.depth = v;
            }
            if let Some(v) = slack {
                cfg.slack = v;
            }
            if let Some(v) = word_len {
                cfg.word_len = v;
            }
            if let Some(v) = alphabet {
                cfg.alphabet = v;
            }
            if let Some(v) = window {
                cfg.window = parse_window(&v)?;
            }
            if let Some(v) = seed {
                cfg.seed = v;
            }
            cfg.suites = suites;
            let report = sl2modp::cli::run_suite(&cfg)?;
            if let Some(path) = out {
                std::fs::write(&path, report.to_json_bytes())?;
            }
            if json {
                let bytes = report.to_json_bytes();
                print!("{}", String::from_utf8_lossy(&bytes));
            } else {
                print!("{}", report.render_text());
            }
            Ok(if report.has_failure() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Decide {
            question,
            p,
            k,
            left,
            right,
            depth,
            slack,
            json,
        } => {
            if question != "isomorphism" {
                return Err(Error::UnknownName(format!(
                    "question {question:?}; only isomorphism is understood"
                )));
            }
            let ctx = sl2modp::algebra::FqCtx::new(p, k)?;
            let l = parse_member(&left)?;
            let r = parse_member(&right)?;
            let d = decide_isomorphism(ctx, l, r, depth, slack)?;
            let consistent = d.evidence.iter().all(|e| e.ok);
            if json {
                let value = serde_json::json!({
                    "criterion": "isomp1",
                    "depth": depth,
                    "evidence": d.evidence.iter().map(|e| serde_json::json!({
                        "detail": e.detail,
                        "name": e.name,
                        "ok": e.ok,
                    })).collect::<Vec<_>>(),
                    "isomorphic": d.isomorphic,
                    "left": member_string(l),
                    "left_invariant": {"compact_fixed": d.left_invariant.1, "exponent": d.left_invariant.0},
                    "right": member_string(r),
                    "right_invariant": {"compact_fixed": d.right_invariant.1, "exponent": d.right_invariant.0},
                    "slack": slack,
                });
                println!("{}", serde_json::to_string_pretty(&value).map_err(|e| Error::Parse(e.to_string()))?);
            } else {
                println!(
                    "{} and {}: {}",
                    member_string(l),
                    member_string(r),
                    if d.isomorphic {
                        "isomorphic"
                    } else {
                        "not isomorphic"
                    }
                );
                println!(
                    "criterion: isomp1 (same degree and sector, or opposite sectors with degrees summing to p - 1)"
                );
                println!(
                    "invariants: left exponent {} compact-fixed {}, right exponent {} compact-fixed {}",
                    d.left_invariant.0, d.left_invariant.1, d.right_invariant.0, d.right_invariant.1
                );
                for e in &d.evidence {
                    println!("  [{}] {}: {}", if e.ok { "ok" } else { "XX" }, e.name, e.detail);
                }
            }
            Ok(if consistent {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Report { input, format } => {
            let bytes = std::fs::read(&input)?;
            let report = Report::from_json_bytes(&bytes)?;
            match format.as_str() {
                "text" => print!("{}", report.render_text()),
                "json" => {
                    let out = report.to_json_bytes();
                    print!("{}", String::from_utf8_lossy(&out));
                }
                other => {
                    return Err(Error::UnknownName(format!(
                        "format {other:?}; expected text or json"
                    )))
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse_member(s: &str) -> Result<(u32, Sector)> {
    let (r_text, sector_text) = s
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("member {s:?}; expected r,sector")))?;
    let r: u32 = r_text
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad degree in member {s:?}")))?;
    Ok((r, Sector::parse(sector_text.trim())?))
}

fn member_string(m: (u32, Sector)) -> String {
    format!("pi({}, {})", m.0, m.1)
}
