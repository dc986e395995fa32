//! Verification harness: suite runners, structured reports, and the
//! on-disk quotient cache.
//!
//! The binary is a thin shell over this module.  [`SuiteConfig`] collects
//! every knob with its default, [`run_suite`] executes the named suites
//! into a [`Report`], and the report serializes to sorted-key JSON whose
//! canonical form is byte-stable across runs and cache states.

mod cache;
mod config;
mod report;
mod suites;

pub use cache::{QuotientCache, CACHE_DIR_ENV};
pub use config::{parse_fq, parse_window, SuiteConfig};
pub use report::{Check, CheckStatus, Report};
pub use suites::{run_suite, run_suite_with_cache, SUITE_NAMES};
