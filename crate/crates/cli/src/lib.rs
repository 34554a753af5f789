//! Verification suite over the identity kernels: registered checks with
//! default sweeps, flat configuration files, and JSON/text reports.

pub mod checks;
pub mod config;
pub mod report;

use rayon::prelude::*;

pub use checks::{run_check, CheckName, ALL_CHECKS};
pub use config::{ConfigError, Grid, Params, SuiteConfig, DEFAULT_SEED};
pub use report::{emit_report, Format, ReportError, SuiteReport, VerificationReport, SUITE_VERSION};

/// Environment variable that sets the worker thread count.
pub const THREADS_ENV: &str = "GL3V_THREADS";

/// Runs every selected check; reports come back sorted by check name.
pub fn run_suite(config: &SuiteConfig) -> Vec<VerificationReport> {
    let mut reports: Vec<VerificationReport> =
        config.checks.par_iter().flat_map_iter(|&c| run_check(c, config)).collect();
    reports.sort_by(|a, b| a.check_name.cmp(&b.check_name));
    reports
}
