//! IO, file formats and self-test suites for the `td13` command line tool.
//!
//! The algorithmic core lives in `td13-core`; this crate adds the JSON
//! graph/drawing/report schemas, the SVG renderer, the worker-thread cap,
//! and the self-test suites the `selftest` subcommand runs.

pub mod commands;
pub mod formats;
pub mod render;
pub mod selftest;
pub mod workers;

use std::fmt;

/// Command failures mapped onto the documented exit codes.
#[derive(Debug)]
pub enum CmdError {
    /// Unreadable or invalid input: exit code 2.
    Input(String),
    /// No valid drawing within the retry budget: exit code 3.
    RetryExhausted(String),
    /// A drawing failed verification: exit code 4.
    VerifyFailed(String),
    /// A self-test suite failed: exit code 5.
    SelftestFailed(String),
}

impl CmdError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CmdError::Input(_) => 2,
            CmdError::RetryExhausted(_) => 3,
            CmdError::VerifyFailed(_) => 4,
            CmdError::SelftestFailed(_) => 5,
        }
    }
}

impl fmt::Display for CmdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CmdError::Input(m) => write!(f, "{m}"),
            CmdError::RetryExhausted(m) => write!(f, "{m}"),
            CmdError::VerifyFailed(m) => write!(f, "{m}"),
            CmdError::SelftestFailed(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CmdError {}

/// Formats a float with a fixed number of significant digits, in plain
/// decimal notation, so rendered artifacts are byte-stable.
pub fn fmt_sig(v: f64, sig: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let mag = v.abs().log10().floor() as i32;
    let decimals = (sig as i32 - 1 - mag).clamp(0, 17) as usize;
    format!("{v:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::fmt_sig;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(fmt_sig(0.5, 12), "0.500000000000");
        assert_eq!(fmt_sig(-1.25, 3), "-1.25");
        assert_eq!(fmt_sig(123456.0, 3), "123456");
        assert_eq!(fmt_sig(0.0, 12), "0");
    }
}
