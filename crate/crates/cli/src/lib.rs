//! Command-line front end for the `fourier-tauber` library.
//!
//! Every command returns `Ok(true)` when all checked inequalities hold,
//! `Ok(false)` on a violation and `Err` on invalid input.

pub mod args;
pub mod commands;
pub mod config;

use anyhow::Result;

pub use args::{Cli, Command};

pub fn run(cli: Cli) -> Result<bool> {
    let cfg = cli.config.as_deref();
    macro_rules! dispatch {
        ($args:expr, $f:path) => {{
            let a = match cfg {
                Some(p) => config::overlay($args, p)?,
                None => $args,
            };
            $f(&a)
        }};
    }
    match cli.command {
        Command::BuildTestfn(a) => dispatch!(a, commands::build_testfn),
        Command::VerifyTestfn(a) => dispatch!(a, commands::verify_testfn),
        Command::TauberSuite(a) => dispatch!(a, commands::tauber_suite),
        Command::LaplaceReport(a) => dispatch!(a, commands::laplace_report),
        Command::RemainderScan(a) => dispatch!(a, commands::remainder_scan),
    }
}
