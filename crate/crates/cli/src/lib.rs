//! Command-line front end: analytic and Monte Carlo sweeps emitted as CSV.

pub mod args;
pub mod config;
pub mod error;
pub mod figures;
pub mod run;
pub mod selftest;
pub mod sweep;

use std::fs::File;
use std::io::{self, BufWriter, Write};

use args::{Cli, Command, Engines, SweepArgs};
use error::{CliError, Result};
use sweep::SweepSpec;

pub const THREADS_ENV: &str = "TWARQ_THREADS";

fn sweep(mut args: SweepArgs, base: Option<(&str, &str)>, default_engines: Engines, required: Option<Engines>) -> Result<()> {
    if let Some(path) = args.config.clone() {
        args.merge(&config::load(&path)?)?;
    }
    if let Some((text, source)) = base {
        args.merge(&config::parse(text, source)?)?;
    }
    let spec = SweepSpec::from_args(&args, default_engines)?;
    if let Some(required) = required {
        if (required.analytic() && !spec.engines.analytic()) || (required.simulate() && !spec.engines.simulate()) {
            return Err(CliError::Usage(format!("--engines: this command needs the {required:?} engine").to_lowercase()));
        }
    }
    let rows = run::execute(&spec)?;
    match &args.out {
        Some(path) => run::write_csv(&rows, BufWriter::new(File::create(path)?)),
        None => run::write_csv(&rows, io::stdout().lock()),
    }
}

fn pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV}: expected a positive integer, got '{v}'")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Numerical(format!("thread pool: {e}")))
}

pub fn run(cli: Cli) -> Result<()> {
    let pool = pool()?;
    pool.install(|| match cli.command {
        Command::Analytic(args) => sweep(args, None, Engines::Analytic, Some(Engines::Analytic)),
        Command::Simulate(args) => sweep(args, None, Engines::Simulate, Some(Engines::Simulate)),
        Command::Figure { name, show_config, args } => {
            let text = figures::config(&name)?;
            if show_config {
                io::stdout().write_all(text.as_bytes())?;
                return Ok(());
            }
            let source = format!("figure {name}");
            sweep(args, Some((text, &source)), Engines::Both, None)
        }
        Command::Selftest { n_slots } => {
            let checks = selftest::run_checks(n_slots)?;
            let mut failed = 0;
            for c in &checks {
                println!("{} {:<24} {}", if c.pass { "ok  " } else { "FAIL" }, c.name, c.detail);
                failed += !c.pass as usize;
            }
            if failed > 0 {
                return Err(CliError::Numerical(format!("{failed} self-test check(s) failed")));
            }
            Ok(())
        }
    })
}
