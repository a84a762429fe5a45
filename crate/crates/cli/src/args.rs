use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use twarq::protocol::{Strategy, XorConvention};
use twarq::sim::CsiMode;

use crate::config::Entry;
use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "twarq", version, about = "Throughput of cooperative network-coded ARQ over correlated fading links")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Steady-state throughput from the sub-state Markov chain.
    Analytic(SweepArgs),
    /// Monte Carlo throughput with batch-means error bars.
    Simulate(SweepArgs),
    /// Run one of the canned figure sweeps (fig4..fig9, fig9-csi).
    Figure {
        name: String,
        /// Print the bundled config instead of running it.
        #[arg(long)]
        show_config: bool,
        #[command(flatten)]
        args: SweepArgs,
    },
    /// Quick consistency checks of both engines.
    Selftest {
        #[arg(long, default_value_t = 200_000)]
        n_slots: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engines {
    Analytic,
    Simulate,
    Both,
}

impl Engines {
    pub fn analytic(self) -> bool {
        self != Engines::Simulate
    }

    pub fn simulate(self) -> bool {
        self != Engines::Analytic
    }
}

/// Everything that shapes a sweep. Lists are comma separated or repeated.
#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    /// Strategies to evaluate (default: all).
    #[arg(long, value_delimiter = ',')]
    pub strategy: Vec<Strategy>,
    /// Direct-link outage probability.
    #[arg(long, value_delimiter = ',', conflicts_with = "fs_db", allow_negative_numbers = true)]
    pub pss: Vec<f64>,
    /// Direct-link fading margin in dB.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub fs_db: Vec<f64>,
    /// Relay-link fading margin over direct-link fading margin, dB (default 10).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub fr_over_fs_db: Vec<f64>,
    /// Slot-to-slot fading correlation (default 0).
    #[arg(long, value_delimiter = ',')]
    pub rho: Vec<f64>,
    /// Normalized Doppler f_m * T_p; sets rho = J0(2 pi f_m T_p).
    #[arg(long, value_delimiter = ',', conflicts_with = "rho")]
    pub fm_tp: Vec<f64>,
    /// Swept axis: `axis:start:stop:step` or `axis:v1,v2,..`; axis is one
    /// of pss, fs-db, rho, fr-over-fs-db.
    #[arg(long, allow_hyphen_values = true)]
    pub sweep: Option<String>,
    #[arg(long)]
    pub n_slots: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// CSI available to the channel-state-based strategies.
    #[arg(long, value_delimiter = ',')]
    pub csi_mode: Vec<CsiMode>,
    #[arg(long)]
    pub xor_convention: Option<XorConvention>,
    #[arg(long, value_enum)]
    pub engines: Option<Engines>,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// key = value file mirroring the flags; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn list<T: std::str::FromStr>(entry: &Entry) -> Result<Vec<T>> {
    entry
        .value
        .split(',')
        .map(|v| v.trim().parse::<T>().map_err(|_| entry.invalid(v.trim())))
        .collect()
}

fn one<T: std::str::FromStr>(entry: &Entry) -> Result<T> {
    entry.value.trim().parse::<T>().map_err(|_| entry.invalid(entry.value.trim()))
}

impl SweepArgs {
    /// Fill every setting the command line left open from config entries.
    pub fn merge(&mut self, entries: &[Entry]) -> Result<()> {
        let direct_on_cli = !self.pss.is_empty() || !self.fs_db.is_empty();
        for e in entries {
            match e.key.as_str() {
                "strategy" if self.strategy.is_empty() => self.strategy = list(e)?,
                "pss" if !direct_on_cli => self.pss = list(e)?,
                "fs-db" if !direct_on_cli => self.fs_db = list(e)?,
                "fr-over-fs-db" if self.fr_over_fs_db.is_empty() => self.fr_over_fs_db = list(e)?,
                "rho" if self.rho.is_empty() && self.fm_tp.is_empty() => self.rho = list(e)?,
                "fm-tp" if self.rho.is_empty() && self.fm_tp.is_empty() => self.fm_tp = list(e)?,
                "sweep" if self.sweep.is_none() => self.sweep = Some(e.value.clone()),
                "n-slots" if self.n_slots.is_none() => self.n_slots = Some(one(e)?),
                "seed" if self.seed.is_none() => self.seed = Some(one(e)?),
                "csi-mode" if self.csi_mode.is_empty() => self.csi_mode = list(e)?,
                "xor-convention" if self.xor_convention.is_none() => self.xor_convention = Some(one(e)?),
                "engines" if self.engines.is_none() => {
                    self.engines = Some(Engines::from_str(e.value.trim(), true).map_err(|_| e.invalid(&e.value))?)
                }
                "out" if self.out.is_none() => self.out = Some(PathBuf::from(&e.value)),
                "strategy" | "pss" | "fs-db" | "fr-over-fs-db" | "rho" | "fm-tp" | "sweep" | "n-slots" | "seed" | "csi-mode"
                | "xor-convention" | "engines" | "out" | "description" => {}
                _ => return Err(CliError::Usage(format!("{}: unknown key '{}'", e.origin(), e.key))),
            }
        }
        if !self.pss.is_empty() && !self.fs_db.is_empty() {
            return Err(CliError::Usage("--pss and --fs-db are mutually exclusive".into()));
        }
        if !self.rho.is_empty() && !self.fm_tp.is_empty() {
            return Err(CliError::Usage("--rho and --fm-tp are mutually exclusive".into()));
        }
        Ok(())
    }
}
