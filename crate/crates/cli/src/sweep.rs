//! Turning flags into an ordered list of evaluation points.

use std::fmt;

use twarq::channel::{db_to_linear, fading_margin_from_outage, linear_to_db, outage_probability, JointChannelModel};
use twarq::protocol::{Family, Strategy, XorConvention};
use twarq::sim::{CsiMode, DEFAULT_SLOTS};

use crate::args::{Engines, SweepArgs};
use crate::error::{CliError, Result};

pub const DEFAULT_RATIO_DB: f64 = 10.0;
pub const DEFAULT_RHO: f64 = 0.0;
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Pss,
    FsDb,
    Rho,
    RatioDb,
}

impl Axis {
    pub fn parse(s: &str) -> Option<Axis> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "pss" => Some(Axis::Pss),
            "fs-db" | "fs" => Some(Axis::FsDb),
            "rho" => Some(Axis::Rho),
            "fr-over-fs-db" | "ratio" => Some(Axis::RatioDb),
            _ => None,
        }
    }

    fn flag(self) -> &'static str {
        match self {
            Axis::Pss => "--pss",
            Axis::FsDb => "--fs-db",
            Axis::Rho => "--rho",
            Axis::RatioDb => "--fr-over-fs-db",
        }
    }

    fn check(self, v: f64, flag: &str) -> Result<()> {
        let ok = match self {
            Axis::Pss => v > 0.0 && v < 1.0,
            Axis::Rho => (0.0..1.0).contains(&v),
            Axis::FsDb | Axis::RatioDb => v.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            let range = match self {
                Axis::Pss => "(0, 1)",
                Axis::Rho => "[0, 1)",
                _ => "finite dB values",
            };
            Err(CliError::Usage(format!("{flag}: {v} outside {range}")))
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.flag()[2..])
    }
}

/// Parses `axis:start:stop:step` or `axis:v1,v2,...`. Values come back
/// sorted ascending.
pub fn parse_sweep(spec: &str) -> Result<(Axis, Vec<f64>)> {
    let bad = |why: &str| CliError::Usage(format!("--sweep '{spec}': {why}"));
    let (axis, rest) = spec.split_once(':').ok_or_else(|| bad("expected axis:start:stop:step"))?;
    let axis = Axis::parse(axis).ok_or_else(|| bad("axis must be one of pss, fs-db, rho, fr-over-fs-db"))?;
    let number = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(&format!("'{s}' is not a number")));
    let mut values = if rest.contains(',') || !rest.contains(':') {
        rest.split(',').map(number).collect::<Result<Vec<_>>>()?
    } else {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected axis:start:stop:step"));
        }
        let (start, stop, step) = (number(parts[0])?, number(parts[1])?, number(parts[2])?);
        if !(step > 0.0) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
            return Err(bad("need start <= stop and step > 0"));
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
        if n > 100_000 {
            return Err(bad("more than 100000 points"));
        }
        // Built from an integer counter and tidied so 0.1 + 0.2 prints as 0.3.
        (0..n).map(|k| ((start + k as f64 * step) * 1e10).round() / 1e10).collect()
    };
    values.sort_by(f64::total_cmp);
    values.dedup();
    for &v in &values {
        axis.check(v, "--sweep")?;
    }
    Ok((axis, values))
}

/// One parameter point, with the derived link quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub rho: f64,
    pub fs_db: f64,
    pub fr_db: f64,
    pub pss: f64,
    pub psr: f64,
}

impl Point {
    fn from_pss(pss: f64, ratio_db: f64, rho: f64) -> Result<Point> {
        let fs = fading_margin_from_outage(pss)?;
        Point::build(fs, pss, ratio_db, rho)
    }

    fn from_fs_db(fs_db: f64, ratio_db: f64, rho: f64) -> Result<Point> {
        let fs = db_to_linear(fs_db);
        Point::build(fs, outage_probability(fs)?, ratio_db, rho)
    }

    fn build(fs: f64, pss: f64, ratio_db: f64, rho: f64) -> Result<Point> {
        let fs_db = linear_to_db(fs);
        let fr = fs * db_to_linear(ratio_db);
        let psr = outage_probability(fr)?;
        for (name, p) in [("direct", pss), ("relay", psr)] {
            if !(p > 0.0 && p < 1.0) {
                return Err(CliError::Usage(format!("{name}-link outage {p:e} degenerates at fs_db={fs_db}, ratio={ratio_db} dB")));
            }
        }
        Ok(Point { rho, fs_db, fr_db: fs_db + ratio_db, pss, psr })
    }

    pub fn model(&self) -> Result<JointChannelModel> {
        Ok(JointChannelModel::from_outages(self.psr, self.pss, self.rho)?)
    }
}

/// A strategy run under one CSI mode; `label` is what lands in the CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct Variant {
    pub label: String,
    pub strategy: Strategy,
    pub csi_mode: CsiMode,
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub variants: Vec<Variant>,
    pub points: Vec<Point>,
    pub n_slots: u64,
    pub seed: u64,
    pub convention: XorConvention,
    pub engines: Engines,
}

impl SweepSpec {
    pub fn from_args(args: &SweepArgs, default_engines: Engines) -> Result<SweepSpec> {
        let engines = args.engines.unwrap_or(default_engines);
        let strategies = if args.strategy.is_empty() { Strategy::ALL.to_vec() } else { dedup(&args.strategy) };
        let modes = if args.csi_mode.is_empty() { vec![CsiMode::PrevSlot] } else { dedup(&args.csi_mode) };
        if engines == Engines::Analytic && modes.iter().any(|&m| m != CsiMode::PrevSlot) {
            return Err(CliError::Usage("--csi-mode: the analytic engine models previous-slot CSI only".into()));
        }
        let labelled = modes != [CsiMode::PrevSlot];
        let mut variants = Vec::new();
        for &strategy in &strategies {
            if strategy.family() == Family::ChannelState {
                for &csi_mode in &modes {
                    let label =
                        if labelled { format!("{strategy}:{}", csi_mode.name()) } else { strategy.to_string() };
                    variants.push(Variant { label, strategy, csi_mode });
                }
            } else {
                variants.push(Variant { label: strategy.to_string(), strategy, csi_mode: CsiMode::PrevSlot });
            }
        }

        let n_slots = args.n_slots.unwrap_or(DEFAULT_SLOTS);
        if n_slots == 0 {
            return Err(CliError::Usage("--n-slots: must be positive".into()));
        }

        let sweep = args.sweep.as_deref().map(parse_sweep).transpose()?;
        let swept = sweep.as_ref().map(|s| s.0);
        let fixed = |axis: Axis, given: &[f64], default: Option<f64>| -> Result<Vec<f64>> {
            if swept == Some(axis) {
                if !given.is_empty() {
                    return Err(CliError::Usage(format!("{}: axis is already swept", axis.flag())));
                }
                return Ok(sweep.as_ref().unwrap().1.clone());
            }
            let values = if given.is_empty() { default.into_iter().collect() } else { dedup(given) };
            for &v in &values {
                axis.check(v, axis.flag())?;
            }
            Ok(values)
        };
        let rho_given = if args.fm_tp.is_empty() {
            args.rho.clone()
        } else {
            let mut rho = Vec::new();
            for &x in &args.fm_tp {
                let r = bessel_j0(2.0 * std::f64::consts::PI * x);
                if !x.is_finite() || !(0.0..1.0).contains(&r) {
                    return Err(CliError::Usage(format!("--fm-tp: {x} maps to rho = {r}, outside [0, 1)")));
                }
                rho.push(r);
            }
            rho
        };
        let rho = fixed(Axis::Rho, &rho_given, Some(DEFAULT_RHO))?;
        let ratio = fixed(Axis::RatioDb, &args.fr_over_fs_db, Some(DEFAULT_RATIO_DB))?;
        let direct_axis = match swept {
            Some(a @ (Axis::Pss | Axis::FsDb)) => {
                if !args.pss.is_empty() || !args.fs_db.is_empty() {
                    return Err(CliError::Usage(format!("--pss/--fs-db: {a} is already swept")));
                }
                a
            }
            _ if !args.fs_db.is_empty() => Axis::FsDb,
            _ => Axis::Pss,
        };
        let direct = match direct_axis {
            Axis::FsDb => fixed(Axis::FsDb, &args.fs_db, None)?,
            _ => fixed(Axis::Pss, &args.pss, None)?,
        };
        if direct.is_empty() {
            return Err(CliError::Usage("one of --pss or --fs-db (or a sweep over it) is required".into()));
        }

        // Fixed axes nest in a set order; the swept axis is innermost.
        let mut order = vec![(Axis::Rho, rho), (direct_axis, direct), (Axis::RatioDb, ratio)];
        if let Some(axis) = swept {
            let k = order.iter().position(|(a, _)| *a == axis).unwrap();
            let s = order.remove(k);
            order.push(s);
        }
        let mut points = Vec::new();
        let mut idx = vec![0usize; order.len()];
        loop {
            let value = |axis: Axis| order.iter().zip(&idx).find(|((a, _), _)| *a == axis).map(|((_, v), &i)| v[i]);
            let (r, q) = (value(Axis::Rho).unwrap(), value(Axis::RatioDb).unwrap());
            points.push(match direct_axis {
                Axis::FsDb => Point::from_fs_db(value(Axis::FsDb).unwrap(), q, r)?,
                _ => Point::from_pss(value(Axis::Pss).unwrap(), q, r)?,
            });
            let mut level = order.len();
            loop {
                if level == 0 {
                    return Ok(SweepSpec {
                        variants,
                        points,
                        n_slots,
                        seed: args.seed.unwrap_or(DEFAULT_SEED),
                        convention: args.xor_convention.unwrap_or_default(),
                        engines,
                    });
                }
                level -= 1;
                idx[level] += 1;
                if idx[level] < order[level].1.len() {
                    break;
                }
                idx[level] = 0;
            }
        }
    }
}

/// `J0(x) = (1/pi) int_0^pi cos(x sin t) dt`; the trapezoid rule on this
/// periodic integrand converges geometrically once the grid resolves `x`.
pub fn bessel_j0(x: f64) -> f64 {
    let n = 64 + 2 * x.abs().ceil() as usize;
    let h = std::f64::consts::PI / n as f64;
    let inner: f64 = (1..n).map(|k| (x * (k as f64 * h).sin()).cos()).sum();
    (inner + 1.0) / n as f64
}

fn dedup<T: PartialEq + Copy>(items: &[T]) -> Vec<T> {
    let mut out = Vec::new();
    for &x in items {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}
