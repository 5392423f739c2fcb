//! Command-line front end: every subcommand writes one CSV table.
//!
//! Units are natural (ħ = m = 1): widths in the caller's length unit, times
//! and energies in the matching natural units, QSNR dimensionless.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::dynamics;
use crate::entangled::{Family, SymmetrizedPair};
use crate::error::Error;
use crate::inference;
use crate::metrology;
use crate::probe::{self, ProbeState};
use crate::well::{WellConfig, DEFAULT_TRUNCATION};

/// Significant digits of every numeric CSV field.
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Parser)]
#[command(
    name = "wellprobe",
    version,
    about = "Quantum estimation of the width of an infinite square well",
    long_about = "Quantum estimation of the width of an infinite square well.\n\n\
                  Natural units (hbar = m = 1) throughout: widths in your length unit, \
                  times and energies in the matching natural units, QSNR dimensionless. \
                  Every subcommand writes a CSV table with a header row."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// QFI, position and energy FI, and QSNR of static states.
    Static(StaticArgs),
    /// Eigenstate and polynomial-state QSNR on a shared energy axis (units 1/a²).
    Energy(EnergyArgs),
    /// QSNR of the evolved parabolic state over a width × time grid.
    Time(TimeArgs),
    /// Entanglement gain γ of two-particle states over an index grid.
    Entangled(EntangledArgs),
    /// Monte Carlo maximum-likelihood estimation against the Cramér-Rao bound.
    Montecarlo(MonteCarloArgs),
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write the CSV here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StaticArgs {
    /// State descriptor: eigen:N, super:N:M:ALPHA, poly:P, parabolic, custom:@FILE. Repeatable.
    #[arg(long, required = true)]
    pub state: Vec<String>,
    /// Widths: comma list or START:STOP:COUNT.
    #[arg(long, default_value = "1")]
    pub a: String,
    /// Basis size for series quantities.
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    pub truncation: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct EnergyArgs {
    /// Energies (units 1/a²) as a comma list or START:STOP:COUNT. Defaults to
    /// the union of the eigenvalues n ≤ n-max and the polynomial energies p ≤ p-max.
    #[arg(long)]
    pub energy: Option<String>,
    #[arg(long, default_value_t = 10)]
    pub n_max: u32,
    #[arg(long, default_value_t = 50)]
    pub p_max: u32,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct TimeArgs {
    /// Widths: comma list or START:STOP:COUNT.
    #[arg(long, default_value = "1,2,3")]
    pub a: String,
    /// Times: comma list or START:STOP:COUNT.
    #[arg(long, default_value = "0:2:101")]
    pub t: String,
    /// Odd-index cutoff of the double sums; the residual compares it with twice its value.
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    pub truncation: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FamilyArg {
    Eigen,
    Poly,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Eigen => Family::Eigen,
            FamilyArg::Poly => Family::Polynomial,
        }
    }
}

#[derive(Debug, Args)]
pub struct EntangledArgs {
    #[arg(long, value_enum, default_value = "poly")]
    pub family: FamilyArg,
    /// Inclusive index range LO:HI.
    #[arg(long, default_value = "2:15")]
    pub range: String,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct MonteCarloArgs {
    /// State descriptor (see `static --help`).
    #[arg(long, default_value = "poly:3")]
    pub state: String,
    /// Widths: comma list or START:STOP:COUNT.
    #[arg(long, default_value = "1")]
    pub a: String,
    /// Measurements per replica, comma list.
    #[arg(long, default_value = "2000")]
    pub m: String,
    #[arg(long, default_value_t = 200)]
    pub replicas: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

/// Failure of a CLI run, mapped to the process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Numerical(#[from] Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(Error::InvalidParameter(_)) => 2,
            _ => 3,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses a state descriptor.
pub fn parse_state(text: &str) -> CliResult<ProbeState> {
    let bad = |why: &str| CliError::Usage(format!("bad state descriptor `{text}`: {why}"));
    let parts: Vec<&str> = text.split(':').collect();
    let int = |s: &str| s.parse::<u32>().map_err(|_| bad(&format!("`{s}` is not a positive integer")));
    let state = match parts.as_slice() {
        ["eigen", n] => ProbeState::eigen(int(n)?),
        ["super", n, m, alpha] => {
            let alpha: f64 = alpha.parse().map_err(|_| bad(&format!("`{alpha}` is not a number")))?;
            ProbeState::superposition(int(n)?, int(m)?, alpha)
        }
        ["poly", p] => ProbeState::polynomial(int(p)?),
        ["parabolic"] => Ok(ProbeState::Parabolic),
        ["custom", file] => {
            let path = file
                .strip_prefix('@')
                .ok_or_else(|| bad("custom amplitudes are read from `custom:@FILE`"))?;
            let body = fs::read_to_string(path).map_err(|e| bad(&format!("cannot read `{path}`: {e}")))?;
            let coefficients = body
                .split_whitespace()
                .map(|tok| tok.parse::<f64>().map_err(|_| bad(&format!("`{tok}` is not a number"))))
                .collect::<CliResult<Vec<f64>>>()?;
            ProbeState::custom(coefficients)
        }
        _ => return Err(bad("expected eigen:N, super:N:M:ALPHA, poly:P, parabolic or custom:@FILE")),
    };
    state.map_err(|e| bad(&e.to_string()))
}

/// Parses `START:STOP:COUNT` (inclusive, evenly spaced) or a comma list.
pub fn parse_grid(text: &str) -> CliResult<Vec<f64>> {
    let bad = |why: String| CliError::Usage(format!("bad grid `{text}`: {why}"));
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| bad(format!("`{s}` is not a finite number")))
    };
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [start, stop, count] => {
            let (start, stop) = (num(start)?, num(stop)?);
            let count: usize = count
                .trim()
                .parse()
                .ok()
                .filter(|&c| c >= 1)
                .ok_or_else(|| bad(format!("`{count}` is not a count >= 1")))?;
            if start > stop {
                return Err(bad("start exceeds stop".into()));
            }
            if count == 1 {
                return Ok(vec![start]);
            }
            let step = (stop - start) / (count - 1) as f64;
            Ok((0..count)
                .map(|k| if k == count - 1 { stop } else { start + step * k as f64 })
                .collect())
        }
        [list] => list.split(',').map(num).collect(),
        _ => Err(bad("expected START:STOP:COUNT or a comma list".into())),
    }
}

fn parse_counts(text: &str) -> CliResult<Vec<usize>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .ok()
                .filter(|&v| v >= 1)
                .ok_or_else(|| CliError::Usage(format!("bad count `{s}` in `{text}`")))
        })
        .collect()
}

fn parse_index_range(text: &str) -> CliResult<(u32, u32)> {
    let bad = || CliError::Usage(format!("bad index range `{text}`: expected LO:HI with 1 <= LO <= HI"));
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
    if lo == 0 || hi < lo {
        return Err(bad());
    }
    Ok((lo, hi))
}

/// `%.12g`-style formatting: fixed notation for moderate exponents,
/// scientific otherwise, trailing zeros removed.
pub fn format_number(v: f64) -> String {
    format_significant(v, SIGNIFICANT_DIGITS)
}

fn format_significant(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(format_number).unwrap_or_default()
}

/// A finished table: header plus rows of already formatted fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn write_csv<W: Write>(&self, out: W) -> CliResult<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn cmd_static(args: &StaticArgs) -> CliResult<Table> {
    let states = args.state.iter().map(|s| Ok((s.clone(), parse_state(s)?))).collect::<CliResult<Vec<_>>>()?;
    let widths = parse_grid(&args.a)?;
    let mut rows = Vec::new();
    for (label, state) in &states {
        for &a in &widths {
            let cfg = WellConfig::new(a, args.truncation)?;
            let r = metrology::report(state, &cfg)?;
            rows.push(vec![
                label.clone(),
                format_number(a),
                format_number(r.qfi),
                format_number(r.fi_position),
                format_number(r.fi_energy),
                format_number(r.qsnr),
            ]);
        }
    }
    Ok(Table {
        header: vec!["state", "a", "qfi", "fi_position", "fi_energy", "qsnr"],
        rows,
    })
}

/// Eigenstate QSNR `1 + 8E/3` at energy `E` (units 1/a²).
pub fn qsnr_eigen_at_energy(energy: f64) -> f64 {
    1.0 + 8.0 * energy / 3.0
}

/// Polynomial QSNR at energy `E`, continuing `p` to the reals through
/// `E(p) = (1 + 6p + 8p²)/(4p − 1)`; `None` below `E(1) = 5`.
pub fn qsnr_poly_at_energy(energy: f64) -> Option<f64> {
    if energy < probe::polynomial_energy(1) {
        return None;
    }
    let b = 4.0 * energy - 6.0;
    let disc = b * b - 32.0 * (1.0 + energy);
    let p = (b + disc.max(0.0).sqrt()) / 16.0;
    Some((1.0 + 4.0 * p) * (1.0 + 8.0 * p) / (4.0 * p - 1.0))
}

pub fn cmd_energy(args: &EnergyArgs) -> CliResult<Table> {
    let energies = match &args.energy {
        Some(text) => parse_grid(text)?,
        None => {
            let unit = WellConfig::with_width(1.0)?;
            let mut e: Vec<f64> = (1..=args.n_max)
                .map(|n| probe::mean_energy(&ProbeState::eigen(n)?, &unit))
                .chain((1..=args.p_max).map(|p| Ok(probe::polynomial_energy(p))))
                .collect::<crate::Result<_>>()?;
            e.sort_by(f64::total_cmp);
            e.dedup();
            e
        }
    };
    if let Some(&e) = energies.iter().find(|&&e| e < 0.0) {
        return Err(CliError::Usage(format!("energy {e} is negative")));
    }
    let rows = energies
        .iter()
        .map(|&e| vec![format_number(e), format_number(qsnr_eigen_at_energy(e)), opt(qsnr_poly_at_energy(e))])
        .collect();
    Ok(Table {
        header: vec!["energy", "qsnr_eigen", "qsnr_poly"],
        rows,
    })
}

pub fn cmd_time(args: &TimeArgs) -> CliResult<Table> {
    let widths = parse_grid(&args.a)?;
    let times = parse_grid(&args.t)?;
    let cells: Vec<(f64, f64)> = widths.iter().flat_map(|&a| times.iter().map(move |&t| (a, t))).collect();
    let rows = cells
        .par_iter()
        .map(|&(a, t)| {
            let cfg = WellConfig::new(a, args.truncation)?;
            let q = a * a * dynamics::qfi_parabolic_time(&cfg, t)?;
            let residual = dynamics::truncation_residual(&cfg, t, args.truncation, 2 * args.truncation)?;
            Ok(vec![format_number(a), format_number(t), format_number(q), format_number(residual)])
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Table {
        header: vec!["a", "t", "qsnr", "residual"],
        rows,
    })
}

pub fn cmd_entangled(args: &EntangledArgs) -> CliResult<Table> {
    let (lo, hi) = parse_index_range(&args.range)?;
    let family: Family = args.family.into();
    let mut rows = Vec::new();
    for i in lo..=hi {
        for j in lo..=hi {
            let kind = family.to_string();
            if i == j {
                let single = match family {
                    Family::Eigen => metrology::qsnr_eigen(crate::EigenIndex::new(i)?),
                    Family::Polynomial => metrology::qsnr_polynomial(i)?,
                };
                rows.push(vec![kind, i.to_string(), j.to_string(), String::new(), format_number(2.0 * single), String::new(), String::new()]);
                continue;
            }
            let pair = SymmetrizedPair::new(family, i, j)?;
            rows.push(vec![
                kind,
                i.to_string(),
                j.to_string(),
                format_number(pair.qsnr()?),
                format_number(pair.qsnr_sum()?),
                format_number(pair.gamma()?),
                format_number(pair.bonus()?),
            ]);
        }
    }
    Ok(Table {
        header: vec!["kind", "i", "j", "q_joint", "q_sum", "gamma", "bonus"],
        rows,
    })
}

pub fn cmd_montecarlo(args: &MonteCarloArgs) -> CliResult<Table> {
    let state = parse_state(&args.state)?;
    let widths = parse_grid(&args.a)?;
    let counts = parse_counts(&args.m)?;
    let mut rows = Vec::new();
    for &a in &widths {
        let cfg = WellConfig::with_width(a)?;
        for &m in &counts {
            let r = inference::crlb_experiment(&state, &cfg, m, args.replicas, args.seed)?;
            rows.push(vec![
                args.state.clone(),
                format_number(a),
                m.to_string(),
                args.replicas.to_string(),
                format_number(r.variance),
                format_number(r.crlb_ratio),
            ]);
        }
    }
    Ok(Table {
        header: vec!["state", "a", "M", "replicas", "variance", "crlb_ratio"],
        rows,
    })
}

/// Runs a parsed command and writes its table.
pub fn run(cli: &Cli) -> CliResult<()> {
    let (table, output) = match &cli.command {
        Command::Static(a) => (cmd_static(a)?, &a.output),
        Command::Energy(a) => (cmd_energy(a)?, &a.output),
        Command::Time(a) => (cmd_time(a)?, &a.output),
        Command::Entangled(a) => (cmd_entangled(a)?, &a.output),
        Command::Montecarlo(a) => (cmd_montecarlo(a)?, &a.output),
    };
    match &output.output {
        Some(path) => table.write_csv(io::BufWriter::new(fs::File::create(path)?)),
        None => table.write_csv(io::stdout().lock()),
    }
}

/// Entry point of the `wellprobe` binary.
pub fn main_entry() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(u8::try_from(e.exit_code()).unwrap_or(2));
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wellprobe: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
