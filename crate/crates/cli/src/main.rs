use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

mod commands;
mod config;
mod output;

use config::RunConfig;
use output::{Check, Csv, Sink};

#[derive(Parser)]
#[command(name = "wermerlab", version, about = "Wermer-type polynomial towers: certificates, potentials, slice measures")]
struct Cli {
    /// Flat key=value config file; defaults apply to missing keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Artifact directory (WERMERLAB_OUT takes precedence).
    #[arg(long, global = true, default_value = "wermerlab-out")]
    out: PathBuf,
    /// Worker threads; artifacts do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    #[arg(long, global = true)]
    max_bits: Option<u32>,
    /// Overrides anchors.seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Build and validate the schedule, with the drift table.
    Schedule,
    /// Nesting certificates.
    Certify,
    /// Certified slice root sets.
    Roots,
    /// Slice measure atoms.
    Measure,
    /// Ball-mass profiles and the two-regime fit.
    Profile,
    /// Convergence and harmonic-gap reports.
    Converge,
    /// Modulus and gauge-taming tables.
    Gauge,
    /// Jensen cross-check table.
    Jensen,
    /// Capacity drift of an ordinary schedule.
    Capacity,
    /// Box-counting estimates.
    Dimension,
    /// Escape-depth raster.
    Render,
    /// Every command above plus the winding probe.
    Suite,
}

type Step = fn(&RunConfig, &mut Sink) -> Result<Vec<Check>>;

fn steps(cmd: Command) -> Vec<(&'static str, Step)> {
    let all: [(&'static str, Command, Step); 11] = [
        ("schedule", Command::Schedule, commands::schedule),
        ("certify", Command::Certify, commands::certify),
        ("roots", Command::Roots, commands::roots),
        ("measure", Command::Measure, commands::measure),
        ("profile", Command::Profile, commands::profile),
        ("converge", Command::Converge, commands::converge),
        ("gauge", Command::Gauge, commands::gauge),
        ("jensen", Command::Jensen, commands::jensen),
        ("capacity", Command::Capacity, commands::capacity),
        ("dimension", Command::Dimension, commands::dimension),
        ("render", Command::Render, commands::render),
    ];
    all.into_iter().filter(|(_, c, _)| cmd == Command::Suite || *c == cmd).map(|(n, _, s)| (n, s)).collect()
}

fn load(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            RunConfig::parse(&text).with_context(|| format!("in {}", p.display()))?
        }
        None => RunConfig::default(),
    };
    if let Some(b) = cli.max_bits {
        cfg.max_bits = b;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<bool> {
    let cfg = load(cli)?;
    let out = std::env::var_os("WERMERLAB_OUT").map(PathBuf::from).unwrap_or_else(|| cli.out.clone());
    let mut sink = Sink::new(&out, cfg.hash())?;
    sink.bytes("config.txt", cfg.canonical().as_bytes())?;
    let mut all = Vec::new();
    for (name, step) in steps(cli.command) {
        let checks = step(&cfg, &mut sink).with_context(|| format!("{name} failed"))?;
        sink.checks(name, &checks)?;
        report(name, &checks);
        all.extend(checks);
    }
    if cli.command == Command::Suite {
        let checks = commands::winding(&mut sink)?;
        sink.checks("winding", &checks)?;
        report("winding", &checks);
        all.extend(checks);
        let mut files = Csv::new(&["artifact"]);
        for p in &sink.written {
            files.row(vec![p.file_name().unwrap_or_default().to_string_lossy().into_owned()]);
        }
        sink.csv("manifest", &files)?;
    }
    Ok(all.iter().all(|c| c.pass))
}

fn report(name: &str, checks: &[Check]) {
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.pass).collect();
    println!("{name}: {} checks, {} failed", checks.len(), failed.len());
    for c in failed {
        eprintln!("{}", c.record());
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.workers.max(1)).build();
    let result = match pool {
        Ok(pool) => pool.install(|| run(&cli)),
        Err(e) => Err(e.into()),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("invariant=run module=cli location=- measured={} bound=-", format!("{e:#}").replace(char::is_whitespace, "_"));
            ExitCode::from(2)
        }
    }
}
