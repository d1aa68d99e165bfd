use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use dkklab::cli::{read_csv_rows, recheck, run_command, Command, ConstantsReport, ExperimentConfig, Format, Row};
use dkklab::{Error, Result};

/// Conditionality constants, DKK gauges and greedy estimates from TOML experiment configs.
#[derive(Debug, Parser)]
#[command(name = "dkklab", version)]
struct Args {
    /// What to compute.
    #[arg(value_enum, required_unless_present = "recheck")]
    command: Option<Command>,

    /// Experiment config (TOML).
    #[arg(long, short)]
    config: Option<PathBuf>,

    /// Overrides `run.seed`.
    #[arg(long)]
    seed: Option<u64>,

    /// Output file; stdout when absent. Overrides `run.out`.
    #[arg(long, short)]
    out: Option<PathBuf>,

    /// Overrides `run.format`; defaults to csv.
    #[arg(long, value_enum)]
    format: Option<Format>,

    /// Zero `runtime_ms` and the timestamp so identical runs are byte-identical.
    #[arg(long)]
    no_timing: bool,

    /// Re-evaluate the witnesses of an existing report instead of running a command.
    /// JSON reports carry their config; CSV reports need --config.
    #[arg(long, value_name = "REPORT")]
    recheck: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(args: Args) -> Result<bool> {
    if let Some(path) = &args.recheck {
        return run_recheck(path, args.config.as_deref());
    }
    let command = args.command.expect("clap enforces a command");
    let mut cfg = match &args.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => return Err(Error::Config("--config is required".into())),
    };
    if args.seed.is_some() {
        cfg.run.seed = args.seed;
    }
    let format = args.format.or(cfg.run.format).unwrap_or(Format::Csv);
    let out = args.out.clone().or(cfg.run.out.clone());
    let mut report = run_command(command, &cfg)?;
    if args.no_timing {
        report.strip_timing();
    }
    match out {
        Some(p) => {
            let mut w = BufWriter::new(File::create(&p)?);
            report.write(&mut w, format)?;
            w.flush()?;
        }
        None => report.write(io::stdout().lock(), format)?,
    }
    if report.violations > 0 {
        eprintln!("{} violation(s)", report.violations);
    }
    Ok(report.violations == 0)
}

fn run_recheck(path: &std::path::Path, config: Option<&std::path::Path>) -> Result<bool> {
    let text = std::fs::read_to_string(path)?;
    let (rows, cfg): (Vec<Row>, ExperimentConfig) = if text.trim_start().starts_with('{') {
        let report: ConstantsReport =
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let cfg = match config {
            Some(p) => ExperimentConfig::load(p)?,
            None => report.metadata.config,
        };
        (report.rows, cfg)
    } else {
        let cfg = config.ok_or_else(|| Error::Config("rechecking a CSV report needs --config".into()))?;
        (read_csv_rows(&text)?, ExperimentConfig::load(cfg)?)
    };
    let lines = recheck(&rows, &cfg)?;
    let mut ok = true;
    for l in &lines {
        println!(
            "{} {} reported={:?} recomputed={:?}",
            if l.ok { "OK" } else { "MISMATCH" },
            l.key,
            l.reported,
            l.recomputed
        );
        ok &= l.ok;
    }
    println!("{} witness(es) rechecked", lines.len());
    Ok(ok)
}
