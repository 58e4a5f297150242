//! Command-line front end: `ser`, `rate`, `gap`, `table1`, `validate-config`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::harness::{compare_successive_gap, run_rate_sweep, run_ser_sweep};
use crate::io::{
    gap_table, output_path, rate_table, ser_table, table1, write_results, Cell, ExperimentKind,
    ResultTable,
};

#[derive(Debug, Parser)]
#[command(name = "stokesdd", version, about = "Four-dimensional direct-detection ML receiver simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Experiment configuration (`key = value` lines).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides `seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `threads`.
    #[arg(long)]
    threads: Option<usize>,
    /// Comma-separated subset of sym, seq, suc.
    #[arg(long)]
    detectors: Option<String>,
    /// exact, high_snr or both.
    #[arg(long)]
    mode: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Per-dimension symbol error rate sweep.
    Ser(RunArgs),
    /// Achievable-rate sweep.
    Rate(RunArgs),
    /// SNR gap between two detectors at a target SER (curves go to `gap_ser_<hash>.csv`).
    Gap(RunArgs),
    /// Balanced ring spacing for the reference constellations.
    Table1 {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parses a configuration and prints its normalized form.
    ValidateConfig {
        #[arg(long)]
        config: PathBuf,
    },
}

fn load_config(path: Option<&Path>) -> Result<ExperimentConfig> {
    match path {
        Some(p) => ExperimentConfig::parse(&fs::read_to_string(p).map_err(|e| {
            Error::Io(format!("{}: {e}", p.display()))
        })?),
        None => Ok(ExperimentConfig::default()),
    }
}

fn resolve(args: &RunArgs) -> Result<ExperimentConfig> {
    let mut cfg = load_config(args.config.as_deref())?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &args.out {
        cfg.output_dir = out.clone();
    }
    if let Some(t) = args.threads {
        cfg.threads = t;
    }
    if let Some(d) = &args.detectors {
        cfg.set_detectors(d)?;
    }
    if let Some(m) = &args.mode {
        cfg.set_modes(m)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn annotate(mut table: ResultTable, cfg: &ExperimentConfig) -> ResultTable {
    table.set_meta("config_hash", cfg.hash());
    for line in cfg.normalized().lines() {
        if let Some((k, v)) = line.split_once(" = ") {
            if k != "output.dir" && k != "threads" {
                table.set_meta(k, v);
            }
        }
    }
    table
}

fn save(table: &ResultTable, cfg: &ExperimentConfig, out: &mut dyn Write) -> Result<()> {
    save_to(table, &output_path(&cfg.output_dir, table.kind, &cfg.hash()), out)
}

fn save_to(table: &ResultTable, path: &Path, out: &mut dyn Write) -> Result<()> {
    write_results(table, path)?;
    writeln!(out, "wrote {}", path.display())?;
    Ok(())
}

fn execute(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Ser(args) => {
            let cfg = resolve(&args)?;
            let curves = run_ser_sweep(&cfg)?;
            for c in &curves {
                for p in &c.points {
                    writeln!(
                        out,
                        "delta_sq={:.4} {} snr={:.2} dB ser=[{:.3e} {:.3e} {:.3e} {:.3e}] trials={}",
                        c.delta_sq,
                        c.variant,
                        p.snr_db,
                        p.ser(0),
                        p.ser(1),
                        p.ser(2),
                        p.ser(3),
                        p.trials
                    )?;
                }
            }
            save(&annotate(ser_table(&curves), &cfg), &cfg, out)
        }
        Command::Rate(args) => {
            let cfg = resolve(&args)?;
            let points = run_rate_sweep(&cfg)?;
            for p in &points {
                writeln!(
                    out,
                    "delta_sq={:.4} snr={:.2} dB rate={:.4} bits stderr={:.4} samples={}{}",
                    p.delta_sq,
                    p.snr_db,
                    p.rate_bits,
                    p.stderr,
                    p.samples,
                    if p.converged { "" } else { " (target stderr not reached)" }
                )?;
            }
            save(&annotate(rate_table(&points), &cfg), &cfg, out)
        }
        Command::Gap(args) => {
            let cfg = resolve(&args)?;
            let (curves, reports) = compare_successive_gap(&cfg)?;
            for r in &reports {
                for d in 0..4 {
                    match r.gap(d) {
                        Some(g) => writeln!(
                            out,
                            "delta_sq={:.4} {} vs {} dimension {}: gap {:+.3} dB",
                            r.delta_sq,
                            r.candidate,
                            r.baseline,
                            d + 1,
                            g
                        )?,
                        None => writeln!(
                            out,
                            "delta_sq={:.4} {} vs {} dimension {}: target SER {:e} not bracketed",
                            r.delta_sq,
                            r.candidate,
                            r.baseline,
                            d + 1,
                            r.target_ser
                        )?,
                    }
                }
            }
            let curves_path = cfg.output_dir.join(format!("gap_ser_{}.csv", cfg.hash()));
            save_to(&annotate(ser_table(&curves), &cfg), &curves_path, out)?;
            save(&annotate(gap_table(&reports), &cfg), &cfg, out)
        }
        Command::Table1 { out: dir } => {
            let t = table1()?;
            writeln!(out, "n_r,n_p,delta_sq_bl")?;
            for row in &t.rows {
                if let [Cell::Int(n_r), Cell::Int(n_p), Cell::Real(d)] = row.as_slice() {
                    writeln!(out, "{n_r},{n_p},{d:.4}")?;
                }
            }
            if let Some(dir) = dir {
                let path = output_path(&dir, ExperimentKind::Table1, "reference");
                write_results(&t, &path)?;
                writeln!(out, "wrote {}", path.display())?;
            }
            Ok(())
        }
        Command::ValidateConfig { config } => {
            let cfg = load_config(Some(&config))?;
            write!(out, "{}", cfg.normalized())?;
            writeln!(out, "# config_hash = {}", cfg.hash())?;
            Ok(())
        }
    }
}

/// Runs the command line `args` (program name first) writing to the given
/// streams; returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

/// [`run`] on the process's standard streams.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
