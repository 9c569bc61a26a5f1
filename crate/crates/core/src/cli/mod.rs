//! Configuration-driven runner behind the `widom-cauchy` binary.

mod commands;
mod config;
mod report;

pub use commands::{
    run_case, run_theorem_at, sweep_checks, sweep_points, AssumptionReport, CaseDetail, CaseRecord,
    InnerOuterReport, MonotonicityCheck, OrbitSumReport,
};
pub use config::{CaseSpec, Command, RunConfig, SweepAxes, Tolerances, SCHEMA_VERSION};
pub use report::{Meta, Report, Summary};

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Parser;
use rayon::prelude::*;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable overriding the configured thread count.
pub const THREADS_ENV: &str = "WC_THREADS";

#[derive(Debug, Parser)]
#[command(name = "widom-cauchy", version, about = "Numerical verification of the weighted Cauchy formula on Widom domains")]
pub struct Args {
    pub command: Command,
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory for the JSON and CSV reports.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; overrides the config and the WC_THREADS variable.
    #[arg(long)]
    pub threads: Option<usize>,
}

/// Failure before any computation: bad arguments, config or environment.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub Vec<String>);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "error: {m}")?;
        }
        Ok(())
    }
}

/// Thread count: flag, then `WC_THREADS`, then config, then all cores.
pub fn resolve_threads(flag: Option<usize>, env: Option<&str>, config: Option<usize>) -> Result<usize, UsageError> {
    if let Some(n) = flag {
        if n == 0 {
            return Err(UsageError(vec!["--threads must be a positive integer".into()]));
        }
        return Ok(n);
    }
    if let Some(v) = env {
        return match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(UsageError(vec![format!("{THREADS_ENV}={v} is not a positive integer")])),
        };
    }
    Ok(config.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())))
}

pub fn load_config(path: &Path, command: Command) -> Result<RunConfig, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(vec![format!("cannot read config {}: {e}", path.display())]))?;
    let config = RunConfig::from_json(&text).map_err(|e| UsageError(vec![e]))?;
    let v = config.violations(command);
    if v.is_empty() {
        Ok(config)
    } else {
        Err(UsageError(v))
    }
}

/// Runs every case of `command` on a pool of `threads` workers; the report
/// lists cases in config order whatever the thread count.
pub fn execute(config: &RunConfig, command: Command, threads: usize) -> Result<Report, UsageError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| UsageError(vec![format!("cannot start thread pool: {e}")]))?;
    let start = Instant::now();
    let specs = config.case_specs(command);
    let timed: Vec<(CaseRecord, f64)> = pool.install(|| match command {
        Command::Sweep => {
            let points = sweep_points(config);
            let jobs: Vec<(&CaseSpec, usize, f64)> = specs
                .iter()
                .flat_map(|c| points.iter().map(move |&(m, t)| (c, m, t)))
                .collect();
            jobs.par_iter()
                .map(|&(c, m, t)| {
                    let s = Instant::now();
                    (run_theorem_at(config, c, m, t), s.elapsed().as_secs_f64())
                })
                .collect()
        }
        _ => specs
            .par_iter()
            .map(|c| {
                let s = Instant::now();
                (run_case(config, command, c), s.elapsed().as_secs_f64())
            })
            .collect(),
    });
    let (records, case_wall_time_s): (Vec<CaseRecord>, Vec<f64>) = timed.into_iter().unzip();
    for r in &records {
        if let Some(e) = &r.error {
            log::warn!("case q={:?} zeta={} k={:?} failed: {e}", r.q, r.zeta, r.k);
        }
    }
    let checks = match command {
        Command::Sweep => sweep_checks(config, &records, &config.tolerances),
        _ => vec![],
    };
    let meta = Meta {
        threads,
        wall_time_s: start.elapsed().as_secs_f64(),
        case_wall_time_s,
    };
    Ok(Report::new(command.name(), records, checks, meta))
}

/// Full command-line flow; returns the process exit code.
pub fn run(args: &Args) -> i32 {
    match run_inner(args) {
        Ok(report) => {
            let s = &report.summary;
            println!(
                "{}: {}/{} cases passed{}",
                report.command,
                s.passed,
                s.total,
                if s.monotonicity.is_empty() {
                    String::new()
                } else {
                    format!(
                        ", {}/{} monotonicity checks passed",
                        s.monotonicity.iter().filter(|m| m.non_increasing).count(),
                        s.monotonicity.len()
                    )
                }
            );
            if s.all_pass {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("{e}");
            EXIT_USAGE
        }
    }
}

fn run_inner(args: &Args) -> Result<Report, UsageError> {
    let config = load_config(&args.config, args.command)?;
    let env = std::env::var(THREADS_ENV).ok();
    let threads = resolve_threads(args.threads, env.as_deref(), config.threads)?;
    let out = args
        .out
        .clone()
        .or_else(|| config.out.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    // Fail on an unwritable destination before computing anything.
    std::fs::create_dir_all(&out)
        .map_err(|e| UsageError(vec![format!("cannot create output directory {}: {e}", out.display())]))?;
    log::info!("{} on {} threads", args.command.name(), threads);
    let report = execute(&config, args.command, threads)?;
    let (json, csv) = report
        .write(&out)
        .map_err(|e| UsageError(vec![format!("cannot write report to {}: {e}", out.display())]))?;
    log::info!("wrote {} and {}", json.display(), csv.display());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thread_precedence() {
        assert_eq!(resolve_threads(Some(3), Some("5"), Some(7)), Ok(3));
        assert_eq!(resolve_threads(None, Some("5"), Some(7)), Ok(5));
        assert_eq!(resolve_threads(None, None, Some(7)), Ok(7));
        assert!(resolve_threads(None, Some("zero"), None).is_err());
        assert!(resolve_threads(None, Some("0"), None).is_err());
        assert!(resolve_threads(None, None, None).unwrap() >= 1);
    }
}
