//! `qcap`: capability regions from the command line.
//!
//! Exit codes: 0 on success, 2 for usage, scenario or parameter errors, 1 for
//! runtime failures such as I/O.

mod cli;
mod commands;
mod config;
mod output;

use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use cli::{Cli, Command, Common};
use commands::Outcome;
use config::{load, CliResult, Failure, Loaded, Overrides};
use output::Log;

fn common(command: &Command) -> &Common {
    match command {
        Command::Frontier(a) => &a.common,
        Command::Benchmark(a) => &a.common,
        Command::Mitigate(a) => &a.common,
        Command::Qec(a) => &a.common,
        Command::Atlas(a) => &a.common,
        Command::Validate(a) => &a.common,
    }
}

fn name(command: &Command) -> &'static str {
    match command {
        Command::Frontier(_) => "frontier",
        Command::Benchmark(_) => "benchmark",
        Command::Mitigate(_) => "mitigate",
        Command::Qec(_) => "qec",
        Command::Atlas(_) => "atlas",
        Command::Validate(_) => "validate",
    }
}

fn finish(command: &str, loaded: &Loaded, outcome: Outcome, log: &Log) -> CliResult<()> {
    if let Some(report) = &outcome.report {
        output::stdout_line(&serde_json::to_string_pretty(report).expect("JSON report"))?;
    }
    let written = if outcome.artifacts.is_empty() {
        Vec::new()
    } else {
        outcome
            .artifacts
            .write(Path::new(&loaded.config.output.dir))
            .map_err(Failure::Runtime)?
    };
    for region in &outcome.regions {
        log.info(format!(
            "{}: max quops {}",
            region.label,
            region.max_quops()
        ));
    }
    for path in &written {
        log.info(format!("wrote {}", path.display()));
    }
    if log.quiet && outcome.report.is_none() {
        let regions: Vec<_> = outcome
            .regions
            .iter()
            .map(|r| {
                json!({
                    "label": r.label,
                    "source": r.source.as_str(),
                    "max_quops": r.max_quops(),
                    "widths": r.frontier.len(),
                })
            })
            .collect();
        let warnings: Vec<&String> = outcome.regions.iter().flat_map(|r| &r.warnings).collect();
        let summary = json!({
            "command": command,
            "outputs": written.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
            "regions": regions,
            "warnings": warnings,
        });
        output::stdout_line(&summary.to_string())?;
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    let common = common(&cli.command);
    let log = Log {
        quiet: common.quiet,
        verbose: common.verbose,
    };
    if let Some(threads) = common.threads {
        if threads == 0 {
            return Err(Failure::Config("--threads must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Failure::Runtime(e.into()))?;
    }
    let command = name(&cli.command);
    let (loaded, outcome) = match &cli.command {
        Command::Frontier(a) => {
            let loaded = load(&a.common, Overrides::default())?;
            let outcome = commands::frontier(&loaded, &log)?;
            (loaded, outcome)
        }
        Command::Benchmark(a) => {
            let overrides = Overrides {
                bench: Some(&a.bench),
                ..Overrides::default()
            };
            let loaded = load(&a.common, overrides)?;
            let outcome = commands::benchmark(&loaded, &log)?;
            (loaded, outcome)
        }
        Command::Mitigate(a) => {
            let overrides = Overrides {
                mitigation: Some(&a.mitigation),
                ..Overrides::default()
            };
            let loaded = load(&a.common, overrides)?;
            let outcome = commands::mitigate(&loaded, &log)?;
            (loaded, outcome)
        }
        Command::Qec(a) => {
            let overrides = Overrides {
                qec: Some(&a.qec),
                ..Overrides::default()
            };
            let loaded = load(&a.common, overrides)?;
            let target = a.target_width.zip(a.target_depth);
            let outcome = commands::qec(&loaded, &log, target, a.sensitivity)?;
            (loaded, outcome)
        }
        Command::Atlas(a) => {
            let overrides = Overrides {
                bench: Some(&a.bench),
                mitigation: Some(&a.mitigation),
                qec: Some(&a.qec),
            };
            let loaded = load(&a.common, overrides)?;
            let outcome = commands::atlas(&loaded, &log)?;
            (loaded, outcome)
        }
        Command::Validate(a) => {
            let overrides = Overrides {
                bench: Some(&a.bench),
                mitigation: Some(&a.mitigation),
                qec: Some(&a.qec),
            };
            let loaded = load(&a.common, overrides)?;
            output::stdout_line(loaded.config.to_toml().trim_end())?;
            return Ok(());
        }
    };
    finish(command, &loaded, outcome, &log)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("{failure}");
            ExitCode::from(failure.exit_code() as u8)
        }
    }
}
