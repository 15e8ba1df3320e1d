use clap::Parser;
use epr_verify::config::{parse_suites, Parallelism};
use epr_verify::{parse_config, run_suite, ConfigError, SuiteConfig};
use std::path::PathBuf;
use std::process::ExitCode;

/// Runs the verification catalog and writes a JSON report.
#[derive(Debug, Parser)]
#[command(name = "verify", version)]
struct Cli {
    /// Configuration file of `key = value` lines; defaults apply when absent.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Suite to run (fock, states, weyl, xform, ordering or all); repeatable.
    #[arg(long = "suite", value_name = "NAME")]
    suites: Vec<String>,
    /// Report path; the JSON goes to standard output when neither this nor
    /// the config names one.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional CSV summary path.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
}

fn load(cli: &Cli) -> Result<SuiteConfig, ConfigError> {
    let mut config = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Invalid {
                field: "config".into(),
                reason: format!("cannot read {}: {e}", path.display()),
            })?;
            parse_config(&text)?
        }
        None => SuiteConfig::default(),
    };
    if !cli.suites.is_empty() {
        config.suites = parse_suites(&cli.suites.join(","))?;
    }
    if let Some(out) = &cli.out {
        config.output = Some(out.clone());
    }
    if let Some(csv) = &cli.csv {
        config.csv = Some(csv.clone());
    }
    if let Some(jobs) = cli.jobs {
        config.parallelism = Parallelism::Fixed(jobs);
    }
    config.validate()?;
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match load(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = run_suite(&config);
    let summary = report.body.summary;
    let lines = report.findings();
    let mut log: Box<dyn std::io::Write> =
        if config.output.is_some() { Box::new(std::io::stdout()) } else { Box::new(std::io::stderr()) };
    for line in &lines {
        let _ = writeln!(log, "{line}");
    }
    let _ = writeln!(
        log,
        "{} checks: {} pass, {} fail, {} paper-mismatch flags, {} accuracy warnings ({:.1} s)",
        summary.total, summary.pass, summary.fail, summary.paper_mismatch_flags, summary.accuracy_warnings,
        report.runtime.total_seconds
    );
    match &config.output {
        Some(path) => {
            if let Err(e) = report.write_json(path) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => println!("{}", report.to_json()),
    }
    if let Some(path) = &config.csv {
        if let Err(e) = report.write_csv(path) {
            eprintln!("cannot write {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    if report.any_fail() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
