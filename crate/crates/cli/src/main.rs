mod config;
mod error;
mod output;
mod suites;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use clap::{Parser, ValueEnum};

use config::Scenario;
use error::{CliError, CliResult};
use output::{Document, SuiteRun};
use suites::SuiteSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Verification suites for supersymmetric and quantum mechanical structures.
#[derive(Debug, Parser)]
#[command(name = "supmech", version, about)]
struct Cli {
    /// Scenario file (TOML, or JSON by extension) listing suites to run
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Directory for report.json and CSV data
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Format printed on stdout
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized suites; overrides the scenario seed
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Suites run concurrently
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: u16,
    #[command(subcommand)]
    command: Option<SuiteSpec>,
}

fn scenario(cli: &Cli) -> CliResult<(String, Option<u64>, Vec<SuiteSpec>)> {
    let (name, seed, mut specs) = match (&cli.config, &cli.command) {
        (Some(_), Some(_)) => return Err(CliError::config("--config and a suite subcommand are mutually exclusive")),
        (None, None) => return Err(CliError::config("nothing to run; give a suite subcommand or --config")),
        (None, Some(cmd)) => (cmd.name().to_string(), None, vec![cmd.clone()]),
        (Some(path), None) => {
            let s = Scenario::load(path)?;
            let name = s.name.unwrap_or_else(|| {
                path.file_stem().map_or_else(|| "scenario".into(), |n| n.to_string_lossy().into_owned())
            });
            (name, s.seed, s.run)
        }
    };
    let seed = cli.seed.or(seed);
    for spec in &mut specs {
        spec.resolve(seed)?;
    }
    Ok((name, seed, specs))
}

fn run_all(specs: Vec<SuiteSpec>, jobs: usize) -> CliResult<Vec<SuiteRun>> {
    let slots: Vec<Mutex<Option<CliResult<SuiteRun>>>> = specs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(specs.len()) {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(spec) = specs.get(k) else { break };
                let start = Instant::now();
                let result = spec.run().map(|output| SuiteRun {
                    spec: spec.clone(),
                    output,
                    elapsed_s: start.elapsed().as_secs_f64(),
                });
                *slots[k].lock().unwrap_or_else(|e| e.into_inner()) = Some(result);
            });
        }
    });
    slots.into_iter().map(|s| s.into_inner().unwrap_or_else(|e| e.into_inner()).expect("every suite ran")).collect()
}

fn write_out(dir: &Path, doc: &Document) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let write = |name: &str, body: &str| {
        let path = dir.join(name);
        std::fs::write(&path, body).map_err(|e| CliError::io(path, e))
    };
    let json = serde_json::to_string_pretty(&doc.to_json()).expect("report serializes");
    write("report.json", &(json + "\n"))?;
    let many = doc.runs.len() > 1;
    for (k, run) in doc.runs.iter().enumerate() {
        for (file, body) in &run.output.csv {
            let name = if many { format!("{:02}-{}-{file}", k + 1, run.spec.name()) } else { file.clone() };
            write(&name, body)?;
        }
    }
    Ok(())
}

fn execute(cli: &Cli) -> CliResult<bool> {
    let (name, seed, specs) = scenario(cli)?;
    let started = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    let clock = Instant::now();
    let runs = run_all(specs, cli.jobs as usize)?;
    let doc = Document { name: &name, seed, runs: &runs, started, elapsed_s: clock.elapsed().as_secs_f64() };
    if let Some(dir) = &cli.out {
        write_out(dir, &doc)?;
    }
    let text = match cli.format {
        Format::Text => doc.to_text(),
        Format::Json => serde_json::to_string_pretty(&doc.to_json()).expect("report serializes") + "\n",
    };
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e))?;
    Ok(doc.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("supmech: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
