use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qzeno::error::{ConfigError, RunError};
use qzeno::io::{
    analyze, ensemble, parse_config_with, preset_names, preset_text, run_validation, simulate,
    RunConfig,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "qzeno", version, about = "Quantum Zeno trajectory simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Flat TOML run configuration.
    #[arg(long, global = true, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in configuration (fig2 … fig9).
    #[arg(long, global = true)]
    preset: Option<String>,
    /// Override a config entry, e.g. `--set alpha=[0,1]`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; 0 picks one per core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Write one trajectory CSV per trajectory and α.
    Simulate,
    /// Write ensemble means and a summary per α.
    Ensemble,
    /// Summarize stored trajectory CSVs, or fresh runs of the config.
    Analyze {
        #[arg(long = "input", value_name = "CSV")]
        inputs: Vec<PathBuf>,
    },
    /// Run the invariant checks.
    Validate,
    /// List the built-in configurations.
    Presets,
}

fn load_config(cli: &Cli) -> Result<Option<RunConfig>, RunError> {
    let text = match (&cli.config, &cli.preset) {
        (Some(path), _) => std::fs::read_to_string(path).map_err(|source| RunError::File {
            path: path.display().to_string(),
            source,
        })?,
        (None, Some(name)) => preset_text(name)?.to_string(),
        (None, None) => return Ok(None),
    };
    let mut overrides = cli.overrides.clone();
    if let Some(seed) = cli.seed {
        overrides.push(format!("seed={seed}"));
    }
    if let Some(out) = &cli.out {
        overrides.push(format!("out={}", json!(out.display().to_string())));
    }
    Ok(Some(parse_config_with(&text, &overrides)?))
}

fn require(cfg: Option<RunConfig>) -> Result<RunConfig, RunError> {
    cfg.ok_or_else(|| {
        ConfigError::Syntax("this command needs --config PATH or --preset NAME".into()).into()
    })
}

fn files(paths: Vec<PathBuf>) -> serde_json::Value {
    json!({ "files": paths.iter().map(|p| p.display().to_string()).collect::<Vec<_>>() })
}

fn run(cli: &Cli) -> Result<serde_json::Value, RunError> {
    match &cli.command {
        Command::Presets => Ok(json!(preset_names().collect::<Vec<_>>())),
        Command::Validate => match run_validation() {
            Ok(report) => Ok(json!(report)),
            Err((report, err)) => {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
                Err(err)
            }
        },
        Command::Simulate => Ok(files(simulate(&require(load_config(cli)?)?)?)),
        Command::Ensemble => Ok(files(ensemble(&require(load_config(cli)?)?)?)),
        Command::Analyze { inputs } => {
            let cfg = load_config(cli)?;
            let docs = analyze(cfg.as_ref(), inputs, cli.out.as_deref())?;
            Ok(json!(docs))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .expect("thread pool is configured once");
    }
    match run(&cli) {
        Ok(value) => {
            println!("{}", serde_json::to_string_pretty(&value).expect("output serializes"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            let code = e.exit_code();
            let record = json!({ "error": e.kind(), "message": e.to_string(), "exit_code": code });
            eprintln!("{record}");
            ExitCode::from(code as u8)
        }
    }
}
