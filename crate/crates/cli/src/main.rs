mod args;
mod config;
mod run;

use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use args::{to_config, Cli, Sub, SEED_ENV};
use config::JobConfig;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn emit(doc: &serde_json::Value, output: Option<&str>) -> Result<(), String> {
    let text = serde_json::to_string_pretty(doc).map_err(|e| e.to_string())? + "\n";
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{path}: {e}")),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_config(cli: &Cli) -> Result<JobConfig, String> {
    match &cli.command {
        Sub::Run { config } => {
            let text = std::fs::read_to_string(config).map_err(|e| format!("{}: {e}", config.display()))?;
            serde_json::from_str(&text).map_err(|e| format!("job configuration: {e}"))
        }
        _ => to_config(cli, std::env::var(SEED_ENV).ok()),
    }
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    println!("{}", json!({ "error": msg }));
    ExitCode::from(EXIT_USAGE)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match load_config(&cli) {
        Ok(c) => c,
        Err(e) => return usage_error(&e),
    };
    if cli.emit_config {
        let doc = serde_json::to_value(&cfg).expect("configuration serializes");
        return match emit(&doc, None) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => usage_error(&e),
        };
    }
    if let Some(jobs) = cfg.options.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            return usage_error(&format!("--jobs: {e}"));
        }
    }
    match run::execute(&cfg) {
        Ok(outcome) => {
            if let Err(e) = emit(&outcome.document, cfg.options.output.as_deref()) {
                return usage_error(&e);
            }
            eprintln!("{}", outcome.summary);
            if outcome.failed {
                ExitCode::from(EXIT_FAIL)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => usage_error(&e),
    }
}
