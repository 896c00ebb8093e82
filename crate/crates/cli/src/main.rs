mod commands;
mod config;
mod states;
mod suites;

use clap::{CommandFactory, Parser};
use commands::{Failure, Status, SCHEMA_VERSION};
use config::{Cli, Params, RunConfig};
use serde_json::json;
use std::io::Write;
use std::process::ExitCode;

fn usage_error(msg: &str) -> ExitCode {
    let _ = writeln!(std::io::stderr(), "error: {msg}\n\n{}", Cli::command().render_help());
    ExitCode::from(2)
}

fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("BIORTHO_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| format!("BIORTHO_THREADS must be a positive integer, got {v:?}"))?;
    if n == 0 {
        return Err("BIORTHO_THREADS must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(msg) = init_threads() {
        return usage_error(&msg);
    }
    let config_path = cli.globals.config.clone();
    let mut params = match Params::from_cli(cli) {
        Ok(p) => p,
        Err(msg) => return usage_error(&msg),
    };
    if let Some(path) = config_path {
        match Params::from_file(&path) {
            Ok(file) => params = params.overlay(file),
            Err(msg) => return usage_error(&msg),
        }
    }
    let cfg = match RunConfig::resolve(params) {
        Ok(c) => c,
        Err(msg) => return usage_error(&msg),
    };

    let artifact = match commands::run(&cfg) {
        Ok(a) => a,
        Err(Failure::Usage(msg)) => return usage_error(&msg),
        Err(Failure::Numerical(msg)) => {
            let _ = writeln!(std::io::stderr(), "numerical guard: {msg}");
            return ExitCode::from(3);
        }
    };
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, &artifact.body).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout().lock().write_all(&artifact.body).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        let _ = writeln!(std::io::stderr(), "error: {msg}");
        return ExitCode::from(2);
    }
    if artifact.status != Status::Ok {
        let report = json!({ "schema_version": SCHEMA_VERSION, "failures": artifact.failures });
        let text = serde_json::to_string_pretty(&report).expect("JSON values always serialize");
        let _ = writeln!(std::io::stderr(), "{text}");
    }
    ExitCode::from(match artifact.status {
        Status::Ok => 0,
        Status::Failed => 1,
        Status::BadInput => 2,
        Status::Guard => 3,
    })
}
