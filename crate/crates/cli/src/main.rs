//! `cherednik <command> --config job.toml`: runs one computation and prints
//! a readable report followed by a single JSON line.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde_json::{json, Value};

use commands::{Failure, Outcome};
use config::{parse_config, Config, COMMANDS};

#[derive(Parser, Debug)]
#[command(
    name = "cherednik",
    version,
    about = "Computations with rational Cherednik algebras"
)]
struct Args {
    /// One of: reflections, normal-form, dunkl, verma, gram, singular,
    /// regular, aspherical, bfunction, localize, series, shift, jacquet,
    /// melys-check, melys-factor, strata.
    command: String,
    /// TOML job file.
    #[arg(long)]
    config: PathBuf,
    /// `section.key=value`, applied after reading the file.
    #[arg(long = "override", value_name = "SECTION.KEY=VALUE")]
    overrides: Vec<String>,
}

fn load(args: &Args) -> Result<Config, Failure> {
    if !COMMANDS.contains(&args.command.as_str()) {
        return Err(Failure {
            code: "UnknownCommand",
            exit: 2,
            message: format!(
                "unknown command `{}`; expected one of {}",
                args.command,
                COMMANDS.join(", ")
            ),
        });
    }
    let text = std::fs::read_to_string(&args.config).map_err(|e| Failure {
        code: "ConfigUnreadable",
        exit: 2,
        message: format!("{}: {e}", args.config.display()),
    })?;
    let cfg = parse_config(&text, &args.overrides)?;
    if let Some(name) = cfg.command_name() {
        if name != args.command {
            return Err(Failure {
                code: "ConfigInvalid",
                exit: 2,
                message: format!(
                    "command.name is `{name}` but `{}` was requested",
                    args.command
                ),
            });
        }
    }
    Ok(cfg)
}

fn job_echo(cfg: &Config) -> Value {
    serde_json::to_value(cfg).unwrap_or(Value::Null)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let start = Instant::now();
    let (job, outcome): (Value, Result<Outcome, Failure>) = match load(&args) {
        Ok(c) => (job_echo(&c), commands::run(&c, &args.command)),
        Err(f) => (Value::Null, Err(f)),
    };
    let (line, exit) = match outcome {
        Ok(o) => {
            print!("{}", o.text);
            if let Some(c) = &o.caveat {
                println!("note: {c}");
            }
            let status = if o.certified { "ok" } else { "uncertified" };
            let line = json!({
                "command": args.command,
                "job": job,
                "status": status,
                "result": o.result,
                "certificates": o.certificates,
                "caveat": o.caveat,
                "error": Value::Null,
            });
            (line, if o.certified { 0 } else { 4 })
        }
        Err(f) => {
            println!("error [{}]: {}", f.code, f.message);
            let line = json!({
                "command": args.command,
                "job": job,
                "status": "error",
                "result": Value::Null,
                "certificates": Value::Null,
                "caveat": Value::Null,
                "error": {"code": f.code, "message": f.message},
            });
            (line, f.exit)
        }
    };
    println!("{line}");
    eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    ExitCode::from(exit as u8)
}
