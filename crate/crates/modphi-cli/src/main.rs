use clap::error::ErrorKind;
use clap::Parser;
use modphi_cli::cli::Cli;
use modphi_cli::commands::{config, exit_code, run};
use serde_json::json;
use std::io::Write;
use std::process::ExitCode;

const THREADS_VAR: &str = "MODPHI_THREADS";

fn fail(code: u8, kind: &str, message: &str) -> ExitCode {
    let body = json!({ "schema": 1, "error": { "kind": kind, "message": message } });
    eprintln!("{body}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(2, "validation", e.render().to_string().trim()),
    };
    if let Ok(v) = std::env::var(THREADS_VAR) {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                    return fail(1, "runtime", &e.to_string());
                }
            }
            _ => return fail(2, "validation", &format!("{THREADS_VAR} must be a positive integer, got '{v}'")),
        }
    }
    let cfg = config(&cli, &argv[1..]);
    let out = match run(&cli, &cfg) {
        Ok(o) => o,
        Err(e) => {
            let code = exit_code(&e);
            return fail(code as u8, if code == 2 { "validation" } else { "numerical" }, &format!("{e:#}"));
        }
    };
    let written = match &cli.out {
        Some(p) => std::fs::write(p, &out.body),
        None => std::io::stdout().write_all(out.body.as_bytes()),
    };
    if let Err(e) = written {
        return fail(1, "io", &e.to_string());
    }
    ExitCode::from(out.status as u8)
}
