use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use h2ror_cli::{run, summary, Args, CliError, Settings};

fn init_logging() -> Result<(), CliError> {
    let level = match std::env::var("H2ROR_LOG") {
        Ok(v) => match v.as_str() {
            "error" | "warn" | "info" | "debug" => v,
            other => return Err(CliError::Usage(format!("H2ROR_LOG must be error, info or debug, got '{other}'"))),
        },
        Err(_) => "error".to_string(),
    };
    env_logger::Builder::new().parse_filters(&level).format_timestamp(None).init();
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    let outcome = init_logging()
        .and_then(|_| Settings::resolve(&args))
        .and_then(|settings| run(&settings));
    match outcome {
        Ok(report) => {
            // a closed pipe is not a failure of the run
            let _ = writeln!(std::io::stdout(), "{}", summary(&report));
            ExitCode::SUCCESS
        }
        Err(e) => {
            let msg = serde_json::json!({ "error": e.code(), "message": e.to_string() });
            eprintln!("{msg}");
            ExitCode::from(e.exit_status() as u8)
        }
    }
}
