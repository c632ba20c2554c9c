use std::process::ExitCode;

use clap::Parser;
use starpf_cli::{report_error, run, CliError, RunConfig};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let config = match RunConfig::try_parse() {
        Ok(config) => config,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            report_error(&CliError::Usage(e.render().to_string()));
            return ExitCode::from(1);
        }
    };
    match run(&config) {
        Ok(verdict) => ExitCode::from(verdict.exit_code()),
        Err(e) => {
            report_error(&e);
            ExitCode::from(1)
        }
    }
}
