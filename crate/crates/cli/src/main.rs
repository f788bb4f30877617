use std::process::ExitCode;

use clap::Parser;
use geninv_cli::commands::{output_path, run};
use geninv_cli::{Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli).and_then(|o| {
        let text = serde_json::to_string_pretty(&o.document).expect("JSON values serialize") + "\n";
        match output_path(&cli) {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| CliError::new("IoError", format!("{}: {e}", path.display())))?,
            None => print!("{text}"),
        }
        Ok(o.exit)
    });
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
