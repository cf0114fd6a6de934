use std::process::ExitCode;

use anyonvm::{execute, Cli, CliError};
use clap::Parser;

fn fail(e: &CliError) -> ExitCode {
    eprintln!("anyonvm: {e}");
    print!("{}", anyonvm::json::render(&e.to_json()));
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let text = match execute(&cli) {
        Ok(t) => t,
        Err(e) => return fail(&e),
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                return fail(&CliError::Usage(format!("{}: {e}", path.display())));
            }
        }
        None => print!("{text}"),
    }
    ExitCode::SUCCESS
}
