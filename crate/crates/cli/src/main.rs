use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use certquad_cli::config::ORACLE_ENV;
use certquad_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let env = std::env::var(ORACLE_ENV).ok();
    match execute(&cli, env.as_deref()) {
        Ok((text, code)) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
