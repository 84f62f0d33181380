use std::io::Write;
use std::panic;
use std::process::ExitCode;

use clap::Parser;
use crcalc_cli::error::EXIT_INTERNAL;
use crcalc_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = panic::catch_unwind(|| {
        let stdout = std::io::stdout();
        let stderr = std::io::stderr();
        let code = execute(&cli, &mut stdout.lock(), &mut stderr.lock());
        let _ = stdout.lock().flush();
        code
    })
    .unwrap_or(EXIT_INTERNAL);
    ExitCode::from(code as u8)
}
