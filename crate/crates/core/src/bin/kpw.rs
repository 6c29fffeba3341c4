use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use kpw_core::cli::{self, Cli};

fn main() -> ExitCode {
    let args = Cli::parse();
    let config = args.config();
    let out = cli::run(&args.command, &config);
    let _ = writeln!(std::io::stdout().lock(), "{}", out.render(config.output));
    ExitCode::from(out.code as u8)
}
