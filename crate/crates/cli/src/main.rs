use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let args = bnlp_cli::Args::parse();
    match bnlp_cli::run(&args) {
        Ok(out) => {
            print!("{}", out.report);
            ExitCode::from(if out.accepted { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
