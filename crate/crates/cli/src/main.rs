use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use lcontract_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(cli, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("lcontract: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
