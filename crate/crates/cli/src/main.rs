use std::process::ExitCode;

use clap::Parser;
use halfcycle_cli::{describe_violations, emit, execute, resolve_seed, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (seed, drawn) = resolve_seed(cli.seed);
    if drawn {
        eprintln!("seed: {seed}");
    }
    let output = match execute(&cli, seed) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&output.body, cli.out.as_deref()) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if output.passed() {
        ExitCode::SUCCESS
    } else {
        eprint!("{}", describe_violations(&output.violations));
        ExitCode::from(1)
    }
}
