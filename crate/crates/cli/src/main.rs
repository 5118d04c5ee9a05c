use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use heattrace_cli::{run, Cli, JobSpec, EXIT_COMPUTE, EXIT_FAIL, EXIT_OK, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                EXIT_USAGE as u8
            } else {
                EXIT_OK as u8
            });
        }
    };
    let (command, args) = cli.command.split();
    let job = match JobSpec::from_args(command, args) {
        Ok(job) => job,
        Err(e) => {
            eprintln!("usage error: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    match run(&job) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(outcome.render(job.format).as_bytes());
            let _ = out.flush();
            ExitCode::from(if outcome.passed() { EXIT_OK } else { EXIT_FAIL } as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_COMPUTE as u8)
        }
    }
}
