use std::io::Write;
use std::process::ExitCode;

use idensity::cli::{self, Settings};
use idensity::exec::with_workers;

fn main() -> ExitCode {
    let settings = match Settings::from_env() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(cli::exit_code(&e) as u8);
        }
    };
    let args: Vec<_> = std::env::args_os().collect();
    let out = match settings.workers {
        Some(n) => with_workers(n, || cli::run(args, &settings)),
        None => cli::run(args, &settings),
    };
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
