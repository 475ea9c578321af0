use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use hassegen::cli;

/// Genera, class numbers, Hasse principle and Tamagawa numbers of
/// semisimple groups over Hasse domains of function fields.
#[derive(Parser)]
#[command(name = "hassegen", version)]
struct Args {
    /// invariants, genera, class-number, hasse, tamagawa, report,
    /// oracle-check, or run (the [commands] list of the request)
    command: String,
    #[arg(long)]
    request: PathBuf,
    /// key=value lines only
    #[arg(long)]
    machine: bool,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { cli::EXIT_INPUT as u8 } else { 0 });
        }
    };
    let (text, code) = cli::execute(&args.command, &args.request, args.machine);
    if code == cli::EXIT_INPUT {
        eprint!("{}", text);
    } else {
        let _ = std::io::stdout().write_all(text.as_bytes());
    }
    ExitCode::from(code as u8)
}
