use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use jetbracket::cli::{self, adhoc, RunOptions};
use jetbracket::sampling::DEFAULT_SEED;

#[derive(Parser)]
#[command(
    name = "jetbracket",
    version,
    about = "Exact checks of Hamiltonian and symplectic structures on evolution equations"
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a problem file.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Write the JSON report here (`-` for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
        /// Regular points certified per vanishing check.
        #[arg(long, default_value_t = 5)]
        samples: usize,
        /// Jet points and covectors tried per certificate.
        #[arg(long, default_value_t = 200)]
        budget: usize,
    },
    /// Formal adjoint of each operator read from stdin.
    Adjoint,
    /// Composition of the operators read from stdin, first line outermost.
    Compose,
    /// Principal symbol of each operator read from stdin.
    Symbol,
}

fn read_stdin() -> Result<String, String> {
    let mut s = String::new();
    std::io::stdin()
        .read_to_string(&mut s)
        .map_err(|e| format!("reading stdin: {e}"))?;
    Ok(s)
}

fn algebra(f: fn(&str) -> jetbracket::Result<String>) -> ExitCode {
    match read_stdin().and_then(|s| f(&s).map_err(|e| e.to_string())) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match args.command {
        Command::Check {
            file,
            seed,
            json,
            samples,
            budget,
        } => {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: {}: {e}", file.display());
                    return ExitCode::from(2);
                }
            };
            let problem = match cli::parse(&text) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("{}:{e}", file.display());
                    return ExitCode::from(2);
                }
            };
            let report = cli::run(
                &problem,
                RunOptions {
                    seed,
                    samples,
                    budget,
                },
            );
            match json {
                Some(path) if path.as_os_str() == "-" => print!("{}", report.to_json()),
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, report.to_json()) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                    print!("{}", report.to_text());
                }
                None => print!("{}", report.to_text()),
            }
            ExitCode::from(report.exit_code as u8)
        }
        Command::Adjoint => algebra(adhoc::adjoint),
        Command::Compose => algebra(adhoc::compose),
        Command::Symbol => algebra(adhoc::symbol),
    }
}
