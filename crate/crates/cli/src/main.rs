use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use relcoh_cli::{builtins, load, run_scenario, InputError, Mode, Report};

#[derive(Parser)]
#[command(
    name = "relcoh",
    version,
    about = "Relative sheaf cohomology on finite spaces, checked exactly over the rationals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or a built-in scenario.
    Run {
        scenario: String,
        /// Truncation bound for resolutions; raised to height + 2 when smaller.
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Also write the report as JSON to this path.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Print the JSON report instead of the text report.
        #[arg(long)]
        json: bool,
    },
    /// List the built-in scenarios.
    ListBuiltins,
    /// Run every built-in scenario and print one line each.
    VerifyAll {
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ModeArg {
    Alternating,
    Full,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Alternating => Mode::Alternating,
            ModeArg::Full => Mode::Full,
        }
    }
}

fn run_one(target: &str, bound: Option<usize>, mode: Option<ModeArg>) -> Result<Report, InputError> {
    let sc = load(target)?;
    run_scenario(&sc, bound, mode.map(Mode::from))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::ListBuiltins => {
            for name in builtins::names() {
                println!("{name}");
            }
            ExitCode::SUCCESS
        }
        Command::Run {
            scenario,
            bound,
            mode,
            report,
            json,
        } => {
            let rep = match run_one(&scenario, bound, mode) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            if json {
                print!("{}", rep.to_json());
            } else {
                print!("{}", rep.to_text());
            }
            if let Some(path) = report {
                if let Err(e) = std::fs::write(&path, rep.to_json()) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if rep.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::VerifyAll { bound, mode } => {
            let mut code = 0u8;
            for name in builtins::names() {
                match run_one(name, bound, mode) {
                    Ok(rep) => {
                        let s = &rep.summary;
                        println!(
                            "{:<24} {:>3} operations {:>4} verdicts {:>3} failed  {}",
                            name,
                            s.operations,
                            s.verdicts,
                            s.failed,
                            if rep.passed() { "PASS" } else { "FAIL" }
                        );
                        for (op, v) in rep.failures() {
                            println!("    [{}] {}: {} {}", op.index + 1, op.op, v.name, v.detail);
                        }
                        if !rep.passed() {
                            code = code.max(1);
                        }
                    }
                    Err(e) => {
                        println!("{name:<24} input error: {e}");
                        code = 2;
                    }
                }
            }
            ExitCode::from(code)
        }
    }
}
